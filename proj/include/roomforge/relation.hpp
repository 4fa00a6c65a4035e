#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace roomforge {

enum class RoomType { Kitchen, LivingRoom, Bedroom, Bathroom };

inline std::string_view room_type_name(RoomType t) {
  switch (t) {
    case RoomType::Kitchen: return "Kitchen";
    case RoomType::LivingRoom: return "LivingRoom";
    case RoomType::Bedroom: return "Bedroom";
    case RoomType::Bathroom: return "Bathroom";
  }
  return "Bedroom";
}

inline std::optional<RoomType> parse_room_type(std::string_view s) {
  std::string folded;
  for (char c : s) {
    if (c == ' ' || c == '_' || c == '-') continue;
    folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (folded == "kitchen") return RoomType::Kitchen;
  if (folded == "livingroom") return RoomType::LivingRoom;
  if (folded == "bedroom") return RoomType::Bedroom;
  if (folded == "bathroom") return RoomType::Bathroom;
  return std::nullopt;
}

enum class RelationKind { Against, Beside, Face, AwayFrom, On, In };

inline std::string_view relation_kind_name(RelationKind k) {
  switch (k) {
    case RelationKind::Against: return "against";
    case RelationKind::Beside: return "beside";
    case RelationKind::Face: return "face";
    case RelationKind::AwayFrom: return "away_from";
    case RelationKind::On: return "on";
    case RelationKind::In: return "in";
  }
  return "beside";
}

inline std::optional<RelationKind> parse_relation_kind(std::string_view s) {
  if (s == "against") return RelationKind::Against;
  if (s == "beside") return RelationKind::Beside;
  if (s == "face") return RelationKind::Face;
  if (s == "away_from") return RelationKind::AwayFrom;
  if (s == "on") return RelationKind::On;
  if (s == "in") return RelationKind::In;
  return std::nullopt;
}

inline bool is_placement_kind(RelationKind k) {
  return k == RelationKind::On || k == RelationKind::In;
}

// Weight class of a relation; numeric weights come from the rules config.
enum class WeightClass { StructuralImplicit, FurnitureImplicit, Explicit };

enum class RelationOrigin { Explicit, Implicit };

// Structural anchors usable as relation targets besides entry ids.
inline constexpr std::string_view kWallBorder = "wall-border";
inline constexpr std::string_view kWallCorner = "wall-corner";

inline bool is_structural_anchor(std::string_view target) {
  return target == kWallBorder || target == kWallCorner;
}

// Directed relation rel(subject, target).
struct Relationship {
  std::string subject;
  RelationKind kind = RelationKind::Beside;
  std::string target;  // entry id or structural anchor
  RelationOrigin origin = RelationOrigin::Explicit;
  WeightClass weight_class = WeightClass::Explicit;

  bool operator==(const Relationship&) const = default;
  bool operator<(const Relationship& o) const {
    if (subject != o.subject) return subject < o.subject;
    if (kind != o.kind) return kind < o.kind;
    return target < o.target;
  }
};

}  // namespace roomforge
