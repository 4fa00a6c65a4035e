#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "roomforge/catalog.hpp"
#include "roomforge/geometry.hpp"
#include "roomforge/relation.hpp"
#include "roomforge/rng.hpp"

namespace roomforge {

struct EmptyCatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wall-mounted or kept structural element of a room candidate (doors,
// windows; for kitchens/bathrooms also counters, sinks, cabinets, ovens,
// bathtubs).
struct FixedElement {
  std::string type;  // catalog type
  Vec2 position;
  double rotation = 0.0;  // facing into the room
};

struct RoomStructure {
  RoomType room_type = RoomType::Bedroom;
  std::string name;  // candidate name
  Polygon floor;     // counter-clockwise, meters
  std::vector<FixedElement> fixed;

  std::vector<Segment> walls() const { return floor.edges(); }
};

namespace detail {

inline Polygon rect_floor(double w, double h) {
  return Polygon{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
}

// W x H floor with a cut x cut_h notch removed from the north-east corner.
inline Polygon l_floor(double w, double h, double cut_w, double cut_h) {
  return Polygon{{{0, 0}, {w, 0}, {w, h - cut_h}, {w - cut_w, h - cut_h}, {w - cut_w, h}, {0, h}}};
}

inline FixedElement south(const std::string& type, double x) { return {type, {x, 0.05}, 0.0}; }
inline FixedElement north(const std::string& type, double x, double h) {
  return {type, {x, h - 0.05}, 180.0};
}
inline FixedElement west(const std::string& type, double y) { return {type, {0.05, y}, 90.0}; }
inline FixedElement east(const std::string& type, double y, double w) {
  return {type, {w - 0.05, y}, 270.0};
}

}  // namespace detail

// Hand-authored room candidates, 3-6 m, rectangles plus one L-shape per type.
inline const std::vector<RoomStructure>& room_candidates(RoomType t) {
  using namespace detail;
  static const std::vector<RoomStructure> bedrooms = [] {
    std::vector<RoomStructure> v;
    v.push_back({RoomType::Bedroom, "bedroom_a", rect_floor(4.0, 3.2),
                 {south("Door", 0.7), north("Window", 2.0, 3.2)}});
    v.push_back({RoomType::Bedroom, "bedroom_b", rect_floor(4.5, 3.5),
                 {south("Door", 0.7), north("Window", 2.25, 3.5), east("Window", 1.75, 4.5)}});
    v.push_back({RoomType::Bedroom, "bedroom_c", rect_floor(5.0, 4.0),
                 {south("Door", 0.8), north("Window", 1.6, 4.0), north("Window", 3.4, 4.0)}});
    v.push_back({RoomType::Bedroom, "bedroom_l", l_floor(5.0, 4.0, 2.0, 1.5),
                 {south("Door", 0.8), west("Window", 2.0)}});
    return v;
  }();
  static const std::vector<RoomStructure> livingrooms = [] {
    std::vector<RoomStructure> v;
    v.push_back({RoomType::LivingRoom, "living_a", rect_floor(5.0, 4.0),
                 {south("Door", 0.8), north("Window", 2.5, 4.0)}});
    v.push_back({RoomType::LivingRoom, "living_b", rect_floor(5.5, 4.5),
                 {south("Door", 0.9), north("Window", 1.8, 4.5), north("Window", 3.7, 4.5)}});
    v.push_back({RoomType::LivingRoom, "living_c", rect_floor(6.0, 4.5),
                 {south("Door", 1.0), west("Window", 2.25), east("Window", 2.25, 6.0)}});
    v.push_back({RoomType::LivingRoom, "living_l", l_floor(6.0, 5.0, 2.5, 2.0),
                 {south("Door", 1.0), north("Window", 1.75, 5.0)}});
    return v;
  }();
  static const std::vector<RoomStructure> kitchens = [] {
    std::vector<RoomStructure> v;
    v.push_back({RoomType::Kitchen, "kitchen_a", rect_floor(4.0, 3.0),
                 {south("Door", 0.7),
                  {"CounterTop", {1.325, 2.675}, 180.0},
                  {"Oven", {2.95, 2.675}, 180.0},
                  {"Sink", {3.75, 1.8}, 270.0},
                  {"Cabinet", {0.225, 1.2}, 90.0}}});
    v.push_back({RoomType::Kitchen, "kitchen_b", rect_floor(4.5, 3.5),
                 {south("Door", 0.7), north("Window", 3.6, 3.5),
                  {"CounterTop", {1.325, 3.175}, 180.0},
                  {"Oven", {2.95, 3.175}, 180.0},
                  {"Sink", {4.25, 2.0}, 270.0},
                  {"Cabinet", {0.225, 1.4}, 90.0}}});
    v.push_back({RoomType::Kitchen, "kitchen_c", rect_floor(5.0, 3.5),
                 {south("Door", 0.8), north("Window", 4.2, 3.5),
                  {"CounterTop", {1.325, 3.175}, 180.0},
                  {"Sink", {2.9, 3.25}, 180.0},
                  {"Oven", {3.8, 3.175}, 180.0},
                  {"Cabinet", {4.775, 1.4}, 270.0}}});
    v.push_back({RoomType::Kitchen, "kitchen_l", l_floor(4.5, 4.0, 1.5, 1.5),
                 {south("Door", 0.7),
                  {"CounterTop", {1.325, 3.675}, 180.0},
                  {"Sink", {0.25, 2.2}, 90.0},
                  {"Oven", {4.175, 1.0}, 270.0},
                  {"Cabinet", {4.275, 2.0}, 270.0}}});
    return v;
  }();
  static const std::vector<RoomStructure> bathrooms = [] {
    std::vector<RoomStructure> v;
    v.push_back({RoomType::Bathroom, "bathroom_a", rect_floor(3.0, 2.5),
                 {south("Door", 0.7),
                  {"Bathtub", {1.0, 2.1}, 180.0},
                  {"Sink", {2.75, 1.0}, 270.0}}});
    v.push_back({RoomType::Bathroom, "bathroom_b", rect_floor(3.5, 3.0),
                 {south("Door", 0.7), north("Window", 2.8, 3.0),
                  {"Bathtub", {1.0, 2.6}, 180.0},
                  {"Sink", {3.25, 1.2}, 270.0},
                  {"Cabinet", {0.225, 1.2}, 90.0}}});
    v.push_back({RoomType::Bathroom, "bathroom_c", rect_floor(4.0, 3.0),
                 {south("Door", 0.8), north("Window", 3.2, 3.0),
                  {"Bathtub", {1.0, 2.6}, 180.0},
                  {"Sink", {3.75, 1.3}, 270.0},
                  {"Cabinet", {2.6, 2.775}, 180.0}}});
    v.push_back({RoomType::Bathroom, "bathroom_l", l_floor(3.5, 3.0, 1.0, 1.0),
                 {south("Door", 0.7),
                  {"Bathtub", {1.0, 2.6}, 180.0},
                  {"Sink", {3.25, 1.0}, 270.0}}});
    return v;
  }();
  switch (t) {
    case RoomType::Bedroom: return bedrooms;
    case RoomType::LivingRoom: return livingrooms;
    case RoomType::Kitchen: return kitchens;
    case RoomType::Bathroom: return bathrooms;
  }
  return bedrooms;
}

// Uniform choice among the candidates: index = first draw of rng(seed) mod
// catalog size. Deterministic given seed.
inline RoomStructure sample_room_structure(RoomType t, std::uint64_t seed) {
  const auto& cands = room_candidates(t);
  if (cands.empty()) throw EmptyCatalogError("no room candidates for this room type");
  Rng rng(seed);
  return cands[rng.next_u64() % cands.size()];
}

}  // namespace roomforge
