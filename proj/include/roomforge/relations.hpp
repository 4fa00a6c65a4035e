#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "roomforge/catalog.hpp"
#include "roomforge/cdf.hpp"
#include "roomforge/config.hpp"
#include "roomforge/geometry.hpp"
#include "roomforge/relation.hpp"
#include "roomforge/rng.hpp"

namespace roomforge {

struct CycleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoFeasibleCellError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownTypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rules: relation weights, score profiles, the implicit-relationship table,
// satisfaction thresholds, and sampling parameters. Loaded from a config
// document; ships with an embedded default. `--rules` overrides.

struct ScoreProfiles {
  double against_contact = 0.05;
  double against_slope = 12.0;
  double beside_near = 0.3;
  double beside_far = 0.8;
  double beside_slope = 1.0;
  double face_near = 0.3;
  double face_far = 0.8;
  double face_slope = 1.0;
  double away_radius = 2.0;
};

struct SatisfactionThresholds {
  double against_max = 0.10;  // wall/target clearance, meters
  double beside_min = 0.1;    // center distance band
  double beside_max = 1.2;
  double face_cone_deg = 30.0;
  double away_min = 1.5;
};

struct SamplingParams {
  double resolution = 0.25;        // floor grid, meters per cell
  double rotation_step_deg = 15.0; // placement rotation snap
  int retry_object = 50;
  int retry_scene = 20;
  double surface_resolution = 0.05;  // on/in local grid
  double surface_edge_bias = 8.0;    // exp(-bias * inward distance) for On
};

struct InteractionParams {
  double range = 1.5;
  double cone_deg = 45.0;
};

namespace detail {

inline constexpr const char* kDefaultRulesToml = R"TOML(
# relation rules, version 1
version = 1

[weights]
structural = 2.0   # furniture vs. room structure
furniture = 1.0    # furniture vs. furniture
explicit = 2.5     # relations declared in the scene description

[profile.against]
contact = 0.05
slope = 12.0

[profile.beside]
near = 0.3
far = 0.8
slope = 1.0

[profile.face]
near = 0.3
far = 0.8
slope = 1.0

[profile.away_from]
radius = 2.0

[satisfaction]
against_max = 0.10
beside_min = 0.1
beside_max = 1.2
face_cone = 30.0
away_from_min = 1.5

[sampling]
resolution = 0.25
rotation_step = 15.0
retry_object = 50
retry_scene = 20
surface_resolution = 0.05
surface_edge_bias = 8.0

[interaction]
range = 1.5
cone = 45.0

# implicit relationships merged in when sampling furniture positions
[implicit.structural]
CounterTop = ["against wall-border"]
TVStand = ["against wall-border"]
Sofa = ["against wall-border"]
Bed = ["against wall-border"]
Dresser = ["against wall-border"]
Desk = ["against wall-border"]
SideTable = ["against wall-border"]
FloorLamp = ["against wall-corner"]
DiningTable = ["away_from wall-border"]

[implicit.furniture]
Chair = ["face Desk"]
Stool = ["face DiningTable"]
CoffeeTable = ["beside Sofa"]
DiningTable = ["away_from Sofa"]
)TOML";

}  // namespace detail

class Rules {
 public:
  static const Rules& builtin() {
    static const Rules r = from_config(ConfigDoc::parse(detail::kDefaultRulesToml));
    return r;
  }

  static Rules from_config(const ConfigDoc& doc) {
    Rules r;
    r.version_ = static_cast<int>(doc.number_or("version", 1));
    r.w_structural_ = doc.number_or("weights.structural", 2.0);
    r.w_furniture_ = doc.number_or("weights.furniture", 1.0);
    r.w_explicit_ = doc.number_or("weights.explicit", 2.5);
    r.profiles_.against_contact = doc.number_or("profile.against.contact", 0.05);
    r.profiles_.against_slope = doc.number_or("profile.against.slope", 12.0);
    r.profiles_.beside_near = doc.number_or("profile.beside.near", 0.3);
    r.profiles_.beside_far = doc.number_or("profile.beside.far", 0.8);
    r.profiles_.beside_slope = doc.number_or("profile.beside.slope", 1.0);
    r.profiles_.face_near = doc.number_or("profile.face.near", 0.3);
    r.profiles_.face_far = doc.number_or("profile.face.far", 0.8);
    r.profiles_.face_slope = doc.number_or("profile.face.slope", 1.0);
    r.profiles_.away_radius = doc.number_or("profile.away_from.radius", 2.0);
    r.thresholds_.against_max = doc.number_or("satisfaction.against_max", 0.10);
    r.thresholds_.beside_min = doc.number_or("satisfaction.beside_min", 0.1);
    r.thresholds_.beside_max = doc.number_or("satisfaction.beside_max", 1.2);
    r.thresholds_.face_cone_deg = doc.number_or("satisfaction.face_cone", 30.0);
    r.thresholds_.away_min = doc.number_or("satisfaction.away_from_min", 1.5);
    r.sampling_.resolution = doc.number_or("sampling.resolution", 0.25);
    r.sampling_.rotation_step_deg = doc.number_or("sampling.rotation_step", 15.0);
    r.sampling_.retry_object = static_cast<int>(doc.number_or("sampling.retry_object", 50));
    r.sampling_.retry_scene = static_cast<int>(doc.number_or("sampling.retry_scene", 20));
    r.sampling_.surface_resolution = doc.number_or("sampling.surface_resolution", 0.05);
    r.sampling_.surface_edge_bias = doc.number_or("sampling.surface_edge_bias", 8.0);
    r.interaction_.range = doc.number_or("interaction.range", 1.5);
    r.interaction_.cone_deg = doc.number_or("interaction.cone", 45.0);

    auto load_rules = [&](const std::string& section, WeightClass wc) {
      for (const auto& type : doc.keys_under(section)) {
        for (const auto& spec : doc.str_list(section + "." + type)) {
          std::istringstream ss(spec);
          std::string kind_s, target;
          ss >> kind_s >> target;
          auto kind = parse_relation_kind(kind_s);
          if (!kind || target.empty())
            throw std::runtime_error("rules: bad implicit rule '" + spec + "' for " + type);
          r.implicit_[type].push_back({type, *kind, target, RelationOrigin::Implicit, wc});
        }
      }
    };
    load_rules("implicit.structural", WeightClass::StructuralImplicit);
    load_rules("implicit.furniture", WeightClass::FurnitureImplicit);
    return r;
  }

  static Rules from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rules file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_config(ConfigDoc::parse(ss.str()));
  }

  int version() const { return version_; }

  double weight(WeightClass wc) const {
    switch (wc) {
      case WeightClass::StructuralImplicit: return w_structural_;
      case WeightClass::FurnitureImplicit: return w_furniture_;
      case WeightClass::Explicit: return w_explicit_;
    }
    return w_explicit_;
  }

  // Shipped rule-table rows for a type. Targets are structural anchors or
  // type names to be bound to a placed instance. Room type reserved for
  // future room-scoped tables; the default table is room-independent.
  std::vector<Relationship> implicit_rules_for(const std::string& object_type,
                                               RoomType /*room*/) const {
    auto it = implicit_.find(object_type);
    if (it == implicit_.end()) return {};
    return it->second;
  }

  const ScoreProfiles& profiles() const { return profiles_; }
  const SatisfactionThresholds& thresholds() const { return thresholds_; }
  const SamplingParams& sampling() const { return sampling_; }
  const InteractionParams& interaction() const { return interaction_; }

  // Copy with all class weights scaled; ranking-invariance checks use this.
  Rules scaled_weights(double c) const {
    Rules r = *this;
    r.w_structural_ *= c;
    r.w_furniture_ *= c;
    r.w_explicit_ *= c;
    return r;
  }

 private:
  int version_ = 1;
  double w_structural_ = 2.0;
  double w_furniture_ = 1.0;
  double w_explicit_ = 2.5;
  ScoreProfiles profiles_;
  SatisfactionThresholds thresholds_;
  SamplingParams sampling_;
  InteractionParams interaction_;
  std::map<std::string, std::vector<Relationship>> implicit_;
};

inline int priority_of(const std::string& object_type, const Catalog& catalog = Catalog::builtin()) {
  if (!catalog.has(object_type)) throw UnknownTypeError("unknown object type: " + object_type);
  return catalog.get(object_type).priority;
}

// ---------------------------------------------------------------------------
// Score profiles. Distance semantics per kind: Against, Beside and Face use
// footprint clearance to the target (so the bands work for any object size);
// AwayFrom uses center-to-reference distance.

inline double profile_score(RelationKind kind, double d, const ScoreProfiles& p) {
  switch (kind) {
    case RelationKind::Against:
      return d <= p.against_contact ? 0.0 : p.against_slope * (d - p.against_contact);
    case RelationKind::Beside:
      if (d < p.beside_near) return p.beside_slope * (p.beside_near - d);
      if (d > p.beside_far) return p.beside_slope * (d - p.beside_far);
      return 0.0;
    case RelationKind::Face:
      if (d < p.face_near) return p.face_slope * (p.face_near - d);
      if (d > p.face_far) return p.face_slope * (d - p.face_far);
      return 0.0;
    case RelationKind::AwayFrom:
      return std::max(0.0, p.away_radius - d);
    case RelationKind::On:
    case RelationKind::In:
      return 0.0;  // surface placements are sampled on the supporter, not the floor
  }
  return 0.0;
}

inline double snap_angle(double deg, double step) {
  return wrap_deg(std::round(deg / step) * step);
}

// Geometry of a relation target: a placed object's footprint or a structural
// anchor resolved against the room floor.
struct TargetGeom {
  enum class Kind { Object, WallBorder, WallCorner } kind = Kind::Object;
  OrientedRect rect;  // valid for Object
};

// Score and suggested rotation of placing `cls` at cell center `p` under one
// relation. Rotation: Face/Beside/AwayFrom head toward the target; Against
// heads away from the wall (or target).
inline std::pair<double, double> score_at(const Relationship& rel, const ObjectClass& cls, Vec2 p,
                                          const Polygon& floor, const TargetGeom& target,
                                          const ScoreProfiles& profiles, double rot_step) {
  double rot = 0.0;
  double d = 0.0;
  const double hw = cls.width / 2, hd = cls.depth / 2;

  switch (target.kind) {
    case TargetGeom::Kind::WallBorder: {
      // nearest wall segment
      double best = std::numeric_limits<double>::infinity();
      Segment nearest{};
      for (const auto& e : floor.edges()) {
        double dd = point_segment_distance(p, e);
        if (dd < best) {
          best = dd;
          nearest = e;
        }
      }
      Vec2 dir = (nearest.b - nearest.a).normalized();
      Vec2 inward{-dir.y, dir.x};  // floor polygons are counter-clockwise
      if (rel.kind == RelationKind::Against) {
        rot = snap_angle(bearing_deg({0, 0}, inward), rot_step);
        OrientedRect fp{p, hw, hd, rot};
        // gap to the wall the object is backed onto, not to any wall
        d = rect_segment_distance(fp, nearest);
      } else if (rel.kind == RelationKind::AwayFrom) {
        rot = snap_angle(bearing_deg(p, p - inward * best), rot_step);
        d = best;
      } else {
        Vec2 q = p - inward * best;  // nearest wall point
        rot = snap_angle(bearing_deg(p, q), rot_step);
        OrientedRect fp{p, hw, hd, rot};
        d = rect_segment_distance(fp, nearest);
      }
      break;
    }
    case TargetGeom::Kind::WallCorner: {
      double best = std::numeric_limits<double>::infinity();
      Vec2 corner{};
      for (const auto& v : floor.pts) {
        double dd = (p - v).norm();
        if (dd < best) {
          best = dd;
          corner = v;
        }
      }
      if (rel.kind == RelationKind::Against) {
        rot = snap_angle(bearing_deg(corner, p), rot_step);
        OrientedRect fp{p, hw, hd, rot};
        d = point_rect_distance(corner, fp);
      } else if (rel.kind == RelationKind::AwayFrom) {
        rot = snap_angle(bearing_deg(p, corner), rot_step);
        d = best;
      } else {
        rot = snap_angle(bearing_deg(p, corner), rot_step);
        OrientedRect fp{p, hw, hd, rot};
        d = point_rect_distance(corner, fp);
      }
      break;
    }
    case TargetGeom::Kind::Object: {
      if (rel.kind == RelationKind::Against) {
        rot = snap_angle(bearing_deg(target.rect.center, p), rot_step);
        OrientedRect fp{p, hw, hd, rot};
        d = rect_rect_distance(fp, target.rect);
      } else if (rel.kind == RelationKind::AwayFrom) {
        rot = snap_angle(bearing_deg(p, target.rect.center), rot_step);
        d = (p - target.rect.center).norm();
      } else {
        rot = snap_angle(bearing_deg(p, target.rect.center), rot_step);
        OrientedRect fp{p, hw, hd, rot};
        d = rect_rect_distance(fp, target.rect);
      }
      break;
    }
  }
  return {profile_score(rel.kind, d, profiles), rot};
}

// ---------------------------------------------------------------------------
// ScoreField: per-cell combined score and suggested rotation over the room
// floor. Placement probability is exp(-s_p) over feasible cells.

struct ScoreField {
  Vec2 origin;
  double resolution = 0.25;
  int nx = 0;
  int ny = 0;
  std::vector<double> score;     // +inf marks infeasible cells
  std::vector<double> rotation;  // degrees
  std::vector<int> source;       // index of the max-weight relation, -1 if none

  int index(int ix, int iy) const { return iy * nx + ix; }
  Vec2 cell_center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * resolution, origin.y + (iy + 0.5) * resolution};
  }
  Vec2 cell_center(int idx) const { return cell_center(idx % nx, idx / nx); }
  size_t size() const { return score.size(); }

  bool feasible(int idx) const { return std::isfinite(score[idx]); }

  // Normalized exp(-s) over feasible cells; zero elsewhere.
  std::vector<double> probabilities() const {
    std::vector<double> p(score.size(), 0.0);
    double min_s = std::numeric_limits<double>::infinity();
    for (double s : score) min_s = std::min(min_s, s);
    if (!std::isfinite(min_s)) return p;
    double z = 0.0;
    for (size_t i = 0; i < score.size(); ++i) {
      if (std::isfinite(score[i])) {
        p[i] = std::exp(-(score[i] - min_s));
        z += p[i];
      }
    }
    for (auto& v : p) v /= z;
    return p;
  }

  // Categorical draw proportional to exp(-s_p).
  int sample(Rng& rng) const {
    double min_s = std::numeric_limits<double>::infinity();
    for (double s : score) min_s = std::min(min_s, s);
    if (!std::isfinite(min_s)) throw NoFeasibleCellError("score field has no feasible cell");
    double z = 0.0;
    for (double s : score)
      if (std::isfinite(s)) z += std::exp(-(s - min_s));
    double u = rng.uniform() * z;
    double acc = 0.0;
    int last = -1;
    for (size_t i = 0; i < score.size(); ++i) {
      if (!std::isfinite(score[i])) continue;
      acc += std::exp(-(score[i] - min_s));
      last = static_cast<int>(i);
      if (u < acc) return last;
    }
    return last;
  }
};

// Combined field for placing `cls` under `rels`. Targets must map every
// non-anchor target id to its placed footprint. Cells whose footprint leaves
// the floor or hits an obstacle are infeasible. s_p is the weighted sum of
// per-relation scores; rotation comes from the max-weight relation
// (declaration order breaks ties).
inline ScoreField combined_field(const ObjectClass& cls, const std::vector<Relationship>& rels,
                                 const Polygon& floor,
                                 const std::vector<OrientedRect>& obstacles,
                                 const std::map<std::string, OrientedRect>& targets,
                                 const Rules& rules, double resolution = 0.0) {
  if (resolution <= 0) resolution = rules.sampling().resolution;
  Vec2 lo, hi;
  floor.bounds(lo, hi);
  ScoreField field;
  field.origin = lo;
  field.resolution = resolution;
  field.nx = std::max(1, static_cast<int>(std::floor((hi.x - lo.x) / resolution + 1e-9)));
  field.ny = std::max(1, static_cast<int>(std::floor((hi.y - lo.y) / resolution + 1e-9)));
  field.score.assign(static_cast<size_t>(field.nx) * field.ny, 0.0);
  field.rotation.assign(field.score.size(), 0.0);
  field.source.assign(field.score.size(), -1);

  // Relations that shape the floor field (On/In are handled on the supporter).
  std::vector<int> active;
  for (size_t k = 0; k < rels.size(); ++k)
    if (!is_placement_kind(rels[k].kind)) active.push_back(static_cast<int>(k));

  std::vector<TargetGeom> geoms(rels.size());
  for (int k : active) {
    const auto& r = rels[k];
    if (r.target == kWallBorder) {
      geoms[k].kind = TargetGeom::Kind::WallBorder;
    } else if (r.target == kWallCorner) {
      geoms[k].kind = TargetGeom::Kind::WallCorner;
    } else {
      auto it = targets.find(r.target);
      if (it == targets.end())
        throw std::runtime_error("combined_field: target '" + r.target + "' not placed");
      geoms[k].kind = TargetGeom::Kind::Object;
      geoms[k].rect = it->second;
    }
  }

  int chosen = -1;
  if (!active.empty()) {
    chosen = active[0];
    for (int k : active)
      if (rules.weight(rels[k].weight_class) > rules.weight(rels[chosen].weight_class)) chosen = k;
  }

  const double rot_step = rules.sampling().rotation_step_deg;
  const double inf = std::numeric_limits<double>::infinity();
  bool any_feasible = false;
  for (int iy = 0; iy < field.ny; ++iy) {
    for (int ix = 0; ix < field.nx; ++ix) {
      int idx = field.index(ix, iy);
      Vec2 p = field.cell_center(ix, iy);
      double s_sum = 0.0;
      double rot = 0.0;
      for (int k : active) {
        auto [s, r] = score_at(rels[k], cls, p, floor, geoms[k], rules.profiles(), rot_step);
        s_sum += rules.weight(rels[k].weight_class) * s;
        if (k == chosen) rot = r;
      }
      OrientedRect fp{p, cls.width / 2, cls.depth / 2, rot};
      bool ok = rect_inside_polygon(fp, floor);
      for (size_t o = 0; ok && o < obstacles.size(); ++o)
        if (rects_overlap(fp, obstacles[o])) ok = false;
      field.score[idx] = ok ? s_sum : inf;
      field.rotation[idx] = rot;
      field.source[idx] = chosen;
      any_feasible = any_feasible || ok;
    }
  }
  if (!any_feasible) throw NoFeasibleCellError("no feasible cell for type " + cls.type);
  return field;
}

// ---------------------------------------------------------------------------
// Constraint resolution: order objects by layer, then descending priority,
// then id; rewrite relations so every evaluated relation points at an
// earlier-placed target. Within an equal-priority group the order is adjusted
// topologically; a contradiction there (or an uninvertible forward relation)
// is a cycle.

struct PlannedPlacement {
  ObjectEntry entry;
  std::vector<Relationship> relations;  // subject == entry.id, possibly inverted
};

struct PlacementPlan {
  std::vector<PlannedPlacement> items;
};

inline PlacementPlan resolve_constraints(const SceneDescription& desc,
                                         const Catalog& catalog = Catalog::builtin()) {
  struct Key {
    int layer;
    int neg_q;
    bool operator==(const Key&) const = default;
    bool operator<(const Key& o) const {
      return layer != o.layer ? layer < o.layer : neg_q < o.neg_q;
    }
  };
  auto key_of = [&](const ObjectEntry& e) -> Key {
    const auto& oc = catalog.get(e.object_type);
    return {static_cast<int>(oc.layer), -oc.priority};
  };

  std::map<std::string, size_t> pos;
  for (size_t i = 0; i < desc.entries.size(); ++i) pos[desc.entries[i].id] = i;

  // Rewrite relations so subjects sort strictly after targets.
  std::vector<Relationship> rels;
  std::vector<std::pair<std::string, std::string>> same_key_edges;  // target before subject
  for (const auto& r : desc.relations) {
    auto si = pos.find(r.subject);
    if (si == pos.end()) throw CycleError("relation subject '" + r.subject + "' not in scene");
    if (is_structural_anchor(r.target)) {
      rels.push_back(r);
      continue;
    }
    auto ti = pos.find(r.target);
    if (ti == pos.end()) throw CycleError("relation target '" + r.target + "' not in scene");
    Key ks = key_of(desc.entries[si->second]);
    Key kt = key_of(desc.entries[ti->second]);
    if (kt < ks) {
      rels.push_back(r);  // target placed first already
    } else if (ks == kt) {
      rels.push_back(r);
      same_key_edges.emplace_back(r.target, r.subject);
    } else {
      // subject would be placed first; invert symmetric kinds
      switch (r.kind) {
        case RelationKind::Beside:
        case RelationKind::AwayFrom:
        case RelationKind::Against: {
          Relationship inv = r;
          std::swap(inv.subject, inv.target);
          rels.push_back(inv);
          break;
        }
        default:
          throw CycleError("relation " + r.subject + " " +
                           std::string(relation_kind_name(r.kind)) + " " + r.target +
                           " cannot be evaluated: target has lower placement priority");
      }
    }
  }

  // Base order (layer, -q, id).
  std::vector<size_t> order(desc.entries.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    Key ka = key_of(desc.entries[a]), kb = key_of(desc.entries[b]);
    if (!(ka == kb)) return ka < kb;
    return desc.entries[a].id < desc.entries[b].id;
  });

  // Adjust equal-priority groups topologically (Kahn's, smallest id first).
  if (!same_key_edges.empty()) {
    std::vector<size_t> adjusted;
    adjusted.reserve(order.size());
    size_t i = 0;
    while (i < order.size()) {
      size_t j = i;
      Key k = key_of(desc.entries[order[i]]);
      while (j < order.size() && key_of(desc.entries[order[j]]) == k) ++j;
      std::vector<std::string> group;
      for (size_t g = i; g < j; ++g) group.push_back(desc.entries[order[g]].id);
      std::set<std::string> in_group(group.begin(), group.end());
      std::map<std::string, std::set<std::string>> succ;
      std::map<std::string, int> indeg;
      for (const auto& id : group) indeg[id] = 0;
      for (const auto& [before, after] : same_key_edges) {
        if (in_group.count(before) && in_group.count(after) && succ[before].insert(after).second)
          indeg[after] += 1;
      }
      std::set<std::string> ready;
      for (const auto& id : group)
        if (indeg[id] == 0) ready.insert(id);
      std::vector<std::string> sorted;
      while (!ready.empty()) {
        std::string id = *ready.begin();
        ready.erase(ready.begin());
        sorted.push_back(id);
        for (const auto& nxt : succ[id])
          if (--indeg[nxt] == 0) ready.insert(nxt);
      }
      if (sorted.size() != group.size())
        throw CycleError("unresolvable cycle among equal-priority objects");
      for (const auto& id : sorted) adjusted.push_back(pos.at(id));
      i = j;
    }
    order = std::move(adjusted);
  }

  std::map<std::string, size_t> rank;
  for (size_t i = 0; i < order.size(); ++i) rank[desc.entries[order[i]].id] = i;
  // Inverted symmetric relations inside equal-priority groups may still point
  // forward when ids fight the edge direction; the topo pass above fixed the
  // order, so re-check every relation now points backward.
  for (const auto& r : rels) {
    if (is_structural_anchor(r.target)) continue;
    if (rank.at(r.target) > rank.at(r.subject))
      throw CycleError("unresolvable relation ordering between '" + r.subject + "' and '" +
                       r.target + "'");
  }

  PlacementPlan plan;
  for (size_t idx : order) {
    PlannedPlacement pp;
    pp.entry = desc.entries[idx];
    for (const auto& r : rels)
      if (r.subject == pp.entry.id) pp.relations.push_back(r);
    plan.items.push_back(std::move(pp));
  }
  return plan;
}

// ---------------------------------------------------------------------------
// validate_cdf: findings are data, not failures.

struct ValidationFinding {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;
  bool ok() const { return findings.empty(); }
};

inline ValidationReport validate_cdf(const CdfDocument& doc,
                                     const Catalog& catalog = Catalog::builtin()) {
  ValidationReport report;
  auto add = [&](const std::string& code, const std::string& msg) {
    report.findings.push_back({code, msg});
  };

  const auto& desc = doc.scene_desc;
  std::set<std::string> ids;
  for (const auto& e : desc.entries) {
    if (!ids.insert(e.id).second) add("duplicate-id", "entry id '" + e.id + "' repeated");
    if (!catalog.has(e.object_type)) {
      add("unknown-type", "entry '" + e.id + "' has unknown type '" + e.object_type + "'");
      continue;
    }
    if (catalog.get(e.object_type).layer != e.layer)
      add("layer-inconsistency", "entry '" + e.id + "' layer disagrees with catalog for type '" +
                                      e.object_type + "'");
  }

  std::map<std::string, std::set<std::pair<RelationKind, std::string>>> placements;
  for (const auto& r : desc.relations) {
    if (!ids.count(r.subject))
      add("dangling-reference", "relation subject '" + r.subject + "' not declared");
    if (!is_structural_anchor(r.target) && !ids.count(r.target))
      add("dangling-reference", "relation target '" + r.target + "' not declared");
    if (r.subject == r.target) add("self-relation", "relation of '" + r.subject + "' to itself");
    if (is_placement_kind(r.kind)) placements[r.subject].insert({r.kind, r.target});
  }
  for (const auto& [subject, ps] : placements) {
    if (ps.size() > 1)
      add("conflicting-placement",
          "entry '" + subject + "' has " + std::to_string(ps.size()) + " placements");
  }

  bool refs_ok =
      std::none_of(report.findings.begin(), report.findings.end(),
                   [](const ValidationFinding& f) {
                     return f.code == "dangling-reference" || f.code == "unknown-type" ||
                            f.code == "duplicate-id";
                   });
  if (refs_ok) {
    try {
      resolve_constraints(desc, catalog);
    } catch (const CycleError& e) {
      add("unresolvable-cycle", e.what());
    }
  }

  if (doc.task_def) {
    if (doc.task_def->goal_conditions.empty()) add("empty-goal", "task has no goal conditions");
    auto known = [&](const std::string& name) {
      if (name == "agent" || ids.count(name)) return true;
      if (auto t = catalog.canonical(name)) {
        for (const auto& e : desc.entries)
          if (e.object_type == *t) return true;
      }
      return false;
    };
    for (const auto* list : {&doc.task_def->initial_state, &doc.task_def->goal_conditions}) {
      for (const auto& a : *list) {
        if (!known(a.subject))
          add("dangling-reference", "assertion subject '" + a.subject + "' not in scene");
        if (!a.object.empty() && !known(a.object))
          add("dangling-reference", "assertion object '" + a.object + "' not in scene");
      }
    }
  }
  return report;
}

}  // namespace roomforge
