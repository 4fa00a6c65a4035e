#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roomforge/catalog.hpp"
#include "roomforge/cdf.hpp"
#include "roomforge/geometry.hpp"
#include "roomforge/relation.hpp"
#include "roomforge/relations.hpp"
#include "roomforge/rng.hpp"
#include "roomforge/room.hpp"

namespace roomforge {

inline constexpr const char* kGeneratorVersion = "roomforge 0.1.0";

struct GenerationExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlacedObject {
  std::string id;
  std::string type;  // canonical catalog type
  Layer layer = Layer::Furniture;
  Vec2 position;
  double rotation = 0.0;
  double width = 0.5;
  double depth = 0.5;
  std::string support;  // supporting object id; empty = floor/wall
  bool from_structure = false;
  std::map<std::string, std::string> attributes;

  OrientedRect footprint() const { return {position, width / 2, depth / 2, rotation}; }
};

struct SceneProvenance {
  std::string cdf_hash;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorVersion;
  int rules_version = 1;
  int catalog_version = 1;
};

struct Scene {
  RoomStructure structure;
  std::vector<PlacedObject> objects;
  std::vector<Relationship> relations;  // explicit relations the scene realizes
  SceneProvenance provenance;

  const PlacedObject* find(const std::string& id) const {
    for (const auto& o : objects)
      if (o.id == id) return &o;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// check_collision: true iff the candidate's rotated footprint overlaps any
// floor-standing object or leaves the floor polygon. On/In candidates are
// tested only against siblings on the same supporter. Wall elements (windows,
// doors, paintings) do not participate.

inline bool check_collision(const Scene& scene, const PlacedObject& candidate,
                            const Catalog& catalog = Catalog::builtin()) {
  OrientedRect fp = candidate.footprint();
  if (!candidate.support.empty()) {
    for (const auto& o : scene.objects) {
      if (o.id == candidate.id || o.support != candidate.support) continue;
      if (rects_overlap(fp, o.footprint())) return true;
    }
    return false;
  }
  if (!rect_inside_polygon(fp, scene.structure.floor)) return true;
  for (const auto& o : scene.objects) {
    if (o.id == candidate.id || !o.support.empty()) continue;
    if (catalog.has(o.type) && catalog.get(o.type).wall_mounted) continue;
    if (rects_overlap(fp, o.footprint())) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// satisfaction: geometric predicate per relation kind.

inline bool satisfaction(const Scene& scene, const Relationship& rel,
                         const Rules& rules = Rules::builtin()) {
  const PlacedObject* subject = scene.find(rel.subject);
  if (!subject) return false;
  const auto& th = rules.thresholds();
  OrientedRect sfp = subject->footprint();

  // resolve target geometry
  bool wall_border = rel.target == kWallBorder;
  bool wall_corner = rel.target == kWallCorner;
  const PlacedObject* target = nullptr;
  if (!wall_border && !wall_corner) {
    target = scene.find(rel.target);
    if (!target) return false;
  }

  auto target_point = [&]() -> Vec2 {
    if (wall_border) {
      double best = std::numeric_limits<double>::infinity();
      Vec2 q{};
      for (const auto& e : scene.structure.floor.edges()) {
        Vec2 ab = e.b - e.a;
        double len2 = ab.dot(ab);
        double t = len2 == 0 ? 0 : std::clamp((subject->position - e.a).dot(ab) / len2, 0.0, 1.0);
        Vec2 cand = e.a + ab * t;
        double d = (subject->position - cand).norm();
        if (d < best) {
          best = d;
          q = cand;
        }
      }
      return q;
    }
    if (wall_corner) {
      double best = std::numeric_limits<double>::infinity();
      Vec2 q{};
      for (const auto& v : scene.structure.floor.pts) {
        double d = (subject->position - v).norm();
        if (d < best) {
          best = d;
          q = v;
        }
      }
      return q;
    }
    return target->position;
  };

  switch (rel.kind) {
    case RelationKind::Against: {
      double d;
      if (wall_border) d = rect_polygon_boundary_distance(sfp, scene.structure.floor);
      else if (wall_corner) d = point_rect_distance(target_point(), sfp);
      else d = rect_rect_distance(sfp, target->footprint());
      return d <= th.against_max;
    }
    case RelationKind::Beside: {
      // clearance between footprints (or to the wall), so the band applies
      // regardless of object size; centers must still be apart
      double d;
      if (wall_border) {
        d = rect_polygon_boundary_distance(sfp, scene.structure.floor);
      } else if (wall_corner) {
        d = point_rect_distance(target_point(), sfp);
      } else {
        d = rect_rect_distance(sfp, target->footprint());
      }
      return d <= th.beside_max && (subject->position - target_point()).norm() >= th.beside_min;
    }
    case RelationKind::Face: {
      double bearing = bearing_deg(subject->position, target_point());
      return std::abs(angle_diff_deg(bearing, subject->rotation)) <= th.face_cone_deg + 1e-9;
    }
    case RelationKind::AwayFrom: {
      double d = (subject->position - target_point()).norm();
      return d >= th.away_min;
    }
    case RelationKind::On:
    case RelationKind::In:
      return subject->support == rel.target;
  }
  return false;
}

// ---------------------------------------------------------------------------
// place_object: draw a floor position from P(p|R) over the combined field, or
// a surface cell of the supporter for On/In placements.

namespace detail {

inline std::map<std::string, OrientedRect> placed_poses(const Scene& scene) {
  std::map<std::string, OrientedRect> m;
  for (const auto& o : scene.objects) m.emplace(o.id, o.footprint());
  return m;
}

inline std::vector<OrientedRect> floor_obstacles(const Scene& scene, const Catalog& catalog) {
  std::vector<OrientedRect> v;
  for (const auto& o : scene.objects) {
    if (!o.support.empty()) continue;
    if (catalog.has(o.type) && catalog.get(o.type).wall_mounted) continue;
    v.push_back(o.footprint());
  }
  return v;
}

// Grid cell centers cannot express flush contact for arbitrary footprint
// depths, so a drawn against-placement slides toward its wall (or target)
// into the contact band. The slide keeps the cell's draw probability; the
// caller re-checks collisions afterwards.
inline void snap_against_contact(const Scene& scene, PlacedObject& placed,
                                 const std::vector<Relationship>& rels, const Rules& rules) {
  const Relationship* against = nullptr;
  double wbest = -1.0;
  for (const auto& r : rels) {
    if (r.kind != RelationKind::Against) continue;
    double w = rules.weight(r.weight_class);
    if (w > wbest) {
      wbest = w;
      against = &r;
    }
  }
  if (!against) return;

  const Polygon& floor = scene.structure.floor;
  OrientedRect fp = placed.footprint();
  Vec2 dir{};
  double gap = 0.0;
  if (against->target == kWallBorder) {
    double best = std::numeric_limits<double>::infinity();
    Segment nearest{};
    for (const auto& e : floor.edges()) {
      double d = point_segment_distance(placed.position, e);
      if (d < best) {
        best = d;
        nearest = e;
      }
    }
    Vec2 along = (nearest.b - nearest.a).normalized();
    dir = {along.y, -along.x};  // outward (toward the wall)
    gap = rect_segment_distance(fp, nearest);
  } else if (against->target == kWallCorner) {
    double best = std::numeric_limits<double>::infinity();
    Vec2 corner{};
    for (const auto& v : floor.pts) {
      double d = (placed.position - v).norm();
      if (d < best) {
        best = d;
        corner = v;
      }
    }
    dir = (corner - placed.position).normalized();
    gap = point_rect_distance(corner, fp);
  } else {
    const PlacedObject* target = scene.find(against->target);
    if (!target) return;
    dir = (target->position - placed.position).normalized();
    gap = rect_rect_distance(fp, target->footprint());
  }

  double contact = rules.profiles().against_contact;
  if (gap <= contact) return;
  Vec2 slid = placed.position + dir * (gap - contact / 2);
  OrientedRect moved{slid, placed.width / 2, placed.depth / 2, placed.rotation};
  if (!rect_inside_polygon(moved, floor)) return;
  placed.position = slid;
}

// Candidate positions over a supporter's footprint, row-major in the
// supporter's local frame. `inward` is the distance from the usable boundary.
struct SurfacePoint {
  Vec2 world;
  double inward;
};

inline std::vector<SurfacePoint> surface_points(const PlacedObject& supporter,
                                                const ObjectClass& cls, double res) {
  double margin = std::max(cls.width, cls.depth) / 2;
  double ux = supporter.width / 2 - margin;
  double uy = supporter.depth / 2 - margin;
  if (ux < 0 || uy < 0) {
    // object barely fits; centering only
    if (cls.width <= supporter.width && cls.depth <= supporter.depth)
      return {{supporter.position, 0.0}};
    return {};
  }
  int nx = std::max(1, static_cast<int>(std::floor(2 * ux / res)) + 1);
  int ny = std::max(1, static_cast<int>(std::floor(2 * uy / res)) + 1);
  Vec2 f = heading_vec(supporter.rotation);
  Vec2 r = {f.y, -f.x};
  std::vector<SurfacePoint> out;
  out.reserve(static_cast<size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      double lx = nx == 1 ? 0.0 : -ux + 2 * ux * ix / (nx - 1);
      double ly = ny == 1 ? 0.0 : -uy + 2 * uy * iy / (ny - 1);
      double inward = std::min(ux - std::abs(lx), uy - std::abs(ly));
      out.push_back({supporter.position + r * lx + f * ly, inward});
    }
  }
  return out;
}

// Sample over a supporter's footprint. On-placements are biased toward the
// footprint boundary; In-placements are uniform.
inline std::optional<Vec2> sample_surface_cell(const PlacedObject& supporter,
                                               const ObjectClass& cls, bool edge_bias,
                                               const SamplingParams& sp, Rng& rng) {
  auto pts = surface_points(supporter, cls, sp.surface_resolution);
  if (pts.empty()) return std::nullopt;
  double z = 0.0;
  std::vector<double> w(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    w[i] = edge_bias ? std::exp(-sp.surface_edge_bias * pts[i].inward) : 1.0;
    z += w[i];
  }
  double u = rng.uniform() * z;
  double acc = 0.0;
  size_t pick = pts.size() - 1;
  for (size_t i = 0; i < pts.size(); ++i) {
    acc += w[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  return pts[pick].world;
}

}  // namespace detail

// Floor placement from the combined score field. Infeasible cells were masked
// during field construction, so a draw is always collision-free.
inline PlacedObject place_object(const Scene& scene, const ObjectEntry& obj,
                                 const std::vector<Relationship>& rels, Rng& rng,
                                 const Rules& rules = Rules::builtin(),
                                 const Catalog& catalog = Catalog::builtin()) {
  const ObjectClass& cls = catalog.get(obj.object_type);

  // On/In: sample a surface cell of the supporter instead of the floor grid.
  for (const auto& r : rels) {
    if (!is_placement_kind(r.kind)) continue;
    const PlacedObject* supporter = scene.find(r.target);
    if (!supporter) throw std::runtime_error("place_object: supporter '" + r.target + "' missing");
    auto p = detail::sample_surface_cell(*supporter, cls, r.kind == RelationKind::On,
                                         rules.sampling(), rng);
    if (!p) throw NoFeasibleCellError("object does not fit on supporter '" + r.target + "'");
    PlacedObject placed;
    placed.id = obj.id;
    placed.type = obj.object_type;
    placed.layer = cls.layer;
    placed.position = *p;
    placed.rotation = supporter->rotation;
    placed.width = cls.width;
    placed.depth = cls.depth;
    placed.support = supporter->id;
    placed.attributes = obj.attributes;
    return placed;
  }

  ScoreField field = combined_field(cls, rels, scene.structure.floor,
                                    detail::floor_obstacles(scene, catalog),
                                    detail::placed_poses(scene), rules);
  int idx = field.sample(rng);
  PlacedObject placed;
  placed.id = obj.id;
  placed.type = obj.object_type;
  placed.layer = cls.layer;
  placed.position = field.cell_center(idx);
  placed.rotation = field.rotation[idx];
  placed.width = cls.width;
  placed.depth = cls.depth;
  placed.attributes = obj.attributes;
  detail::snap_against_contact(scene, placed, rels, rules);
  return placed;
}

// ---------------------------------------------------------------------------
// generate_scene: layered placement (furniture, small objects, decorations)
// with implicit rules merged per object, per-object retry, and whole-scene
// restart. Per-object RNG substreams keep placements independent: adding an
// unrelated object does not perturb the others under the same seed.

struct GenerationStats {
  int restarts = 0;
  int placement_retries = 0;
};

namespace detail {

inline std::string structure_object_id(const std::string& type, int k) {
  return "#" + to_snake(type) + "_" + std::to_string(k);
}

// Materialize the room's fixed elements as placed objects.
inline void materialize_fixed(Scene& scene, const Catalog& catalog) {
  std::map<std::string, int> counts;
  for (const auto& fe : scene.structure.fixed) {
    const ObjectClass& cls = catalog.get(fe.type);
    PlacedObject o;
    o.id = structure_object_id(fe.type, counts[fe.type]++);
    o.type = fe.type;
    o.layer = cls.layer;
    o.position = fe.position;
    o.rotation = fe.rotation;
    o.width = cls.width;
    o.depth = cls.depth;
    o.from_structure = true;
    scene.objects.push_back(std::move(o));
  }
}

// Wall-mounted decorations sample a position along the wall segments.
inline std::optional<PlacedObject> place_on_wall(const Scene& scene, const ObjectEntry& obj,
                                                 const ObjectClass& cls, Rng& rng, int retries,
                                                 double rot_step) {
  auto walls = scene.structure.floor.edges();
  std::vector<double> lens;
  double total = 0.0;
  for (const auto& w : walls) {
    lens.push_back((w.b - w.a).norm());
    total += lens.back();
  }
  for (int attempt = 0; attempt < retries; ++attempt) {
    double u = rng.uniform() * total;
    size_t wi = 0;
    while (wi + 1 < walls.size() && u > lens[wi]) {
      u -= lens[wi];
      ++wi;
    }
    const Segment& w = walls[wi];
    double len = lens[wi];
    if (len < cls.width) continue;
    double t = std::clamp(u / len, cls.width / 2 / len, 1.0 - cls.width / 2 / len);
    Vec2 dir = (w.b - w.a).normalized();
    Vec2 inward{-dir.y, dir.x};
    Vec2 pos = w.a + dir * (t * len) + inward * (cls.depth / 2);
    PlacedObject o;
    o.id = obj.id;
    o.type = obj.object_type;
    o.layer = cls.layer;
    o.position = pos;
    o.rotation = snap_angle(bearing_deg({0, 0}, inward), rot_step);
    o.width = cls.width;
    o.depth = cls.depth;
    o.attributes = obj.attributes;
    // avoid stacking wall decor on windows/doors or other decor
    bool clash = false;
    for (const auto& other : scene.objects) {
      if (other.support.empty() && rects_overlap(o.footprint(), other.footprint()) &&
          other.layer != Layer::Furniture) {
        clash = true;
        break;
      }
      if (other.from_structure && rects_overlap(o.footprint(), other.footprint())) {
        clash = true;
        break;
      }
    }
    if (!clash) return o;
  }
  return std::nullopt;
}

}  // namespace detail

inline Scene generate_scene(const CdfDocument& cdf, const RoomStructure& structure,
                            std::uint64_t seed, const Rules& rules = Rules::builtin(),
                            const Catalog& catalog = Catalog::builtin(),
                            GenerationStats* stats_out = nullptr) {
  PlacementPlan plan = resolve_constraints(cdf.scene_desc, catalog);
  const int R = rules.sampling().retry_object;
  const int S = rules.sampling().retry_scene;
  Rng base(seed);
  GenerationStats stats;

  for (int restart = 0; restart < S; ++restart) {
    stats.restarts = restart;
    Rng scene_rng = base.fork(static_cast<std::uint64_t>(restart));
    Scene scene;
    scene.structure = structure;
    scene.relations = cdf.scene_desc.relations;
    scene.provenance.cdf_hash = [] (const SceneDescription& d) {
      char buf[17];
      std::snprintf(buf, sizeof buf, "%016llx",
                    static_cast<unsigned long long>(fnv1a(scene_description_to_json(d).dump())));
      return std::string(buf);
    }(cdf.scene_desc);
    scene.provenance.seed = seed;
    scene.provenance.rules_version = rules.version();
    scene.provenance.catalog_version = catalog.version();
    detail::materialize_fixed(scene, catalog);

    std::map<std::string, int> unbound;  // structural type -> next fixed index
    bool failed = false;

    for (const auto& item : plan.items) {
      const ObjectClass& cls = catalog.get(item.entry.object_type);
      Rng obj_rng = scene_rng.fork(item.entry.id);

      // Bind structural types (windows, kept kitchen/bathroom furniture) to an
      // unconsumed fixed element of the same type.
      if (cls.structural) {
        int next = unbound[item.entry.object_type];
        int seen = 0;
        PlacedObject* bound = nullptr;
        for (auto& o : scene.objects) {
          if (!o.from_structure || o.type != item.entry.object_type) continue;
          if (seen++ == next) {
            bound = &o;
            break;
          }
        }
        if (bound) {
          bound->id = item.entry.id;
          bound->attributes = item.entry.attributes;
          unbound[item.entry.object_type] = next + 1;
          continue;
        }
        if (item.entry.object_type == "Window" || item.entry.object_type == "Door") {
          failed = true;  // windows/doors exist only as structure
          break;
        }
      }

      // Merge implicit rules (furniture only); explicit relations dominate.
      std::vector<Relationship> rels = item.relations;
      if (cls.layer == Layer::Furniture) {
        for (auto rule : rules.implicit_rules_for(item.entry.object_type,
                                                  cdf.scene_desc.room_type)) {
          rule.subject = item.entry.id;
          if (!is_structural_anchor(rule.target)) {
            // bind the rule's target type to the first placed instance
            const PlacedObject* inst = nullptr;
            for (const auto& o : scene.objects)
              if (o.type == rule.target && o.support.empty()) {
                inst = &o;
                break;
              }
            if (!inst) continue;
            rule.target = inst->id;
          }
          bool dup = false;
          for (const auto& r : rels)
            if (r.kind == rule.kind && r.target == rule.target) dup = true;
          if (!dup) rels.push_back(rule);
        }
      }

      // Small objects without a declared placement go onto a sampled surface.
      bool has_placement = std::any_of(rels.begin(), rels.end(), [](const Relationship& r) {
        return is_placement_kind(r.kind);
      });
      if (cls.layer == Layer::SmallObject && !has_placement) {
        // supporter pool: surfaces first, containers as a fallback
        std::vector<const PlacedObject*> pool;
        for (const auto& o : scene.objects)
          if (o.support.empty() && catalog.has(o.type) &&
              catalog.get(o.type).receptacle == Receptacle::Surface)
            pool.push_back(&o);
        RelationKind kind = RelationKind::On;
        if (pool.empty()) {
          for (const auto& o : scene.objects)
            if (o.support.empty() && catalog.has(o.type) && o.type != "GarbageCan" &&
                catalog.get(o.type).receptacle == Receptacle::Container)
              pool.push_back(&o);
          kind = RelationKind::In;
        }
        if (pool.empty()) {
          failed = true;
          break;
        }
        const PlacedObject* pick = pool[obj_rng.uniform_index(pool.size())];
        rels.push_back({item.entry.id, kind, pick->id, RelationOrigin::Implicit,
                        WeightClass::FurnitureImplicit});
      }

      bool ok = false;
      if (cls.wall_mounted && !cls.structural) {
        auto placed = detail::place_on_wall(scene, item.entry, cls, obj_rng, R,
                                            rules.sampling().rotation_step_deg);
        if (placed) {
          scene.objects.push_back(*placed);
          ok = true;
        }
      } else {
        for (int attempt = 0; attempt < R && !ok; ++attempt) {
          if (attempt > 0) ++stats.placement_retries;
          PlacedObject candidate;
          try {
            candidate = place_object(scene, item.entry, rels, obj_rng, rules, catalog);
          } catch (const NoFeasibleCellError&) {
            break;
          }
          if (check_collision(scene, candidate, catalog)) continue;
          scene.objects.push_back(candidate);
          // explicit relations must hold right away; otherwise redraw
          bool sat = true;
          for (const auto& r : rels)
            if (r.origin == RelationOrigin::Explicit && !satisfaction(scene, r, rules)) sat = false;
          if (sat) {
            ok = true;
          } else {
            scene.objects.pop_back();
          }
        }
      }
      if (!ok) {
        failed = true;
        break;
      }
    }

    if (failed) continue;

    // Final verification: every explicit relation satisfied.
    bool all_sat = std::all_of(scene.relations.begin(), scene.relations.end(),
                               [&](const Relationship& r) { return satisfaction(scene, r, rules); });
    if (!all_sat) continue;
    if (stats_out) *stats_out = stats;
    return scene;
  }
  throw GenerationExhausted("scene generation exhausted after " + std::to_string(S) +
                            " restarts (seed " + std::to_string(seed) + ")");
}

// ---------------------------------------------------------------------------
// Scene serialization (.scene.json). Stable field order, coordinates rounded
// to a micrometer so output is byte-identical across runs and platforms.

inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

inline json scene_to_json(const Scene& scene) {
  json j;
  j["format"] = "scene/1";
  json room;
  room["type"] = std::string(room_type_name(scene.structure.room_type));
  room["candidate"] = scene.structure.name;
  room["floor"] = json::array();
  for (const auto& p : scene.structure.floor.pts)
    room["floor"].push_back({round6(p.x), round6(p.y)});
  room["fixed"] = json::array();
  for (const auto& fe : scene.structure.fixed) {
    room["fixed"].push_back({{"type", fe.type},
                             {"x", round6(fe.position.x)},
                             {"y", round6(fe.position.y)},
                             {"rotation", round6(fe.rotation)}});
  }
  j["room"] = room;
  j["objects"] = json::array();
  for (const auto& o : scene.objects) {
    json jo;
    jo["id"] = o.id;
    jo["type"] = o.type;
    jo["layer"] = std::string(layer_name(o.layer));
    jo["x"] = round6(o.position.x);
    jo["y"] = round6(o.position.y);
    jo["rotation"] = round6(o.rotation);
    jo["w"] = round6(o.width);
    jo["d"] = round6(o.depth);
    if (!o.support.empty()) jo["support"] = o.support;
    if (o.from_structure) jo["fixed"] = true;
    if (!o.attributes.empty()) jo["attributes"] = o.attributes;
    j["objects"].push_back(jo);
  }
  j["relations"] = json::array();
  auto rels = scene.relations;
  std::sort(rels.begin(), rels.end());
  for (const auto& r : rels)
    j["relations"].push_back({{"subject", r.subject},
                              {"relation", std::string(relation_kind_name(r.kind))},
                              {"object", r.target}});
  j["provenance"] = {{"cdf_hash", scene.provenance.cdf_hash},
                     {"seed", scene.provenance.seed},
                     {"generator", scene.provenance.generator},
                     {"rules_version", scene.provenance.rules_version},
                     {"catalog_version", scene.provenance.catalog_version}};
  return j;
}

inline std::string serialize_scene(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

inline Scene scene_from_json(const json& j, const Catalog& catalog = Catalog::builtin()) {
  if (!j.is_object() || j.value("format", "") != std::string("scene/1"))
    throw std::runtime_error("not a scene/1 document");
  Scene scene;
  const json& room = j.at("room");
  auto rt = parse_room_type(room.at("type").get<std::string>());
  if (!rt) throw std::runtime_error("bad room type");
  scene.structure.room_type = *rt;
  scene.structure.name = room.value("candidate", "");
  for (const auto& p : room.at("floor"))
    scene.structure.floor.pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  if (room.contains("fixed")) {
    for (const auto& fe : room["fixed"]) {
      scene.structure.fixed.push_back({fe.at("type").get<std::string>(),
                                       {fe.at("x").get<double>(), fe.at("y").get<double>()},
                                       fe.at("rotation").get<double>()});
    }
  }
  for (const auto& jo : j.at("objects")) {
    PlacedObject o;
    o.id = jo.at("id").get<std::string>();
    o.type = jo.at("type").get<std::string>();
    if (!catalog.has(o.type)) throw std::runtime_error("scene references unknown type " + o.type);
    o.layer = catalog.get(o.type).layer;
    o.position = {jo.at("x").get<double>(), jo.at("y").get<double>()};
    o.rotation = jo.at("rotation").get<double>();
    o.width = jo.at("w").get<double>();
    o.depth = jo.at("d").get<double>();
    o.support = jo.value("support", "");
    o.from_structure = jo.value("fixed", false);
    scene.objects.push_back(std::move(o));
  }
  if (j.contains("relations")) {
    for (const auto& jr : j["relations"]) {
      auto kind = parse_relation_kind(jr.at("relation").get<std::string>());
      if (!kind) throw std::runtime_error("bad relation kind in scene");
      scene.relations.push_back({jr.at("subject").get<std::string>(), *kind,
                                 jr.at("object").get<std::string>(), RelationOrigin::Explicit,
                                 WeightClass::Explicit});
    }
  }
  if (j.contains("provenance")) {
    const json& p = j["provenance"];
    scene.provenance.cdf_hash = p.value("cdf_hash", "");
    scene.provenance.seed = p.value("seed", std::uint64_t{0});
    scene.provenance.generator = p.value("generator", "");
    scene.provenance.rules_version = p.value("rules_version", 1);
    scene.provenance.catalog_version = p.value("catalog_version", 1);
  }
  return scene;
}

}  // namespace roomforge
