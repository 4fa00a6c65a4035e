#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roomforge/cssg.hpp"
#include "roomforge/geometry.hpp"
#include "roomforge/relations.hpp"
#include "roomforge/rng.hpp"

namespace roomforge {

struct NoNavigableCellError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Occupancy grid over the room floor at placement resolution. A cell is
// navigable when its square lies in the floor and clear of nav-blocking
// floor-standing footprints.
struct NavGrid {
  Vec2 origin;
  double resolution = 0.25;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> navigable;

  int index(int ix, int iy) const { return iy * nx + ix; }
  bool in_bounds(int ix, int iy) const { return ix >= 0 && ix < nx && iy >= 0 && iy < ny; }
  bool is_navigable(int ix, int iy) const { return in_bounds(ix, iy) && navigable[index(ix, iy)]; }
  Vec2 cell_center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * resolution, origin.y + (iy + 0.5) * resolution};
  }
};

inline NavGrid build_nav_grid(const Scene& scene, const Catalog& catalog = Catalog::builtin(),
                              double resolution = 0.25) {
  NavGrid g;
  Vec2 lo, hi;
  scene.structure.floor.bounds(lo, hi);
  g.origin = lo;
  g.resolution = resolution;
  g.nx = std::max(1, static_cast<int>(std::floor((hi.x - lo.x) / resolution + 1e-9)));
  g.ny = std::max(1, static_cast<int>(std::floor((hi.y - lo.y) / resolution + 1e-9)));
  g.navigable.assign(static_cast<size_t>(g.nx) * g.ny, 0);

  std::vector<OrientedRect> blockers;
  for (const auto& o : scene.objects) {
    if (!o.support.empty()) continue;
    if (catalog.has(o.type) && !catalog.get(o.type).nav_blocking) continue;
    blockers.push_back(o.footprint());
  }
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      Vec2 c = g.cell_center(ix, iy);
      OrientedRect cell{c, resolution / 2, resolution / 2, 0.0};
      if (!rect_inside_polygon(cell, scene.structure.floor)) continue;
      bool clear = true;
      for (const auto& b : blockers)
        if (rects_overlap(cell, b)) {
          clear = false;
          break;
        }
      g.navigable[g.index(ix, iy)] = clear ? 1 : 0;
    }
  }
  return g;
}

enum class ActionKind {
  MoveAhead,
  RotateLeft,
  RotateRight,
  Pickup,
  Put,
  Open,
  Close,
  ToggleOn,
  ToggleOff,
  Slice,
  Heat,
  Cool,
  Clean
};

inline std::string_view action_kind_name(ActionKind k) {
  switch (k) {
    case ActionKind::MoveAhead: return "MoveAhead";
    case ActionKind::RotateLeft: return "RotateLeft";
    case ActionKind::RotateRight: return "RotateRight";
    case ActionKind::Pickup: return "Pickup";
    case ActionKind::Put: return "Put";
    case ActionKind::Open: return "Open";
    case ActionKind::Close: return "Close";
    case ActionKind::ToggleOn: return "ToggleOn";
    case ActionKind::ToggleOff: return "ToggleOff";
    case ActionKind::Slice: return "Slice";
    case ActionKind::Heat: return "Heat";
    case ActionKind::Cool: return "Cool";
    case ActionKind::Clean: return "Clean";
  }
  return "MoveAhead";
}

inline std::optional<ActionKind> parse_action_kind(std::string_view s) {
  for (ActionKind k :
       {ActionKind::MoveAhead, ActionKind::RotateLeft, ActionKind::RotateRight, ActionKind::Pickup,
        ActionKind::Put, ActionKind::Open, ActionKind::Close, ActionKind::ToggleOn,
        ActionKind::ToggleOff, ActionKind::Slice, ActionKind::Heat, ActionKind::Cool,
        ActionKind::Clean})
    if (action_kind_name(k) == s) return k;
  return std::nullopt;
}

struct Action {
  ActionKind kind = ActionKind::MoveAhead;
  std::string target;      // object id, empty for moves/rotations
  std::string receptacle;  // Put only

  bool operator==(const Action&) const = default;
};

enum class ActionError { Blocked, OutOfRange, HandFull, HandEmpty, ClosedReceptacle, WrongAffordance };

inline std::string_view action_error_name(ActionError e) {
  switch (e) {
    case ActionError::Blocked: return "Blocked";
    case ActionError::OutOfRange: return "OutOfRange";
    case ActionError::HandFull: return "HandFull";
    case ActionError::HandEmpty: return "HandEmpty";
    case ActionError::ClosedReceptacle: return "ClosedReceptacle";
    case ActionError::WrongAffordance: return "WrongAffordance";
  }
  return "Blocked";
}

struct ObjectStates {
  bool open = false;
  bool toggled = false;
  bool sliced = false;
  bool clean = false;
  bool heated = false;
  bool cooled = false;

  bool operator==(const ObjectStates&) const = default;
};

struct WorldState {
  Scene scene;
  std::map<std::string, ObjectStates> states;
  std::string holding;  // held object id, empty when hand free
  int agent_x = 0;
  int agent_y = 0;
  int agent_heading = 0;  // 0, 90, 180, 270
  NavGrid grid;

  Vec2 agent_center() const { return grid.cell_center(agent_x, agent_y); }

  const PlacedObject* find(const std::string& id) const { return scene.find(id); }
  PlacedObject* find(const std::string& id) {
    for (auto& o : scene.objects)
      if (o.id == id) return &o;
    return nullptr;
  }
};

// All state flags default-off; agent starts at the navigable cell nearest the
// room centroid.
inline WorldState instantiate_world(const Scene& scene,
                                    const Catalog& catalog = Catalog::builtin(),
                                    double resolution = 0.25) {
  WorldState w;
  w.scene = scene;
  w.grid = build_nav_grid(scene, catalog, resolution);
  for (const auto& o : scene.objects) w.states[o.id] = ObjectStates{};

  Vec2 c = scene.structure.floor.centroid();
  double best = std::numeric_limits<double>::infinity();
  int bx = -1, by = -1;
  for (int iy = 0; iy < w.grid.ny; ++iy) {
    for (int ix = 0; ix < w.grid.nx; ++ix) {
      if (!w.grid.is_navigable(ix, iy)) continue;
      double d = (w.grid.cell_center(ix, iy) - c).norm();
      if (d < best - 1e-12) {
        best = d;
        bx = ix;
        by = iy;
      }
    }
  }
  if (bx < 0) throw NoNavigableCellError("no navigable cell in scene");
  w.agent_x = bx;
  w.agent_y = by;
  w.agent_heading = 0;
  return w;
}

namespace detail {

inline std::pair<int, int> heading_step(int heading) {
  switch (((heading % 360) + 360) % 360) {
    case 0: return {0, 1};
    case 90: return {1, 0};
    case 180: return {0, -1};
    default: return {-1, 0};
  }
}

}  // namespace detail

// Agent can act on an object that is within `range` meters of the nearest
// footprint point and inside the +-cone of its heading.
inline bool in_interaction_range(const WorldState& w, const PlacedObject& obj,
                                 const InteractionParams& ip) {
  Vec2 a = w.agent_center();
  OrientedRect fp = obj.footprint();
  Vec2 q = rect_closest_point(fp, a);
  double d = (q - a).norm();
  if (d > ip.range + 1e-9) return false;
  if (d < 1e-9) return true;  // standing over it (thin wall elements)
  double bearing = bearing_deg(a, q);
  return std::abs(angle_diff_deg(bearing, w.agent_heading)) <= ip.cone_deg + 1e-9;
}

namespace detail {

inline const PlacedObject* nearest_in_range_of_type(const WorldState& w, const std::string& type,
                                                    const InteractionParams& ip) {
  const PlacedObject* best = nullptr;
  double bd = std::numeric_limits<double>::infinity();
  for (const auto& o : w.scene.objects) {
    if (o.type != type || o.id == w.holding) continue;
    if (!in_interaction_range(w, o, ip)) continue;
    double d = point_rect_distance(w.agent_center(), o.footprint());
    if (d < bd) {
      bd = d;
      best = &o;
    }
  }
  return best;
}

// Free spot on the receptacle nearest the agent (within arm's reach when one
// exists); ties broken by scan order.
inline std::optional<Vec2> free_surface_spot(const WorldState& w, const PlacedObject& receptacle,
                                             const ObjectClass& cls, double res) {
  auto pts = surface_points(receptacle, cls, res);
  std::vector<size_t> order(pts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Vec2 agent = w.agent_center();
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return (pts[a].world - agent).norm() < (pts[b].world - agent).norm();
  });
  for (size_t i : order) {
    OrientedRect cand{pts[i].world, cls.width / 2, cls.depth / 2, receptacle.rotation};
    bool clash = false;
    for (const auto& o : w.scene.objects) {
      if (o.support != receptacle.id || o.id == w.holding) continue;
      if (rects_overlap(cand, o.footprint())) {
        clash = true;
        break;
      }
    }
    if (!clash) return pts[i].world;
  }
  return std::nullopt;
}

}  // namespace detail

// Transition function. On error the state is untouched.
inline std::optional<ActionError> apply_action(WorldState& w, const Action& a,
                                               const Rules& rules = Rules::builtin(),
                                               const Catalog& catalog = Catalog::builtin()) {
  const auto& ip = rules.interaction();
  auto held_by_agent = [&](const std::string& id) { return w.holding == id; };

  switch (a.kind) {
    case ActionKind::MoveAhead: {
      auto [dx, dy] = detail::heading_step(w.agent_heading);
      if (!w.grid.is_navigable(w.agent_x + dx, w.agent_y + dy)) return ActionError::Blocked;
      w.agent_x += dx;
      w.agent_y += dy;
      return std::nullopt;
    }
    case ActionKind::RotateLeft:
      w.agent_heading = (w.agent_heading + 270) % 360;
      return std::nullopt;
    case ActionKind::RotateRight:
      w.agent_heading = (w.agent_heading + 90) % 360;
      return std::nullopt;

    case ActionKind::Pickup: {
      PlacedObject* obj = w.find(a.target);
      if (!obj || !catalog.get(obj->type).pickupable) return ActionError::WrongAffordance;
      if (held_by_agent(a.target)) return ActionError::WrongAffordance;
      if (!w.holding.empty()) return ActionError::HandFull;
      if (!in_interaction_range(w, *obj, ip)) return ActionError::OutOfRange;
      if (!obj->support.empty()) {
        const PlacedObject* sup = w.find(obj->support);
        if (sup && catalog.get(sup->type).openable &&
            catalog.get(sup->type).receptacle == Receptacle::Container &&
            !w.states.at(sup->id).open)
          return ActionError::ClosedReceptacle;
      }
      w.holding = a.target;
      obj->support.clear();
      return std::nullopt;
    }

    case ActionKind::Put: {
      if (w.holding.empty()) return ActionError::HandEmpty;
      if (w.holding != a.target) return ActionError::WrongAffordance;
      PlacedObject* rec = w.find(a.receptacle);
      if (!rec || catalog.get(rec->type).receptacle == Receptacle::None)
        return ActionError::WrongAffordance;
      if (!in_interaction_range(w, *rec, ip)) return ActionError::OutOfRange;
      const ObjectClass& rcls = catalog.get(rec->type);
      if (rcls.openable && rcls.receptacle == Receptacle::Container && !w.states.at(rec->id).open)
        return ActionError::ClosedReceptacle;
      PlacedObject* obj = w.find(a.target);
      auto spot = detail::free_surface_spot(w, *rec, catalog.get(obj->type),
                                            rules.sampling().surface_resolution);
      if (!spot) return ActionError::Blocked;
      obj->position = *spot;
      obj->rotation = rec->rotation;
      obj->support = rec->id;
      w.holding.clear();
      return std::nullopt;
    }

    case ActionKind::Open:
    case ActionKind::Close: {
      PlacedObject* obj = w.find(a.target);
      if (!obj || !catalog.get(obj->type).openable) return ActionError::WrongAffordance;
      if (!in_interaction_range(w, *obj, ip)) return ActionError::OutOfRange;
      bool want_open = a.kind == ActionKind::Open;
      if (w.states.at(obj->id).open == want_open) return ActionError::WrongAffordance;
      w.states.at(obj->id).open = want_open;
      return std::nullopt;
    }

    case ActionKind::ToggleOn:
    case ActionKind::ToggleOff: {
      PlacedObject* obj = w.find(a.target);
      if (!obj || !catalog.get(obj->type).toggleable) return ActionError::WrongAffordance;
      if (!in_interaction_range(w, *obj, ip)) return ActionError::OutOfRange;
      bool want_on = a.kind == ActionKind::ToggleOn;
      if (w.states.at(obj->id).toggled == want_on) return ActionError::WrongAffordance;
      w.states.at(obj->id).toggled = want_on;
      return std::nullopt;
    }

    case ActionKind::Slice: {
      PlacedObject* obj = w.find(a.target);
      if (!obj || !catalog.get(obj->type).sliceable) return ActionError::WrongAffordance;
      if (w.states.at(obj->id).sliced) return ActionError::WrongAffordance;  // never unslices
      if (w.holding.empty()) return ActionError::HandEmpty;
      const PlacedObject* knife = w.find(w.holding);
      if (!knife || knife->type != "Knife") return ActionError::WrongAffordance;
      if (!in_interaction_range(w, *obj, ip)) return ActionError::OutOfRange;
      w.states.at(obj->id).sliced = true;
      return std::nullopt;
    }

    case ActionKind::Heat:
    case ActionKind::Cool:
    case ActionKind::Clean: {
      if (w.holding.empty()) return ActionError::HandEmpty;
      if (w.holding != a.target) return ActionError::WrongAffordance;
      PlacedObject* obj = w.find(a.target);
      const ObjectClass& cls = catalog.get(obj->type);
      const char* appliance = a.kind == ActionKind::Heat   ? "Microwave"
                              : a.kind == ActionKind::Cool ? "Fridge"
                                                           : "Sink";
      bool affordance = a.kind == ActionKind::Heat   ? cls.heatable
                        : a.kind == ActionKind::Cool ? cls.coolable
                                                     : cls.cleanable;
      if (!affordance) return ActionError::WrongAffordance;
      if (!detail::nearest_in_range_of_type(w, appliance, ip)) return ActionError::OutOfRange;
      ObjectStates& st = w.states.at(obj->id);
      if (a.kind == ActionKind::Heat) {
        st.heated = true;
        st.cooled = false;  // reheating clears cooled
      } else if (a.kind == ActionKind::Cool) {
        st.cooled = true;
        st.heated = false;
      } else {
        st.clean = true;
      }
      return std::nullopt;
    }
  }
  return ActionError::WrongAffordance;
}

// ---------------------------------------------------------------------------
// check_goal: conjunction over assertions; type-level assertions are satisfied
// by any instance.

inline bool check_goal(const WorldState& w, const std::vector<StateAssertion>& goals,
                       const Catalog& catalog = Catalog::builtin()) {
  auto instances = [&](const std::string& name) {
    std::vector<const PlacedObject*> out;
    if (const PlacedObject* o = w.find(name)) {
      out.push_back(o);
      return out;
    }
    if (auto t = catalog.canonical(name)) {
      for (const auto& o : w.scene.objects)
        if (o.type == *t) out.push_back(&o);
    }
    return out;
  };

  for (const auto& g : goals) {
    bool sat = false;
    for (const PlacedObject* s : instances(g.subject)) {
      const ObjectStates& st = w.states.at(s->id);
      bool held = w.holding == s->id;
      switch (g.predicate) {
        case Predicate::On:
        case Predicate::In: {
          if (held || s->support.empty()) break;
          const PlacedObject* sup = w.find(s->support);
          if (!sup) break;
          bool kind_ok = catalog.get(sup->type).receptacle ==
                         (g.predicate == Predicate::In ? Receptacle::Container
                                                       : Receptacle::Surface);
          if (!kind_ok) break;
          if (sup->id == g.object) {
            sat = true;
            break;
          }
          if (auto t = catalog.canonical(g.object); t && sup->type == *t) sat = true;
          break;
        }
        case Predicate::ToggledOn: sat = st.toggled; break;
        case Predicate::ToggledOff: sat = !st.toggled; break;
        case Predicate::Open: sat = st.open; break;
        case Predicate::Closed: sat = !st.open; break;
        case Predicate::Sliced: sat = st.sliced; break;
        case Predicate::Clean: sat = st.clean; break;
        case Predicate::Heated: sat = st.heated; break;
        case Predicate::Cooled: sat = st.cooled; break;
        case Predicate::HeldBy: sat = held && g.object == "agent"; break;
      }
      if (sat) break;
    }
    if (!sat) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Replay log: JSON lines, one action per line, closed by a record with the
// final state hash.

struct ReplayLog {
  std::vector<Action> actions;
  std::string final_hash;
  bool success = false;
};

inline std::string serialize_replay_log(const std::vector<Action>& actions,
                                        const std::string& final_hash, bool success) {
  std::string out;
  for (const auto& a : actions) {
    nlohmann::json j;
    j["action"] = std::string(action_kind_name(a.kind));
    if (!a.target.empty()) j["target"] = a.target;
    if (!a.receptacle.empty()) j["receptacle"] = a.receptacle;
    out += j.dump() + "\n";
  }
  nlohmann::json fin;
  fin["final_hash"] = final_hash;
  fin["success"] = success;
  out += fin.dump() + "\n";
  return out;
}

inline ReplayLog parse_replay_log(const std::string& text) {
  ReplayLog log;
  size_t pos = 0;
  bool closed = false;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.contains("final_hash")) {
      log.final_hash = j["final_hash"].get<std::string>();
      log.success = j.value("success", false);
      closed = true;
      break;
    }
    Action a;
    auto k = parse_action_kind(j.at("action").get<std::string>());
    if (!k) throw std::runtime_error("replay log: unknown action " + line);
    a.kind = *k;
    a.target = j.value("target", "");
    a.receptacle = j.value("receptacle", "");
    log.actions.push_back(std::move(a));
  }
  if (!closed) throw std::runtime_error("replay log: missing final-hash record");
  return log;
}

// Canonical hash of the full world state; replaying a recorded action
// sequence must reproduce it.
inline std::uint64_t world_state_hash(const WorldState& w) {
  std::string buf;
  char tmp[96];
  std::snprintf(tmp, sizeof tmp, "agent:%d,%d,%d;hold:%s;", w.agent_x, w.agent_y, w.agent_heading,
                w.holding.c_str());
  buf += tmp;
  std::vector<const PlacedObject*> objs;
  for (const auto& o : w.scene.objects) objs.push_back(&o);
  std::sort(objs.begin(), objs.end(),
            [](const PlacedObject* a, const PlacedObject* b) { return a->id < b->id; });
  for (const PlacedObject* o : objs) {
    const ObjectStates& st = w.states.at(o->id);
    std::snprintf(tmp, sizeof tmp, "|%.6f,%.6f,%.6f,%d%d%d%d%d%d", round6(o->position.x),
                  round6(o->position.y), round6(o->rotation), st.open, st.toggled, st.sliced,
                  st.clean, st.heated, st.cooled);
    buf += o->id;
    buf += ':';
    buf += o->support;
    buf += tmp;
  }
  return fnv1a(buf);
}

}  // namespace roomforge
