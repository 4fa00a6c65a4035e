#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "roomforge/cdf.hpp"
#include "roomforge/cssg.hpp"
#include "roomforge/world.hpp"

namespace roomforge {

struct UnsatisfiableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SubgoalKind {
  GotoLocation,
  PickupObject,
  PutObject,
  SliceObject,
  CoolObject,
  HeatObject,
  CleanObject,
  ToggleObject
};

inline constexpr SubgoalKind kAllSubgoalKinds[] = {
    SubgoalKind::GotoLocation, SubgoalKind::PickupObject, SubgoalKind::PutObject,
    SubgoalKind::SliceObject,  SubgoalKind::CoolObject,   SubgoalKind::HeatObject,
    SubgoalKind::CleanObject,  SubgoalKind::ToggleObject};

inline std::string_view subgoal_kind_name(SubgoalKind k) {
  switch (k) {
    case SubgoalKind::GotoLocation: return "GotoLocation";
    case SubgoalKind::PickupObject: return "PickupObject";
    case SubgoalKind::PutObject: return "PutObject";
    case SubgoalKind::SliceObject: return "SliceObject";
    case SubgoalKind::CoolObject: return "CoolObject";
    case SubgoalKind::HeatObject: return "HeatObject";
    case SubgoalKind::CleanObject: return "CleanObject";
    case SubgoalKind::ToggleObject: return "ToggleObject";
  }
  return "GotoLocation";
}

inline std::optional<SubgoalKind> parse_subgoal_kind(std::string_view s) {
  for (SubgoalKind k : kAllSubgoalKinds)
    if (subgoal_kind_name(k) == s) return k;
  return std::nullopt;
}

// args[0] is the target; PickupObject carries the source receptacle as
// args[1] when known, PutObject carries the destination as args[1].
struct Subgoal {
  SubgoalKind kind = SubgoalKind::GotoLocation;
  std::vector<std::string> args;
  bool success = false;
  int action_start = 0;
  int action_count = 0;
};

struct Trajectory {
  TaskDefinition task;
  std::string scene_ref;  // scene file stem or hash
  RoomType room_type = RoomType::Bedroom;
  std::uint64_t seed = 0;
  std::vector<Subgoal> subgoals;
  std::vector<Action> actions;
  std::vector<std::string> frames;  // world-state hashes, one per step plus initial
  std::vector<std::string> instructions;
  std::string summary;
  bool success = false;
  bool goal_ok = false;
};

// ---------------------------------------------------------------------------
// decompose_task: canonical template expansion into navigation + interaction
// subgoals. Appliance stops (Sink, Microwave, Fridge) are type-level targets
// resolved to an instance at execution time.

namespace detail {

inline const StateAssertion* find_goal(const TaskDefinition& t, Predicate p) {
  for (const auto& g : t.goal_conditions)
    if (g.predicate == p) return &g;
  return nullptr;
}

inline std::string initial_support_of(const TaskDefinition& t, const std::string& id) {
  for (const auto& a : t.initial_state)
    if ((a.predicate == Predicate::On || a.predicate == Predicate::In) && a.subject == id)
      return a.object;
  return {};
}

inline std::vector<Subgoal> pick_put_round(const TaskDefinition& t, const std::string& obj,
                                           const std::string& dest) {
  std::vector<Subgoal> out;
  out.push_back({SubgoalKind::GotoLocation, {obj}});
  std::string src = initial_support_of(t, obj);
  out.push_back({SubgoalKind::PickupObject, src.empty() ? std::vector<std::string>{obj}
                                                        : std::vector<std::string>{obj, src}});
  out.push_back({SubgoalKind::GotoLocation, {dest}});
  out.push_back({SubgoalKind::PutObject, {obj, dest}});
  return out;
}

}  // namespace detail

inline std::vector<Subgoal> decompose_task(const TaskDefinition& task) {
  using detail::find_goal;
  std::vector<Subgoal> sg;
  auto append = [&](std::vector<Subgoal> more) {
    for (auto& s : more) sg.push_back(std::move(s));
  };

  switch (task.task_type) {
    case TaskType::PickAndPlace: {
      const StateAssertion* g = find_goal(task, Predicate::On);
      if (!g) g = find_goal(task, Predicate::In);
      append(detail::pick_put_round(task, g->subject, g->object));
      break;
    }
    case TaskType::PickTwoAndPlace: {
      for (const auto& g : task.goal_conditions)
        if (g.predicate == Predicate::On || g.predicate == Predicate::In)
          append(detail::pick_put_round(task, g.subject, g.object));
      break;
    }
    case TaskType::ExamineInLight: {
      const StateAssertion* hold = find_goal(task, Predicate::HeldBy);
      const StateAssertion* lamp = find_goal(task, Predicate::ToggledOn);
      sg.push_back({SubgoalKind::GotoLocation, {hold->subject}});
      std::string src = detail::initial_support_of(task, hold->subject);
      sg.push_back({SubgoalKind::PickupObject,
                    src.empty() ? std::vector<std::string>{hold->subject}
                                : std::vector<std::string>{hold->subject, src}});
      sg.push_back({SubgoalKind::GotoLocation, {lamp->subject}});
      sg.push_back({SubgoalKind::ToggleObject, {lamp->subject}});
      break;
    }
    case TaskType::CleanAndPlace:
    case TaskType::HeatAndPlace:
    case TaskType::CoolAndPlace: {
      Predicate flag = task.task_type == TaskType::CleanAndPlace  ? Predicate::Clean
                       : task.task_type == TaskType::HeatAndPlace ? Predicate::Heated
                                                                  : Predicate::Cooled;
      SubgoalKind op = task.task_type == TaskType::CleanAndPlace  ? SubgoalKind::CleanObject
                       : task.task_type == TaskType::HeatAndPlace ? SubgoalKind::HeatObject
                                                                  : SubgoalKind::CoolObject;
      const char* appliance = task.task_type == TaskType::CleanAndPlace  ? "Sink"
                              : task.task_type == TaskType::HeatAndPlace ? "Microwave"
                                                                         : "Fridge";
      const StateAssertion* f = find_goal(task, flag);
      const StateAssertion* place = find_goal(task, Predicate::On);
      if (!place) place = find_goal(task, Predicate::In);
      sg.push_back({SubgoalKind::GotoLocation, {f->subject}});
      std::string src = detail::initial_support_of(task, f->subject);
      sg.push_back({SubgoalKind::PickupObject,
                    src.empty() ? std::vector<std::string>{f->subject}
                                : std::vector<std::string>{f->subject, src}});
      sg.push_back({SubgoalKind::GotoLocation, {appliance}});
      sg.push_back({op, {f->subject}});
      sg.push_back({SubgoalKind::GotoLocation, {place->object}});
      sg.push_back({SubgoalKind::PutObject, {place->subject, place->object}});
      break;
    }
    case TaskType::StackAndPlace: {
      // goals: On(top, base), On(base, dest)
      const StateAssertion *top_g = nullptr, *base_g = nullptr;
      for (const auto& a : task.goal_conditions) {
        if (a.predicate != Predicate::On && a.predicate != Predicate::In) continue;
        for (const auto& b : task.goal_conditions) {
          if (&a != &b && (b.predicate == Predicate::On || b.predicate == Predicate::In) &&
              a.object == b.subject) {
            top_g = &a;
            base_g = &b;
          }
        }
      }
      append(detail::pick_put_round(task, base_g->subject, base_g->object));
      append(detail::pick_put_round(task, top_g->subject, top_g->object));
      break;
    }
  }
  return sg;
}

// ---------------------------------------------------------------------------
// plan_navigation: multi-goal Dijkstra over (cell, heading) states. Cost is 1
// per move and 1 per rotation; the goal set is every pose from which the
// target is interactable.

namespace detail {

struct PlannerState {
  int x, y, h;  // h in {0,1,2,3} for heading 0/90/180/270
};

// Goal mask over (cell, heading) states: in range and inside the facing cone.
inline std::vector<std::uint8_t> interaction_goal_mask(const NavGrid& grid,
                                                       const OrientedRect& target,
                                                       const InteractionParams& ip) {
  std::vector<std::uint8_t> mask(static_cast<size_t>(grid.nx) * grid.ny * 4, 0);
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      if (!grid.is_navigable(ix, iy)) continue;
      Vec2 a = grid.cell_center(ix, iy);
      Vec2 q = rect_closest_point(target, a);
      double d = (q - a).norm();
      if (d > ip.range + 1e-9) continue;
      for (int h = 0; h < 4; ++h) {
        bool ok = d < 1e-9 ||
                  std::abs(angle_diff_deg(bearing_deg(a, q), 90.0 * h)) <= ip.cone_deg + 1e-9;
        if (ok) mask[(static_cast<size_t>(iy) * grid.nx + ix) * 4 + h] = 1;
      }
    }
  }
  return mask;
}

}  // namespace detail

// Minimal-cost action sequence from `start` to any masked goal state. Empty
// when the start already satisfies the mask. Throws UnreachableError.
inline std::vector<Action> plan_to_mask(const NavGrid& grid, int sx, int sy, int sheading,
                                        const std::vector<std::uint8_t>& goal_mask) {
  const int n_states = grid.nx * grid.ny * 4;
  auto state_id = [&](int x, int y, int h) { return (y * grid.nx + x) * 4 + h; };
  int start = state_id(sx, sy, ((sheading % 360) + 360) % 360 / 90);
  if (goal_mask[start]) return {};

  std::vector<int> dist(n_states, -1);
  std::vector<int> prev(n_states, -1);
  std::vector<ActionKind> via(n_states, ActionKind::MoveAhead);
  using QE = std::pair<int, int>;  // (cost, state): state index breaks ties
  std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
  dist[start] = 0;
  pq.push({0, start});
  int goal = -1;
  while (!pq.empty()) {
    auto [c, s] = pq.top();
    pq.pop();
    if (c != dist[s]) continue;
    if (goal_mask[s]) {
      goal = s;
      break;
    }
    int h = s % 4;
    int cell = s / 4;
    int x = cell % grid.nx, y = cell / grid.nx;
    auto relax = [&](int ns, ActionKind a) {
      if (dist[ns] == -1 || c + 1 < dist[ns]) {
        dist[ns] = c + 1;
        prev[ns] = s;
        via[ns] = a;
        pq.push({c + 1, ns});
      }
    };
    auto [dx, dy] = detail::heading_step(90 * h);
    if (grid.is_navigable(x + dx, y + dy)) relax(state_id(x + dx, y + dy, h), ActionKind::MoveAhead);
    relax(state_id(x, y, (h + 3) % 4), ActionKind::RotateLeft);
    relax(state_id(x, y, (h + 1) % 4), ActionKind::RotateRight);
  }
  if (goal < 0) throw UnreachableError("no navigable path to target");
  std::vector<Action> actions;
  for (int s = goal; s != start; s = prev[s]) actions.push_back({via[s], "", ""});
  std::reverse(actions.begin(), actions.end());
  return actions;
}

inline std::vector<Action> plan_navigation(const WorldState& w, const std::string& target_id,
                                           const Rules& rules = Rules::builtin()) {
  const PlacedObject* target = w.find(target_id);
  if (!target) throw UnreachableError("navigation target '" + target_id + "' not in scene");
  auto mask = detail::interaction_goal_mask(w.grid, target->footprint(), rules.interaction());
  return plan_to_mask(w.grid, w.agent_x, w.agent_y, w.agent_heading, mask);
}

// ---------------------------------------------------------------------------
// sample_task: fill the task template with eligible scene objects, uniformly.

namespace detail {

inline bool fits_on(const PlacedObject& receptacle, const ObjectClass& cls, const Rules& rules) {
  return !surface_points(receptacle, cls, rules.sampling().surface_resolution).empty();
}

inline StateAssertion placement_assertion(const PlacedObject& obj, const PlacedObject& sup,
                                          const Catalog& catalog) {
  Predicate p = catalog.get(sup.type).receptacle == Receptacle::Container ? Predicate::In
                                                                          : Predicate::On;
  return {obj.id, p, sup.id};
}

}  // namespace detail

inline TaskDefinition sample_task(const Scene& scene, TaskType type, Rng& rng,
                                  const Rules& rules = Rules::builtin(),
                                  const Catalog& catalog = Catalog::builtin()) {
  std::vector<const PlacedObject*> pickables, receptacles, lamps;
  const PlacedObject* microwave = nullptr;
  const PlacedObject* fridge = nullptr;
  const PlacedObject* sink = nullptr;
  for (const auto& o : scene.objects) {
    const ObjectClass& cls = catalog.get(o.type);
    if (cls.pickupable) pickables.push_back(&o);
    if (cls.receptacle != Receptacle::None) receptacles.push_back(&o);
    if (cls.toggleable && (o.type == "DeskLamp" || o.type == "FloorLamp")) lamps.push_back(&o);
    if (o.type == "Microwave") microwave = &o;
    if (o.type == "Fridge") fridge = &o;
    if (o.type == "Sink") sink = &o;
  }

  auto goal_place = [&](const PlacedObject& o, const PlacedObject& r) -> StateAssertion {
    Predicate p =
        catalog.get(r.type).receptacle == Receptacle::Container ? Predicate::In : Predicate::On;
    return {o.id, p, r.id};
  };
  auto init_for = [&](std::initializer_list<const PlacedObject*> objs) {
    std::vector<StateAssertion> init;
    for (const PlacedObject* o : objs) {
      if (o->support.empty()) continue;
      const PlacedObject* sup = scene.find(o->support);
      if (sup) init.push_back(detail::placement_assertion(*o, *sup, catalog));
    }
    return init;
  };

  TaskDefinition task;
  task.task_type = type;

  switch (type) {
    case TaskType::PickAndPlace: {
      std::vector<std::pair<const PlacedObject*, const PlacedObject*>> pairs;
      for (const auto* o : pickables)
        for (const auto* r : receptacles) {
          if (r->id == o->id || r->id == o->support) continue;
          if (!detail::fits_on(*r, catalog.get(o->type), rules)) continue;
          pairs.emplace_back(o, r);
        }
      if (pairs.empty()) throw UnsatisfiableError("no (object, receptacle) pair for PickAndPlace");
      auto [o, r] = pairs[rng.uniform_index(pairs.size())];
      task.goal_conditions = {goal_place(*o, *r)};
      task.initial_state = init_for({o});
      break;
    }
    case TaskType::PickTwoAndPlace: {
      std::map<std::string, std::vector<const PlacedObject*>> by_type;
      for (const auto* o : pickables) by_type[o->type].push_back(o);
      std::vector<std::pair<std::pair<const PlacedObject*, const PlacedObject*>,
                            const PlacedObject*>> combos;
      for (const auto& [t, objs] : by_type) {
        if (objs.size() < 2) continue;
        for (const auto* r : receptacles) {
          if (!detail::fits_on(*r, catalog.get(t), rules)) continue;
          if (r->id == objs[0]->id || r->id == objs[1]->id) continue;
          combos.push_back({{objs[0], objs[1]}, r});
        }
      }
      if (combos.empty()) throw UnsatisfiableError("no duplicated pickable type for PickTwoAndPlace");
      auto [pair, r] = combos[rng.uniform_index(combos.size())];
      task.goal_conditions = {goal_place(*pair.first, *r), goal_place(*pair.second, *r)};
      task.initial_state = init_for({pair.first, pair.second});
      break;
    }
    case TaskType::ExamineInLight: {
      std::vector<std::pair<const PlacedObject*, const PlacedObject*>> pairs;
      for (const auto* o : pickables)
        for (const auto* l : lamps) pairs.emplace_back(o, l);
      if (pairs.empty()) throw UnsatisfiableError("need a pickable object and a lamp");
      auto [o, l] = pairs[rng.uniform_index(pairs.size())];
      task.goal_conditions = {{o->id, Predicate::HeldBy, "agent"},
                              {l->id, Predicate::ToggledOn, ""}};
      task.initial_state = init_for({o});
      break;
    }
    case TaskType::CleanAndPlace:
    case TaskType::HeatAndPlace:
    case TaskType::CoolAndPlace: {
      const PlacedObject* appliance = type == TaskType::CleanAndPlace  ? sink
                                      : type == TaskType::HeatAndPlace ? microwave
                                                                       : fridge;
      if (!appliance) throw UnsatisfiableError("required appliance missing from scene");
      Predicate flag = type == TaskType::CleanAndPlace  ? Predicate::Clean
                       : type == TaskType::HeatAndPlace ? Predicate::Heated
                                                        : Predicate::Cooled;
      std::vector<std::pair<const PlacedObject*, const PlacedObject*>> pairs;
      for (const auto* o : pickables) {
        const ObjectClass& cls = catalog.get(o->type);
        bool able = type == TaskType::CleanAndPlace  ? cls.cleanable
                    : type == TaskType::HeatAndPlace ? cls.heatable
                                                     : cls.coolable;
        if (!able) continue;
        for (const auto* r : receptacles) {
          if (r->id == o->id || r->id == o->support) continue;
          if (!detail::fits_on(*r, cls, rules)) continue;
          pairs.emplace_back(o, r);
        }
      }
      if (pairs.empty()) throw UnsatisfiableError("no eligible object for appliance task");
      auto [o, r] = pairs[rng.uniform_index(pairs.size())];
      task.goal_conditions = {{o->id, flag, ""}, goal_place(*o, *r)};
      task.initial_state = init_for({o});
      break;
    }
    case TaskType::StackAndPlace: {
      std::vector<std::tuple<const PlacedObject*, const PlacedObject*, const PlacedObject*>> triples;
      for (const auto* base : pickables) {
        if (catalog.get(base->type).receptacle != Receptacle::Surface) continue;
        for (const auto* top : pickables) {
          if (top->id == base->id) continue;
          if (!detail::fits_on(*base, catalog.get(top->type), rules)) continue;
          for (const auto* r : receptacles) {
            if (r->id == base->id || r->id == top->id || r->id == base->support) continue;
            if (!detail::fits_on(*r, catalog.get(base->type), rules)) continue;
            triples.emplace_back(top, base, r);
          }
        }
      }
      if (triples.empty()) throw UnsatisfiableError("no stackable pair for StackAndPlace");
      auto [top, base, r] = triples[rng.uniform_index(triples.size())];
      task.goal_conditions = {{top->id, Predicate::On, base->id}, goal_place(*base, *r)};
      task.initial_state = init_for({top, base});
      break;
    }
  }
  return task;
}

// ---------------------------------------------------------------------------
// execute_task: per subgoal, navigate then interact; failures are recorded,
// never thrown. A trajectory succeeds when every subgoal succeeded and the
// goal conditions hold in the final state.

namespace detail {

// Resolve a subgoal arg (instance id or type name) to an instance; nearest to
// the agent wins, ties by id.
inline const PlacedObject* resolve_instance(const WorldState& w, const std::string& name,
                                            const Catalog& catalog) {
  if (const PlacedObject* o = w.find(name)) return o;
  auto t = catalog.canonical(name);
  if (!t) return nullptr;
  const PlacedObject* best = nullptr;
  double bd = std::numeric_limits<double>::infinity();
  for (const auto& o : w.scene.objects) {
    if (o.type != *t || o.id == w.holding) continue;
    double d = point_rect_distance(w.agent_center(), o.footprint());
    if (d < bd - 1e-12 || (std::abs(d - bd) <= 1e-12 && best && o.id < best->id)) {
      bd = d;
      best = &o;
    }
  }
  return best;
}

}  // namespace detail

inline Trajectory execute_task(WorldState& w, const TaskDefinition& task,
                               const Rules& rules = Rules::builtin(),
                               const Catalog& catalog = Catalog::builtin()) {
  Trajectory traj;
  traj.task = task;
  traj.room_type = w.scene.structure.room_type;
  traj.subgoals = decompose_task(task);

  char hex[17];
  auto push_frame = [&] {
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(world_state_hash(w)));
    traj.frames.emplace_back(hex);
  };
  push_frame();

  auto apply = [&](const Action& a) -> bool {
    if (apply_action(w, a, rules, catalog)) return false;  // error: state untouched
    traj.actions.push_back(a);
    push_frame();
    return true;
  };

  bool aborted = false;
  for (auto& sg : traj.subgoals) {
    sg.action_start = static_cast<int>(traj.actions.size());
    if (aborted) {
      sg.success = false;
      continue;
    }
    bool ok = true;
    const PlacedObject* target = detail::resolve_instance(w, sg.args.empty() ? "" : sg.args[0],
                                                          catalog);
    if (!target) {
      ok = false;
    } else {
      switch (sg.kind) {
        case SubgoalKind::GotoLocation: {
          try {
            for (const Action& a : plan_navigation(w, target->id, rules))
              if (!apply(a)) {
                ok = false;
                break;
              }
          } catch (const UnreachableError&) {
            ok = false;
          }
          break;
        }
        case SubgoalKind::PickupObject: {
          // open a closed container first, if the object sits inside one
          std::string sup_id = target->support;
          const PlacedObject* sup = sup_id.empty() ? nullptr : w.find(sup_id);
          bool reopen = false;
          if (sup && catalog.get(sup->type).openable &&
              catalog.get(sup->type).receptacle == Receptacle::Container &&
              !w.states.at(sup->id).open) {
            ok = apply({ActionKind::Open, sup->id, ""});
            reopen = ok;
          }
          if (ok) ok = apply({ActionKind::Pickup, target->id, ""});
          if (ok && reopen) ok = apply({ActionKind::Close, sup_id, ""});
          break;
        }
        case SubgoalKind::PutObject: {
          const PlacedObject* dest = detail::resolve_instance(
              w, sg.args.size() > 1 ? sg.args[1] : "", catalog);
          if (!dest) {
            ok = false;
            break;
          }
          bool reopen = false;
          if (catalog.get(dest->type).openable &&
              catalog.get(dest->type).receptacle == Receptacle::Container &&
              !w.states.at(dest->id).open) {
            ok = apply({ActionKind::Open, dest->id, ""});
            reopen = ok;
          }
          if (ok) ok = apply({ActionKind::Put, target->id, dest->id});
          if (ok && reopen) ok = apply({ActionKind::Close, dest->id, ""});
          break;
        }
        case SubgoalKind::ToggleObject:
          ok = apply({ActionKind::ToggleOn, target->id, ""});
          break;
        case SubgoalKind::SliceObject:
          ok = apply({ActionKind::Slice, target->id, ""});
          break;
        case SubgoalKind::HeatObject:
          ok = apply({ActionKind::Heat, target->id, ""});
          break;
        case SubgoalKind::CoolObject:
          ok = apply({ActionKind::Cool, target->id, ""});
          break;
        case SubgoalKind::CleanObject:
          ok = apply({ActionKind::Clean, target->id, ""});
          break;
      }
    }
    sg.action_count = static_cast<int>(traj.actions.size()) - sg.action_start;
    sg.success = ok;
    if (!ok) aborted = true;
  }

  traj.goal_ok = check_goal(w, task.goal_conditions, catalog);
  traj.success = !aborted && traj.goal_ok &&
                 std::all_of(traj.subgoals.begin(), traj.subgoals.end(),
                             [](const Subgoal& s) { return s.success; });
  return traj;
}

// ---------------------------------------------------------------------------
// Pipeline helpers: per-task resampling of small-object positions, one-shot
// run, and replay.

// Fresh surface positions for every supported small object, same supporters.
inline Scene resample_small_objects(const Scene& scene, Rng rng,
                                    const Rules& rules = Rules::builtin(),
                                    const Catalog& catalog = Catalog::builtin()) {
  Scene out = scene;
  for (auto& o : out.objects) {
    if (o.layer != Layer::SmallObject || o.support.empty()) continue;
    const PlacedObject* sup = out.find(o.support);
    if (!sup) continue;
    const ObjectClass& cls = catalog.get(o.type);
    bool edge_bias = catalog.get(sup->type).receptacle != Receptacle::Container;
    Rng sub = rng.fork(o.id);
    for (int attempt = 0; attempt < rules.sampling().retry_object; ++attempt) {
      auto p = detail::sample_surface_cell(*sup, cls, edge_bias, rules.sampling(), sub);
      if (!p) break;
      PlacedObject cand = o;
      cand.position = *p;
      cand.rotation = sup->rotation;
      if (!check_collision(out, cand, catalog)) {
        o = cand;
        break;
      }
    }
  }
  return out;
}

// Sample, resample initial placements, execute. Returns nullopt when the
// template is unsatisfiable in this scene. Deterministic given (scene, seed).
inline std::optional<Trajectory> run_task(const Scene& scene, const std::string& scene_ref,
                                          TaskType type, std::uint64_t seed,
                                          const Rules& rules = Rules::builtin(),
                                          const Catalog& catalog = Catalog::builtin()) {
  Rng rng(seed);
  TaskDefinition task;
  try {
    Rng sample_rng = rng.fork("sample");
    task = sample_task(scene, type, sample_rng, rules, catalog);
  } catch (const UnsatisfiableError&) {
    return std::nullopt;
  }
  Scene staged = resample_small_objects(scene, rng.fork("resample"), rules, catalog);
  WorldState w = instantiate_world(staged, catalog, rules.sampling().resolution);
  if (task.agent_start) {
    w.agent_x = static_cast<int>((task.agent_start->x - w.grid.origin.x) / w.grid.resolution);
    w.agent_y = static_cast<int>((task.agent_start->y - w.grid.origin.y) / w.grid.resolution);
    w.agent_heading = task.agent_start->heading;
  }
  Trajectory traj = execute_task(w, task, rules, catalog);
  traj.scene_ref = scene_ref;
  traj.seed = seed;
  return traj;
}

// Rebuild the initial world for a recorded trajectory and re-apply its
// actions. Returns (final state hash, goal_ok).
inline std::pair<std::string, bool> replay_trajectory(const Scene& scene, const Trajectory& traj,
                                                      const Rules& rules = Rules::builtin(),
                                                      const Catalog& catalog = Catalog::builtin()) {
  Rng rng(traj.seed);
  Scene staged = resample_small_objects(scene, rng.fork("resample"), rules, catalog);
  WorldState w = instantiate_world(staged, catalog, rules.sampling().resolution);
  if (traj.task.agent_start) {
    w.agent_x = static_cast<int>((traj.task.agent_start->x - w.grid.origin.x) / w.grid.resolution);
    w.agent_y = static_cast<int>((traj.task.agent_start->y - w.grid.origin.y) / w.grid.resolution);
    w.agent_heading = traj.task.agent_start->heading;
  }
  for (const Action& a : traj.actions) apply_action(w, a, rules, catalog);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(world_state_hash(w)));
  return {std::string(hex), check_goal(w, traj.task.goal_conditions, catalog)};
}

// ---------------------------------------------------------------------------
// Derive a scene description from a recorded trajectory (the task-parser
// path: goto/pickup/toggle/open targets become required objects, pickup
// context becomes a placement).

inline SceneDescription derive_scene_description(const Trajectory& traj,
                                                 const Catalog& catalog = Catalog::builtin()) {
  if (traj.subgoals.empty() && traj.actions.empty())
    throw EmptyTrajectoryError("derive: empty trajectory");
  std::vector<ScriptStep> script;
  for (const auto& sg : traj.subgoals) {
    std::string action(subgoal_kind_name(sg.kind));
    script.push_back({action, sg.args});
  }
  for (const auto& a : traj.actions)
    if (a.kind == ActionKind::Open) script.push_back({"OpenObject", {a.target}});
  if (script.empty()) throw EmptyTrajectoryError("derive: empty trajectory");
  return derive_scene_description(script, traj.room_type, catalog);
}

// ---------------------------------------------------------------------------
// Trajectory serialization (.traj.json).

inline json trajectory_to_json(const Trajectory& traj) {
  json j;
  j["format"] = "traj/1";
  j["scene"] = traj.scene_ref;
  j["room_type"] = std::string(room_type_name(traj.room_type));
  j["seed"] = traj.seed;
  json jt;
  jt["type"] = std::string(task_type_name(traj.task.task_type));
  jt["init"] = json::array();
  for (const auto& a : traj.task.initial_state) jt["init"].push_back(assertion_to_json(a));
  jt["goal"] = json::array();
  for (const auto& a : traj.task.goal_conditions) jt["goal"].push_back(assertion_to_json(a));
  if (traj.task.agent_start)
    jt["agent_start"] = {{"x", traj.task.agent_start->x},
                         {"y", traj.task.agent_start->y},
                         {"heading", traj.task.agent_start->heading}};
  j["task"] = jt;
  j["subgoals"] = json::array();
  for (const auto& sg : traj.subgoals) {
    j["subgoals"].push_back({{"kind", std::string(subgoal_kind_name(sg.kind))},
                             {"args", sg.args},
                             {"success", sg.success},
                             {"span", {sg.action_start, sg.action_count}}});
  }
  j["actions"] = json::array();
  for (const auto& a : traj.actions) {
    json ja;
    ja["kind"] = std::string(action_kind_name(a.kind));
    if (!a.target.empty()) ja["target"] = a.target;
    if (!a.receptacle.empty()) ja["receptacle"] = a.receptacle;
    j["actions"].push_back(ja);
  }
  j["frames"] = traj.frames;
  j["instructions"] = traj.instructions;
  j["summary"] = traj.summary;
  j["success"] = traj.success;
  j["goal_ok"] = traj.goal_ok;
  return j;
}

inline std::string serialize_trajectory(const Trajectory& traj) {
  return trajectory_to_json(traj).dump(2) + "\n";
}

inline Trajectory trajectory_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != std::string("traj/1"))
    throw std::runtime_error("not a traj/1 document");
  Trajectory t;
  t.scene_ref = j.value("scene", "");
  auto rt = parse_room_type(j.value("room_type", "Bedroom"));
  t.room_type = rt ? *rt : RoomType::Bedroom;
  t.seed = j.value("seed", std::uint64_t{0});
  const json& jt = j.at("task");
  auto tt = parse_task_type(jt.at("type").get<std::string>());
  if (!tt) throw std::runtime_error("bad task type");
  t.task.task_type = *tt;
  auto parse_assertions = [&](const json& arr, std::vector<StateAssertion>& out) {
    for (const auto& ja : arr) {
      StateAssertion a;
      a.subject = ja.at("subject").get<std::string>();
      auto p = parse_predicate(ja.at("predicate").get<std::string>());
      if (!p) throw std::runtime_error("bad predicate");
      a.predicate = *p;
      a.object = ja.value("object", "");
      out.push_back(std::move(a));
    }
  };
  parse_assertions(jt.value("init", json::array()), t.task.initial_state);
  parse_assertions(jt.at("goal"), t.task.goal_conditions);
  if (jt.contains("agent_start")) {
    AgentPose p;
    p.x = jt["agent_start"].value("x", 0.0);
    p.y = jt["agent_start"].value("y", 0.0);
    p.heading = jt["agent_start"].value("heading", 0);
    t.task.agent_start = p;
  }
  for (const auto& js : j.at("subgoals")) {
    Subgoal sg;
    auto k = parse_subgoal_kind(js.at("kind").get<std::string>());
    if (!k) throw std::runtime_error("bad subgoal kind");
    sg.kind = *k;
    for (const auto& a : js.at("args")) sg.args.push_back(a.get<std::string>());
    sg.success = js.value("success", false);
    sg.action_start = js.at("span").at(0).get<int>();
    sg.action_count = js.at("span").at(1).get<int>();
    t.subgoals.push_back(std::move(sg));
  }
  for (const auto& ja : j.at("actions")) {
    Action a;
    auto k = parse_action_kind(ja.at("kind").get<std::string>());
    if (!k) throw std::runtime_error("bad action kind");
    a.kind = *k;
    a.target = ja.value("target", "");
    a.receptacle = ja.value("receptacle", "");
    t.actions.push_back(std::move(a));
  }
  for (const auto& f : j.value("frames", json::array())) t.frames.push_back(f.get<std::string>());
  for (const auto& s : j.value("instructions", json::array()))
    t.instructions.push_back(s.get<std::string>());
  t.summary = j.value("summary", "");
  t.success = j.value("success", false);
  t.goal_ok = j.value("goal_ok", false);
  return t;
}

}  // namespace roomforge
