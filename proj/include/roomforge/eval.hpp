#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "roomforge/cssg.hpp"
#include "roomforge/tasking.hpp"

namespace roomforge {

struct RateCounter {
  int successes = 0;
  int attempts = 0;

  void add(bool ok) {
    attempts += 1;
    successes += ok ? 1 : 0;
  }
  bool defined() const { return attempts > 0; }
  double rate() const { return attempts == 0 ? 0.0 : double(successes) / attempts; }
};

struct MetricsReport {
  std::map<std::string, RateCounter> per_task;     // task type name -> rate
  RateCounter overall;
  std::map<std::string, RateCounter> per_subgoal;  // subgoal kind -> rate
  RateCounter landmarks;                           // reachable landmark instances
  RateCounter routes;                              // navigable route pairs
  int scenes = 0;
  int tasks_per_type = 0;
  std::uint64_t seed = 0;
};

// Default landmark sets per room type.
inline const std::vector<std::string>& default_landmarks(RoomType t) {
  static const std::vector<std::string> bedroom = {"Bed", "Desk", "DeskLamp", "Dresser"};
  static const std::vector<std::string> living = {"Sofa", "CoffeeTable", "TVStand", "FloorLamp"};
  static const std::vector<std::string> kitchen = {"CounterTop", "Fridge", "Sink", "DiningTable"};
  static const std::vector<std::string> bathroom = {"Bathtub", "Sink", "Toilet"};
  switch (t) {
    case RoomType::Bedroom: return bedroom;
    case RoomType::LivingRoom: return living;
    case RoomType::Kitchen: return kitchen;
    case RoomType::Bathroom: return bathroom;
  }
  return bedroom;
}

inline const std::vector<std::pair<std::string, std::string>>& default_routes(RoomType t) {
  static const std::vector<std::pair<std::string, std::string>> bedroom = {
      {"Bed", "Desk"}, {"Bed", "Dresser"}, {"Desk", "Door"}};
  static const std::vector<std::pair<std::string, std::string>> living = {
      {"Sofa", "TVStand"}, {"Sofa", "FloorLamp"}, {"CoffeeTable", "Door"}};
  static const std::vector<std::pair<std::string, std::string>> kitchen = {
      {"Fridge", "Sink"}, {"CounterTop", "DiningTable"}, {"Sink", "Door"}};
  static const std::vector<std::pair<std::string, std::string>> bathroom = {
      {"Bathtub", "Sink"}, {"Sink", "Door"}};
  switch (t) {
    case RoomType::Bedroom: return bedroom;
    case RoomType::LivingRoom: return living;
    case RoomType::Kitchen: return kitchen;
    case RoomType::Bathroom: return bathroom;
  }
  return bedroom;
}

// Fraction of landmark instances the agent can navigate to from its start.
inline RateCounter landmark_reachability(const Scene& scene,
                                         const std::vector<std::string>& landmark_types,
                                         const Rules& rules = Rules::builtin(),
                                         const Catalog& catalog = Catalog::builtin()) {
  RateCounter rc;
  WorldState w;
  try {
    w = instantiate_world(scene, catalog, rules.sampling().resolution);
  } catch (const NoNavigableCellError&) {
    for (const auto& t : landmark_types)
      for (const auto& o : scene.objects)
        if (o.type == t) rc.add(false);
    return rc;
  }
  for (const auto& t : landmark_types) {
    for (const auto& o : scene.objects) {
      if (o.type != t) continue;
      bool reachable = true;
      try {
        plan_navigation(w, o.id, rules);
      } catch (const UnreachableError&) {
        reachable = false;
      }
      rc.add(reachable);
    }
  }
  return rc;
}

namespace detail {

// Cells within interaction range of the footprint (cone ignored: the agent
// can rotate in place).
inline std::vector<int> region_cells(const NavGrid& grid, const OrientedRect& fp,
                                     const InteractionParams& ip) {
  std::vector<int> out;
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      if (!grid.is_navigable(ix, iy)) continue;
      Vec2 c = grid.cell_center(ix, iy);
      if ((rect_closest_point(fp, c) - c).norm() <= ip.range + 1e-9)
        out.push_back(grid.index(ix, iy));
    }
  return out;
}

inline bool cells_connected(const NavGrid& grid, const std::vector<int>& from,
                            const std::vector<int>& to) {
  if (from.empty() || to.empty()) return false;
  std::vector<std::uint8_t> target(grid.navigable.size(), 0), seen(grid.navigable.size(), 0);
  for (int c : to) target[c] = 1;
  std::queue<int> q;
  for (int c : from) {
    if (target[c]) return true;
    seen[c] = 1;
    q.push(c);
  }
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    int x = c % grid.nx, y = c / grid.nx;
    for (int k = 0; k < 4; ++k) {
      int nx_ = x + dx[k], ny_ = y + dy[k];
      if (!grid.is_navigable(nx_, ny_)) continue;
      int nc = grid.index(nx_, ny_);
      if (seen[nc]) continue;
      if (target[nc]) return true;
      seen[nc] = 1;
      q.push(nc);
    }
  }
  return false;
}

}  // namespace detail

// Fraction of type pairs with a grid path between their interaction regions.
// Pairs with a missing instance are excluded from the denominator.
inline RateCounter route_navigability(const Scene& scene,
                                      const std::vector<std::pair<std::string, std::string>>& pairs,
                                      const Rules& rules = Rules::builtin(),
                                      const Catalog& catalog = Catalog::builtin()) {
  RateCounter rc;
  NavGrid grid = build_nav_grid(scene, catalog, rules.sampling().resolution);
  auto instances_of = [&](const std::string& t) {
    std::vector<const PlacedObject*> v;
    for (const auto& o : scene.objects)
      if (o.type == t) v.push_back(&o);
    return v;
  };
  for (const auto& [ta, tb] : pairs) {
    auto as = instances_of(ta), bs = instances_of(tb);
    if (as.empty() || bs.empty()) continue;  // excluded from denominator
    bool ok = false;
    for (const auto* a : as) {
      auto ra = detail::region_cells(grid, a->footprint(), rules.interaction());
      for (const auto* b : bs) {
        auto rb = detail::region_cells(grid, b->footprint(), rules.interaction());
        if (detail::cells_connected(grid, ra, rb)) {
          ok = true;
          break;
        }
      }
      if (ok) break;
    }
    rc.add(ok);
  }
  return rc;
}

// Oracle task success rate: sample tasks_per_type tasks of each type in each
// scene (skipping unsatisfiable templates), execute each once, and aggregate.
inline MetricsReport task_success_rate(const std::vector<Scene>& scenes, int tasks_per_type,
                                       std::uint64_t seed, const Rules& rules = Rules::builtin(),
                                       const Catalog& catalog = Catalog::builtin(),
                                       std::vector<Trajectory>* trajectories_out = nullptr) {
  MetricsReport report;
  report.scenes = static_cast<int>(scenes.size());
  report.tasks_per_type = tasks_per_type;
  report.seed = seed;
  for (TaskType t : kAllTaskTypes) report.per_task[std::string(task_type_name(t))];
  for (SubgoalKind k : kAllSubgoalKinds) report.per_subgoal[std::string(subgoal_kind_name(k))];

  for (size_t si = 0; si < scenes.size(); ++si) {
    for (TaskType t : kAllTaskTypes) {
      for (int k = 0; k < tasks_per_type; ++k) {
        std::string tag = "eval:" + std::to_string(si) + ":" +
                          std::string(task_type_name(t)) + ":" + std::to_string(k);
        std::uint64_t task_seed = fnv1a(tag, seed ^ 0x9e3779b97f4a7c15ull);
        auto traj = run_task(scenes[si], "scene-" + std::to_string(si), t, task_seed, rules,
                             catalog);
        if (!traj) continue;  // unsatisfiable template in this scene
        report.per_task[std::string(task_type_name(t))].add(traj->success);
        report.overall.add(traj->success);
        for (const auto& sg : traj->subgoals)
          report.per_subgoal[std::string(subgoal_kind_name(sg.kind))].add(sg.success);
        if (trajectories_out) trajectories_out->push_back(std::move(*traj));
      }
    }
  }
  return report;
}

inline void add_embodied_metrics(MetricsReport& report, const std::vector<Scene>& scenes,
                                 const Rules& rules = Rules::builtin(),
                                 const Catalog& catalog = Catalog::builtin()) {
  for (const auto& scene : scenes) {
    RateCounter lm = landmark_reachability(scene, default_landmarks(scene.structure.room_type),
                                           rules, catalog);
    report.landmarks.successes += lm.successes;
    report.landmarks.attempts += lm.attempts;
    RateCounter rt =
        route_navigability(scene, default_routes(scene.structure.room_type), rules, catalog);
    report.routes.successes += rt.successes;
    report.routes.attempts += rt.attempts;
  }
}

// Per-kind success table over a batch of trajectories.
inline std::map<std::string, RateCounter> subgoal_stats(const std::vector<Trajectory>& trajs) {
  std::map<std::string, RateCounter> stats;
  for (SubgoalKind k : kAllSubgoalKinds) stats[std::string(subgoal_kind_name(k))];
  for (const auto& t : trajs)
    for (const auto& sg : t.subgoals)
      stats[std::string(subgoal_kind_name(sg.kind))].add(sg.success);
  return stats;
}

// ---------------------------------------------------------------------------
// Report output: JSON and an aligned text table (type, rate, delta vs an
// optional baseline).

inline json metrics_to_json(const MetricsReport& r) {
  json j;
  j["format"] = "metrics/1";
  j["scenes"] = r.scenes;
  j["tasks_per_type"] = r.tasks_per_type;
  j["seed"] = r.seed;
  auto rate_json = [](const RateCounter& rc) {
    json v;
    v["successes"] = rc.successes;
    v["attempts"] = rc.attempts;
    if (rc.defined()) v["rate"] = round6(rc.rate());
    return v;
  };
  j["task_success"] = json::object();
  for (const auto& [name, rc] : r.per_task) j["task_success"][name] = rate_json(rc);
  j["overall"] = rate_json(r.overall);
  j["subgoal_success"] = json::object();
  for (const auto& [name, rc] : r.per_subgoal) j["subgoal_success"][name] = rate_json(rc);
  j["landmark_reachability"] = rate_json(r.landmarks);
  j["route_navigability"] = rate_json(r.routes);
  return j;
}

inline std::string metrics_to_table(const MetricsReport& r,
                                    const MetricsReport* baseline = nullptr) {
  std::string out;
  char line[160];
  auto row = [&](const std::string& name, const RateCounter& rc, const RateCounter* base) {
    if (!rc.defined()) {
      std::snprintf(line, sizeof line, "  %-18s %5s  (%d/%d)\n", name.c_str(), "n/a",
                    rc.successes, rc.attempts);
    } else if (base && base->defined()) {
      std::snprintf(line, sizeof line, "  %-18s %5.2f  (%d/%d)  d%+.2f\n", name.c_str(), rc.rate(),
                    rc.successes, rc.attempts, rc.rate() - base->rate());
    } else {
      std::snprintf(line, sizeof line, "  %-18s %5.2f  (%d/%d)\n", name.c_str(), rc.rate(),
                    rc.successes, rc.attempts);
    }
    out += line;
  };
  out += "Task Success Rate\n";
  for (const auto& [name, rc] : r.per_task) {
    const RateCounter* base = nullptr;
    if (baseline) {
      auto it = baseline->per_task.find(name);
      if (it != baseline->per_task.end()) base = &it->second;
    }
    row(name, rc, base);
  }
  row("Overall", r.overall, baseline ? &baseline->overall : nullptr);
  out += "Subgoal Success Rate\n";
  for (const auto& [name, rc] : r.per_subgoal) {
    const RateCounter* base = nullptr;
    if (baseline) {
      auto it = baseline->per_subgoal.find(name);
      if (it != baseline->per_subgoal.end()) base = &it->second;
    }
    row(name, rc, base);
  }
  out += "Embodied Metrics\n";
  row("Landmarks", r.landmarks, baseline ? &baseline->landmarks : nullptr);
  row("Routes", r.routes, baseline ? &baseline->routes : nullptr);
  return out;
}

}  // namespace roomforge
