#include <catch_amalgamated.hpp>

#include <deque>
#include <fstream>
#include <sstream>
#include <map>

#include "helpers.hpp"
#include "roomforge/instruct.hpp"
#include "roomforge/tasking.hpp"

using namespace roomforge;
using testutil::empty_scene;
using testutil::placed;

namespace {

Scene bedroom_fixture() {
  Scene s = empty_scene(4.0, 4.0);
  s.structure.room_type = RoomType::Bedroom;
  s.objects.push_back(placed("bed_1", "Bed", 2.0, 0.875, 0));
  s.objects.push_back(placed("desk_1", "Desk", 3.0, 3.6, 180));
  s.objects.push_back(placed("nightstand_1", "Nightstand", 0.4, 3.6, 180));
  s.objects.push_back(placed("desk_lamp_1", "DeskLamp", 3.3, 3.6, 180, "desk_1"));
  s.objects.push_back(placed("alarm_clock_1", "AlarmClock", 0.4, 3.6, 180, "nightstand_1"));
  s.objects.push_back(placed("book_1", "Book", 2.7, 3.6, 180, "desk_1"));
  return s;
}

// Uniform-cost BFS over the same (cell, heading) state graph.
int bfs_oracle_cost(const NavGrid& grid, int sx, int sy, int sh,
                    const std::vector<std::uint8_t>& goal_mask) {
  auto state_id = [&](int x, int y, int h) { return (y * grid.nx + x) * 4 + h; };
  int start = state_id(sx, sy, sh / 90);
  if (goal_mask[start]) return 0;
  std::vector<int> dist(static_cast<size_t>(grid.nx) * grid.ny * 4, -1);
  std::deque<int> q;
  dist[start] = 0;
  q.push_back(start);
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    if (goal_mask[s]) return dist[s];
    int h = s % 4, cell = s / 4;
    int x = cell % grid.nx, y = cell / grid.nx;
    auto visit = [&](int ns) {
      if (dist[ns] == -1) {
        dist[ns] = dist[s] + 1;
        q.push_back(ns);
      }
    };
    int dx = h == 1 ? 1 : h == 3 ? -1 : 0;
    int dy = h == 0 ? 1 : h == 2 ? -1 : 0;
    if (grid.is_navigable(x + dx, y + dy)) visit(state_id(x + dx, y + dy, h));
    visit(state_id(x, y, (h + 3) % 4));
    visit(state_id(x, y, (h + 1) % 4));
  }
  return -1;
}

NavGrid random_grid(int n, double obstacle_rate, Rng& rng) {
  NavGrid g;
  g.origin = {0, 0};
  g.resolution = 0.25;
  g.nx = n;
  g.ny = n;
  g.navigable.assign(static_cast<size_t>(n) * n, 1);
  for (auto& c : g.navigable)
    if (rng.uniform() < obstacle_rate) c = 0;
  return g;
}

}  // namespace

TEST_CASE("decompose_task canonical expansions") {
  SECTION("pick and place is goto-pickup-goto-put") {
    TaskDefinition t;
    t.task_type = TaskType::PickAndPlace;
    t.initial_state = {{"book_1", Predicate::On, "desk_1"}};
    t.goal_conditions = {{"book_1", Predicate::On, "sofa_1"}};
    auto sg = decompose_task(t);
    REQUIRE(sg.size() == 4);
    CHECK(sg[0].kind == SubgoalKind::GotoLocation);
    CHECK(sg[1].kind == SubgoalKind::PickupObject);
    CHECK(sg[1].args == std::vector<std::string>{"book_1", "desk_1"});
    CHECK(sg[2].kind == SubgoalKind::GotoLocation);
    CHECK(sg[2].args[0] == "sofa_1");
    CHECK(sg[3].kind == SubgoalKind::PutObject);
  }
  SECTION("cool and place inserts a fridge stop") {
    TaskDefinition t;
    t.task_type = TaskType::CoolAndPlace;
    t.goal_conditions = {{"apple_1", Predicate::Cooled, ""},
                         {"apple_1", Predicate::On, "dining_table_1"}};
    auto sg = decompose_task(t);
    REQUIRE(sg.size() == 6);
    CHECK(sg[2].kind == SubgoalKind::GotoLocation);
    CHECK(sg[2].args[0] == "Fridge");
    CHECK(sg[3].kind == SubgoalKind::CoolObject);
    CHECK(sg[5].kind == SubgoalKind::PutObject);
  }
  SECTION("heat and place inserts a microwave stop") {
    TaskDefinition t;
    t.task_type = TaskType::HeatAndPlace;
    t.goal_conditions = {{"mug_1", Predicate::Heated, ""},
                         {"mug_1", Predicate::On, "counter_top_1"}};
    auto sg = decompose_task(t);
    REQUIRE(sg.size() == 6);
    CHECK(sg[2].args[0] == "Microwave");
    CHECK(sg[3].kind == SubgoalKind::HeatObject);
  }
  SECTION("pick two and place runs two rounds") {
    TaskDefinition t;
    t.task_type = TaskType::PickTwoAndPlace;
    t.goal_conditions = {{"cup_1", Predicate::On, "table_1"}, {"cup_2", Predicate::On, "table_1"}};
    auto sg = decompose_task(t);
    REQUIRE(sg.size() == 8);
    CHECK(sg[1].args[0] == "cup_1");
    CHECK(sg[5].args[0] == "cup_2");
  }
  SECTION("examine in light toggles the lamp while holding") {
    TaskDefinition t;
    t.task_type = TaskType::ExamineInLight;
    t.goal_conditions = {{"book_1", Predicate::HeldBy, "agent"},
                         {"desk_lamp_1", Predicate::ToggledOn, ""}};
    auto sg = decompose_task(t);
    REQUIRE(sg.size() == 4);
    CHECK(sg[3].kind == SubgoalKind::ToggleObject);
    CHECK(sg[3].args[0] == "desk_lamp_1");
  }
  SECTION("stack and place moves the base first") {
    TaskDefinition t;
    t.task_type = TaskType::StackAndPlace;
    t.goal_conditions = {{"apple_1", Predicate::On, "plate_1"},
                         {"plate_1", Predicate::On, "table_1"}};
    auto sg = decompose_task(t);
    REQUIRE(sg.size() == 8);
    CHECK(sg[1].args[0] == "plate_1");  // base round first
    CHECK(sg[5].args[0] == "apple_1");
    CHECK(sg[7].args == std::vector<std::string>{"apple_1", "plate_1"});
  }
  SECTION("every interaction subgoal is preceded by a goto") {
    for (TaskType type : kAllTaskTypes) {
      TaskDefinition t;
      t.task_type = type;
      t.goal_conditions = {{"a", Predicate::On, "b"}, {"b", Predicate::On, "c"},
                           {"a", Predicate::HeldBy, "agent"}, {"l", Predicate::ToggledOn, ""},
                           {"a", Predicate::Heated, ""}, {"a", Predicate::Cooled, ""},
                           {"a", Predicate::Clean, ""}};
      auto sg = decompose_task(t);
      for (size_t i = 0; i < sg.size(); ++i) {
        if (sg[i].kind == SubgoalKind::GotoLocation) continue;
        REQUIRE(i > 0);
        CHECK(sg[i - 1].kind == SubgoalKind::GotoLocation);
      }
    }
  }
}

TEST_CASE("sample_task eligibility") {
  Scene scene = bedroom_fixture();
  const Rules& rules = Rules::builtin();
  SECTION("alarm clock plus desk lamp enables examine-in-light") {
    Rng rng(1);
    TaskDefinition t = sample_task(scene, TaskType::ExamineInLight, rng);
    bool has_hold = false, has_toggle = false;
    for (const auto& g : t.goal_conditions) {
      has_hold = has_hold || g.predicate == Predicate::HeldBy;
      has_toggle = has_toggle || (g.predicate == Predicate::ToggledOn &&
                                  g.subject == "desk_lamp_1");
    }
    CHECK(has_hold);
    CHECK(has_toggle);
  }
  SECTION("no fridge means cool-and-place is unsatisfiable") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_task(scene, TaskType::CoolAndPlace, rng), UnsatisfiableError);
  }
  SECTION("initial state records the current placement") {
    Rng rng(2);
    TaskDefinition t = sample_task(scene, TaskType::PickAndPlace, rng);
    REQUIRE_FALSE(t.initial_state.empty());
    const StateAssertion& init = t.initial_state[0];
    const PlacedObject* obj = scene.find(init.subject);
    REQUIRE(obj != nullptr);
    CHECK(obj->support == init.object);
  }
  SECTION("two eligible pairs split evenly over 1000 draws") {
    // strip the scene to exactly two (object, lamp) pairs
    Scene s = empty_scene(4.0, 4.0);
    s.objects.push_back(placed("desk_1", "Desk", 3.0, 3.6, 180));
    s.objects.push_back(placed("lamp_1", "DeskLamp", 3.3, 3.6, 180, "desk_1"));
    s.objects.push_back(placed("book_1", "Book", 2.7, 3.6, 180, "desk_1"));
    s.objects.push_back(placed("pen_1", "Pen", 2.9, 3.6, 180, "desk_1"));
    std::map<std::string, int> counts;
    Rng rng(3);
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      TaskDefinition t = sample_task(s, TaskType::ExamineInLight, rng);
      counts[t.goal_conditions[0].subject] += 1;
    }
    REQUIRE(counts.size() == 2);
    double sigma = std::sqrt(n * 0.25);
    for (const auto& [k, c] : counts) CHECK(std::abs(c - n / 2.0) <= 3 * sigma);
  }
}

TEST_CASE("plan_to_mask basics") {
  NavGrid g;
  g.origin = {0, 0};
  g.resolution = 0.25;
  g.nx = 8;
  g.ny = 8;
  g.navigable.assign(64, 1);

  SECTION("target straight ahead gives pure moves") {
    std::vector<std::uint8_t> mask(64 * 4, 0);
    mask[(6 * 8 + 3) * 4 + 0] = 1;  // cell (3,6), heading north
    auto plan = plan_to_mask(g, 3, 4, 0, mask);
    REQUIRE(plan.size() == 2);
    CHECK(plan[0].kind == ActionKind::MoveAhead);
    CHECK(plan[1].kind == ActionKind::MoveAhead);
  }
  SECTION("already satisfying start gives an empty plan") {
    std::vector<std::uint8_t> mask(64 * 4, 0);
    mask[(4 * 8 + 3) * 4 + 0] = 1;
    CHECK(plan_to_mask(g, 3, 4, 0, mask).empty());
  }
  SECTION("unreachable goals throw") {
    for (int x = 0; x < 8; ++x) g.navigable[4 * 8 + x] = 0;  // wall across row 4
    std::vector<std::uint8_t> mask(64 * 4, 0);
    mask[(6 * 8 + 3) * 4 + 0] = 1;
    CHECK_THROWS_AS(plan_to_mask(g, 3, 1, 0, mask), UnreachableError);
  }
}

TEST_CASE("planner cost equals BFS oracle on random grids and replays clean") {
  Rng rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    NavGrid g = random_grid(20, 0.2, rng);
    int sx = static_cast<int>(rng.uniform_index(20));
    int sy = static_cast<int>(rng.uniform_index(20));
    if (!g.is_navigable(sx, sy)) continue;
    int gx = static_cast<int>(rng.uniform_index(20));
    int gy = static_cast<int>(rng.uniform_index(20));
    if (!g.is_navigable(gx, gy)) continue;
    std::vector<std::uint8_t> mask(static_cast<size_t>(20) * 20 * 4, 0);
    for (int h = 0; h < 4; ++h) mask[(gy * 20 + gx) * 4 + h] = 1;

    int oracle = bfs_oracle_cost(g, sx, sy, 0, mask);
    if (oracle < 0) {
      CHECK_THROWS_AS(plan_to_mask(g, sx, sy, 0, mask), UnreachableError);
      continue;
    }
    auto plan = plan_to_mask(g, sx, sy, 0, mask);
    CHECK(static_cast<int>(plan.size()) == oracle);

    // replay: every action must apply on the grid it was planned for
    int x = sx, y = sy, h = 0;
    for (const auto& a : plan) {
      if (a.kind == ActionKind::RotateLeft) h = (h + 3) % 4;
      else if (a.kind == ActionKind::RotateRight) h = (h + 1) % 4;
      else {
        int dx = h == 1 ? 1 : h == 3 ? -1 : 0;
        int dy = h == 0 ? 1 : h == 2 ? -1 : 0;
        REQUIRE(g.is_navigable(x + dx, y + dy));
        x += dx;
        y += dy;
      }
    }
    CHECK(mask[(y * 20 + x) * 4 + h]);
    ++solved;
  }
  CHECK(solved > 40);
}

TEST_CASE("removing an obstacle never hurts reachability") {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    NavGrid g = random_grid(14, 0.25, rng);
    int sx = 0, sy = 0, gx = 13, gy = 13;
    g.navigable[0] = 1;
    g.navigable[13 * 14 + 13] = 1;
    std::vector<std::uint8_t> mask(static_cast<size_t>(14) * 14 * 4, 0);
    for (int h = 0; h < 4; ++h) mask[(gy * 14 + gx) * 4 + h] = 1;
    bool before = bfs_oracle_cost(g, sx, sy, 0, mask) >= 0;
    // clear one random blocked cell
    NavGrid g2 = g;
    std::vector<int> blocked;
    for (int i = 0; i < 14 * 14; ++i)
      if (!g2.navigable[i]) blocked.push_back(i);
    if (blocked.empty()) continue;
    g2.navigable[blocked[rng.uniform_index(blocked.size())]] = 1;
    bool after = bfs_oracle_cost(g2, sx, sy, 0, mask) >= 0;
    if (before) CHECK(after);
  }
}

TEST_CASE("execute_task produces sound trajectories") {
  Scene scene = bedroom_fixture();
  SECTION("examine-in-light end to end") {
    TaskDefinition t;
    t.task_type = TaskType::ExamineInLight;
    t.initial_state = {{"alarm_clock_1", Predicate::On, "nightstand_1"}};
    t.goal_conditions = {{"alarm_clock_1", Predicate::HeldBy, "agent"},
                         {"desk_lamp_1", Predicate::ToggledOn, ""}};
    WorldState w = instantiate_world(scene);
    Trajectory traj = execute_task(w, t);
    CHECK(traj.success);
    CHECK(traj.goal_ok);
    REQUIRE(traj.subgoals.size() == 4);
    for (const auto& sg : traj.subgoals) CHECK(sg.success);

    SECTION("action spans partition the action list exactly") {
      int cursor = 0;
      for (const auto& sg : traj.subgoals) {
        CHECK(sg.action_start == cursor);
        cursor += sg.action_count;
      }
      CHECK(cursor == static_cast<int>(traj.actions.size()));
    }
    SECTION("frames record one hash per action plus the initial state") {
      CHECK(traj.frames.size() == traj.actions.size() + 1);
    }
  }
  SECTION("walled-off target fails the goto and the trajectory") {
    Scene s = bedroom_fixture();
    // box the alarm clock's nightstand behind a ring of wardrobes
    s.objects.push_back(placed("w1", "Wardrobe", 0.4, 2.6, 0));
    s.objects.push_back(placed("w2", "Wardrobe", 1.4, 3.1, 90));
    s.objects[1].position = {3.0, 3.6};  // keep desk clear
    TaskDefinition t;
    t.task_type = TaskType::ExamineInLight;
    t.goal_conditions = {{"alarm_clock_1", Predicate::HeldBy, "agent"},
                         {"desk_lamp_1", Predicate::ToggledOn, ""}};
    WorldState w = instantiate_world(s);
    Trajectory traj = execute_task(w, t);
    if (!traj.success) {
      bool some_failed = std::any_of(traj.subgoals.begin(), traj.subgoals.end(),
                                     [](const Subgoal& sg) { return !sg.success; });
      CHECK(some_failed);
    }
    // success implies goal check
    if (traj.success) CHECK(traj.goal_ok);
  }
}

TEST_CASE("run_task and replay are deterministic") {
  Scene scene = bedroom_fixture();
  auto t1 = run_task(scene, "fixture", TaskType::PickAndPlace, 123);
  auto t2 = run_task(scene, "fixture", TaskType::PickAndPlace, 123);
  REQUIRE(t1.has_value());
  REQUIRE(t2.has_value());
  CHECK(serialize_trajectory(*t1) == serialize_trajectory(*t2));

  auto [hash, goal_ok] = replay_trajectory(scene, *t1);
  CHECK(hash == t1->frames.back());
  CHECK(goal_ok == t1->goal_ok);
}

TEST_CASE("trajectory serialization round-trips") {
  Scene scene = bedroom_fixture();
  auto traj = run_task(scene, "fixture", TaskType::ExamineInLight, 9);
  REQUIRE(traj.has_value());
  Rng rng(4);
  annotate_trajectory(*traj, rng);
  std::string text = serialize_trajectory(*traj);
  Trajectory back = trajectory_from_json(json::parse(text));
  CHECK(serialize_trajectory(back) == text);
}

TEST_CASE("derive_scene_description from an executed trajectory") {
  Scene scene = bedroom_fixture();
  auto traj = run_task(scene, "fixture", TaskType::ExamineInLight, 21);
  REQUIRE(traj.has_value());
  REQUIRE(traj->success);
  SceneDescription desc = derive_scene_description(*traj);
  // goto/pickup targets appear as required objects
  bool has_clock_or_book = false;
  for (const auto& e : desc.entries)
    has_clock_or_book =
        has_clock_or_book || e.object_type == "AlarmClock" || e.object_type == "Book";
  CHECK(has_clock_or_book);
  // pickup context produced a placement relation
  bool has_placement = false;
  for (const auto& r : desc.relations) has_placement = has_placement || is_placement_kind(r.kind);
  CHECK(has_placement);
}

TEST_CASE("a CDF-supplied task runs end to end in a generated scene") {
  std::string text = [] {
    std::ifstream in(std::string(TEST_DATA_DIR) + "/book_on_table.cdf.json");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }();
  CdfDocument doc = parse_cdf(text);
  REQUIRE(doc.task_def.has_value());
  RoomStructure room = sample_room_structure(doc.scene_desc.room_type, 6);
  Scene scene = generate_scene(doc, room, 6);
  WorldState w = instantiate_world(scene);
  Trajectory traj = execute_task(w, *doc.task_def);
  CHECK(traj.success);
  CHECK(check_goal(w, doc.task_def->goal_conditions));
}
