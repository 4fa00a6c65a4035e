#include <catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"
#include "roomforge/instruct.hpp"

using namespace roomforge;
using testutil::empty_scene;
using testutil::placed;

TEST_CASE("template_instruction wording") {
  SECTION("pickup with container context renders the in-the phrase") {
    Subgoal sg{SubgoalKind::PickupObject, {"apple_1", "fridge_1"}};
    // draw until the table's first verb comes up; all must end the same way
    Rng rng(0);
    std::string s = template_instruction(sg, rng);
    CHECK(s.find("an apple in the fridge") != std::string::npos);
  }
  SECTION("pickup from a surface renders the on-the phrase") {
    Subgoal sg{SubgoalKind::PickupObject, {"book_1", "desk_1"}};
    Rng rng(0);
    std::string s = template_instruction(sg, rng);
    CHECK(s.find("a book on the desk") != std::string::npos);
  }
  SECTION("toggle has a single candidate") {
    Subgoal sg{SubgoalKind::ToggleObject, {"desk_lamp_1"}};
    Rng rng(0);
    CHECK(template_instruction(sg, rng) == "turn on the desk lamp");
  }
  SECTION("goto uses the definite article and a verb from the closed set") {
    std::set<std::string> seen;
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      Subgoal sg{SubgoalKind::GotoLocation, {"desk_1"}};
      std::string s = template_instruction(sg, rng);
      CHECK(s.ends_with("the desk"));
      seen.insert(s.substr(0, s.size() - std::string(" the desk").size()));
    }
    CHECK(seen == std::set<std::string>{"find", "go to", "walk to"});
  }
  SECTION("put names the destination") {
    Subgoal sg{SubgoalKind::PutObject, {"book_1", "dining_table_1"}};
    Rng rng(1);
    std::string s = template_instruction(sg, rng);
    CHECK(s.find("a book on the dining table") != std::string::npos);
  }
}

TEST_CASE("every emitted verb belongs to the table for its kind") {
  const InstructionTemplates& t = InstructionTemplates::builtin();
  Rng rng(9);
  for (SubgoalKind k : kAllSubgoalKinds) {
    for (int i = 0; i < 30; ++i) {
      Subgoal sg{k, {"apple_1", "desk_1"}};
      std::string s = template_instruction(sg, rng);
      bool matched = false;
      for (const auto& v : t.verbs(k)) matched = matched || s.rfind(v, 0) == 0;
      CHECK(matched);
    }
  }
}

TEST_CASE("annotate_trajectory aligns instructions with subgoals") {
  Scene scene = empty_scene(4.0, 4.0);
  scene.objects.push_back(placed("desk_1", "Desk", 3.0, 3.6, 180));
  scene.objects.push_back(placed("sofa_1", "Sofa", 1.2, 0.55, 0));
  scene.objects.push_back(placed("book_1", "Book", 2.7, 3.6, 180, "desk_1"));
  auto traj = run_task(scene, "fixture", TaskType::PickAndPlace, 3);
  REQUIRE(traj.has_value());

  SECTION("one instruction per subgoal") {
    Rng rng(1);
    auto lines = annotate_trajectory(*traj, rng);
    CHECK(lines.size() == traj->subgoals.size());
    CHECK_FALSE(traj->summary.empty());
  }
  SECTION("same seed, same strings") {
    Trajectory a = *traj;
    Trajectory b = *traj;
    annotate_trajectory(a, Rng(7));
    annotate_trajectory(b, Rng(7));
    CHECK(a.instructions == b.instructions);
    CHECK(a.summary == b.summary);
  }
  SECTION("failed trajectories still get instructions for planned subgoals") {
    Trajectory t = *traj;
    for (auto& sg : t.subgoals) sg.success = false;
    Rng rng(2);
    auto lines = annotate_trajectory(t, rng);
    CHECK(lines.size() == t.subgoals.size());
  }
}

TEST_CASE("article choice follows the vowel rule") {
  Rng rng(0);
  Subgoal apple{SubgoalKind::PickupObject, {"apple_1"}};
  CHECK(template_instruction(apple, rng).find("an apple") != std::string::npos);
  Subgoal egg{SubgoalKind::PickupObject, {"egg_1"}};
  CHECK(template_instruction(egg, rng).find("an egg") != std::string::npos);
  Subgoal book{SubgoalKind::PickupObject, {"book_1"}};
  CHECK(template_instruction(book, rng).find("a book") != std::string::npos);
}
