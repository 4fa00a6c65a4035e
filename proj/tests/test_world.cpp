#include <catch_amalgamated.hpp>

#include <map>

#include "helpers.hpp"
#include "roomforge/world.hpp"

using namespace roomforge;
using testutil::empty_scene;
using testutil::placed;

namespace {

// 4x4 m room, dining table in the north-east, fridge/microwave/sink wall,
// apple on the table, knife on the table.
Scene kitchenette() {
  Scene s = empty_scene(4.0, 4.0);
  s.structure.room_type = RoomType::Kitchen;
  s.objects.push_back(placed("table_1", "DiningTable", 2.875, 3.25, 180));
  s.objects.push_back(placed("fridge_1", "Fridge", 0.5, 3.5, 180));
  s.objects.push_back(placed("sink_1", "Sink", 3.625, 1.0, 270));
  s.objects.push_back(placed("microwave_1", "Microwave", 0.25, 2.25, 90));
  s.objects.push_back(placed("apple_1", "Apple", 2.6, 3.2, 180, "table_1"));
  s.objects.push_back(placed("knife_1", "Knife", 3.1, 3.3, 180, "table_1"));
  s.objects.push_back(placed("lamp_1", "DeskLamp", 3.2, 3.1, 180, "table_1"));
  return s;
}

}  // namespace

TEST_CASE("instantiate_world defaults") {
  SECTION("agent starts at the cell nearest the centroid") {
    Scene s = empty_scene(4.0, 4.0);
    WorldState w = instantiate_world(s);
    Vec2 c = w.agent_center();
    CHECK(std::abs(c.x - 2.0) <= 0.25);
    CHECK(std::abs(c.y - 2.0) <= 0.25);
  }
  SECTION("a fully covered room has no navigable cell") {
    Scene s = empty_scene(2.0, 2.0);
    PlacedObject slab = placed("slab", "Bed", 1.0, 1.0);
    slab.width = 2.2;
    slab.depth = 2.2;
    s.objects.push_back(slab);
    CHECK_THROWS_AS(instantiate_world(s), NoNavigableCellError);
  }
  SECTION("all state flags default off") {
    WorldState w = instantiate_world(kitchenette());
    CHECK_FALSE(w.states.at("fridge_1").open);
    CHECK_FALSE(w.states.at("fridge_1").toggled);
    CHECK_FALSE(w.states.at("apple_1").sliced);
    CHECK(w.holding.empty());
  }
}

TEST_CASE("movement transitions") {
  Scene s = empty_scene(1.5, 1.5);  // 6x6 grid at 0.25
  WorldState w = instantiate_world(s);
  SECTION("move ahead advances one cell") {
    w.agent_x = 2;
    w.agent_y = 2;
    w.agent_heading = 0;
    CHECK_FALSE(apply_action(w, {ActionKind::MoveAhead, "", ""}).has_value());
    CHECK(w.agent_y == 3);
  }
  SECTION("moving into the wall is Blocked and a no-op") {
    w.agent_x = 0;
    w.agent_y = 0;
    w.agent_heading = 180;
    auto before = world_state_hash(w);
    auto err = apply_action(w, {ActionKind::MoveAhead, "", ""});
    REQUIRE(err.has_value());
    CHECK(*err == ActionError::Blocked);
    CHECK(world_state_hash(w) == before);
  }
  SECTION("rotations wrap correctly") {
    w.agent_heading = 0;
    apply_action(w, {ActionKind::RotateLeft, "", ""});
    CHECK(w.agent_heading == 270);
    apply_action(w, {ActionKind::RotateRight, "", ""});
    apply_action(w, {ActionKind::RotateRight, "", ""});
    CHECK(w.agent_heading == 90);
  }
}

TEST_CASE("pickup and put") {
  WorldState w = instantiate_world(kitchenette());
  // stand south of the table facing north
  w.agent_x = 10;  // x = 2.625
  w.agent_y = 9;   // y = 2.375
  w.agent_heading = 0;

  SECTION("pickup then put moves the support") {
    REQUIRE_FALSE(apply_action(w, {ActionKind::Pickup, "apple_1", ""}).has_value());
    CHECK(w.holding == "apple_1");
    CHECK(w.find("apple_1")->support.empty());
    REQUIRE_FALSE(apply_action(w, {ActionKind::Put, "apple_1", "table_1"}).has_value());
    CHECK(w.holding.empty());
    CHECK(w.find("apple_1")->support == "table_1");
  }
  SECTION("second pickup is HandFull") {
    REQUIRE_FALSE(apply_action(w, {ActionKind::Pickup, "apple_1", ""}).has_value());
    auto err = apply_action(w, {ActionKind::Pickup, "knife_1", ""});
    REQUIRE(err.has_value());
    CHECK(*err == ActionError::HandFull);
  }
  SECTION("put with an empty hand is HandEmpty") {
    auto err = apply_action(w, {ActionKind::Put, "apple_1", "table_1"});
    REQUIRE(err.has_value());
    CHECK(*err == ActionError::HandEmpty);
  }
  SECTION("out-of-range pickup fails without mutating") {
    w.agent_x = 2;
    w.agent_y = 2;  // far corner
    auto before = world_state_hash(w);
    auto err = apply_action(w, {ActionKind::Pickup, "apple_1", ""});
    REQUIRE(err.has_value());
    CHECK(*err == ActionError::OutOfRange);
    CHECK(world_state_hash(w) == before);
  }
  SECTION("non-pickupable targets are WrongAffordance") {
    auto err = apply_action(w, {ActionKind::Pickup, "table_1", ""});
    REQUIRE(err.has_value());
    CHECK(*err == ActionError::WrongAffordance);
  }
}

TEST_CASE("containers gate pickup and put") {
  Scene s = kitchenette();
  s.objects.push_back(placed("egg_1", "Egg", 0.5, 3.5, 180, "fridge_1"));
  WorldState w = instantiate_world(s);
  // stand south of the fridge facing north
  w.agent_x = 2;   // x = 0.625
  w.agent_y = 10;  // y = 2.625
  w.agent_heading = 0;

  SECTION("picking from a closed fridge is ClosedReceptacle") {
    auto err = apply_action(w, {ActionKind::Pickup, "egg_1", ""});
    REQUIRE(err.has_value());
    CHECK(*err == ActionError::ClosedReceptacle);
  }
  SECTION("open, pickup, close works") {
    REQUIRE_FALSE(apply_action(w, {ActionKind::Open, "fridge_1", ""}).has_value());
    REQUIRE_FALSE(apply_action(w, {ActionKind::Pickup, "egg_1", ""}).has_value());
    REQUIRE_FALSE(apply_action(w, {ActionKind::Close, "fridge_1", ""}).has_value());
    CHECK(w.holding == "egg_1");
  }
  SECTION("double open is WrongAffordance") {
    REQUIRE_FALSE(apply_action(w, {ActionKind::Open, "fridge_1", ""}).has_value());
    auto err = apply_action(w, {ActionKind::Open, "fridge_1", ""});
    REQUIRE(err.has_value());
    CHECK(*err == ActionError::WrongAffordance);
  }
}

TEST_CASE("heat, cool, clean and slice follow the transition table") {
  WorldState w = instantiate_world(kitchenette());
  w.agent_x = 10;
  w.agent_y = 9;
  w.agent_heading = 0;
  REQUIRE_FALSE(apply_action(w, {ActionKind::Pickup, "apple_1", ""}).has_value());

  SECTION("heating needs a microwave in range") {
    auto err = apply_action(w, {ActionKind::Heat, "apple_1", ""});
    REQUIRE(err.has_value());
    CHECK(*err == ActionError::OutOfRange);
    // walk to the microwave (west wall) and face it
    w.agent_x = 3;  // x = 0.875
    w.agent_y = 8;  // y = 2.125
    w.agent_heading = 270;
    REQUIRE_FALSE(apply_action(w, {ActionKind::Heat, "apple_1", ""}).has_value());
    CHECK(w.states.at("apple_1").heated);
    CHECK_FALSE(w.states.at("apple_1").cooled);
  }
  SECTION("cooling clears heated and vice versa") {
    w.agent_x = 2;
    w.agent_y = 10;
    w.agent_heading = 0;  // at the fridge
    REQUIRE_FALSE(apply_action(w, {ActionKind::Cool, "apple_1", ""}).has_value());
    CHECK(w.states.at("apple_1").cooled);
    w.agent_x = 3;
    w.agent_y = 8;
    w.agent_heading = 270;  // at the microwave
    REQUIRE_FALSE(apply_action(w, {ActionKind::Heat, "apple_1", ""}).has_value());
    CHECK(w.states.at("apple_1").heated);
    CHECK_FALSE(w.states.at("apple_1").cooled);
  }
  SECTION("cleaning needs a sink in range") {
    w.agent_x = 12;  // x = 3.125
    w.agent_y = 4;   // y = 1.125
    w.agent_heading = 90;
    REQUIRE_FALSE(apply_action(w, {ActionKind::Clean, "apple_1", ""}).has_value());
    CHECK(w.states.at("apple_1").clean);
  }
  SECTION("slicing requires a held knife") {
    // drop the apple back, grab the knife
    REQUIRE_FALSE(apply_action(w, {ActionKind::Put, "apple_1", "table_1"}).has_value());
    auto err = apply_action(w, {ActionKind::Slice, "apple_1", ""});
    REQUIRE(err.has_value());
    CHECK(*err == ActionError::HandEmpty);
    REQUIRE_FALSE(apply_action(w, {ActionKind::Pickup, "knife_1", ""}).has_value());
    REQUIRE_FALSE(apply_action(w, {ActionKind::Slice, "apple_1", ""}).has_value());
    CHECK(w.states.at("apple_1").sliced);
    // sliced never unslices
    auto again = apply_action(w, {ActionKind::Slice, "apple_1", ""});
    REQUIRE(again.has_value());
    CHECK(*again == ActionError::WrongAffordance);
  }
}

TEST_CASE("object ids are conserved across action sequences") {
  WorldState w = instantiate_world(kitchenette());
  auto ids_of = [](const WorldState& ws) {
    std::map<std::string, int> m;
    for (const auto& o : ws.scene.objects) m[o.id] += 1;
    return m;
  };
  auto before = ids_of(w);
  w.agent_x = 10;
  w.agent_y = 9;
  w.agent_heading = 0;
  apply_action(w, {ActionKind::Pickup, "apple_1", ""});
  apply_action(w, {ActionKind::MoveAhead, "", ""});
  apply_action(w, {ActionKind::RotateLeft, "", ""});
  apply_action(w, {ActionKind::Put, "apple_1", "table_1"});
  CHECK(ids_of(w) == before);
}

TEST_CASE("containment exclusivity: held objects are not contained") {
  WorldState w = instantiate_world(kitchenette());
  w.agent_x = 10;
  w.agent_y = 9;
  w.agent_heading = 0;
  std::vector<StateAssertion> goal = {{"apple_1", Predicate::On, "table_1"}};
  CHECK(check_goal(w, goal));
  apply_action(w, {ActionKind::Pickup, "apple_1", ""});
  CHECK_FALSE(check_goal(w, goal));  // held, not on
  CHECK(check_goal(w, {{"apple_1", Predicate::HeldBy, "agent"}}));
}

TEST_CASE("check_goal supports type-level assertions") {
  WorldState w = instantiate_world(kitchenette());
  w.agent_x = 10;
  w.agent_y = 9;
  w.agent_heading = 0;
  REQUIRE_FALSE(apply_action(w, {ActionKind::ToggleOn, "lamp_1", ""}).has_value());
  CHECK(check_goal(w, {{"DeskLamp", Predicate::ToggledOn, ""}}));
  CHECK(check_goal(w, {{"Apple", Predicate::On, "DiningTable"}}));
  CHECK_FALSE(check_goal(w, {{"Apple", Predicate::In, "Fridge"}}));
}

TEST_CASE("replaying a recorded action sequence reproduces the state hash") {
  std::vector<Action> script = {
      {ActionKind::RotateRight, "", ""}, {ActionKind::MoveAhead, "", ""},
      {ActionKind::MoveAhead, "", ""},   {ActionKind::RotateLeft, "", ""},
      {ActionKind::MoveAhead, "", ""},
  };
  WorldState a = instantiate_world(kitchenette());
  for (const auto& act : script) apply_action(a, act);
  WorldState b = instantiate_world(kitchenette());
  for (const auto& act : script) apply_action(b, act);
  CHECK(world_state_hash(a) == world_state_hash(b));
}

TEST_CASE("replay log round-trips and closes with the final hash") {
  std::vector<Action> actions = {{ActionKind::MoveAhead, "", ""},
                                 {ActionKind::Pickup, "apple_1", ""},
                                 {ActionKind::Put, "apple_1", "table_1"}};
  std::string text = serialize_replay_log(actions, "00bada55deadbeef", true);
  // one line per action plus the closing record
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  ReplayLog log = parse_replay_log(text);
  CHECK(log.actions == actions);
  CHECK(log.final_hash == "00bada55deadbeef");
  CHECK(log.success);
  CHECK_THROWS(parse_replay_log("{\"action\":\"MoveAhead\"}\n"));  // unterminated
}
