#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roomforge/catalog.hpp"
#include "roomforge/relation.hpp"

namespace roomforge {

using json = nlohmann::json;

struct CdfError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CdfSyntaxError : CdfError {
  using CdfError::CdfError;
};
struct CdfSchemaError : CdfError {
  using CdfError::CdfError;
};
struct CdfReferenceError : CdfError {
  using CdfError::CdfError;
};
struct MergeError : CdfError {
  using CdfError::CdfError;
};
struct EmptyTrajectoryError : CdfError {
  using CdfError::CdfError;
};

struct ObjectEntry {
  std::string id;
  std::string object_type;  // canonical catalog name
  Layer layer = Layer::Furniture;
  std::map<std::string, std::string> attributes;

  bool operator==(const ObjectEntry&) const = default;
};

struct SceneDescription {
  RoomType room_type = RoomType::Bedroom;
  std::vector<ObjectEntry> entries;
  std::vector<Relationship> relations;

  const ObjectEntry* find(const std::string& id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }
};

enum class Predicate {
  On,
  In,
  ToggledOn,
  ToggledOff,
  Open,
  Closed,
  Sliced,
  Clean,
  Heated,
  Cooled,
  HeldBy
};

inline std::string_view predicate_name(Predicate p) {
  switch (p) {
    case Predicate::On: return "on";
    case Predicate::In: return "in";
    case Predicate::ToggledOn: return "toggled_on";
    case Predicate::ToggledOff: return "toggled_off";
    case Predicate::Open: return "open";
    case Predicate::Closed: return "closed";
    case Predicate::Sliced: return "sliced";
    case Predicate::Clean: return "clean";
    case Predicate::Heated: return "heated";
    case Predicate::Cooled: return "cooled";
    case Predicate::HeldBy: return "held_by";
  }
  return "on";
}

inline std::optional<Predicate> parse_predicate(std::string_view s) {
  if (s == "on") return Predicate::On;
  if (s == "in") return Predicate::In;
  if (s == "toggled_on") return Predicate::ToggledOn;
  if (s == "toggled_off") return Predicate::ToggledOff;
  if (s == "open") return Predicate::Open;
  if (s == "closed") return Predicate::Closed;
  if (s == "sliced") return Predicate::Sliced;
  if (s == "clean") return Predicate::Clean;
  if (s == "heated") return Predicate::Heated;
  if (s == "cooled") return Predicate::Cooled;
  if (s == "held_by") return Predicate::HeldBy;
  return std::nullopt;
}

inline bool predicate_is_binary(Predicate p) {
  return p == Predicate::On || p == Predicate::In || p == Predicate::HeldBy;
}

// subject/object are entry ids or canonical type names; type-level assertions
// are satisfied by any instance.
struct StateAssertion {
  std::string subject;
  Predicate predicate = Predicate::On;
  std::string object;  // empty for unary predicates

  bool operator==(const StateAssertion&) const = default;
};

enum class TaskType {
  PickAndPlace,
  PickTwoAndPlace,
  ExamineInLight,
  CleanAndPlace,
  HeatAndPlace,
  CoolAndPlace,
  StackAndPlace
};

inline constexpr TaskType kAllTaskTypes[] = {
    TaskType::PickAndPlace,  TaskType::PickTwoAndPlace, TaskType::ExamineInLight,
    TaskType::CleanAndPlace, TaskType::HeatAndPlace,    TaskType::CoolAndPlace,
    TaskType::StackAndPlace};

inline std::string_view task_type_name(TaskType t) {
  switch (t) {
    case TaskType::PickAndPlace: return "PickAndPlace";
    case TaskType::PickTwoAndPlace: return "PickTwoAndPlace";
    case TaskType::ExamineInLight: return "ExamineInLight";
    case TaskType::CleanAndPlace: return "CleanAndPlace";
    case TaskType::HeatAndPlace: return "HeatAndPlace";
    case TaskType::CoolAndPlace: return "CoolAndPlace";
    case TaskType::StackAndPlace: return "StackAndPlace";
  }
  return "PickAndPlace";
}

inline std::optional<TaskType> parse_task_type(std::string_view s) {
  for (TaskType t : kAllTaskTypes)
    if (task_type_name(t) == s) return t;
  return std::nullopt;
}

struct AgentPose {
  double x = 0.0;
  double y = 0.0;
  int heading = 0;  // degrees, multiples of 90

  bool operator==(const AgentPose&) const = default;
};

struct TaskDefinition {
  TaskType task_type = TaskType::PickAndPlace;
  std::vector<StateAssertion> initial_state;
  std::vector<StateAssertion> goal_conditions;
  std::optional<AgentPose> agent_start;

  bool operator==(const TaskDefinition&) const = default;
};

// High-level script step, e.g. {GotoLocation, [DiningTable]}.
struct ScriptStep {
  std::string action;
  std::vector<std::string> args;

  bool operator==(const ScriptStep&) const = default;
};

inline const std::set<std::string>& known_script_actions() {
  static const std::set<std::string> k = {
      "GotoLocation", "PickupObject",    "PutObject",       "SliceObject",
      "CoolObject",   "HeatObject",      "CleanObject",     "ToggleObject",
      "OpenObject",   "CloseObject",     "ToggleObjectOn",  "ToggleObjectOff"};
  return k;
}

struct CdfDocument {
  SceneDescription scene_desc;
  std::optional<TaskDefinition> task_def;
  std::vector<ScriptStep> exec_script;
};

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& msg) { throw CdfSchemaError(msg); }

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) ok = true;
    if (!ok) schema_fail(where + ": unknown field '" + it.key() + "'");
  }
}

inline std::string to_snake(std::string_view type) {
  std::string out;
  for (size_t i = 0; i < type.size(); ++i) {
    char c = type[i];
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (i > 0) out.push_back('_');
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// Resolve a script argument to (entry id, canonical type). Accepts a bare
// type name ("DiningTable") or an id with a type prefix ("dining_table_2").
inline std::optional<std::pair<std::string, std::string>> resolve_name(
    const std::string& arg, const Catalog& catalog) {
  if (auto t = catalog.canonical(arg)) return std::make_pair(to_snake(*t) + "_1", *t);
  size_t us = arg.find_last_of('_');
  if (us != std::string::npos && us + 1 < arg.size() &&
      std::all_of(arg.begin() + us + 1, arg.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    if (auto t = catalog.canonical(arg.substr(0, us))) return std::make_pair(arg, *t);
  }
  return std::nullopt;
}

inline StateAssertion parse_assertion(const json& j, const SceneDescription& scene,
                                      const Catalog& catalog, const std::string& where) {
  if (!j.is_object()) schema_fail(where + ": assertion must be an object");
  check_keys(j, {"subject", "predicate", "object"}, where);
  StateAssertion a;
  if (!j.contains("subject") || !j["subject"].is_string())
    schema_fail(where + ": assertion needs string subject");
  a.subject = j["subject"].get<std::string>();
  if (!j.contains("predicate") || !j["predicate"].is_string())
    schema_fail(where + ": assertion needs string predicate");
  auto p = parse_predicate(j["predicate"].get<std::string>());
  if (!p) schema_fail(where + ": unknown predicate '" + j["predicate"].get<std::string>() + "'");
  a.predicate = *p;
  if (j.contains("object")) {
    if (!j["object"].is_string()) schema_fail(where + ": object must be a string");
    a.object = j["object"].get<std::string>();
  }
  if (predicate_is_binary(a.predicate) && a.object.empty())
    schema_fail(where + ": predicate '" + std::string(predicate_name(a.predicate)) +
                "' needs an object");
  if (!predicate_is_binary(a.predicate) && !a.object.empty())
    schema_fail(where + ": predicate '" + std::string(predicate_name(a.predicate)) +
                "' is unary");

  auto known = [&](const std::string& name) {
    if (scene.find(name)) return true;
    if (auto t = catalog.canonical(name)) {
      for (const auto& e : scene.entries)
        if (e.object_type == *t) return true;
    }
    return false;
  };
  if (!known(a.subject))
    throw CdfReferenceError(where + ": assertion subject '" + a.subject + "' not in scene");
  if (!a.object.empty() && a.object != "agent" && !known(a.object))
    throw CdfReferenceError(where + ": assertion object '" + a.object + "' not in scene");
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// parse_cdf

inline CdfDocument parse_cdf(const std::string& text, const Catalog& catalog = Catalog::builtin()) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CdfSyntaxError(std::string("CDF parse: ") + e.what());
  }
  if (!root.is_object()) throw CdfSyntaxError("CDF parse: document is not a JSON object");
  detail::check_keys(root, {"scene", "task", "script"}, "document");
  if (!root.contains("scene") || !root["scene"].is_object())
    detail::schema_fail("document: missing 'scene' object");

  CdfDocument doc;
  const json& scene = root["scene"];
  detail::check_keys(scene, {"room_type", "entries", "relations"}, "scene");
  if (!scene.contains("room_type") || !scene["room_type"].is_string())
    detail::schema_fail("scene: missing string 'room_type'");
  auto rt = parse_room_type(scene["room_type"].get<std::string>());
  if (!rt) detail::schema_fail("scene: unknown room_type '" + scene["room_type"].get<std::string>() + "'");
  doc.scene_desc.room_type = *rt;

  std::set<std::string> ids;
  if (scene.contains("entries")) {
    if (!scene["entries"].is_array()) detail::schema_fail("scene.entries must be an array");
    for (const json& je : scene["entries"]) {
      if (!je.is_object()) detail::schema_fail("scene.entries: entry must be an object");
      detail::check_keys(je, {"id", "type", "layer", "attributes"}, "entry");
      ObjectEntry e;
      if (!je.contains("id") || !je["id"].is_string() || je["id"].get<std::string>().empty())
        detail::schema_fail("entry: missing string 'id'");
      e.id = je["id"].get<std::string>();
      if (is_structural_anchor(e.id)) detail::schema_fail("entry id '" + e.id + "' is reserved");
      if (!ids.insert(e.id).second) detail::schema_fail("duplicate entry id '" + e.id + "'");
      if (!je.contains("type") || !je["type"].is_string())
        detail::schema_fail("entry '" + e.id + "': missing string 'type'");
      auto canon = catalog.canonical(je["type"].get<std::string>());
      if (!canon)
        detail::schema_fail("entry '" + e.id + "': unknown type '" + je["type"].get<std::string>() +
                            "'");
      e.object_type = *canon;
      e.layer = catalog.get(e.object_type).layer;
      if (je.contains("layer")) {
        std::string l = je["layer"].get<std::string>();
        std::string expect(layer_name(e.layer));
        if (l != expect)
          detail::schema_fail("entry '" + e.id + "': layer '" + l + "' inconsistent with catalog ('" +
                              expect + "')");
      }
      if (je.contains("attributes")) {
        if (!je["attributes"].is_object()) detail::schema_fail("entry attributes must be an object");
        for (auto it = je["attributes"].begin(); it != je["attributes"].end(); ++it) {
          if (!it.value().is_string()) detail::schema_fail("entry attribute values must be strings");
          e.attributes[it.key()] = it.value().get<std::string>();
        }
      }
      doc.scene_desc.entries.push_back(std::move(e));
    }
  }

  if (scene.contains("relations")) {
    if (!scene["relations"].is_array()) detail::schema_fail("scene.relations must be an array");
    for (const json& jr : scene["relations"]) {
      if (!jr.is_object()) detail::schema_fail("scene.relations: relation must be an object");
      detail::check_keys(jr, {"subject", "relation", "object"}, "relation");
      for (const char* k : {"subject", "relation", "object"})
        if (!jr.contains(k) || !jr[k].is_string())
          detail::schema_fail(std::string("relation: missing string '") + k + "'");
      std::string subject = jr["subject"].get<std::string>();
      std::string kind_s = jr["relation"].get<std::string>();
      std::string object = jr["object"].get<std::string>();
      // `in_front_of` is accepted as input sugar: "a desk in front of a
      // chair" is stored as "the chair faces the desk".
      bool swapped = false;
      if (kind_s == "in_front_of") {
        kind_s = "face";
        std::swap(subject, object);
        swapped = true;
      }
      auto kind = parse_relation_kind(kind_s);
      if (!kind) detail::schema_fail("relation: unknown relation '" + jr["relation"].get<std::string>() + "'");
      if (subject == object) detail::schema_fail("relation: subject equals object ('" + subject + "')");
      auto check_ref = [&](const std::string& name, bool allow_anchor) {
        if (allow_anchor && is_structural_anchor(name)) return;
        if (!ids.count(name))
          throw CdfReferenceError("relation references missing entry '" + name + "'");
      };
      check_ref(subject, false);
      check_ref(object, !is_placement_kind(*kind));
      (void)swapped;
      doc.scene_desc.relations.push_back(
          {subject, *kind, object, RelationOrigin::Explicit, WeightClass::Explicit});
    }
  }

  if (root.contains("task")) {
    const json& jt = root["task"];
    if (!jt.is_object()) detail::schema_fail("task must be an object");
    detail::check_keys(jt, {"type", "init", "goal", "agent_start"}, "task");
    TaskDefinition td;
    if (!jt.contains("type") || !jt["type"].is_string())
      detail::schema_fail("task: missing string 'type'");
    auto tt = parse_task_type(jt["type"].get<std::string>());
    if (!tt) detail::schema_fail("task: unknown type '" + jt["type"].get<std::string>() + "'");
    td.task_type = *tt;
    if (jt.contains("init")) {
      if (!jt["init"].is_array()) detail::schema_fail("task.init must be an array");
      for (const json& ja : jt["init"])
        td.initial_state.push_back(detail::parse_assertion(ja, doc.scene_desc, catalog, "task.init"));
    }
    if (!jt.contains("goal") || !jt["goal"].is_array() || jt["goal"].empty())
      detail::schema_fail("task: 'goal' must be a nonempty array");
    for (const json& ja : jt["goal"])
      td.goal_conditions.push_back(detail::parse_assertion(ja, doc.scene_desc, catalog, "task.goal"));
    if (jt.contains("agent_start")) {
      const json& jp = jt["agent_start"];
      detail::check_keys(jp, {"x", "y", "heading"}, "agent_start");
      AgentPose p;
      p.x = jp.value("x", 0.0);
      p.y = jp.value("y", 0.0);
      p.heading = jp.value("heading", 0);
      if (p.heading % 90 != 0) detail::schema_fail("agent_start: heading must be a multiple of 90");
      td.agent_start = p;
    }
    doc.task_def = std::move(td);
  }

  if (root.contains("script")) {
    if (!root["script"].is_array()) detail::schema_fail("script must be an array");
    for (const json& js : root["script"]) {
      if (!js.is_object()) detail::schema_fail("script step must be an object");
      detail::check_keys(js, {"action", "args"}, "script");
      ScriptStep step;
      if (!js.contains("action") || !js["action"].is_string())
        detail::schema_fail("script: missing string 'action'");
      step.action = js["action"].get<std::string>();
      if (!known_script_actions().count(step.action))
        detail::schema_fail("script: unknown action '" + step.action + "'");
      if (js.contains("args")) {
        if (!js["args"].is_array()) detail::schema_fail("script args must be an array");
        for (const json& a : js["args"]) {
          if (!a.is_string()) detail::schema_fail("script args must be strings");
          step.args.push_back(a.get<std::string>());
        }
      }
      doc.exec_script.push_back(std::move(step));
    }
  }
  return doc;
}

// ---------------------------------------------------------------------------
// serialize_cdf — canonical form: sorted keys, entries by id, relations by
// (subject, kind, object). parse(serialize(d)) == d structurally.

inline json scene_description_to_json(const SceneDescription& desc) {
  json scene;
  scene["room_type"] = std::string(room_type_name(desc.room_type));
  auto entries = desc.entries;
  std::sort(entries.begin(), entries.end(),
            [](const ObjectEntry& a, const ObjectEntry& b) { return a.id < b.id; });
  scene["entries"] = json::array();
  for (const auto& e : entries) {
    json je;
    je["id"] = e.id;
    je["type"] = e.object_type;
    je["layer"] = std::string(layer_name(e.layer));
    if (!e.attributes.empty()) je["attributes"] = e.attributes;
    scene["entries"].push_back(je);
  }
  auto rels = desc.relations;
  std::sort(rels.begin(), rels.end());
  scene["relations"] = json::array();
  for (const auto& r : rels) {
    scene["relations"].push_back({{"subject", r.subject},
                                  {"relation", std::string(relation_kind_name(r.kind))},
                                  {"object", r.target}});
  }
  return scene;
}

inline json assertion_to_json(const StateAssertion& a) {
  json j;
  j["subject"] = a.subject;
  j["predicate"] = std::string(predicate_name(a.predicate));
  if (!a.object.empty()) j["object"] = a.object;
  return j;
}

inline std::string serialize_cdf(const CdfDocument& doc) {
  json root;
  root["scene"] = scene_description_to_json(doc.scene_desc);
  if (doc.task_def) {
    json jt;
    jt["type"] = std::string(task_type_name(doc.task_def->task_type));
    jt["init"] = json::array();
    for (const auto& a : doc.task_def->initial_state) jt["init"].push_back(assertion_to_json(a));
    jt["goal"] = json::array();
    for (const auto& a : doc.task_def->goal_conditions) jt["goal"].push_back(assertion_to_json(a));
    if (doc.task_def->agent_start) {
      jt["agent_start"] = {{"x", doc.task_def->agent_start->x},
                           {"y", doc.task_def->agent_start->y},
                           {"heading", doc.task_def->agent_start->heading}};
    }
    root["task"] = jt;
  }
  if (!doc.exec_script.empty()) {
    root["script"] = json::array();
    for (const auto& s : doc.exec_script)
      root["script"].push_back({{"action", s.action}, {"args", s.args}});
  }
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// merge_scene_descriptions — union of furniture entries/relations; conflicting
// small-object placements resolved by majority, ties by lexicographically
// smallest container id.

inline SceneDescription merge_scene_descriptions(const std::vector<SceneDescription>& descs,
                                                 const Catalog& catalog = Catalog::builtin()) {
  if (descs.empty()) throw MergeError("merge: need at least one scene description");
  RoomType rt = descs.front().room_type;
  for (const auto& d : descs)
    if (d.room_type != rt) throw MergeError("merge: scene descriptions have different room types");

  SceneDescription out;
  out.room_type = rt;

  std::map<std::string, ObjectEntry> entries;
  for (const auto& d : descs) {
    for (const auto& e : d.entries) {
      auto [it, inserted] = entries.emplace(e.id, e);
      if (!inserted && it->second.object_type != e.object_type)
        throw MergeError("merge: entry '" + e.id + "' declared with types '" +
                         it->second.object_type + "' and '" + e.object_type + "'");
      if (!inserted) {
        // attribute union; conflicting values keep the smaller one so the
        // result is independent of input order
        for (const auto& [k, v] : e.attributes) {
          auto [ait, fresh] = it->second.attributes.emplace(k, v);
          if (!fresh && v < ait->second) ait->second = v;
        }
      }
    }
  }

  auto layer_of = [&](const std::string& id) -> Layer {
    auto it = entries.find(id);
    return it == entries.end() ? Layer::Furniture : catalog.get(it->second.object_type).layer;
  };

  // Non-placement relations and furniture placements are unioned; small-object
  // placements go through majority resolution.
  std::set<Relationship> kept;
  std::map<std::string, std::map<std::pair<std::string, RelationKind>, int>> placement_votes;
  for (const auto& d : descs) {
    std::set<Relationship> seen_here;
    for (const auto& r : d.relations) {
      Relationship rr = r;
      rr.origin = RelationOrigin::Explicit;
      rr.weight_class = WeightClass::Explicit;
      if (is_placement_kind(r.kind) && layer_of(r.subject) == Layer::SmallObject) {
        if (seen_here.insert(rr).second)
          placement_votes[r.subject][{r.target, r.kind}] += 1;
      } else {
        kept.insert(rr);
      }
    }
  }

  // A piece of furniture pinned to two different containers cannot be merged.
  std::map<std::string, std::set<std::pair<std::string, RelationKind>>> furn_placements;
  for (const auto& r : kept)
    if (is_placement_kind(r.kind)) furn_placements[r.subject].insert({r.target, r.kind});
  for (const auto& [subject, ps] : furn_placements)
    if (ps.size() > 1)
      throw MergeError("merge: conflicting furniture placement for '" + subject + "'");

  for (const auto& [subject, votes] : placement_votes) {
    // winner: most descriptions, then smallest container id, then kind order
    std::pair<std::string, RelationKind> best{};
    int best_votes = -1;
    for (const auto& [cand, n] : votes) {
      if (n > best_votes || (n == best_votes && cand < best)) {
        best = cand;
        best_votes = n;
      }
    }
    kept.insert({subject, best.second, best.first, RelationOrigin::Explicit, WeightClass::Explicit});
  }

  for (auto& [id, e] : entries) out.entries.push_back(e);
  out.relations.assign(kept.begin(), kept.end());
  return out;
}

// ---------------------------------------------------------------------------
// derive_scene_description — rebuild a scene description from a task script
// (GotoLocation/PickupObject/ToggleObject/OpenObject args become required
// objects; pickup receptacle context becomes a placement relation).

inline SceneDescription derive_scene_description(const std::vector<ScriptStep>& script,
                                                 RoomType room_type,
                                                 const Catalog& catalog = Catalog::builtin()) {
  if (script.empty()) throw EmptyTrajectoryError("derive: empty trajectory");
  SceneDescription out;
  out.room_type = room_type;
  std::map<std::string, ObjectEntry> entries;
  std::set<Relationship> rels;

  auto add_entry = [&](const std::string& arg) -> std::optional<std::string> {
    auto resolved = detail::resolve_name(arg, catalog);
    if (!resolved) return std::nullopt;
    auto [id, type] = *resolved;
    ObjectEntry e;
    e.id = id;
    e.object_type = type;
    e.layer = catalog.get(type).layer;
    entries.emplace(id, e);
    return id;
  };

  for (const auto& step : script) {
    bool collect = step.action == "GotoLocation" || step.action == "PickupObject" ||
                   step.action == "ToggleObject" || step.action == "ToggleObjectOn" ||
                   step.action == "OpenObject";
    if (!collect || step.args.empty()) continue;
    auto subject = add_entry(step.args[0]);
    if (step.action == "PickupObject" && step.args.size() >= 2) {
      auto receptacle = add_entry(step.args[1]);
      if (subject && receptacle) {
        RelationKind kind =
            catalog.get(entries.at(*receptacle).object_type).receptacle == Receptacle::Container
                ? RelationKind::In
                : RelationKind::On;
        rels.insert({*subject, kind, *receptacle, RelationOrigin::Explicit, WeightClass::Explicit});
      }
    }
  }

  for (auto& [id, e] : entries) out.entries.push_back(e);
  out.relations.assign(rels.begin(), rels.end());
  return out;
}

}  // namespace roomforge
