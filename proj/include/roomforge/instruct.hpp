#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "roomforge/catalog.hpp"
#include "roomforge/config.hpp"
#include "roomforge/rng.hpp"
#include "roomforge/tasking.hpp"

namespace roomforge {

struct UnknownKindError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr const char* kDefaultTemplatesToml = R"TOML(
# instruction verb candidates per subgoal kind, version 1
version = 1

[templates]
GotoLocation = ["go to", "find", "walk to"]
PickupObject = ["pick up", "take", "carry"]
PutObject = ["put", "place"]
SliceObject = ["slice", "cut"]
CoolObject = ["chill", "cool"]
HeatObject = ["heat", "cook"]
CleanObject = ["clean", "wash", "rinse"]
ToggleObject = ["turn on"]
)TOML";

}  // namespace detail

// Verb candidate table: [instruction candidate] + [object name] + [attribute].
class InstructionTemplates {
 public:
  static const InstructionTemplates& builtin() {
    static const InstructionTemplates t =
        from_config(ConfigDoc::parse(detail::kDefaultTemplatesToml));
    return t;
  }

  static InstructionTemplates from_config(const ConfigDoc& doc) {
    InstructionTemplates t;
    for (SubgoalKind k : kAllSubgoalKinds) {
      std::string key = "templates." + std::string(subgoal_kind_name(k));
      if (!doc.has(key))
        throw std::runtime_error("instruction templates: missing verbs for " +
                                 std::string(subgoal_kind_name(k)));
      t.verbs_[k] = doc.str_list(key);
      if (t.verbs_[k].empty())
        throw std::runtime_error("instruction templates: empty verb list for " +
                                 std::string(subgoal_kind_name(k)));
    }
    return t;
  }

  const std::vector<std::string>& verbs(SubgoalKind k) const {
    auto it = verbs_.find(k);
    if (it == verbs_.end())
      throw UnknownKindError("no verb candidates for subgoal kind " +
                             std::string(subgoal_kind_name(k)));
    return it->second;
  }

 private:
  std::map<SubgoalKind, std::vector<std::string>> verbs_;
};

namespace detail {

// "apple_1" / "#counter_top_0" / "Apple" -> "apple"
inline std::string pretty_name(const std::string& name, const Catalog& catalog) {
  std::string s = name;
  if (!s.empty() && s[0] == '#') s = s.substr(1);
  if (auto resolved = resolve_name(s, catalog)) return display_name(resolved->second);
  return s;
}

inline std::string with_article(const std::string& noun, bool definite) {
  if (definite) return "the " + noun;
  bool vowel = !noun.empty() && std::string("aeiou").find(noun[0]) != std::string::npos;
  return (vowel ? "an " : "a ") + noun;
}

// "in the fridge" / "on the table", by receptacle class
inline std::string receptacle_phrase(const std::string& name, const Catalog& catalog) {
  std::string noun = pretty_name(name, catalog);
  std::string prep = "on";
  std::string core = (!name.empty() && name[0] == '#') ? name.substr(1) : name;
  if (auto resolved = resolve_name(core, catalog)) {
    if (catalog.get(resolved->second).receptacle == Receptacle::Container) prep = "in";
  }
  return prep + " the " + noun;
}

}  // namespace detail

// One instruction for one subgoal: uniformly chosen verb, object name with
// article, optional receptacle/destination attribute.
inline std::string template_instruction(const Subgoal& sg, Rng& rng,
                                        const InstructionTemplates& templates =
                                            InstructionTemplates::builtin(),
                                        const Catalog& catalog = Catalog::builtin()) {
  const auto& verbs = templates.verbs(sg.kind);
  const std::string& verb = verbs[rng.uniform_index(verbs.size())];
  std::string target = sg.args.empty() ? "" : sg.args[0];
  std::string noun = detail::pretty_name(target, catalog);

  switch (sg.kind) {
    case SubgoalKind::GotoLocation:
    case SubgoalKind::ToggleObject:
      return verb + " " + detail::with_article(noun, true);
    case SubgoalKind::PickupObject: {
      std::string out = verb + " " + detail::with_article(noun, false);
      if (sg.args.size() > 1) out += " " + detail::receptacle_phrase(sg.args[1], catalog);
      return out;
    }
    case SubgoalKind::PutObject: {
      std::string out = verb + " " + detail::with_article(noun, false);
      if (sg.args.size() > 1) out += " " + detail::receptacle_phrase(sg.args[1], catalog);
      return out;
    }
    case SubgoalKind::SliceObject:
    case SubgoalKind::CoolObject:
    case SubgoalKind::HeatObject:
    case SubgoalKind::CleanObject:
      return verb + " " + detail::with_article(noun, false);
  }
  return verb + " " + noun;
}

namespace detail {

inline std::string task_summary(const TaskDefinition& task, const Catalog& catalog) {
  auto noun = [&](const std::string& n, bool definite = false) {
    return with_article(pretty_name(n, catalog), definite);
  };
  auto place_goal = [&]() -> const StateAssertion* {
    for (const auto& g : task.goal_conditions)
      if (g.predicate == Predicate::On || g.predicate == Predicate::In) return &g;
    return nullptr;
  };
  switch (task.task_type) {
    case TaskType::PickAndPlace: {
      const StateAssertion* g = place_goal();
      if (!g) return "pick and place";
      return "put " + noun(g->subject) + " " + receptacle_phrase(g->object, catalog);
    }
    case TaskType::PickTwoAndPlace: {
      const StateAssertion* g = place_goal();
      if (!g) return "pick two and place";
      std::string t = pretty_name(g->subject, catalog);
      return "put two " + t + "s " + receptacle_phrase(g->object, catalog);
    }
    case TaskType::ExamineInLight: {
      std::string obj, lamp;
      for (const auto& g : task.goal_conditions) {
        if (g.predicate == Predicate::HeldBy) obj = g.subject;
        if (g.predicate == Predicate::ToggledOn) lamp = g.subject;
      }
      return "examine " + noun(obj) + " in the light of " + noun(lamp, true);
    }
    case TaskType::CleanAndPlace:
    case TaskType::HeatAndPlace:
    case TaskType::CoolAndPlace: {
      const StateAssertion* g = place_goal();
      const char* adj = task.task_type == TaskType::CleanAndPlace  ? "clean"
                        : task.task_type == TaskType::HeatAndPlace ? "heated"
                                                                   : "cooled";
      if (!g) return adj;
      return std::string("put ") + with_article(std::string(adj) + " " +
                               pretty_name(g->subject, catalog), false) +
             " " + receptacle_phrase(g->object, catalog);
    }
    case TaskType::StackAndPlace: {
      const StateAssertion *top = nullptr, *base = nullptr;
      for (const auto& a : task.goal_conditions) {
        if (a.predicate != Predicate::On && a.predicate != Predicate::In) continue;
        for (const auto& b : task.goal_conditions)
          if (&a != &b && (b.predicate == Predicate::On || b.predicate == Predicate::In) &&
              a.object == b.subject) {
            top = &a;
            base = &b;
          }
      }
      if (!top || !base) return "stack and place";
      return "put " + noun(top->subject) + " on " + noun(base->subject) + " " +
             receptacle_phrase(base->object, catalog);
    }
  }
  return "task";
}

}  // namespace detail

// One instruction per subgoal, order-aligned, plus a one-line task summary at
// the front. Instructions are emitted for planned subgoals even when they
// failed. Fills traj.instructions and traj.summary, and returns the list.
inline std::vector<std::string> annotate_trajectory(Trajectory& traj, Rng rng,
                                                    const InstructionTemplates& templates =
                                                        InstructionTemplates::builtin(),
                                                    const Catalog& catalog = Catalog::builtin()) {
  traj.summary = detail::task_summary(traj.task, catalog);
  traj.instructions.clear();
  for (const auto& sg : traj.subgoals)
    traj.instructions.push_back(template_instruction(sg, rng, templates, catalog));
  return traj.instructions;
}

}  // namespace roomforge
