// roomforge CLI: generate scenes from CDF files, sample and execute tasks,
// evaluate scene quality, merge scene descriptions.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "roomforge/instruct.hpp"
#include "roomforge/render.hpp"
#include "roomforge/roomforge.hpp"

namespace fs = std::filesystem;
using namespace roomforge;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// temp + rename so concurrent jobs never expose partial files
void write_file_atomic(const fs::path& p, const std::string& content) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, p);
}

std::string hash_hex(const std::string& bytes) {
  char b[17];
  std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return b;
}

Rules load_rules(const std::string& rules_path) {
  if (!rules_path.empty()) return Rules::from_file(rules_path);
  if (const char* env = std::getenv("CSSG_RULES"); env && *env) return Rules::from_file(env);
  return Rules::builtin();
}

struct ManifestEntry {
  std::string file;
  std::string hash;
  std::uint64_t seed;
};

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::map<std::string, std::string>& inputs,
                    std::vector<ManifestEntry> outputs, const Rules& rules) {
  std::sort(outputs.begin(), outputs.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.file < b.file; });
  json j;
  j["command"] = command;
  j["generator"] = kGeneratorVersion;
  j["rules_version"] = rules.version();
  j["catalog_version"] = Catalog::builtin().version();
  j["inputs"] = inputs;
  j["outputs"] = json::array();
  for (const auto& e : outputs)
    j["outputs"].push_back({{"file", e.file}, {"hash", e.hash}, {"seed", e.seed}});
  write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
}

void for_each_job(int jobs, int count, const std::function<void(int)>& fn) {
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

std::vector<fs::path> scene_files_in(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + " is not a directory");
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().string().ends_with(".scene.json"))
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no .scene.json files in " + dir.string());
  return files;
}

int cmd_generate(const std::string& cdf_path, int count, std::uint64_t seed,
                 const std::string& rules_path, const std::string& out_dir, bool render,
                 bool graph, int jobs) {
  Rules rules = load_rules(rules_path);
  std::string cdf_text = read_file(cdf_path);
  CdfDocument doc = parse_cdf(cdf_text);
  ValidationReport vr = validate_cdf(doc);
  if (!vr.ok()) {
    for (const auto& f : vr.findings)
      std::cerr << cdf_path << ": " << f.code << ": " << f.message << "\n";
    return 1;
  }
  fs::create_directories(out_dir);

  std::mutex mu;
  std::vector<ManifestEntry> outputs;
  std::vector<std::string> failures;
  for_each_job(jobs, count, [&](int i) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    char name[64];
    std::snprintf(name, sizeof name, "scene-%06llu.scene.json",
                  static_cast<unsigned long long>(s));
    try {
      RoomStructure room = sample_room_structure(doc.scene_desc.room_type, s);
      Scene scene = generate_scene(doc, room, s, rules);
      std::string text = serialize_scene(scene);
      write_file_atomic(fs::path(out_dir) / name, text);
      if (render) {
        std::string svg = render_topview(scene);
        fs::path svg_name = fs::path(name).stem().stem();
        svg_name += ".svg";
        write_file_atomic(fs::path(out_dir) / svg_name, svg);
      }
      if (graph) {
        std::string dot = export_scene_graph(scene, rules);
        fs::path dot_name = fs::path(name).stem().stem();
        dot_name += ".dot";
        write_file_atomic(fs::path(out_dir) / dot_name, dot);
      }
      std::lock_guard<std::mutex> lock(mu);
      outputs.push_back({name, hash_hex(text), s});
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(mu);
      failures.push_back("seed " + std::to_string(s) + ": " + e.what());
    }
  });

  write_manifest(out_dir, "generate", {{cdf_path, hash_hex(cdf_text)}}, outputs, rules);
  for (const auto& f : failures) std::cerr << "generation failed: " << f << "\n";
  std::cout << "generated " << outputs.size() << "/" << count << " scenes in " << out_dir << "\n";
  return failures.empty() ? 0 : 1;
}

int cmd_tasks(const std::string& scene_dir, const std::vector<std::string>& type_names,
              int per_type, std::uint64_t seed, const std::string& rules_path,
              const std::string& templates_path, const std::string& out_dir, int jobs) {
  Rules rules = load_rules(rules_path);
  InstructionTemplates templates =
      templates_path.empty() ? InstructionTemplates::builtin()
                             : InstructionTemplates::from_config(
                                   ConfigDoc::parse(read_file(templates_path)));
  std::vector<TaskType> types;
  if (type_names.empty()) {
    types.assign(std::begin(kAllTaskTypes), std::end(kAllTaskTypes));
  } else {
    for (const auto& n : type_names) {
      auto t = parse_task_type(n);
      if (!t) throw std::runtime_error("unknown task type: " + n);
      types.push_back(*t);
    }
  }
  auto files = scene_files_in(scene_dir);
  fs::create_directories(out_dir);

  struct Job {
    size_t scene_idx;
    TaskType type;
    int k;
  };
  std::vector<Job> job_list;
  for (size_t si = 0; si < files.size(); ++si)
    for (TaskType t : types)
      for (int k = 0; k < per_type; ++k) job_list.push_back({si, t, k});

  std::vector<Scene> scenes;
  std::map<std::string, std::string> inputs;
  for (const auto& f : files) {
    std::string text = read_file(f);
    scenes.push_back(scene_from_json(json::parse(text)));
    inputs[f.string()] = hash_hex(text);
  }

  std::mutex mu;
  std::vector<ManifestEntry> outputs;
  std::vector<Trajectory> all;
  for_each_job(jobs, static_cast<int>(job_list.size()), [&](int ji) {
    const Job& job = job_list[ji];
    std::string stem = files[job.scene_idx].stem().stem().string();
    std::string tag = stem + ":" + std::string(task_type_name(job.type)) + ":" +
                      std::to_string(job.k);
    std::uint64_t task_seed = fnv1a(tag, seed ^ 0x9e3779b97f4a7c15ull);
    auto traj = run_task(scenes[job.scene_idx], stem, job.type, task_seed, rules);
    if (!traj) return;  // template unsatisfiable in this scene
    Rng instr_rng = Rng(task_seed).fork("instruct");
    annotate_trajectory(*traj, instr_rng, templates);
    std::string text = serialize_trajectory(*traj);
    char name[128];
    std::snprintf(name, sizeof name, "%s-%s-%03d", stem.c_str(),
                  std::string(task_type_name(job.type)).c_str(), job.k);
    std::string traj_name = std::string(name) + ".traj.json";
    write_file_atomic(fs::path(out_dir) / traj_name, text);
    std::string replay = serialize_replay_log(traj->actions, traj->frames.back(), traj->success);
    std::string replay_name = std::string(name) + ".replay.jsonl";
    write_file_atomic(fs::path(out_dir) / replay_name, replay);
    std::lock_guard<std::mutex> lock(mu);
    outputs.push_back({traj_name, hash_hex(text), task_seed});
    outputs.push_back({replay_name, hash_hex(replay), task_seed});
    all.push_back(std::move(*traj));
  });

  write_manifest(out_dir, "tasks", inputs, outputs, rules);

  int ok = 0;
  for (const auto& t : all) ok += t.success ? 1 : 0;
  std::cout << "executed " << all.size() << " tasks, " << ok << " successful\n";
  auto stats = subgoal_stats(all);
  for (const auto& [name, rc] : stats) {
    if (!rc.defined()) continue;
    std::printf("  %-16s %.2f (%d/%d)\n", name.c_str(), rc.rate(), rc.successes, rc.attempts);
  }
  return 0;
}

int cmd_eval(const std::string& scene_dir, int per_type, std::uint64_t seed,
             const std::string& rules_path, const std::string& out_dir,
             const std::string& baseline_path) {
  Rules rules = load_rules(rules_path);
  auto files = scene_files_in(scene_dir);
  std::vector<Scene> scenes;
  for (const auto& f : files) scenes.push_back(scene_from_json(json::parse(read_file(f))));

  MetricsReport report = task_success_rate(scenes, per_type, seed, rules);
  add_embodied_metrics(report, scenes, rules);

  std::string table;
  if (!baseline_path.empty()) {
    json bj = json::parse(read_file(baseline_path));
    MetricsReport base;
    for (auto it = bj["task_success"].begin(); it != bj["task_success"].end(); ++it)
      base.per_task[it.key()] = {it.value().value("successes", 0), it.value().value("attempts", 0)};
    for (auto it = bj["subgoal_success"].begin(); it != bj["subgoal_success"].end(); ++it)
      base.per_subgoal[it.key()] = {it.value().value("successes", 0),
                                    it.value().value("attempts", 0)};
    base.overall = {bj["overall"].value("successes", 0), bj["overall"].value("attempts", 0)};
    table = metrics_to_table(report, &base);
  } else {
    table = metrics_to_table(report);
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file_atomic(fs::path(out_dir) / "report.json", metrics_to_json(report).dump(2) + "\n");
    write_file_atomic(fs::path(out_dir) / "report.txt", table);
  }
  std::cout << table;
  return 0;
}

int cmd_merge(const std::vector<std::string>& cdf_paths, const std::string& out_path) {
  std::vector<SceneDescription> descs;
  for (const auto& p : cdf_paths) descs.push_back(parse_cdf(read_file(p)).scene_desc);
  SceneDescription merged = merge_scene_descriptions(descs);
  CdfDocument doc;
  doc.scene_desc = merged;
  std::string text = serialize_cdf(doc);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(out_path, text);
    std::cout << "merged " << cdf_paths.size() << " descriptions into " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constrained stochastic scene generation and task farming"};
  app.require_subcommand(1);

  std::string cdf_path, scene_dir, rules_path, templates_path, out_dir = "out", out_path, baseline;
  std::vector<std::string> cdf_paths, type_names;
  int count = 1, per_type = 200, jobs = 1;
  std::uint64_t seed = 0;
  bool render = false, graph = false;

  auto* gen = app.add_subcommand("generate", "generate scenes from a CDF file");
  gen->add_option("cdf", cdf_path, "CDF document (.cdf.json)")->required();
  gen->add_option("--count", count, "number of scenes (seeds S..S+N-1)");
  gen->add_option("--seed", seed, "base seed");
  gen->add_option("--rules", rules_path, "rules config override (or CSSG_RULES env)");
  gen->add_option("--out", out_dir, "output directory");
  gen->add_option("--jobs", jobs, "parallel jobs");
  gen->add_flag("--render", render, "also write a top-view SVG per scene");
  gen->add_flag("--graph", graph, "also write a DOT scene graph per scene");

  auto* tasks = app.add_subcommand("tasks", "sample and execute tasks in generated scenes");
  tasks->add_option("scenes", scene_dir, "directory of .scene.json files")->required();
  tasks->add_option("--types", type_names, "task types (default: all 7)");
  tasks->add_option("--per-type", per_type, "tasks per type per scene")->default_val(3);
  tasks->add_option("--seed", seed, "base seed");
  tasks->add_option("--rules", rules_path, "rules config override");
  tasks->add_option("--templates", templates_path, "instruction template config override");
  tasks->add_option("--out", out_dir, "output directory");
  tasks->add_option("--jobs", jobs, "parallel jobs");

  auto* ev = app.add_subcommand("eval", "score scenes by oracle task success");
  ev->add_option("scenes", scene_dir, "directory of .scene.json files")->required();
  ev->add_option("--per-type", per_type, "tasks per type per scene");
  ev->add_option("--seed", seed, "base seed");
  ev->add_option("--rules", rules_path, "rules config override");
  ev->add_option("--out", out_dir, "report output directory");
  ev->add_option("--baseline", baseline, "baseline report.json for the delta column");

  auto* merge = app.add_subcommand("merge", "merge CDF scene descriptions");
  merge->add_option("cdfs", cdf_paths, "CDF documents")->required()->expected(-1);
  merge->add_option("--out", out_path, "merged CDF path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(cdf_path, count, seed, rules_path, out_dir, render, graph, jobs);
    if (tasks->parsed())
      return cmd_tasks(scene_dir, type_names, per_type, seed, rules_path, templates_path, out_dir,
                       jobs);
    if (ev->parsed()) return cmd_eval(scene_dir, per_type, seed, rules_path, out_dir, baseline);
    if (merge->parsed()) return cmd_merge(cdf_paths, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
