// Command-line front end: plan, bench, genmap, gentasks.
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dspace/dspace.h"

namespace {

const std::vector<std::string> kScenarioKeys = {
    "map",     "map_seed",  "map_dims",  "map_density",    "order",    "rho",    "tau",
    "v_max",   "a_max",     "u_max",     "du",             "resolution", "methods", "method",
    "param",   "step",      "heuristic", "weight",         "max_expansions", "max_time", "budget",
    "delta_max", "reexpansions", "tasks", "task_count",    "task_seed"};

struct ScenarioFlags {
  std::string file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> values;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& flags) {
  cmd->add_option("--scenario", flags.file, "Scenario file (key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--set", flags.sets, "Override a scenario key: key=value (repeatable)");
  for (const std::string& key : kScenarioKeys) {
    cmd->add_option("--" + key, flags.values[key], "Scenario key '" + key + "'");
  }
}

int report(dsp_status status) {
  if (status == DSP_OK) return 0;
  std::fprintf(stderr, "error: %s: %s\n", dsp_status_string(status), dsp_last_error());
  return static_cast<int>(status);
}

// Returns a scenario built from the file, then --set overrides, then individual flags.
dsp_status build_scenario(const ScenarioFlags& flags, dsp_scenario** out) {
  dsp_status st = flags.file.empty() ? dsp_scenario_create(out) : dsp_scenario_load(flags.file.c_str(), out);
  if (st != DSP_OK) return st;
  for (const std::string& kv : flags.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      return DSP_ERR_INVALID_ARGUMENT;
    }
    st = dsp_scenario_set(*out, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != DSP_OK) return st;
  }
  for (const std::string& key : kScenarioKeys) {
    const std::string& v = flags.values.at(key);
    if (v.empty()) continue;
    st = dsp_scenario_set(*out, key.c_str(), v.c_str());
    if (st != DSP_OK) return st;
  }
  return DSP_OK;
}

bool to_cell(const std::vector<int>& v, int out[3]) {
  if (v.size() != 2 && v.size() != 3) return false;
  out[0] = v[0];
  out[1] = v[1];
  out[2] = v.size() == 3 ? v[2] : 0;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinodynamic planning in delta spaces"};
  app.set_version_flag("--version", dsp_version());
  app.require_subcommand(1);

  ScenarioFlags plan_flags;
  std::vector<int> start, goal;
  std::string plan_method, plan_out = "trajectory.txt";
  auto* plan = app.add_subcommand("plan", "Plan a single task and write its trajectory");
  add_scenario_flags(plan, plan_flags);
  plan->add_option("--start", start, "Start cell: x y [z]")->required()->expected(2, 3);
  plan->add_option("--goal", goal, "Goal cell: x y [z]")->required()->expected(2, 3);
  plan->add_option("--use", plan_method, "Method spec, e.g. delta:2@delta_distance*1.4");
  plan->add_option("-o,--out", plan_out, "Trajectory output file");

  ScenarioFlags bench_flags;
  std::string bench_out = "-";
  auto* bench = app.add_subcommand("bench", "Run a scenario sweep and write CSV");
  add_scenario_flags(bench, bench_flags);
  bench->add_option("-o,--out", bench_out, "CSV output file ('-' for stdout)");

  std::uint64_t map_seed = 1;
  std::vector<int> dims{40, 30};
  double resolution = 1.0, density = 0.1;
  bool corridor = false;
  std::string map_out, task_out;
  auto* genmap = app.add_subcommand("genmap", "Generate a random or corridor map");
  genmap->add_option("--seed", map_seed, "Random seed");
  genmap->add_option("--dims", dims, "Cells per axis: W H [D]")->expected(2, 3);
  genmap->add_option("--resolution", resolution, "Meters per cell")->check(CLI::PositiveNumber);
  genmap->add_option("--density", density, "Obstacle fraction")->check(CLI::Range(0.0, 1.0));
  genmap->add_flag("--corridor", corridor, "Narrow-slot vs. wide-gap world (2D) with one task");
  genmap->add_option("--task-out", task_out, "Task file for --corridor");
  genmap->add_option("-o,--out", map_out, "Map output file")->required();

  std::string tasks_map, tasks_out;
  std::size_t task_count = 10;
  std::uint64_t task_seed = 1;
  auto* gentasks = app.add_subcommand("gentasks", "Generate connected start/goal pairs");
  gentasks->add_option("--map", tasks_map, "Map file")->required()->check(CLI::ExistingFile);
  gentasks->add_option("--count", task_count, "Number of tasks");
  gentasks->add_option("--seed", task_seed, "Random seed");
  gentasks->add_option("-o,--out", tasks_out, "Task output file")->required();

  CLI11_PARSE(app, argc, argv);

  if (*plan) {
    int s[3], g[3];
    if (!to_cell(start, s) || !to_cell(goal, g)) {
      std::fprintf(stderr, "error: cells need 2 or 3 coordinates\n");
      return DSP_ERR_INVALID_ARGUMENT;
    }
    dsp_scenario* scenario = nullptr;
    dsp_status st = build_scenario(plan_flags, &scenario);
    if (st != DSP_OK) {
      dsp_scenario_free(scenario);
      return report(st);
    }
    dsp_plan_stats stats{};
    st = dsp_plan(scenario, s, g, plan_method.empty() ? nullptr : plan_method.c_str(), plan_out.c_str(), &stats);
    dsp_scenario_free(scenario);
    std::printf("success=%d cost=%.6f duration_s=%.3f expansions=%zu reexpansions=%zu time_ms=%.3f iterations=%zu\n",
                stats.success, stats.cost, stats.duration_s, stats.expansions, stats.reexpansions,
                stats.wall_time_s * 1000.0, stats.iterations);
    if (st == DSP_OK) std::printf("trajectory written to %s\n", plan_out.c_str());
    return report(st);
  }

  if (*bench) {
    dsp_scenario* scenario = nullptr;
    dsp_status st = build_scenario(bench_flags, &scenario);
    dsp_report* result = nullptr;
    if (st == DSP_OK) st = dsp_bench_run(scenario, &result);
    if (st == DSP_OK) st = dsp_report_write_csv(result, bench_out.c_str());
    dsp_report_free(result);
    dsp_scenario_free(scenario);
    return report(st);
  }

  if (*genmap) {
    dsp_map* map = nullptr;
    dsp_status st;
    if (corridor) {
      int s[3], g[3];
      st = dsp_map_generate_corridor(map_seed, dims[0], dims[1], resolution, &map, s, g);
      if (st == DSP_OK && !task_out.empty()) {
        std::ofstream out(task_out);
        out << "# tasks num_axes=2\n0 " << s[0] << ' ' << s[1] << ' ' << g[0] << ' ' << g[1] << '\n';
        if (!out) {
          dsp_map_free(map);
          std::fprintf(stderr, "error: cannot write %s\n", task_out.c_str());
          return DSP_ERR_IO;
        }
      }
      if (st == DSP_OK) std::printf("start %d %d goal %d %d\n", s[0], s[1], g[0], g[1]);
    } else {
      int d[3];
      to_cell(dims, d);
      if (dims.size() == 2) d[2] = 1;
      st = dsp_map_generate(map_seed, static_cast<int>(dims.size()), d, resolution, density, &map);
    }
    if (st == DSP_OK) st = dsp_map_save(map, map_out.c_str());
    dsp_map_free(map);
    return report(st);
  }

  if (*gentasks) {
    dsp_map* map = nullptr;
    dsp_status st = dsp_map_load(tasks_map.c_str(), &map);
    if (st == DSP_OK) st = dsp_tasks_generate(map, task_count, task_seed, tasks_out.c_str());
    dsp_map_free(map);
    return report(st);
  }
  return 0;
}
