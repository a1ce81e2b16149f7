#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grid_map.hpp"
#include "heuristics.hpp"
#include "lattice.hpp"
#include "planner.hpp"
#include "search_space.hpp"

namespace dsp {

struct Task {
  int id = 0;
  Cell start;
  Cell goal;

  friend bool operator==(const Task&, const Task&) = default;
};

/// Random free start/goal pairs joined by a grid path. Throws Error(InvalidArgument) if the map
/// has fewer than two free cells or the retry budget runs out.
std::vector<Task> generate_tasks(const GridMap& map, std::size_t count, std::uint64_t seed,
                                 std::size_t max_attempts_per_task = 1000);

/// `# tasks num_axes=N` header, then `id sx sy [sz] gx gy [gz]` per line.
void save_tasks(const std::vector<Task>& tasks, int num_axes, std::ostream& out);
std::vector<Task> load_tasks(std::istream& in);
std::vector<Task> load_tasks_file(const std::string& path);
void save_tasks_file(const std::vector<Task>& tasks, int num_axes, const std::string& path);

/// A 2D world split by a thick wall. A narrow dog-leg slot through the wall carries the shortest
/// grid path; a wide gap next to the border is a slightly longer detour.
struct CorridorWorld {
  GridMap map;
  Cell start;
  Cell goal;
  double c_star = 0.0;       // via the slot
  double detour_cost = 0.0;  // with the slot blocked
};

struct CorridorOptions {
  int width = 30;
  int height = 18;
  double resolution = 1.0;
  double min_extra = 0.3;  // detour_cost - c_star, meters
  double max_extra = 1.9;
};

CorridorWorld generate_corridor_world(std::uint64_t seed, const CorridorOptions& options = {});

enum class MethodKind { Full, Tunnel, Delta, DeltaAnytime };

std::string to_string(MethodKind kind);

struct MethodConfig {
  MethodKind kind = MethodKind::Full;
  double param = 0.0;  // tunnel radius or delta (delta0 for anytime), meters
  double step = 0.5;   // anytime delta increment
  HeuristicSpec heuristic;

  /// "", "1.5" or "1/0.5" for anytime.
  std::string param_string() const;
};

/// `name[:param[/step]][@heuristic[*weight]]`, e.g. `delta:2@delta_distance*1.83`.
MethodConfig parse_method(const std::string& text, const HeuristicSpec& default_heuristic);

struct RunSettings {
  PlanLimits limits;
  double budget_s = 1.0;
  std::optional<double> delta_max;
  int reexpansions = 1;
};

struct Scenario {
  std::string map_file;  // empty: generate from the map_* fields
  std::uint64_t map_seed = 1;
  int map_axes = 2;
  std::array<int, 3> map_dims{40, 30, 1};
  double map_density = 0.1;

  LatticeConfig lattice;
  /// Comma-separated method list; when empty a single method is built from the fields below.
  std::string methods;
  std::string method = "full";
  std::optional<double> param;
  double step = 0.5;
  HeuristicSpec heuristic;
  PlanLimits limits;
  double budget_s = 1.0;  // anytime wall-clock budget
  std::optional<double> delta_max;
  int reexpansions = 1;

  std::string task_file;
  std::vector<Task> tasks;  // explicit tasks take precedence over the file and generation
  std::size_t task_count = 10;
  std::uint64_t task_seed = 1;

  std::vector<MethodConfig> method_configs() const;
  RunSettings run_settings() const;

  /// Throws Error(InvalidArgument) on inconsistent settings.
  void validate() const;
};

/// Applies one `key = value` setting. Relative file paths resolve against `base_dir`.
void apply_setting(Scenario& scenario, const std::string& key, const std::string& value,
                   const std::string& base_dir = "");

/// Flat `key = value` text with `#` comments. Throws Error(Parse) on malformed lines or keys.
Scenario parse_scenario(std::istream& in, const std::string& base_dir = "");
Scenario load_scenario_file(const std::string& path);

GridMap scenario_map(const Scenario& scenario);
std::vector<Task> scenario_tasks(const Scenario& scenario, const GridMap& map);

/// Everything a single (task, method) run produces.
struct MethodOutcome {
  PlanStatus status = PlanStatus::NoSolution;
  std::optional<Trajectory> trajectory;
  PlanStats stats;
  std::optional<SearchSpace> space;  // the space the final trajectory was planned in
  double final_delta = 0.0;
  bool no_grid_path = false;
  std::string error;  // set when the run aborted with any other exception
};

/// Runs one method on one task. Time covers the planning call including any delta-space or
/// tunnel construction. Errors raised by the task are reported in `error`, not thrown.
MethodOutcome run_method(const GridMap& map, const LatticeConfig& config, const Task& task,
                         const MethodConfig& method, const RunSettings& settings);

struct ResultRow {
  std::string task_id;  // "aggregate" for summary rows
  std::string method;
  std::string param;
  std::string heuristic;
  double weight = 1.0;
  double success = 0.0;  // 0/1 per task, success rate for aggregates
  double planning_time_ms = 0.0;
  double expansions = 0.0;
  std::optional<double> cost;
  std::optional<double> duration_s;
  double iterations = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct BenchReport {
  std::vector<ResultRow> rows;        // sorted by task id, then method order
  std::vector<ResultRow> aggregates;  // one per method config
};

using RunObserver = std::function<void(const Task&, const MethodConfig&, const MethodOutcome&)>;

BenchReport run_scenario(const Scenario& scenario, const RunObserver& observer = {});
BenchReport run_benchmark(const GridMap& map, const std::vector<Task>& tasks, const LatticeConfig& config,
                          const std::vector<MethodConfig>& methods, const RunSettings& settings,
                          const RunObserver& observer = {});

/// Success rate over all tasks; means over the tasks every method config solved.
std::vector<ResultRow> aggregate_rows(const std::vector<ResultRow>& rows, const std::vector<MethodConfig>& methods);

inline constexpr const char* kCsvHeader =
    "task_id,method,param,heuristic,weight,success,planning_time_ms,expansions,cost,duration_s,iterations";

void write_csv(const BenchReport& report, std::ostream& out);
/// Parses rows written by write_csv; aggregate rows keep task_id "aggregate".
std::vector<ResultRow> parse_csv(std::istream& in);

}  // namespace dsp
