/* C interface to the delta-space kinodynamic planner. */
#ifndef DSPACE_DSPACE_H
#define DSPACE_DSPACE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DSPACE_BUILDING_LIBRARY)
#define DSPACE_API __declspec(dllexport)
#else
#define DSPACE_API __declspec(dllimport)
#endif
#else
#define DSPACE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsp_status {
  DSP_OK = 0,
  DSP_ERR_INVALID_ARGUMENT = 1,
  DSP_ERR_PARSE = 2,
  DSP_ERR_IO = 3,
  DSP_ERR_NO_PATH = 4,       /* start and goal are not connected on the grid */
  DSP_ERR_NO_SOLUTION = 5,   /* the lattice search exhausted its space */
  DSP_ERR_LIMIT_EXCEEDED = 6,
  DSP_ERR_UNSUPPORTED = 7,
  DSP_ERR_INTERNAL = 8
} dsp_status;

typedef struct dsp_map dsp_map;
typedef struct dsp_scenario dsp_scenario;
typedef struct dsp_report dsp_report;

DSPACE_API const char* dsp_version(void);
DSPACE_API const char* dsp_status_string(dsp_status status);
/* Message of the last failed call on this thread; empty after a successful one. */
DSPACE_API const char* dsp_last_error(void);

/* Maps. */
DSPACE_API dsp_status dsp_map_load(const char* path, dsp_map** out);
DSPACE_API dsp_status dsp_map_generate(uint64_t seed, int num_axes, const int dims[3], double resolution,
                                       double density, dsp_map** out);
/* Narrow-slot vs. wide-gap world; start and goal receive the generated task (z = 0). */
DSPACE_API dsp_status dsp_map_generate_corridor(uint64_t seed, int width, int height, double resolution,
                                                dsp_map** out, int start[3], int goal[3]);
DSPACE_API dsp_status dsp_map_save(const dsp_map* map, const char* path);
DSPACE_API dsp_status dsp_map_info(const dsp_map* map, int* num_axes, int dims[3], double* resolution,
                                   size_t* occupied);
DSPACE_API void dsp_map_free(dsp_map* map);

/* Writes `count` connected start/goal pairs to a task file. */
DSPACE_API dsp_status dsp_tasks_generate(const dsp_map* map, size_t count, uint64_t seed, const char* path);

/* Scenarios: flat `key = value` text. */
DSPACE_API dsp_status dsp_scenario_create(dsp_scenario** out);
DSPACE_API dsp_status dsp_scenario_load(const char* path, dsp_scenario** out);
DSPACE_API dsp_status dsp_scenario_parse(const char* text, dsp_scenario** out);
DSPACE_API dsp_status dsp_scenario_set(dsp_scenario* scenario, const char* key, const char* value);
DSPACE_API void dsp_scenario_free(dsp_scenario* scenario);

/* Benchmark sweep. */
typedef struct dsp_result_row {
  const char* task_id; /* "aggregate" for summary rows */
  const char* method;
  const char* param;
  const char* heuristic;
  double weight;
  double success; /* 0/1, or the success rate for aggregates */
  double planning_time_ms;
  double expansions;
  int has_cost;
  double cost;
  double duration_s;
  double iterations;
} dsp_result_row;

DSPACE_API dsp_status dsp_bench_run(const dsp_scenario* scenario, dsp_report** out);
/* Per-task rows followed by one aggregate row per method. Strings live as long as the report. */
DSPACE_API size_t dsp_report_row_count(const dsp_report* report);
DSPACE_API dsp_status dsp_report_row(const dsp_report* report, size_t index, dsp_result_row* row);
/* `path` NULL or "-" writes to stdout. */
DSPACE_API dsp_status dsp_report_write_csv(const dsp_report* report, const char* path);
DSPACE_API void dsp_report_free(dsp_report* report);

/* Single task. */
typedef struct dsp_plan_stats {
  int success;
  double cost;
  double duration_s;
  size_t expansions;
  size_t reexpansions;
  double wall_time_s;
  size_t iterations;
  double final_delta;
} dsp_plan_stats;

/* Plans one task with the scenario's map and lattice. `method` overrides the scenario's first
   method when non-NULL. The trajectory is written to `trajectory_path` when non-NULL and a
   solution exists. Returns DSP_ERR_NO_SOLUTION or DSP_ERR_LIMIT_EXCEEDED without a trajectory;
   `stats` is filled in either case. */
DSPACE_API dsp_status dsp_plan(const dsp_scenario* scenario, const int start[3], const int goal[3],
                               const char* method, const char* trajectory_path, dsp_plan_stats* stats);

#ifdef __cplusplus
}
#endif

#endif
