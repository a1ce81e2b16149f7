#include "dspace/dspace.h"

#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "bench.hpp"
#include "error.hpp"

struct dsp_map {
  dsp::GridMap map;
};

struct dsp_scenario {
  dsp::Scenario scenario;
};

struct dsp_report {
  dsp::BenchReport report;
  std::vector<const dsp::ResultRow*> rows;
};

namespace {

thread_local std::string g_last_error;

dsp_status status_of(dsp::ErrorCode code) {
  switch (code) {
    case dsp::ErrorCode::InvalidArgument:
    case dsp::ErrorCode::NotMember:
    case dsp::ErrorCode::BoundExceeded:
      return DSP_ERR_INVALID_ARGUMENT;
    case dsp::ErrorCode::Parse:
      return DSP_ERR_PARSE;
    case dsp::ErrorCode::Io:
      return DSP_ERR_IO;
    case dsp::ErrorCode::NoPath:
      return DSP_ERR_NO_PATH;
    case dsp::ErrorCode::Unsupported:
      return DSP_ERR_UNSUPPORTED;
  }
  return DSP_ERR_INTERNAL;
}

dsp_status fail(dsp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
dsp_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const dsp::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DSP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DSP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DSP_ERR_INTERNAL, "unknown error");
  }
}

dsp::Cell to_cell(const int c[3], int num_axes) { return dsp::Cell{c[0], c[1], num_axes == 3 ? c[2] : 0}; }

}  // namespace

extern "C" {

const char* dsp_version(void) { return "1.0.0"; }

const char* dsp_status_string(dsp_status status) {
  switch (status) {
    case DSP_OK:
      return "ok";
    case DSP_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case DSP_ERR_PARSE:
      return "parse error";
    case DSP_ERR_IO:
      return "i/o error";
    case DSP_ERR_NO_PATH:
      return "no grid path";
    case DSP_ERR_NO_SOLUTION:
      return "no solution";
    case DSP_ERR_LIMIT_EXCEEDED:
      return "limit exceeded";
    case DSP_ERR_UNSUPPORTED:
      return "unsupported";
    case DSP_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* dsp_last_error(void) { return g_last_error.c_str(); }

dsp_status dsp_map_load(const char* path, dsp_map** out) {
  return guarded([&] {
    if (!path || !out) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    *out = new dsp_map{dsp::load_map_file(path)};
    return DSP_OK;
  });
}

dsp_status dsp_map_generate(uint64_t seed, int num_axes, const int dims[3], double resolution, double density,
                            dsp_map** out) {
  return guarded([&] {
    if (!dims || !out) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    *out = new dsp_map{dsp::generate_random_map(seed, num_axes, {dims[0], dims[1], num_axes == 3 ? dims[2] : 1},
                                                resolution, density)};
    return DSP_OK;
  });
}

dsp_status dsp_map_generate_corridor(uint64_t seed, int width, int height, double resolution, dsp_map** out,
                                     int start[3], int goal[3]) {
  return guarded([&] {
    if (!out || !start || !goal) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    dsp::CorridorOptions opt;
    opt.width = width;
    opt.height = height;
    opt.resolution = resolution;
    dsp::CorridorWorld world = dsp::generate_corridor_world(seed, opt);
    for (int a = 0; a < 3; ++a) {
      start[a] = world.start[a];
      goal[a] = world.goal[a];
    }
    *out = new dsp_map{std::move(world.map)};
    return DSP_OK;
  });
}

dsp_status dsp_map_save(const dsp_map* map, const char* path) {
  return guarded([&] {
    if (!map || !path) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    dsp::save_map_file(map->map, path);
    return DSP_OK;
  });
}

dsp_status dsp_map_info(const dsp_map* map, int* num_axes, int dims[3], double* resolution, size_t* occupied) {
  return guarded([&] {
    if (!map) return fail(DSP_ERR_INVALID_ARGUMENT, "null map");
    if (num_axes) *num_axes = map->map.num_axes();
    if (dims) {
      for (int a = 0; a < 3; ++a) dims[a] = map->map.dims()[a];
    }
    if (resolution) *resolution = map->map.resolution();
    if (occupied) *occupied = map->map.occupied_count();
    return DSP_OK;
  });
}

void dsp_map_free(dsp_map* map) { delete map; }

dsp_status dsp_tasks_generate(const dsp_map* map, size_t count, uint64_t seed, const char* path) {
  return guarded([&] {
    if (!map || !path) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    dsp::save_tasks_file(dsp::generate_tasks(map->map, count, seed), map->map.num_axes(), path);
    return DSP_OK;
  });
}

dsp_status dsp_scenario_create(dsp_scenario** out) {
  return guarded([&] {
    if (!out) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    *out = new dsp_scenario{};
    return DSP_OK;
  });
}

dsp_status dsp_scenario_load(const char* path, dsp_scenario** out) {
  return guarded([&] {
    if (!path || !out) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    *out = new dsp_scenario{dsp::load_scenario_file(path)};
    return DSP_OK;
  });
}

dsp_status dsp_scenario_parse(const char* text, dsp_scenario** out) {
  return guarded([&] {
    if (!text || !out) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    std::istringstream in(text);
    *out = new dsp_scenario{dsp::parse_scenario(in)};
    return DSP_OK;
  });
}

dsp_status dsp_scenario_set(dsp_scenario* scenario, const char* key, const char* value) {
  return guarded([&] {
    if (!scenario || !key || !value) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    dsp::apply_setting(scenario->scenario, key, value);
    return DSP_OK;
  });
}

void dsp_scenario_free(dsp_scenario* scenario) { delete scenario; }

dsp_status dsp_bench_run(const dsp_scenario* scenario, dsp_report** out) {
  return guarded([&] {
    if (!scenario || !out) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    auto* report = new dsp_report{dsp::run_scenario(scenario->scenario), {}};
    for (const auto& r : report->report.rows) report->rows.push_back(&r);
    for (const auto& r : report->report.aggregates) report->rows.push_back(&r);
    *out = report;
    return DSP_OK;
  });
}

size_t dsp_report_row_count(const dsp_report* report) { return report ? report->rows.size() : 0; }

dsp_status dsp_report_row(const dsp_report* report, size_t index, dsp_result_row* row) {
  return guarded([&] {
    if (!report || !row) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    if (index >= report->rows.size()) return fail(DSP_ERR_INVALID_ARGUMENT, "row index out of range");
    const dsp::ResultRow& r = *report->rows[index];
    row->task_id = r.task_id.c_str();
    row->method = r.method.c_str();
    row->param = r.param.c_str();
    row->heuristic = r.heuristic.c_str();
    row->weight = r.weight;
    row->success = r.success;
    row->planning_time_ms = r.planning_time_ms;
    row->expansions = r.expansions;
    row->has_cost = r.cost.has_value() ? 1 : 0;
    row->cost = r.cost.value_or(0.0);
    row->duration_s = r.duration_s.value_or(0.0);
    row->iterations = r.iterations;
    return DSP_OK;
  });
}

dsp_status dsp_report_write_csv(const dsp_report* report, const char* path) {
  return guarded([&] {
    if (!report) return fail(DSP_ERR_INVALID_ARGUMENT, "null report");
    if (!path || std::string(path) == "-") {
      dsp::write_csv(report->report, std::cout);
      std::cout.flush();
      return DSP_OK;
    }
    std::ofstream out(path);
    if (!out) return fail(DSP_ERR_IO, std::string("cannot write ") + path);
    dsp::write_csv(report->report, out);
    return out ? DSP_OK : fail(DSP_ERR_IO, std::string("write failed: ") + path);
  });
}

void dsp_report_free(dsp_report* report) { delete report; }

dsp_status dsp_plan(const dsp_scenario* scenario, const int start[3], const int goal[3], const char* method,
                    const char* trajectory_path, dsp_plan_stats* stats) {
  return guarded([&] {
    if (!scenario || !start || !goal) return fail(DSP_ERR_INVALID_ARGUMENT, "null argument");
    const dsp::Scenario& s = scenario->scenario;
    s.validate();
    const dsp::GridMap map = dsp::scenario_map(s);
    dsp::LatticeConfig config = s.lattice;
    config.num_axes = map.num_axes();
    const dsp::MethodConfig m = method ? dsp::parse_method(method, s.heuristic) : s.method_configs().front();
    const dsp::Task task{0, to_cell(start, map.num_axes()), to_cell(goal, map.num_axes())};
    if (!map.is_free(task.start) || !map.is_free(task.goal)) {
      return fail(DSP_ERR_INVALID_ARGUMENT, "start or goal cell is not free");
    }
    const dsp::MethodOutcome outcome = dsp::run_method(map, config, task, m, s.run_settings());
    if (stats) {
      stats->success = outcome.trajectory ? 1 : 0;
      stats->cost = outcome.trajectory ? outcome.trajectory->total_cost : 0.0;
      stats->duration_s = outcome.trajectory ? outcome.trajectory->duration : 0.0;
      stats->expansions = outcome.stats.expansions;
      stats->reexpansions = outcome.stats.reexpansions;
      stats->wall_time_s = outcome.stats.wall_time_s;
      stats->iterations = outcome.stats.iterations.size();
      stats->final_delta = outcome.final_delta;
    }
    if (!outcome.error.empty()) return fail(DSP_ERR_INVALID_ARGUMENT, outcome.error);
    if (outcome.no_grid_path) return fail(DSP_ERR_NO_PATH, "start and goal are not connected");
    if (!outcome.trajectory) {
      if (outcome.status == dsp::PlanStatus::LimitExceeded) return fail(DSP_ERR_LIMIT_EXCEEDED, "search limit reached");
      return fail(DSP_ERR_NO_SOLUTION, "no trajectory found");
    }
    if (trajectory_path) {
      std::ofstream out(trajectory_path);
      if (!out) return fail(DSP_ERR_IO, std::string("cannot write ") + trajectory_path);
      dsp::write_trajectory(out, *outcome.trajectory, config, map);
    }
    return DSP_OK;
  });
}

}  // extern "C"
