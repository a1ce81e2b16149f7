#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bench.hpp"
#include "doctest.h"
#include "error.hpp"
#include "oracles.hpp"
#include "unit/helpers.hpp"

using namespace dsp;

namespace {

Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("generate_tasks") {
  const GridMap m = generate_random_map(3, 2, {20, 20, 1}, 1.0, 0.3);
  CHECK(generate_tasks(m, 0, 1).empty());
  const auto a = generate_tasks(m, 25, 7);
  CHECK(a.size() == 25);
  CHECK(a == generate_tasks(m, 25, 7));
  CHECK(a != generate_tasks(m, 25, 8));
  for (const Task& t : a) {
    CHECK(m.is_free(t.start));
    CHECK(m.is_free(t.goal));
    CHECK(oracle::dijkstra(m, t.start)[m.index(t.goal)] < oracle::kInf);
  }
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == static_cast<int>(i));

  const GridMap full = GridMap(2, {3, 3, 1}, 1.0, std::vector<std::uint8_t>(9, 1));
  CHECK(code_of([&] { generate_tasks(full, 1, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("task files round trip") {
  const GridMap m = generate_random_map(3, 3, {6, 6, 6}, 1.0, 0.1);
  const auto tasks = generate_tasks(m, 5, 2);
  std::stringstream ss;
  save_tasks(tasks, 3, ss);
  CHECK(load_tasks(ss) == tasks);
  std::istringstream bad("# tasks num_axes=2\n0 1 2 3\n");
  CHECK(code_of([&] { load_tasks(bad); }) == ErrorCode::Parse);
  CHECK(code_of([] { load_tasks_file("/nonexistent/tasks"); }) == ErrorCode::Io);
}

TEST_CASE("parse_method") {
  const HeuristicSpec def{HeuristicKind::StraightLine, 1.0};
  MethodConfig m = parse_method("full", def);
  CHECK(m.kind == MethodKind::Full);
  CHECK(m.param_string().empty());
  CHECK(m.heuristic.kind == HeuristicKind::StraightLine);

  m = parse_method("delta:2@delta_distance*1.83", def);
  CHECK(m.kind == MethodKind::Delta);
  CHECK(m.param == 2.0);
  CHECK(m.param_string() == "2");
  CHECK(m.heuristic.kind == HeuristicKind::DeltaDistance);
  CHECK(m.heuristic.weight == 1.83);

  m = parse_method("delta_anytime:0/0.5", def);
  CHECK(m.kind == MethodKind::DeltaAnytime);
  CHECK(m.param == 0.0);
  CHECK(m.step == 0.5);
  CHECK(m.param_string() == "0/0.5");

  m = parse_method("tunnel:1.5@zero", def);
  CHECK(m.kind == MethodKind::Tunnel);
  CHECK(m.param_string() == "1.5");
  CHECK(m.heuristic.kind == HeuristicKind::Zero);

  for (const char* bad : {"full:1", "tunnel", "delta_anytime", "astar", "delta:x", "delta:1@nope"}) {
    CHECK_THROWS_AS(parse_method(bad, def), Error);
  }
}

TEST_CASE("scenario parsing") {
  const Scenario s = parse(
      "# comment\n"
      "map_dims = 20 15\n"
      "map_density = 0.05\n"
      "order = third\n"
      "rho = 12\n"
      "du = 0.5\n"
      "heuristic = straight_line\n"
      "methods = full, delta:1.5, delta_anytime:1/0.5@delta_distance*1.4\n"
      "max_expansions = 5000\n"
      "task = 0 0 5 5\n");
  CHECK(s.map_dims == std::array<int, 3>{20, 15, 1});
  CHECK(s.lattice.order == Order::Third);
  CHECK(s.lattice.rho == 12);
  CHECK(s.limits.max_expansions == 5000);
  REQUIRE(s.tasks.size() == 1);
  CHECK(s.tasks[0].goal == Cell{5, 5, 0});
  const auto methods = s.method_configs();
  REQUIRE(methods.size() == 3);
  CHECK(methods[0].heuristic.kind == HeuristicKind::StraightLine);
  CHECK(methods[1].param == 1.5);
  CHECK(methods[2].heuristic.weight == 1.4);
  CHECK_NOTHROW(s.validate());

  const Scenario single = parse("method = tunnel\nparam = 2\nheuristic = zero\n");
  REQUIRE(single.method_configs().size() == 1);
  CHECK(single.method_configs()[0].kind == MethodKind::Tunnel);
  CHECK(single.method_configs()[0].param == 2.0);
}

TEST_CASE("scenario errors") {
  CHECK(code_of([] { parse("bogus = 1\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse("rho 10\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse("rho = ten\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse("order = fourth\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse("methods = full,\n").method_configs(); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse("methods = full@delta_distance\n").validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse("order = third\nmethods = delta:1@velocity_profile\n").validate(); }) ==
        ErrorCode::Unsupported);
  CHECK(code_of([] { parse("rho = -1\n").validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { load_scenario_file("/nonexistent/x.scenario"); }) == ErrorCode::Io);
}

TEST_CASE("scenario files resolve relative paths") {
  const auto dir = std::filesystem::temp_directory_path() / "dspace_bench_test";
  std::filesystem::create_directories(dir);
  const GridMap m = generate_random_map(2, 2, {10, 8, 1}, 1.0, 0.1);
  save_map_file(m, (dir / "w.map").string());
  save_tasks_file(generate_tasks(m, 3, 1), 2, (dir / "w.tasks").string());
  {
    std::ofstream f(dir / "w.scenario");
    f << "map = w.map\ntasks = w.tasks\nmethods = full\n";
  }
  const Scenario s = load_scenario_file((dir / "w.scenario").string());
  CHECK(scenario_map(s) == m);
  CHECK(scenario_tasks(s, m).size() == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run_method outcomes") {
  LatticeConfig c;
  c.du = 1;
  const GridMap m = testutil::ascii_map({".....", ".....", "..#..", "....."});
  const Task t{0, {0, 0, 0}, {4, 3, 0}};
  RunSettings rs;
  for (const char* spec : {"full", "tunnel:1", "delta:1", "delta_anytime:0/0.5"}) {
    const MethodOutcome o = run_method(m, c, t, parse_method(spec, {HeuristicKind::StraightLine, 1.0}), rs);
    CAPTURE(spec);
    CHECK(o.error.empty());
    REQUIRE(o.trajectory);
    REQUIRE(o.space);
    for (const auto& s : o.trajectory->states) CHECK(o.space->inside_cell(project(s)));
  }
  const GridMap split = testutil::ascii_map({"..#..", "..#.."});
  const MethodOutcome none = run_method(split, c, {0, {0, 0, 0}, {4, 0, 0}}, parse_method("delta:1", {}), rs);
  CHECK(none.no_grid_path);
  CHECK(!none.trajectory);
}

TEST_CASE("benchmark rows, aggregates and CSV") {
  LatticeConfig c;
  c.du = 1;
  const GridMap m = generate_random_map(4, 2, {14, 12, 1}, 1.0, 0.1);
  const auto tasks = generate_tasks(m, 4, 3);
  std::vector<MethodConfig> methods{parse_method("full", {HeuristicKind::StraightLine, 1.0}),
                                    parse_method("delta:1", {HeuristicKind::StraightLine, 1.0})};
  RunSettings rs;
  const BenchReport r = run_benchmark(m, tasks, c, methods, rs);
  REQUIRE(r.rows.size() == 8);
  REQUIRE(r.aggregates.size() == 2);
  CHECK(r.rows[0].task_id == "0");
  CHECK(r.rows[0].method == "full");
  CHECK(r.rows[1].method == "delta");
  for (const ResultRow& row : r.rows) CHECK(row.success == (row.cost ? 1.0 : 0.0));

  std::stringstream ss;
  write_csv(r, ss);
  const std::string text = ss.str();
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  std::istringstream in(text);
  const auto parsed = parse_csv(in);
  REQUIRE(parsed.size() == 10);
  for (std::size_t i = 0; i < r.rows.size(); ++i) CHECK(parsed[i] == r.rows[i]);
  CHECK(parsed[8] == r.aggregates[0]);
  CHECK(parsed[9] == r.aggregates[1]);
  std::istringstream bad("task_id,method\n");
  CHECK_THROWS_AS(parse_csv(bad), Error);
}

TEST_CASE("aggregates average over tasks every method solved") {
  auto row = [](std::string task, std::string method, bool ok, double exp, double cost) {
    ResultRow r;
    r.task_id = task;
    r.method = method;
    if (method == "delta") r.param = "0";
    r.heuristic = "zero";
    r.success = ok ? 1.0 : 0.0;
    r.expansions = exp;
    if (ok) r.cost = cost;
    return r;
  };
  const std::vector<ResultRow> rows{row("0", "full", true, 10, 100), row("0", "delta", true, 4, 90),
                                    row("1", "full", false, 50, 0), row("1", "delta", true, 6, 120),
                                    row("2", "full", true, 20, 110), row("2", "delta", true, 8, 100)};
  MethodConfig full, delta;
  delta.kind = MethodKind::Delta;
  const auto agg = aggregate_rows(rows, {full, delta});
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].success == doctest::Approx(2.0 / 3.0));
  CHECK(agg[1].success == 1.0);
  CHECK(agg[0].expansions == 15);
  CHECK(agg[1].expansions == 6);
  CHECK(*agg[0].cost == 105);
  CHECK(*agg[1].cost == 95);
}

TEST_CASE("corridor worlds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CorridorWorld w = generate_corridor_world(seed);
    CHECK(w.map == generate_corridor_world(seed).map);
    CHECK(w.map.is_free(w.start));
    CHECK(w.map.is_free(w.goal));
    const double direct = oracle::dijkstra(w.map, w.start)[w.map.index(w.goal)];
    CHECK(direct == doctest::Approx(w.c_star).epsilon(1e-12));
    const double extra = w.detour_cost - w.c_star;
    CHECK(extra >= 0.3 - 1e-9);
    CHECK(extra <= 1.9 + 1e-9);
  }
  CorridorOptions tiny;
  tiny.width = 8;
  CHECK_THROWS_AS(generate_corridor_world(1, tiny), Error);
}
