#include "bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "error.hpp"
#include "lowdim_search.hpp"
#include "random.hpp"

namespace dsp {
namespace {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error(ErrorCode::Parse, what + ": not a number: '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error(ErrorCode::Parse, what + ": not an integer: '" + text + "'");
  }
  return v;
}

std::vector<long long> parse_integers(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  std::vector<long long> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_integer(tok, what));
  return out;
}

// Connected-component label per cell (-1 for blocked cells).
std::vector<int> components(const GridMap& map) {
  std::vector<int> label(map.cell_count(), -1);
  int next = 0;
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    const Cell c = map.cell_at(i);
    if (label[i] >= 0 || !map.is_free(c)) continue;
    std::queue<Cell> q;
    q.push(c);
    label[i] = next;
    while (!q.empty()) {
      const Cell cur = q.front();
      q.pop();
      for (const Neighbor& n : map.neighbors(cur)) {
        int& l = label[map.index(n.cell)];
        if (l < 0) {
          l = next;
          q.push(n.cell);
        }
      }
    }
    ++next;
  }
  return label;
}

std::string method_key(const std::string& method, const std::string& param, const std::string& heuristic,
                       double weight) {
  return method + '|' + param + '|' + heuristic + '|' + format_number(weight);
}

std::string method_key(const MethodConfig& m) {
  return method_key(to_string(m.kind), m.param_string(), to_string(m.heuristic.kind), m.heuristic.weight);
}

}  // namespace

std::vector<Task> generate_tasks(const GridMap& map, std::size_t count, std::uint64_t seed,
                                 std::size_t max_attempts_per_task) {
  std::vector<Task> tasks;
  if (count == 0) return tasks;
  std::vector<std::size_t> free_cells;
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    if (map.is_free(map.cell_at(i))) free_cells.push_back(i);
  }
  if (free_cells.size() < 2) throw Error(ErrorCode::InvalidArgument, "map needs at least two free cells");
  const std::vector<int> label = components(map);
  Rng rng(seed);
  for (std::size_t t = 0; t < count; ++t) {
    bool found = false;
    for (std::size_t attempt = 0; attempt < max_attempts_per_task && !found; ++attempt) {
      const std::size_t a = free_cells[rng.below(free_cells.size())];
      const std::size_t b = free_cells[rng.below(free_cells.size())];
      if (a == b || label[a] != label[b]) continue;
      tasks.push_back({static_cast<int>(t), map.cell_at(a), map.cell_at(b)});
      found = true;
    }
    if (!found) throw Error(ErrorCode::InvalidArgument, "no connected start/goal pair found within the retry budget");
  }
  return tasks;
}

void save_tasks(const std::vector<Task>& tasks, int num_axes, std::ostream& out) {
  out << "# tasks num_axes=" << num_axes << '\n';
  for (const Task& t : tasks) {
    out << t.id;
    for (int a = 0; a < num_axes; ++a) out << ' ' << t.start[a];
    for (int a = 0; a < num_axes; ++a) out << ' ' << t.goal[a];
    out << '\n';
  }
}

std::vector<Task> load_tasks(std::istream& in) {
  std::vector<Task> tasks;
  int num_axes = 0;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("num_axes=");
      if (pos != std::string::npos) num_axes = static_cast<int>(parse_integer(line.substr(pos + 9), "tasks header"));
      continue;
    }
    const auto v = parse_integers(line, "tasks");
    const int axes = num_axes != 0 ? num_axes : static_cast<int>((v.size() - 1) / 2);
    if ((axes != 2 && axes != 3) || v.size() != static_cast<std::size_t>(1 + 2 * axes)) {
      throw Error(ErrorCode::Parse, "tasks: malformed line: " + line);
    }
    Task t;
    t.id = static_cast<int>(v[0]);
    for (int a = 0; a < axes; ++a) {
      t.start[a] = static_cast<int>(v[1 + a]);
      t.goal[a] = static_cast<int>(v[1 + axes + a]);
    }
    tasks.push_back(t);
  }
  return tasks;
}

std::vector<Task> load_tasks_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open task file: " + path);
  return load_tasks(in);
}

void save_tasks_file(const std::vector<Task>& tasks, int num_axes, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write task file: " + path);
  save_tasks(tasks, num_axes, out);
}

CorridorWorld generate_corridor_world(std::uint64_t seed, const CorridorOptions& options) {
  const int w = options.width;
  const int h = options.height;
  if (w < 12 || h < 10) throw Error(ErrorCode::InvalidArgument, "corridor world needs at least 12 x 10 cells");
  Rng rng(seed);
  for (int layout = 0; layout < 1000; ++layout) {
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(w) * h, 0);
    auto at = [&](int x, int y) -> std::uint8_t& { return occ[static_cast<std::size_t>(y) * w + x]; };

    const int x0 = rng.between(w / 2 - 3, w / 2 + 1);
    const int gap = rng.between(2, 3);
    const int top = h - gap - 2;  // highest wall row a slot may use
    const int y1 = rng.between(std::max(1, top - 4), top);
    const int offset = rng.between(1, 2) * (rng.below(2) == 0 ? 1 : -1);
    const int y2 = std::clamp(y1 + offset, 1, top);
    if (y2 == y1) continue;

    for (int y = 0; y < h - gap; ++y) {
      for (int x = x0; x < x0 + 3; ++x) at(x, y) = 1;
    }
    at(x0, y1) = 0;
    for (int y = std::min(y1, y2); y <= std::max(y1, y2); ++y) at(x0 + 1, y) = 0;
    at(x0 + 2, y2) = 0;

    // Sparse clutter away from the wall.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x >= x0 - 2 && x <= x0 + 4) continue;
        if (rng.uniform() < 0.04) at(x, y) = 1;
      }
    }

    std::vector<std::uint8_t> blocked = occ;
    blocked[static_cast<std::size_t>(y1) * w + x0] = 1;
    const GridMap map(2, {w, h, 1}, options.resolution, occ);
    const GridMap detour_map(2, {w, h, 1}, options.resolution, blocked);

    for (int attempt = 0; attempt < 200; ++attempt) {
      const Cell s{rng.between(0, x0 - 1), rng.between(0, h - 1), 0};
      const Cell g{rng.between(x0 + 3, w - 1), rng.between(0, h - 1), 0};
      if (!map.is_free(s) || !map.is_free(g)) continue;
      try {
        const DeltaSpace direct(map, s, g, 0.0);
        const DeltaSpace detour(detour_map, s, g, 0.0);
        const double extra = detour.c_star() - direct.c_star();
        if (extra < options.min_extra || extra > options.max_extra) continue;
        return CorridorWorld{map, s, g, direct.c_star(), detour.c_star()};
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoPath) throw;
      }
    }
  }
  throw Error(ErrorCode::InvalidArgument, "corridor world: no admissible layout found");
}

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::Full:
      return "full";
    case MethodKind::Tunnel:
      return "tunnel";
    case MethodKind::Delta:
      return "delta";
    case MethodKind::DeltaAnytime:
      return "delta_anytime";
  }
  return "full";
}

std::string MethodConfig::param_string() const {
  switch (kind) {
    case MethodKind::Full:
      return "";
    case MethodKind::Tunnel:
    case MethodKind::Delta:
      return format_number(param);
    case MethodKind::DeltaAnytime:
      return format_number(param) + "/" + format_number(step);
  }
  return "";
}

MethodConfig parse_method(const std::string& text, const HeuristicSpec& default_heuristic) {
  MethodConfig m;
  m.heuristic = default_heuristic;
  std::string body = trim(text);
  const auto at = body.find('@');
  if (at != std::string::npos) {
    std::string h = trim(body.substr(at + 1));
    body = trim(body.substr(0, at));
    const auto star = h.find('*');
    if (star != std::string::npos) {
      m.heuristic.weight = parse_double(h.substr(star + 1), "method weight");
      h = trim(h.substr(0, star));
    }
    m.heuristic.kind = parse_heuristic_kind(h);
  }
  std::string name = body;
  std::optional<std::string> param;
  const auto colon = body.find(':');
  if (colon != std::string::npos) {
    name = trim(body.substr(0, colon));
    param = trim(body.substr(colon + 1));
  }
  if (name == "full") {
    m.kind = MethodKind::Full;
    if (param) throw Error(ErrorCode::Parse, "method 'full' takes no parameter");
  } else if (name == "tunnel" || name == "delta") {
    m.kind = name == "tunnel" ? MethodKind::Tunnel : MethodKind::Delta;
    if (!param) throw Error(ErrorCode::Parse, "method '" + name + "' needs a parameter, e.g. " + name + ":1.0");
    m.param = parse_double(*param, "method parameter");
  } else if (name == "delta_anytime") {
    m.kind = MethodKind::DeltaAnytime;
    if (!param) throw Error(ErrorCode::Parse, "method 'delta_anytime' needs delta0[/step]");
    const auto slash = param->find('/');
    m.param = parse_double(param->substr(0, slash), "delta0");
    if (slash != std::string::npos) m.step = parse_double(param->substr(slash + 1), "delta step");
  } else {
    throw Error(ErrorCode::Parse, "unknown method: '" + name + "'");
  }
  return m;
}

std::vector<MethodConfig> Scenario::method_configs() const {
  std::vector<MethodConfig> out;
  if (!trim(methods).empty()) {
    for (const std::string& item : split(methods, ',')) {
      if (trim(item).empty()) throw Error(ErrorCode::Parse, "empty entry in method list");
      out.push_back(parse_method(item, heuristic));
    }
    return out;
  }
  std::string text = method;
  if (param) {
    text += ":" + format_number(*param);
    if (method == "delta_anytime") text += "/" + format_number(step);
  }
  out.push_back(parse_method(text, heuristic));
  return out;
}

RunSettings Scenario::run_settings() const {
  return RunSettings{limits, budget_s, delta_max, reexpansions};
}

void Scenario::validate() const {
  lattice.validate();
  if (map_file.empty()) {
    if (map_axes != 2 && map_axes != 3) throw Error(ErrorCode::InvalidArgument, "map_axes must be 2 or 3");
    if (!(map_density >= 0.0 && map_density <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "map_density must lie in [0, 1]");
    }
  }
  const auto configs = method_configs();
  if (configs.empty()) throw Error(ErrorCode::InvalidArgument, "no methods configured");
  for (const MethodConfig& m : configs) {
    if (m.param < 0.0) throw Error(ErrorCode::InvalidArgument, "method parameters must be >= 0");
    if (m.kind == MethodKind::DeltaAnytime && !(m.step > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "anytime delta step must be > 0");
    }
    if (!(m.heuristic.weight >= 1.0)) throw Error(ErrorCode::InvalidArgument, "heuristic weight must be >= 1");
    if (m.heuristic.kind == HeuristicKind::DeltaDistance &&
        (m.kind == MethodKind::Full || m.kind == MethodKind::Tunnel)) {
      throw Error(ErrorCode::InvalidArgument, "the delta_distance heuristic needs a delta method");
    }
    if (m.heuristic.kind == HeuristicKind::VelocityProfile && lattice.order != Order::Second) {
      throw Error(ErrorCode::Unsupported, "the velocity_profile heuristic needs a second-order lattice");
    }
  }
  if (!(budget_s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "budget must be >= 0");
  if (!(limits.max_time_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_time must be > 0");
}

void apply_setting(Scenario& s, const std::string& raw_key, const std::string& raw_value, const std::string& base_dir) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  auto path = [&](const std::string& p) {
    if (p.empty() || base_dir.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (std::filesystem::path(base_dir) / p).string();
  };
  auto number = [&] { return parse_double(value, key); };
  auto integer = [&] { return parse_integer(value, key); };

  if (key == "map") {
    s.map_file = path(value);
  } else if (key == "map_seed") {
    s.map_seed = static_cast<std::uint64_t>(integer());
  } else if (key == "map_dims") {
    const auto d = parse_integers(value, key);
    if (d.size() != 2 && d.size() != 3) throw Error(ErrorCode::Parse, "map_dims needs 2 or 3 integers");
    s.map_axes = static_cast<int>(d.size());
    s.map_dims = {static_cast<int>(d[0]), static_cast<int>(d[1]), d.size() == 3 ? static_cast<int>(d[2]) : 1};
  } else if (key == "map_density") {
    s.map_density = number();
  } else if (key == "order") {
    if (value == "second" || value == "2") {
      s.lattice.order = Order::Second;
    } else if (value == "third" || value == "3") {
      s.lattice.order = Order::Third;
    } else {
      throw Error(ErrorCode::Parse, "order must be second or third");
    }
  } else if (key == "rho") {
    s.lattice.rho = number();
  } else if (key == "tau") {
    s.lattice.tau = number();
  } else if (key == "v_max") {
    s.lattice.v_max = number();
  } else if (key == "a_max") {
    s.lattice.a_max = number();
  } else if (key == "u_max") {
    s.lattice.u_max = number();
  } else if (key == "du") {
    s.lattice.du = number();
  } else if (key == "resolution") {
    s.lattice.resolution = number();
  } else if (key == "methods") {
    s.methods = value;
  } else if (key == "method") {
    s.method = value;
  } else if (key == "param") {
    s.param = number();
  } else if (key == "step") {
    s.step = number();
  } else if (key == "heuristic") {
    s.heuristic.kind = parse_heuristic_kind(value);
  } else if (key == "weight") {
    s.heuristic.weight = number();
  } else if (key == "max_expansions") {
    const long long n = integer();
    if (n < 0) throw Error(ErrorCode::Parse, "max_expansions must be >= 0");
    s.limits.max_expansions = static_cast<std::size_t>(n);
  } else if (key == "max_time") {
    s.limits.max_time_s = number();
  } else if (key == "budget") {
    s.budget_s = number();
  } else if (key == "delta_max") {
    s.delta_max = number();
  } else if (key == "reexpansions") {
    s.reexpansions = static_cast<int>(integer());
  } else if (key == "tasks") {
    s.task_file = path(value);
  } else if (key == "task") {
    const auto v = parse_integers(value, key);
    if (v.size() != 4 && v.size() != 6) throw Error(ErrorCode::Parse, "task needs sx sy [sz] gx gy [gz]");
    const int axes = static_cast<int>(v.size() / 2);
    Task t;
    t.id = static_cast<int>(s.tasks.size());
    for (int a = 0; a < axes; ++a) {
      t.start[a] = static_cast<int>(v[a]);
      t.goal[a] = static_cast<int>(v[axes + a]);
    }
    s.tasks.push_back(t);
  } else if (key == "task_count") {
    const long long n = integer();
    if (n < 0) throw Error(ErrorCode::Parse, "task_count must be >= 0");
    s.task_count = static_cast<std::size_t>(n);
  } else if (key == "task_seed") {
    s.task_seed = static_cast<std::uint64_t>(integer());
  } else {
    throw Error(ErrorCode::Parse, "unknown scenario key: '" + key + "'");
  }
}

Scenario parse_scenario(std::istream& in, const std::string& base_dir) {
  Scenario s;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Parse, "scenario line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(s, line.substr(0, eq), line.substr(eq + 1), base_dir);
    } catch (const Error& e) {
      throw Error(e.code(), "scenario line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open scenario: " + path);
  return parse_scenario(in, std::filesystem::path(path).parent_path().string());
}

GridMap scenario_map(const Scenario& s) {
  if (!s.map_file.empty()) return load_map_file(s.map_file);
  return generate_random_map(s.map_seed, s.map_axes, s.map_dims, s.lattice.resolution, s.map_density);
}

std::vector<Task> scenario_tasks(const Scenario& s, const GridMap& map) {
  std::vector<Task> tasks;
  if (!s.tasks.empty()) {
    tasks = s.tasks;
  } else if (!s.task_file.empty()) {
    tasks = load_tasks_file(s.task_file);
  } else {
    return generate_tasks(map, s.task_count, s.task_seed);
  }
  for (const Task& t : tasks) {
    if (!map.is_free(t.start) || !map.is_free(t.goal)) {
      throw Error(ErrorCode::InvalidArgument, "task " + std::to_string(t.id) + ": start or goal is not free");
    }
  }
  return tasks;
}

MethodOutcome run_method(const GridMap& map, const LatticeConfig& config, const Task& task,
                         const MethodConfig& method, const RunSettings& settings) {
  using Clock = std::chrono::steady_clock;
  MethodOutcome out;
  const auto t0 = Clock::now();
  LatticeState start;
  start.position = task.start;
  const GoalSpec goal{task.goal};
  try {
    if (method.kind == MethodKind::DeltaAnytime) {
      AnytimeOptions opt;
      opt.delta0 = method.param;
      opt.delta_step = method.step;
      opt.budget_s = settings.budget_s;
      opt.delta_max = settings.delta_max;
      opt.iteration_limits = settings.limits;
      opt.heuristic = method.heuristic;
      opt.planner.reexpansions_per_iteration = settings.reexpansions;
      AnytimeResult r = plan_anytime(map, start, goal, config, opt);
      out.status = r.status;
      out.trajectory = std::move(r.trajectory);
      out.stats = std::move(r.stats);
      out.final_delta = r.final_delta;
      if (r.delta_space) out.space = SearchSpace::delta(r.delta_space);
    } else {
      std::shared_ptr<DeltaSpace> ds;
      std::optional<SearchSpace> space;
      if (method.kind == MethodKind::Full) {
        space = SearchSpace::full(map);
      } else if (method.kind == MethodKind::Tunnel) {
        ds = std::make_shared<DeltaSpace>(map, task.start, task.goal, 0.0);
        space = tunnel_from_delta(*ds, method.param);
      } else {
        ds = std::make_shared<DeltaSpace>(map, task.start, task.goal, method.param);
        space = SearchSpace::delta(ds);
        out.final_delta = method.param;
      }
      Planner planner(map, config, Heuristic(method.heuristic, config, task.goal, ds),
                      PlannerOptions{settings.reexpansions});
      PlanResult r = planner.plan(*space, start, goal, settings.limits);
      out.status = r.status;
      out.trajectory = std::move(r.trajectory);
      out.stats = std::move(r.stats);
      out.space = std::move(space);
    }
  } catch (const Error& e) {
    out.status = PlanStatus::NoSolution;
    out.trajectory.reset();
    if (e.code() == ErrorCode::NoPath) {
      out.no_grid_path = true;
    } else {
      out.error = e.what();
    }
  }
  out.stats.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  out.stats.success = out.trajectory.has_value();
  out.stats.cost = out.trajectory ? std::optional<double>(out.trajectory->total_cost) : std::nullopt;
  return out;
}

BenchReport run_benchmark(const GridMap& map, const std::vector<Task>& tasks, const LatticeConfig& config,
                          const std::vector<MethodConfig>& methods, const RunSettings& settings,
                          const RunObserver& observer) {
  BenchReport report;
  std::vector<Task> ordered = tasks;
  std::stable_sort(ordered.begin(), ordered.end(), [](const Task& a, const Task& b) { return a.id < b.id; });
  for (const Task& task : ordered) {
    for (const MethodConfig& m : methods) {
      const MethodOutcome outcome = run_method(map, config, task, m, settings);
      if (observer) observer(task, m, outcome);
      ResultRow row;
      row.task_id = std::to_string(task.id);
      row.method = to_string(m.kind);
      row.param = m.param_string();
      row.heuristic = to_string(m.heuristic.kind);
      row.weight = m.heuristic.weight;
      row.success = outcome.trajectory ? 1.0 : 0.0;
      row.planning_time_ms = outcome.stats.wall_time_s * 1000.0;
      row.expansions = static_cast<double>(outcome.stats.expansions);
      if (outcome.trajectory) {
        row.cost = outcome.trajectory->total_cost;
        row.duration_s = outcome.trajectory->duration;
      }
      row.iterations = static_cast<double>(outcome.stats.iterations.size());
      report.rows.push_back(std::move(row));
    }
  }
  report.aggregates = aggregate_rows(report.rows, methods);
  return report;
}

BenchReport run_scenario(const Scenario& scenario, const RunObserver& observer) {
  scenario.validate();
  const GridMap map = scenario_map(scenario);
  LatticeConfig config = scenario.lattice;
  config.num_axes = map.num_axes();
  if (std::abs(config.resolution - map.resolution()) > 1e-12 * map.resolution()) {
    throw Error(ErrorCode::InvalidArgument, "scenario resolution differs from the map resolution");
  }
  const std::vector<Task> tasks = scenario_tasks(scenario, map);
  return run_benchmark(map, tasks, config, scenario.method_configs(), scenario.run_settings(), observer);
}

std::vector<ResultRow> aggregate_rows(const std::vector<ResultRow>& rows, const std::vector<MethodConfig>& methods) {
  std::vector<std::string> keys;
  for (const MethodConfig& m : methods) keys.push_back(method_key(m));

  std::map<std::string, std::set<std::string>> solved_by;  // task -> keys that solved it
  std::set<std::string> all_tasks;
  for (const ResultRow& r : rows) {
    if (r.task_id == "aggregate") continue;
    all_tasks.insert(r.task_id);
    if (r.success > 0.5) solved_by[r.task_id].insert(method_key(r.method, r.param, r.heuristic, r.weight));
  }
  const std::set<std::string> unique_keys(keys.begin(), keys.end());
  std::set<std::string> common;
  for (const auto& [task, solvers] : solved_by) {
    if (std::includes(solvers.begin(), solvers.end(), unique_keys.begin(), unique_keys.end())) common.insert(task);
  }

  std::vector<ResultRow> out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const MethodConfig& m = methods[i];
    ResultRow agg;
    agg.task_id = "aggregate";
    agg.method = to_string(m.kind);
    agg.param = m.param_string();
    agg.heuristic = to_string(m.heuristic.kind);
    agg.weight = m.heuristic.weight;
    std::size_t total = 0, solved = 0, n = 0;
    double time = 0.0, expansions = 0.0, cost = 0.0, duration = 0.0, iterations = 0.0;
    for (const ResultRow& r : rows) {
      if (r.task_id == "aggregate" || method_key(r.method, r.param, r.heuristic, r.weight) != keys[i]) continue;
      ++total;
      if (r.success > 0.5) ++solved;
      if (!common.count(r.task_id)) continue;
      ++n;
      time += r.planning_time_ms;
      expansions += r.expansions;
      cost += r.cost.value_or(0.0);
      duration += r.duration_s.value_or(0.0);
      iterations += r.iterations;
    }
    agg.success = total ? static_cast<double>(solved) / static_cast<double>(total) : 0.0;
    if (n > 0) {
      const double dn = static_cast<double>(n);
      agg.planning_time_ms = time / dn;
      agg.expansions = expansions / dn;
      agg.cost = cost / dn;
      agg.duration_s = duration / dn;
      agg.iterations = iterations / dn;
    }
    out.push_back(std::move(agg));
  }
  return out;
}

void write_csv(const BenchReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  auto emit = [&](const ResultRow& r) {
    out << r.task_id << ',' << r.method << ',' << r.param << ',' << r.heuristic << ',' << format_number(r.weight)
        << ',' << format_number(r.success) << ',' << format_number(r.planning_time_ms) << ','
        << format_number(r.expansions) << ',' << (r.cost ? format_number(*r.cost) : "") << ','
        << (r.duration_s ? format_number(*r.duration_s) : "") << ',' << format_number(r.iterations) << '\n';
  };
  for (const ResultRow& r : report.rows) emit(r);
  for (const ResultRow& r : report.aggregates) emit(r);
}

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "csv: empty input");
  if (trim(line) != kCsvHeader) throw Error(ErrorCode::Parse, "csv: unexpected header");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 11) throw Error(ErrorCode::Parse, "csv: expected 11 fields: " + line);
    ResultRow r;
    r.task_id = f[0];
    r.method = f[1];
    r.param = f[2];
    r.heuristic = f[3];
    r.weight = parse_double(f[4], "weight");
    r.success = parse_double(f[5], "success");
    r.planning_time_ms = parse_double(f[6], "planning_time_ms");
    r.expansions = parse_double(f[7], "expansions");
    if (!f[8].empty()) r.cost = parse_double(f[8], "cost");
    if (!f[9].empty()) r.duration_s = parse_double(f[9], "duration_s");
    r.iterations = parse_double(f[10], "iterations");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace dsp
