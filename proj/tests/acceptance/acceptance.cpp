// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "bench.hpp"
#include "error.hpp"
#include "heuristics.hpp"
#include "lowdim_search.hpp"
#include "oracles.hpp"
#include "planner.hpp"
#include "random.hpp"

using namespace dsp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void verdict(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s ... %s (%s)\n", id, title, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

LatticeState at(Cell c) {
  LatticeState s;
  s.position = c;
  return s;
}

std::vector<Cell> free_cells(const GridMap& m) {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < m.cell_count(); ++i) {
    if (m.is_free(m.cell_at(i))) out.push_back(m.cell_at(i));
  }
  return out;
}

// Random map with a connected start/goal pair; retries with fresh seeds as needed.
struct RandomTask {
  GridMap map;
  Cell start;
  Cell goal;
};

RandomTask random_task(Rng& rng, int max_w, int max_h, double max_density, bool allow_same = false) {
  for (;;) {
    const int w = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_w - 1)));
    const int h = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_h - 1)));
    const double density = rng.uniform() * max_density;
    GridMap m = generate_random_map(rng.below(1u << 30), 2, {w, h, 1}, 1.0, density);
    const auto free = free_cells(m);
    if (free.size() < 2) continue;
    const Cell s = free[rng.below(free.size())];
    const Cell g = free[rng.below(free.size())];
    if (s == g && !allow_same) continue;
    if (oracle::dijkstra(m, s)[m.index(g)] == oracle::kInf) continue;
    return {std::move(m), s, g};
  }
}

LatticeConfig tiny_lattice() {
  LatticeConfig c;
  c.order = Order::Second;
  c.num_axes = 2;
  c.rho = 10;
  c.tau = 1;
  c.v_max = 2;
  c.u_max = 1;
  c.du = 1;
  return c;
}

LatticeConfig corridor_lattice() {
  LatticeConfig c;
  c.order = Order::Second;
  c.num_axes = 2;
  c.rho = 10;
  c.tau = 1;
  c.v_max = 3;
  c.u_max = 1;
  c.du = 1;
  return c;
}

std::optional<double> plan_cost(const GridMap& m, const LatticeConfig& c, const SearchSpace& space, Cell s, Cell g,
                                HeuristicSpec h, std::shared_ptr<const DeltaSpace> ds = nullptr) {
  Planner p(m, c, Heuristic(h, c, g, std::move(ds)));
  const PlanResult r = p.plan(space, at(s), {g});
  if (!r.trajectory) return std::nullopt;
  return r.trajectory->total_cost;
}

// Masking soundness is checked on every run that goes through the benchmark harness.
std::size_t g_masked_runs = 0;
std::size_t g_mask_violations = 0;

void check_masking(const Task&, const MethodConfig&, const MethodOutcome& o) {
  if (!o.trajectory) return;
  ++g_masked_runs;
  if (!o.space) {
    ++g_mask_violations;
    return;
  }
  for (const LatticeState& s : o.trajectory->states) {
    if (!o.space->inside_cell(project(s))) ++g_mask_violations;
  }
}

void criterion1() {
  const auto t0 = Clock::now();
  Rng rng(1001);
  std::size_t mismatches = 0, checks = 0;
  for (int i = 0; i < 200; ++i) {
    const RandomTask t = random_task(rng, 30, 30, 0.4, true);
    for (double delta : {0.0, 0.5, 1.0, 2.0}) {
      const DeltaSpace ds(t.map, t.start, t.goal, delta);
      const auto members = ds.members();
      const std::set<Cell> got(members.begin(), members.end());
      if (got != oracle::delta_members(t.map, t.start, t.goal, delta)) ++mismatches;
      ++checks;
    }
  }
  const double secs = seconds_since(t0);
  verdict(1, "delta-space membership equals the two-Dijkstra oracle", mismatches == 0 && secs < 10.0,
          std::to_string(checks) + " sets, " + std::to_string(mismatches) + " mismatches, " + fmt("%.2f s", secs));
}

void criterion2() {
  Rng rng(2002);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const RandomTask t = random_task(rng, 30, 30, 0.35);
    std::vector<double> schedule;
    double d = 0.0;
    const int steps = 1 + static_cast<int>(rng.below(6));
    for (int k = 0; k < steps; ++k) {
      d += rng.uniform() * 1.5;
      if (rng.below(4) == 0) d = std::round(d * 2) / 2;  // hit exact half-meter values too
      schedule.push_back(d);
    }
    DeltaSpace grown(t.map, t.start, t.goal, 0.0);
    for (double s : schedule) extend_delta_space(grown, std::max(s, grown.delta()));
    const DeltaSpace fresh(t.map, t.start, t.goal, grown.delta());
    bool same = grown.members() == fresh.members();
    for (const Cell& c : fresh.members()) {
      same = same && grown.cost_from_start(c) == fresh.cost_from_start(c) &&
             grown.cost_to_goal(c) == fresh.cost_to_goal(c);
    }
    if (!same) ++mismatches;
  }
  verdict(2, "iterative extension equals a direct build", mismatches == 0,
          "100 schedules, " + std::to_string(mismatches) + " mismatches");
}

struct TinyInstance {
  GridMap map;
  Cell start;
  Cell goal;
  double optimum;
};

std::vector<TinyInstance> g_tiny;

void criterion3() {
  const auto t0 = Clock::now();
  Rng rng(3003);
  const LatticeConfig c = tiny_lattice();
  std::size_t mismatches = 0, unsolved = 0;
  double worst = 0.0;
  while (g_tiny.size() < 50) {
    const RandomTask t = random_task(rng, 5, 5, 0.3);
    const oracle::LatticeOptimum best = oracle::layered_optimum(t.map, c, at(t.start), t.goal, 60);
    const auto cost = plan_cost(t.map, c, SearchSpace::full(t.map), t.start, t.goal, {HeuristicKind::Zero, 1.0});
    if (best.cost == oracle::kInf) {
      // Grid-connected but dynamically unreachable; both must agree.
      if (cost) ++mismatches;
      ++unsolved;
      continue;
    }
    if (!cost) {
      ++mismatches;
      continue;
    }
    const double rel = std::abs(*cost - best.cost) / best.cost;
    worst = std::max(worst, rel);
    if (rel > 1e-9) ++mismatches;
    g_tiny.push_back({t.map, t.start, t.goal, best.cost});
  }
  const double secs = seconds_since(t0);
  verdict(3, "full-space optimum equals exhaustive enumeration", mismatches == 0 && secs < 60.0,
          "50 tasks, " + std::to_string(mismatches) + " mismatches, worst rel " + fmt("%.1e", worst) + ", " +
              std::to_string(unsolved) + " unreachable skipped, " + fmt("%.2f s", secs));
}

void criterion4() {
  Rng rng(4004);
  const LatticeConfig c = tiny_lattice();
  const HeuristicSpec h{HeuristicKind::StraightLine, 1.0};
  std::size_t mismatches = 0, unsaturated_mismatches = 0, saturated_mismatches = 0, n = 0;
  while (n < 50) {
    const RandomTask t = random_task(rng, 9, 9, 0.25);
    auto ds = std::make_shared<DeltaSpace>(t.map, t.start, t.goal, t.map.diagonal());
    const auto full = plan_cost(t.map, c, SearchSpace::full(t.map), t.start, t.goal, h);
    const auto delta = plan_cost(t.map, c, SearchSpace::delta(ds), t.start, t.goal, h);
    if (!full && !delta) continue;
    ++n;
    if (!full || !delta || *full != *delta) {
      ++mismatches;
      const auto reach = oracle::dijkstra(t.map, t.start);
      const auto reachable = static_cast<std::size_t>(
          std::count_if(reach.begin(), reach.end(), [](double d) { return d < oracle::kInf; }));
      if (ds->member_count() < reachable) ++unsaturated_mismatches;
    }
    // Same task once the grid searches have run dry.
    auto all = std::make_shared<DeltaSpace>(t.map, t.start, t.goal, t.map.diagonal());
    while (!all->saturated()) all->extend(2 * all->delta() + 1);
    const auto sat = plan_cost(t.map, c, SearchSpace::delta(all), t.start, t.goal, h);
    if (full != sat) ++saturated_mismatches;
  }
  verdict(4, "delta >= map diagonal reproduces the full-space cost", mismatches == 0,
          "50 tasks, " + std::to_string(mismatches) + " mismatches at delta = diagonal (" +
              std::to_string(unsaturated_mismatches) + " where the delta space misses reachable cells); " +
              std::to_string(saturated_mismatches) + " mismatches once the delta space is saturated");
}

void criterion6() {
  Rng rng(6006);
  const LatticeConfig c = tiny_lattice();
  std::size_t violations = 0, anytime_violations = 0;
  for (int i = 0; i < 100; ++i) {
    const RandomTask t = random_task(rng, 12, 12, 0.2);
    std::optional<double> last;
    for (double delta : {0.0, 1.0, 2.0, 4.0}) {
      auto ds = std::make_shared<DeltaSpace>(t.map, t.start, t.goal, delta);
      const auto cost =
          plan_cost(t.map, c, SearchSpace::delta(ds), t.start, t.goal, {HeuristicKind::Zero, 1.0}, ds);
      if (last && (!cost || *cost > *last)) ++violations;
      if (cost) last = cost;
    }
    AnytimeOptions o;
    o.delta0 = 0.0;
    o.delta_step = 0.5;
    o.delta_max = 4.0;
    o.budget_s = 60.0;
    o.heuristic = {HeuristicKind::Zero, 1.0};
    const AnytimeResult r = plan_anytime(t.map, at(t.start), {t.goal}, c, o);
    std::optional<double> prev;
    for (const IterationRecord& it : r.stats.iterations) {
      if (prev && (!it.cost || *it.cost > *prev)) ++anytime_violations;
      if (it.cost) prev = it.cost;
    }
  }
  verdict(6, "cost is non-increasing in delta and across anytime iterations",
          violations == 0 && anytime_violations == 0,
          "100 tasks, " + std::to_string(violations) + " delta violations, " + std::to_string(anytime_violations) +
              " anytime violations");
}

void criterion7() {
  // (a) straight-line admissibility on the criterion-3 instances.
  const LatticeConfig c = tiny_lattice();
  std::size_t over = 0;
  for (const TinyInstance& t : g_tiny) {
    if (straight_line_estimate(at(t.start), at(t.goal), c) > t.optimum + 1e-9) ++over;
  }
  verdict(7, "(a) straight-line estimate never exceeds the optimum", over == 0 && !g_tiny.empty(),
          std::to_string(g_tiny.size()) + " instances, " + std::to_string(over) + " overestimates");

  // (b) tightness on exactly achievable rest-to-rest distances.
  struct Params {
    double v_max, u_max, du, tau, rho;
  };
  const std::vector<Params> sets{{3, 1, 1, 1, 10}, {4, 2, 2, 0.5, 16}, {2, 1, 1, 1, 10}};
  std::size_t checked = 0, mismatched = 0;
  double worst = 0.0;
  for (const Params& p : sets) {
    LatticeConfig lc;
    lc.v_max = p.v_max;
    lc.u_max = p.u_max;
    lc.du = p.du;
    lc.tau = p.tau;
    lc.rho = p.rho;
    const VelocityProfileTable table = VelocityProfileTable::precompute(lc);
    const double disp_unit = 0.5 * p.du * p.tau * p.tau;
    for (int v = 1; v <= table.max_index() && checked < 20; ++v) {
      for (int m = 0; m <= 2 && checked < 20; ++m) {
        const double dist = table.at(0, v).d + table.at(v, 0).d + m * table.velocity(v) * p.tau;
        // Only distances whose cruise speed is exactly v are achievable without fractional steps.
        int cap = 0;
        for (int k = 1; k <= table.max_index(); ++k) {
          if (table.at(0, k).d + table.at(k, 0).d <= dist + 1e-12) cap = k;
        }
        if (cap != v) continue;
        const long units = std::lround(dist / disp_unit);
        const double estimate = velocity_profile_estimate(LatticeState{}, dist, table, p.rho);
        const double optimum =
            oracle::rest_to_rest_1d(units, table.max_index(), lc.input_steps(), p.du, p.tau, p.rho);
        const double rel = std::abs(estimate - optimum) / optimum;
        worst = std::max(worst, rel);
        if (rel > 1e-9) ++mismatched;
        ++checked;
      }
    }
  }
  verdict(7, "(b) velocity-profile estimate equals the 1D lattice optimum", checked >= 20 && mismatched == 0,
          std::to_string(checked) + " tasks, " + std::to_string(mismatched) + " mismatches, worst rel " +
              fmt("%.1e", worst));

  // (c) a diagonal instance where the velocity-profile estimate overestimates.
  bool found = false;
  std::string detail = "no overestimating instance";
  const VelocityProfileTable table = VelocityProfileTable::precompute(c);
  for (int k = 2; k <= 6 && !found; ++k) {
    const GridMap m(2, {k + 1, k + 1, 1}, 1.0);
    const auto opt = oracle::layered_optimum(m, c, at({0, 0, 0}), {k, k, 0}, 40);
    const auto planned =
        plan_cost(m, c, SearchSpace::full(m), {0, 0, 0}, {k, k, 0}, {HeuristicKind::Zero, 1.0});
    const double estimate = velocity_profile_estimate(at({0, 0, 0}), k * std::sqrt(2.0), table, c.rho);
    if (planned && std::abs(*planned - opt.cost) <= 1e-9 * opt.cost && estimate > opt.cost) {
      found = true;
      detail = "empty " + std::to_string(k + 1) + "x" + std::to_string(k + 1) + " map, (0,0) -> (" +
               std::to_string(k) + "," + std::to_string(k) + "): estimate " + fmt("%.3f", estimate) +
               " > optimum " + fmt("%.3f", opt.cost);
    }
  }
  verdict(7, "(c) velocity-profile estimate overestimates on a diagonal", found, detail);
}

// Corridor corpus shared by criteria 8 to 10.
struct CorpusRun {
  std::map<std::string, std::vector<std::optional<double>>> cost;
  std::map<std::string, std::vector<double>> expansions;
};

std::vector<CorridorWorld> g_corpus;

CorpusRun run_corpus(const std::vector<std::string>& specs, const RunSettings& settings) {
  CorpusRun out;
  std::vector<MethodConfig> methods;
  for (const auto& s : specs) methods.push_back(parse_method(s, {HeuristicKind::StraightLine, 1.0}));
  const LatticeConfig c = corridor_lattice();
  for (const CorridorWorld& w : g_corpus) {
    const BenchReport r = run_benchmark(w.map, {{0, w.start, w.goal}}, c, methods, settings, check_masking);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      out.cost[specs[i]].push_back(r.rows[i].cost);
      out.expansions[specs[i]].push_back(r.rows[i].expansions);
    }
  }
  return out;
}

// Means over the tasks every listed spec solved.
std::map<std::string, std::pair<double, double>> corpus_means(const CorpusRun& run,
                                                              const std::vector<std::string>& specs,
                                                              std::size_t* common_out = nullptr) {
  std::map<std::string, std::pair<double, double>> out;
  std::size_t common = 0;
  for (std::size_t i = 0; i < g_corpus.size(); ++i) {
    bool all = true;
    for (const auto& s : specs) all = all && run.cost.at(s)[i].has_value();
    if (!all) continue;
    ++common;
    for (const auto& s : specs) {
      out[s].first += *run.cost.at(s)[i];
      out[s].second += run.expansions.at(s)[i];
    }
  }
  for (auto& [k, v] : out) {
    v.first /= static_cast<double>(common);
    v.second /= static_cast<double>(common);
  }
  if (common_out) *common_out = common;
  return out;
}

RunSettings corpus_settings() {
  RunSettings rs;
  rs.budget_s = 60.0;
  rs.delta_max = 2.0;
  return rs;
}

void criterion8() {
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 1; seed <= 100; ++seed) g_corpus.push_back(generate_corridor_world(seed));
  const std::vector<std::string> specs{"tunnel:1", "delta:2@straight_line", "delta:2@delta_distance"};
  const CorpusRun run = run_corpus(specs, corpus_settings());
  std::size_t common = 0;
  const auto means = corpus_means(run, specs, &common);
  std::size_t fewer = 0;
  for (std::size_t i = 0; i < g_corpus.size(); ++i) {
    if (run.expansions.at(specs[2])[i] < run.expansions.at(specs[1])[i]) ++fewer;
  }
  const double secs = seconds_since(t0);
  const double share = static_cast<double>(fewer) / static_cast<double>(g_corpus.size());
  const bool ordering = common > 0 && means.at(specs[1]).first < means.at(specs[0]).first &&
                        means.at(specs[2]).first < means.at(specs[0]).first;
  verdict(8, "delta(2) beats tunnel(1) on cost; delta-distance saves expansions",
          ordering && share >= 0.7 && secs < 300.0,
          "mean cost tunnel:1 " + fmt("%.2f", means.at(specs[0]).first) + ", delta:2 " +
              fmt("%.2f", means.at(specs[1]).first) + " (straight_line) / " + fmt("%.2f", means.at(specs[2]).first) +
              " (delta_distance) over " + std::to_string(common) + " common tasks; delta_distance fewer expansions on " +
              fmt("%.0f%%", 100 * share) + "; " + fmt("%.1f s", secs));
}

void criterion9() {
  bool pass = true;
  std::string detail;
  for (const char* h : {"straight_line", "delta_distance"}) {
    const std::string anytime = std::string("delta_anytime:0/0.5@") + h;
    const std::string direct = std::string("delta:2@") + h;
    const CorpusRun run = run_corpus({anytime, direct}, corpus_settings());
    const auto means = corpus_means(run, {anytime, direct});
    const double ratio = means.at(anytime).second / means.at(direct).second;
    const double cost_gap = std::abs(means.at(anytime).first - means.at(direct).first) / means.at(direct).first;
    pass = pass && ratio <= 1.5 && cost_gap <= 0.05;
    detail += std::string(detail.empty() ? "" : "; ") + h + ": expansion ratio " + fmt("%.3f", ratio) +
              ", cost gap " + fmt("%.2f%%", 100 * cost_gap);
  }
  verdict(9, "anytime overhead within 1.5x expansions and 5% cost", pass, detail);
}

void criterion10() {
  bool pass = true;
  std::string detail;
  for (const char* h : {"straight_line", "delta_distance"}) {
    std::vector<std::string> specs;
    for (const char* w : {"1", "1.4", "1.83", "2.2"}) specs.push_back(std::string("delta:2@") + h + "*" + w);
    const CorpusRun run = run_corpus(specs, corpus_settings());
    const auto means = corpus_means(run, specs);
    std::string part = std::string(h) + ":";
    for (std::size_t i = 0; i < specs.size(); ++i) {
      part += " " + fmt("%.0f", means.at(specs[i]).second) + "/" + fmt("%.2f", means.at(specs[i]).first);
      if (i > 0) {
        pass = pass && means.at(specs[i]).second <= means.at(specs[i - 1]).second;
        pass = pass && means.at(specs[i]).first >= means.at(specs[i - 1]).first;
      }
    }
    detail += (detail.empty() ? "" : "; ") + part;
  }
  verdict(10, "weights trade cost for expansions monotonically", pass,
          detail + " (mean expansions/cost for w = 1, 1.4, 1.83, 2.2)");
}

void criterion5() {
  // Also sweep a random map with every method, so tunnels and anytime runs on clutter are covered.
  const GridMap m = generate_random_map(55, 2, {30, 24, 1}, 1.0, 0.15);
  const auto tasks = generate_tasks(m, 20, 5);
  std::vector<MethodConfig> methods;
  for (const char* s : {"full", "tunnel:1", "tunnel:2.5", "delta:0", "delta:1.5", "delta:1.5@delta_distance",
                        "delta_anytime:0/0.5@delta_distance"}) {
    methods.push_back(parse_method(s, {HeuristicKind::StraightLine, 1.0}));
  }
  RunSettings rs;
  rs.budget_s = 60.0;
  rs.delta_max = 3.0;
  rs.limits.max_expansions = 500000;
  run_benchmark(m, tasks, corridor_lattice(), methods, rs, check_masking);
  verdict(5, "trajectories stay inside the active space", g_mask_violations == 0 && g_masked_runs > 0,
          std::to_string(g_masked_runs) + " solved runs checked, " + std::to_string(g_mask_violations) +
              " violations");
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void()>>> suite{
      {1, criterion1}, {2, criterion2}, {3, criterion3},  {4, criterion4}, {6, criterion6},
      {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}, {5, criterion5}};
  for (const auto& [id, run] : suite) {
    try {
      run();
    } catch (const std::exception& e) {
      verdict(id, "aborted", false, e.what());
    }
  }
  std::printf("%s: %d failing criteria\n", g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures);
  return g_failures == 0 ? 0 : 1;
}
