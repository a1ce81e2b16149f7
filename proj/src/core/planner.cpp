#include "planner.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>

#include "error.hpp"

namespace dsp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

bool goal_satisfied(const LatticeState& s, const GoalSpec& goal) {
  if (s.position != goal.cell) return false;
  for (int a = 0; a < 3; ++a) {
    if (s.velocity[a] != 0 || s.acceleration[a] != 0) return false;
  }
  return true;
}

const char* to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::Solved:
      return "solved";
    case PlanStatus::NoSolution:
      return "no_solution";
    case PlanStatus::LimitExceeded:
      return "limit_exceeded";
  }
  return "unknown";
}

Planner::Planner(const GridMap& map, LatticeConfig config, Heuristic heuristic, PlannerOptions options)
    : map_(&map),
      config_(config),
      heuristic_(std::move(heuristic)),
      options_(options),
      open_(EntryOrder{&nodes_}) {
  config_.validate();
  if (config_.num_axes != map.num_axes()) {
    throw Error(ErrorCode::InvalidArgument, "lattice and map disagree on the number of axes");
  }
  if (std::abs(config_.resolution - map.resolution()) > 1e-12 * map.resolution()) {
    throw Error(ErrorCode::InvalidArgument, "lattice and map disagree on the resolution");
  }
  inputs_ = input_grid(config_);
}

std::uint32_t Planner::node_for(const LatticeState& s) {
  auto [it, inserted] = index_.try_emplace(s, static_cast<std::uint32_t>(nodes_.size()));
  if (inserted) {
    Node n;
    n.state = s;
    nodes_.push_back(n);
  }
  return it->second;
}

void Planner::push(std::uint32_t id) {
  Node& n = nodes_[id];
  n.in_open = true;
  open_.push({n.g + heuristic_(n.state), n.g, id});
}

bool Planner::may_expand(const Node& n) const {
  if (options_.reexpansions_per_iteration < 0) return true;
  const int done = n.expanded_iteration == iteration_ ? n.expansions_in_iteration : 0;
  return done < 1 + options_.reexpansions_per_iteration;
}

std::size_t Planner::open_size() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.in_open; }));
}

std::vector<LatticeState> Planner::boundary_states() const {
  std::vector<LatticeState> out;
  out.reserve(boundary_.size());
  for (auto id : boundary_) out.push_back(nodes_[id].state);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> Planner::g_value(const LatticeState& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return nodes_[it->second].g;
}

PlanResult Planner::plan(const SearchSpace& space, const LatticeState& start, const GoalSpec& goal,
                         const PlanLimits& limits) {
  if (&space.map() != map_) throw Error(ErrorCode::InvalidArgument, "search space belongs to another map");
  if (space.classify(start) != Membership::Inside) {
    throw Error(ErrorCode::InvalidArgument, "start state lies outside the search space");
  }
  if (!map_->is_free(start.position) || !within_bounds(start, config_)) {
    throw Error(ErrorCode::InvalidArgument, "start state collides or violates the state bounds");
  }
  space_ = space;
  goal_ = goal;
  iteration_ = 0;
  nodes_.clear();
  index_.clear();
  open_ = decltype(open_)(EntryOrder{&nodes_});
  boundary_.clear();
  incumbent_.reset();

  const std::uint32_t id = node_for(start);
  nodes_[id].g = 0.0;
  push(id);
  return search(limits);
}

PlanResult Planner::resume(const SearchSpace& grown, const PlanLimits& limits) {
  if (!space_) throw Error(ErrorCode::InvalidArgument, "resume called before plan");
  if (&grown.map() != map_) throw Error(ErrorCode::InvalidArgument, "search space belongs to another map");
  space_ = grown;
  ++iteration_;
  // Boundary states that the grown space now contains join the open list with the g-value of their
  // cheapest recorded parent.
  std::vector<std::uint32_t> still_outside;
  for (auto id : boundary_) {
    Node& n = nodes_[id];
    if (space_->inside_cell(project(n.state))) {
      n.in_boundary = false;
      push(id);
    } else {
      still_outside.push_back(id);
    }
  }
  boundary_ = std::move(still_outside);
  return search(limits);
}

PlanResult Planner::search(const PlanLimits& limits) {
  const auto t0 = Clock::now();
  PlanResult result;
  PlanStatus status = PlanStatus::NoSolution;
  bool stopped = false;

  while (!open_.empty()) {
    const Entry top = open_.top();
    Node& node = nodes_[top.id];
    if (!node.in_open || top.g != node.g) {
      open_.pop();
      continue;
    }
    if (incumbent_ && top.f >= incumbent_->total_cost - cost_tolerance(incumbent_->total_cost)) break;
    if (result.stats.expansions >= limits.max_expansions ||
        ((result.stats.expansions & 255u) == 0 && seconds_since(t0) > limits.max_time_s)) {
      status = PlanStatus::LimitExceeded;
      stopped = true;
      break;
    }
    open_.pop();
    node.in_open = false;

    if (goal_satisfied(node.state, goal_)) {
      Trajectory candidate = reconstruct(top.id);
      if (!incumbent_ || candidate.total_cost < incumbent_->total_cost - cost_tolerance(incumbent_->total_cost)) {
        incumbent_ = std::move(candidate);
      }
      break;
    }
    if (!may_expand(node)) continue;

    if (node.expanded_iteration != iteration_) {
      node.expanded_iteration = iteration_;
      node.expansions_in_iteration = 0;
    }
    ++node.expansions_in_iteration;
    ++result.stats.expansions;
    if (node.ever_expanded) ++result.stats.reexpansions;
    node.ever_expanded = true;

    const LatticeState from = node.state;
    const double g_from = node.g;
    const std::uint32_t from_id = top.id;
    for (const AxisIndex& k : inputs_) {
      const auto tr = try_transition(from, k, config_, *map_);
      if (!tr) continue;
      const double g_new = g_from + tr->cost;
      const bool inside = space_->inside_cell(project(tr->end));
      const std::uint32_t id = node_for(tr->end);  // may reallocate nodes_
      Node& succ = nodes_[id];
      if (!(g_new < succ.g - cost_tolerance(succ.g == kInfinity ? 0.0 : succ.g))) continue;
      if (inside) {
        if (!may_expand(succ)) continue;
        succ.g = g_new;
        succ.parent = from_id;
        succ.input = k;
        push(id);
      } else {
        // Outside the space: infinite masked cost for now, remembered for later growth.
        succ.g = g_new;
        succ.parent = from_id;
        succ.input = k;
        if (!succ.in_boundary) {
          succ.in_boundary = true;
          boundary_.push_back(id);
        }
      }
    }
  }

  if (!stopped) status = incumbent_ ? PlanStatus::Solved : PlanStatus::NoSolution;
  result.status = status;
  result.trajectory = incumbent_;
  result.stats.wall_time_s = seconds_since(t0);
  result.stats.success = incumbent_.has_value();
  if (incumbent_) result.stats.cost = incumbent_->total_cost;
  result.stats.iterations.push_back({0.0, result.stats.expansions, result.stats.cost});
  return result;
}

Trajectory Planner::reconstruct(std::uint32_t goal_id) const {
  std::vector<std::uint32_t> chain;
  for (std::uint32_t id = goal_id; id != kNoParent; id = nodes_[id].parent) {
    chain.push_back(id);
    if (chain.size() > nodes_.size()) throw Error(ErrorCode::InvalidArgument, "parent chain has a cycle");
  }
  std::reverse(chain.begin(), chain.end());
  Trajectory traj;
  traj.states.push_back(nodes_[chain.front()].state);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    MotionPrimitive prim = make_primitive(traj.states.back(), nodes_[chain[i]].input, config_, *map_);
    traj.total_cost += prim.cost;
    traj.states.push_back(prim.end);
    traj.primitives.push_back(std::move(prim));
  }
  traj.duration = static_cast<double>(traj.primitives.size()) * config_.tau;
  return traj;
}

AnytimeResult plan_anytime(const GridMap& map, const LatticeState& start, const GoalSpec& goal,
                           const LatticeConfig& config, const AnytimeOptions& options) {
  if (!(options.delta0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta0 must be >= 0");
  if (!(options.delta_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta step must be > 0");
  const auto t0 = Clock::now();
  AnytimeResult out;
  double delta = options.delta0;

  std::shared_ptr<DeltaSpace> ds;
  try {
    ds = std::make_shared<DeltaSpace>(map, project(start), goal.cell, delta);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPath) throw;
    out.stats.wall_time_s = seconds_since(t0);
    out.final_delta = delta;
    return out;
  }
  out.delta_space = ds;
  const SearchSpace space = SearchSpace::delta(ds);
  Planner planner(map, config, Heuristic(options.heuristic, config, goal.cell, ds), options.planner);

  auto record = [&](const PlanResult& r) {
    out.stats.expansions += r.stats.expansions;
    out.stats.reexpansions += r.stats.reexpansions;
    out.stats.iterations.push_back({delta, r.stats.expansions, r.stats.cost});
    out.status = r.status;
  };

  PlanResult r = planner.plan(space, start, goal, options.iteration_limits);
  record(r);
  while (seconds_since(t0) < options.budget_s) {
    const double next = delta + options.delta_step;
    if (options.delta_max && next > *options.delta_max + cost_tolerance(*options.delta_max)) break;
    if (ds->saturated() && r.status != PlanStatus::LimitExceeded) break;
    delta = next;
    ds->extend(delta);
    r = planner.resume(space, options.iteration_limits);
    record(r);
  }

  out.trajectory = planner.incumbent();
  out.final_delta = delta;
  out.stats.success = out.trajectory.has_value();
  if (out.trajectory) {
    out.stats.cost = out.trajectory->total_cost;
    out.status = PlanStatus::Solved;
  }
  out.stats.wall_time_s = seconds_since(t0);
  return out;
}

double recompute_cost(const Trajectory& trajectory, const LatticeConfig& config) {
  double total = 0.0;
  for (const MotionPrimitive& p : trajectory.primitives) {
    total += primitive_cost(std::span<const double>(p.input.data(), static_cast<std::size_t>(config.num_axes)),
                            config.tau, config.rho);
  }
  return total;
}

void write_trajectory(std::ostream& out, const Trajectory& trajectory, const LatticeConfig& config,
                      const GridMap& map) {
  std::ostringstream s;
  s.precision(17);
  const int n = config.num_axes;
  s << "# delta-space trajectory\n";
  s << "# order=" << (config.order == Order::Second ? "second" : "third") << " num_axes=" << n
    << " rho=" << config.rho << " tau=" << config.tau << " v_max=" << config.v_max << " a_max=" << config.a_max
    << " u_max=" << config.u_max << " du=" << config.du << " resolution=" << config.resolution << '\n';
  s << "# total_cost=" << trajectory.total_cost << " duration=" << trajectory.duration
    << " segments=" << trajectory.primitives.size() << '\n';
  s << "# segment line: t0 u_x u_y [u_z] tau; state line: p .. v .. [a ..]\n";
  auto state_line = [&](const LatticeState& st) {
    const ContinuousState c = to_continuous(st, config, map);
    s << 'p';
    for (int a = 0; a < n; ++a) s << ' ' << c.p[a];
    s << " v";
    for (int a = 0; a < n; ++a) s << ' ' << c.v[a];
    if (config.order == Order::Third) {
      s << " a";
      for (int a = 0; a < n; ++a) s << ' ' << c.a[a];
    }
    s << '\n';
  };
  if (!trajectory.states.empty()) state_line(trajectory.states.front());
  for (std::size_t i = 0; i < trajectory.primitives.size(); ++i) {
    const MotionPrimitive& p = trajectory.primitives[i];
    s << static_cast<double>(i) * config.tau;
    for (int a = 0; a < n; ++a) s << ' ' << p.input[a];
    s << ' ' << p.duration << '\n';
    state_line(trajectory.states[i + 1]);
  }
  out << s.str();
}

TrajectoryRecord read_trajectory(std::istream& in) {
  TrajectoryRecord rec;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string tok;
      while (ls >> tok) {
        if (tok.rfind("total_cost=", 0) == 0) rec.total_cost = std::stod(tok.substr(11));
        if (tok.rfind("duration=", 0) == 0) rec.duration = std::stod(tok.substr(9));
      }
      continue;
    }
    if (line[0] == 'p') {
      ContinuousState st;
      std::string tok;
      Vec3* target = nullptr;
      int axis = 0;
      while (ls >> tok) {
        if (tok == "p" || tok == "v" || tok == "a") {
          target = tok == "p" ? &st.p : (tok == "v" ? &st.v : &st.a);
          axis = 0;
          continue;
        }
        if (!target || axis >= 3) throw Error(ErrorCode::Parse, "trajectory: malformed state line");
        (*target)[axis++] = std::stod(tok);
      }
      rec.states.push_back(st);
      continue;
    }
    std::vector<double> values;
    double v = 0.0;
    while (ls >> v) values.push_back(v);
    if (values.size() < 4) throw Error(ErrorCode::Parse, "trajectory: malformed segment line");
    TrajectoryRecord::Segment seg;
    seg.t0 = values.front();
    seg.tau = values.back();
    seg.input.assign(values.begin() + 1, values.end() - 1);
    rec.segments.push_back(std::move(seg));
  }
  return rec;
}

}  // namespace dsp
