#include "heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>

#include "error.hpp"

namespace dsp {
namespace {

// Exact 1D transfer cost in lattice units: (steps, sum k^2, sum (2 v + k)).
using TransferKey = std::tuple<long, long, long>;

TransferKey add(const TransferKey& a, long k, long v) {
  return {std::get<0>(a) + 1, std::get<1>(a) + k * k, std::get<2>(a) + 2 * v + k};
}

double metric_distance(const Cell& a, const Cell& b, double resolution) {
  double sq = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = (a[i] - b[i]) * resolution;
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace

VelocityProfileTable VelocityProfileTable::precompute(const LatticeConfig& config) {
  config.validate();
  if (config.order != Order::Second) {
    throw Error(ErrorCode::Unsupported, "velocity profile tables exist for second-order lattices only");
  }
  VelocityProfileTable table;
  table.max_index_ = config.max_velocity_index();
  table.unit_ = config.velocity_unit();
  table.tau_ = config.tau;
  table.du_ = config.du;
  table.u_max_ = config.u_max;
  table.v_max_ = config.v_max;
  const int n = table.max_index_;
  const int width = 2 * n + 1;
  const long k_max = config.input_steps();
  table.entries_.assign(static_cast<std::size_t>(width) * width, ProfileEntry{});

  const double effort_unit = config.du * config.du * config.tau;
  const double disp_unit = 0.5 * config.du * config.tau * config.tau;

  for (int from = -n; from <= n; ++from) {
    // Dijkstra over the 1D velocity lattice with lexicographic (time, effort, displacement) cost.
    // Every step adds one tau, so the order is strictly monotone along edges.
    std::vector<std::optional<TransferKey>> best(static_cast<std::size_t>(width));
    using Item = std::pair<TransferKey, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    best[static_cast<std::size_t>(from + n)] = TransferKey{0, 0, 0};
    open.push({TransferKey{0, 0, 0}, from});
    while (!open.empty()) {
      const auto [key, v] = open.top();
      open.pop();
      if (key != *best[static_cast<std::size_t>(v + n)]) continue;
      for (long k = -k_max; k <= k_max; ++k) {
        const long w = v + k;
        if (w < -n || w > n) continue;
        const TransferKey cand = add(key, k, v);
        auto& slot = best[static_cast<std::size_t>(w + n)];
        if (!slot || cand < *slot) {
          slot = cand;
          open.push({cand, static_cast<int>(w)});
        }
      }
    }
    for (int to = -n; to <= n; ++to) {
      const auto& key = best[static_cast<std::size_t>(to + n)];
      if (!key) throw Error(ErrorCode::InvalidArgument, "velocity lattice is not connected (u_max = 0?)");
      ProfileEntry& e = table.entries_[static_cast<std::size_t>(from + n) * width + (to + n)];
      e.t = static_cast<double>(std::get<0>(*key)) * config.tau;
      e.c = static_cast<double>(std::get<1>(*key)) * effort_unit;
      e.d = static_cast<double>(std::get<2>(*key)) * disp_unit;
    }
  }
  return table;
}

std::vector<double> VelocityProfileTable::velocities() const {
  std::vector<double> out;
  for (int i = -max_index_; i <= max_index_; ++i) out.push_back(velocity(i));
  return out;
}

const ProfileEntry& VelocityProfileTable::at(int from_index, int to_index) const {
  if (std::abs(from_index) > max_index_ || std::abs(to_index) > max_index_) {
    throw Error(ErrorCode::InvalidArgument, "velocity index outside the profile table");
  }
  const int width = 2 * max_index_ + 1;
  return entries_[static_cast<std::size_t>(from_index + max_index_) * width + (to_index + max_index_)];
}

void VelocityProfileTable::save(std::ostream& out) const {
  std::ostringstream s;
  s.precision(17);
  s << "# velocity profile table, order=second\n";
  s << "# tau=" << tau_ << " du=" << du_ << " u_max=" << u_max_ << " v_max=" << v_max_
    << " velocity_unit=" << unit_ << " max_index=" << max_index_ << '\n';
  s << "# v1 v2 t c d\n";
  for (int a = -max_index_; a <= max_index_; ++a) {
    for (int b = -max_index_; b <= max_index_; ++b) {
      const ProfileEntry& e = at(a, b);
      s << velocity(a) << ' ' << velocity(b) << ' ' << e.t << ' ' << e.c << ' ' << e.d << '\n';
    }
  }
  out << s.str();
}

VelocityProfileTable VelocityProfileTable::load(std::istream& in) {
  VelocityProfileTable table;
  std::map<std::string, double> header;
  std::string line;
  std::vector<std::array<double, 5>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string tok;
      while (ls >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        try {
          header[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
        } catch (const std::exception&) {
        }
      }
      continue;
    }
    std::istringstream ls(line);
    std::array<double, 5> r{};
    for (double& x : r) {
      if (!(ls >> x)) throw Error(ErrorCode::Parse, "profile table: malformed row: " + line);
    }
    rows.push_back(r);
  }
  for (const char* key : {"tau", "du", "u_max", "v_max", "velocity_unit", "max_index"}) {
    if (!header.count(key)) throw Error(ErrorCode::Parse, std::string("profile table: header lacks ") + key);
  }
  table.tau_ = header["tau"];
  table.du_ = header["du"];
  table.u_max_ = header["u_max"];
  table.v_max_ = header["v_max"];
  table.unit_ = header["velocity_unit"];
  table.max_index_ = static_cast<int>(header["max_index"]);
  const int width = 2 * table.max_index_ + 1;
  if (static_cast<int>(rows.size()) != width * width) {
    throw Error(ErrorCode::Parse, "profile table: row count does not match max_index");
  }
  table.entries_.resize(rows.size());
  for (const auto& r : rows) {
    const int a = static_cast<int>(std::lround(r[0] / table.unit_));
    const int b = static_cast<int>(std::lround(r[1] / table.unit_));
    if (std::abs(a) > table.max_index_ || std::abs(b) > table.max_index_) {
      throw Error(ErrorCode::Parse, "profile table: velocity outside the header range");
    }
    table.entries_[static_cast<std::size_t>(a + table.max_index_) * width + (b + table.max_index_)] =
        ProfileEntry{r[2], r[3], r[4]};
  }
  return table;
}

double velocity_profile_estimate(const LatticeState& state, double dist, const VelocityProfileTable& table,
                                 double rho, double weight) {
  int v = 0;
  for (int a = 0; a < 3; ++a) v = std::max(v, std::abs(state.velocity[a]));
  v = std::min(v, table.max_index());
  if (v == 0 && dist <= 0.0) return 0.0;

  const double slack = cost_tolerance(dist);
  int cap = 0;
  for (int candidate = table.max_index(); candidate >= 1; --candidate) {
    if (table.at(v, candidate).d + table.at(candidate, 0).d <= dist + slack) {
      cap = candidate;
      break;
    }
  }
  double cruise = 0.0;
  if (cap == 0) {
    cap = 1;  // no positive velocity fits: slowest transfer, no cruise phase
  } else {
    cruise = std::max(0.0, dist - table.at(v, cap).d - table.at(cap, 0).d) / table.velocity(cap);
  }
  const double time = cruise + table.at(v, cap).t + table.at(cap, 0).t;
  const double effort = table.at(v, cap).c + table.at(cap, 0).c;
  return weight * (effort + rho * time);
}

double delta_distance_estimate(const LatticeState& state, const DeltaSpace& ds, const LatticeConfig& config,
                               double weight) {
  return weight * config.rho * ds.cost_to_goal(project(state)) / config.v_max;
}

double straight_line_estimate(const LatticeState& state, const LatticeState& goal, const LatticeConfig& config,
                              double weight) {
  return weight * config.rho * metric_distance(state.position, goal.position, config.resolution) / config.v_max;
}

std::string to_string(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::Zero:
      return "zero";
    case HeuristicKind::StraightLine:
      return "straight_line";
    case HeuristicKind::DeltaDistance:
      return "delta_distance";
    case HeuristicKind::VelocityProfile:
      return "velocity_profile";
  }
  return "zero";
}

HeuristicKind parse_heuristic_kind(const std::string& name) {
  if (name == "zero") return HeuristicKind::Zero;
  if (name == "straight_line") return HeuristicKind::StraightLine;
  if (name == "delta_distance") return HeuristicKind::DeltaDistance;
  if (name == "velocity_profile") return HeuristicKind::VelocityProfile;
  throw Error(ErrorCode::InvalidArgument, "unknown heuristic: " + name);
}

Heuristic::Heuristic(HeuristicSpec spec, const LatticeConfig& config, Cell goal,
                     std::shared_ptr<const DeltaSpace> ds)
    : spec_(spec), config_(config), goal_(goal), ds_(std::move(ds)) {
  if (!(spec_.weight >= 1.0)) throw Error(ErrorCode::InvalidArgument, "heuristic weight must be >= 1");
  if (spec_.kind == HeuristicKind::DeltaDistance && !ds_) {
    throw Error(ErrorCode::InvalidArgument, "the delta-distance heuristic needs a delta space");
  }
  if (spec_.kind == HeuristicKind::VelocityProfile) {
    table_ = std::make_shared<const VelocityProfileTable>(VelocityProfileTable::precompute(config_));
  }
}

double Heuristic::operator()(const LatticeState& s) const {
  switch (spec_.kind) {
    case HeuristicKind::Zero:
      return 0.0;
    case HeuristicKind::StraightLine: {
      LatticeState goal;
      goal.position = goal_;
      return straight_line_estimate(s, goal, config_, spec_.weight);
    }
    case HeuristicKind::DeltaDistance:
      return delta_distance_estimate(s, *ds_, config_, spec_.weight);
    case HeuristicKind::VelocityProfile: {
      const Cell c = project(s);
      const double dist = ds_ && ds_->contains(c) ? ds_->cost_to_goal(c)
                                                  : metric_distance(c, goal_, config_.resolution);
      return velocity_profile_estimate(s, dist, *table_, config_.rho, spec_.weight);
    }
  }
  return 0.0;
}

}  // namespace dsp
