#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "lowdim_search.hpp"

namespace dsp {

/// Minimum-time 1D velocity transfer between two lattice velocities.
struct ProfileEntry {
  double t = 0.0;  // seconds
  double c = 0.0;  // integral of u^2 over the transfer
  double d = 0.0;  // signed displacement, meters

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

/// Precomputed (t, c, d) for every ordered pair of second-order lattice velocities in
/// [-v_max, v_max]. Transfers minimize time, then effort, then displacement.
class VelocityProfileTable {
 public:
  /// Throws Error(Unsupported) for third-order lattices.
  static VelocityProfileTable precompute(const LatticeConfig& config);

  int max_index() const { return max_index_; }
  double velocity_unit() const { return unit_; }
  double velocity(int index) const { return index * unit_; }
  std::vector<double> velocities() const;
  const ProfileEntry& at(int from_index, int to_index) const;

  double tau() const { return tau_; }
  double du() const { return du_; }
  double u_max() const { return u_max_; }
  double v_max() const { return v_max_; }

  /// Text format: `#` header lines echoing the lattice, then `v1 v2 t c d` rows.
  void save(std::ostream& out) const;
  static VelocityProfileTable load(std::istream& in);

  friend bool operator==(const VelocityProfileTable&, const VelocityProfileTable&) = default;

 private:
  int max_index_ = 0;
  double unit_ = 1.0;
  double tau_ = 1.0;
  double du_ = 1.0;
  double u_max_ = 1.0;
  double v_max_ = 1.0;
  std::vector<ProfileEntry> entries_;
};

/// Accelerate-cruise-decelerate cost estimate along `dist` meters, in primitive cost units
/// (effort + rho * time), scaled by `weight`. Not admissible for diagonal motion.
double velocity_profile_estimate(const LatticeState& state, double dist, const VelocityProfileTable& table,
                                 double rho, double weight = 1.0);

/// weight * rho * cost_to_goal / v_max. Throws Error(NotMember) off the delta space.
double delta_distance_estimate(const LatticeState& state, const DeltaSpace& ds, const LatticeConfig& config,
                               double weight = 1.0);

/// weight * rho * |p - p_goal| / v_max.
double straight_line_estimate(const LatticeState& state, const LatticeState& goal, const LatticeConfig& config,
                              double weight = 1.0);

enum class HeuristicKind { Zero, StraightLine, DeltaDistance, VelocityProfile };

std::string to_string(HeuristicKind kind);
HeuristicKind parse_heuristic_kind(const std::string& name);

struct HeuristicSpec {
  HeuristicKind kind = HeuristicKind::Zero;
  double weight = 1.0;
};

/// Cost-to-go functor used by the planner. DeltaDistance requires a delta space; VelocityProfile
/// uses the delta space's cost-to-goal when the cell is a member and the straight-line distance
/// otherwise.
class Heuristic {
 public:
  Heuristic() = default;
  Heuristic(HeuristicSpec spec, const LatticeConfig& config, Cell goal,
            std::shared_ptr<const DeltaSpace> ds = nullptr);

  double operator()(const LatticeState& s) const;
  const HeuristicSpec& spec() const { return spec_; }

 private:
  HeuristicSpec spec_;
  LatticeConfig config_;
  Cell goal_;
  std::shared_ptr<const DeltaSpace> ds_;
  std::shared_ptr<const VelocityProfileTable> table_;
};

}  // namespace dsp
