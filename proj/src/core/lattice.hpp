#pragma once

#include <array>
#include <compare>
#include <optional>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "grid_map.hpp"

namespace dsp {

enum class Order { Second = 2, Third = 3 };

using AxisIndex = std::array<int, 3>;
using Vec3 = std::array<double, 3>;

/// Parameters of the motion-primitive lattice. Bounds are per axis.
///
/// Velocities are stored as integer multiples of `velocity_unit()`, accelerations (third order)
/// as multiples of `acceleration_unit()`. Both units are chosen so that constant-input
/// integration over `tau` lands exactly on the lattice:
///   second order: v' = v + u tau            -> unit du*tau
///   third order:  a' = a + u tau            -> unit du*tau
///                 v' = v + a tau + u tau^2/2 -> unit du*tau^2/2
struct LatticeConfig {
  Order order = Order::Second;
  int num_axes = 2;
  double rho = 10.0;
  double tau = 1.0;
  double v_max = 3.0;
  double a_max = 1.0;
  double u_max = 1.0;
  double du = 0.5;
  double resolution = 1.0;

  /// Throws Error(InvalidArgument) if any invariant fails.
  void validate() const;

  int input_steps() const;  // u_max / du
  double velocity_unit() const;
  double acceleration_unit() const;
  int max_velocity_index() const;
  int max_acceleration_index() const;
};

struct LatticeState {
  Cell position;
  AxisIndex velocity{0, 0, 0};
  AxisIndex acceleration{0, 0, 0};  // always zero for second order

  friend auto operator<=>(const LatticeState&, const LatticeState&) = default;
};

struct LatticeStateHash {
  std::size_t operator()(const LatticeState& s) const noexcept;
};

/// Metric position, velocity and acceleration.
struct ContinuousState {
  Vec3 p{0.0, 0.0, 0.0};
  Vec3 v{0.0, 0.0, 0.0};
  Vec3 a{0.0, 0.0, 0.0};
};

struct MotionPrimitive {
  AxisIndex input_index{0, 0, 0};  // input = input_index * du
  Vec3 input{0.0, 0.0, 0.0};
  double duration = 0.0;
  LatticeState start;
  LatticeState end;
  double cost = 0.0;
  std::vector<Point> samples;  // continuous polynomial, t = 0 .. duration
};

/// ||u||^2 tau + rho tau.
double primitive_cost(std::span<const double> u, double tau, double rho);

ContinuousState to_continuous(const LatticeState& s, const LatticeConfig& config, const GridMap& map);

/// Closed-form constant-input evolution of a double (second order) or triple (third order)
/// integrator after time t.
ContinuousState evolve(const ContinuousState& s, const Vec3& u, double t, Order order, int num_axes);

/// Applies input_index*du for tau. The position snaps to the nearest cell center (ties away
/// from zero); velocity and acceleration land exactly on the lattice.
/// Throws Error(BoundExceeded) if the end velocity or acceleration leaves its bound, and
/// Error(InvalidArgument) if the input itself exceeds u_max.
LatticeState integrate(const LatticeState& s, const AxisIndex& input_index, const LatticeConfig& config);

/// Builds the primitive, including its collision sample points. Bound violations throw as in
/// `integrate`.
MotionPrimitive make_primitive(const LatticeState& s, const AxisIndex& input_index,
                               const LatticeConfig& config, const GridMap& map);

/// Number of sample intervals used for a primitive (spacing <= resolution/2, at least 4).
int sample_intervals(const ContinuousState& start, const Vec3& u, const LatticeConfig& config);

/// True iff every sample point and the snapped end cell are free.
bool collision_free(const MotionPrimitive& primitive, const GridMap& map);

/// All inputs on the per-axis grid {-u_max, ..., u_max}, in lexicographic order.
std::vector<AxisIndex> input_grid(const LatticeConfig& config);

struct Transition {
  LatticeState end;
  double cost = 0.0;
};

/// End state and cost of applying `input_index`, or nullopt if the input breaks a bound or the
/// primitive collides. Equivalent to make_primitive + collision_free without keeping samples.
std::optional<Transition> try_transition(const LatticeState& s, const AxisIndex& input_index,
                                         const LatticeConfig& config, const GridMap& map);

/// Bound-feasible, collision-free transitions from `s`.
std::vector<std::pair<MotionPrimitive, LatticeState>> successors(const LatticeState& s,
                                                                  const LatticeConfig& config,
                                                                  const GridMap& map);

inline Cell project(const LatticeState& s) { return s.position; }

bool within_bounds(const LatticeState& s, const LatticeConfig& config);

}  // namespace dsp
