#include "lattice.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "error.hpp"

namespace dsp {
namespace {

constexpr double kIndexSlack = 1e-9;

std::optional<LatticeState> try_step(const LatticeState& s, const AxisIndex& k,
                                     const LatticeConfig& config) {
  const int vmax = config.max_velocity_index();
  LatticeState next = s;
  for (int a = 0; a < config.num_axes; ++a) {
    if (config.order == Order::Second) {
      next.velocity[a] = s.velocity[a] + k[a];
      next.acceleration[a] = 0;
    } else {
      next.acceleration[a] = s.acceleration[a] + k[a];
      next.velocity[a] = s.velocity[a] + 2 * s.acceleration[a] + k[a];
      if (std::abs(next.acceleration[a]) > config.max_acceleration_index()) return std::nullopt;
    }
    if (std::abs(next.velocity[a]) > vmax) return std::nullopt;
  }
  // Displacement of the continuous polynomial, measured from the start cell center.
  ContinuousState rel;
  Vec3 u{0.0, 0.0, 0.0};
  for (int a = 0; a < config.num_axes; ++a) {
    rel.v[a] = s.velocity[a] * config.velocity_unit();
    if (config.order == Order::Third) rel.a[a] = s.acceleration[a] * config.acceleration_unit();
    u[a] = k[a] * config.du;
  }
  const ContinuousState moved = evolve(rel, u, config.tau, config.order, config.num_axes);
  for (int a = 0; a < config.num_axes; ++a) {
    next.position[a] = s.position[a] + static_cast<int>(std::lround(moved.p[a] / config.resolution));
  }
  return next;
}

void check_input(const AxisIndex& k, const LatticeConfig& config) {
  for (int a = 0; a < config.num_axes; ++a) {
    if (std::abs(k[a]) > config.input_steps()) {
      throw Error(ErrorCode::InvalidArgument, "input exceeds u_max");
    }
  }
  for (int a = config.num_axes; a < 3; ++a) {
    if (k[a] != 0) throw Error(ErrorCode::InvalidArgument, "input on an unused axis");
  }
}

}  // namespace

void LatticeConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (num_axes != 2 && num_axes != 3) fail("lattice must have 2 or 3 axes");
  if (!(tau > 0.0)) fail("tau must be > 0");
  if (!(rho >= 0.0)) fail("rho must be >= 0");
  if (!(du > 0.0)) fail("du must be > 0");
  if (!(u_max >= 0.0)) fail("u_max must be >= 0");
  const double steps = u_max / du;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    fail("u_max must be an integer multiple of du");
  }
  if (!(v_max > 0.0)) fail("v_max must be > 0");
  if (!(a_max > 0.0)) fail("a_max must be > 0");
  if (!(resolution > 0.0)) fail("resolution must be > 0");
}

int LatticeConfig::input_steps() const { return static_cast<int>(std::lround(u_max / du)); }

double LatticeConfig::velocity_unit() const {
  return order == Order::Second ? du * tau : 0.5 * du * tau * tau;
}

double LatticeConfig::acceleration_unit() const { return du * tau; }

int LatticeConfig::max_velocity_index() const {
  return static_cast<int>(std::floor(v_max / velocity_unit() + kIndexSlack));
}

int LatticeConfig::max_acceleration_index() const {
  return static_cast<int>(std::floor(a_max / acceleration_unit() + kIndexSlack));
}

std::size_t LatticeStateHash::operator()(const LatticeState& s) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](int v) {
    h ^= static_cast<std::uint32_t>(v);
    h *= 0x100000001b3ull;
    h ^= h >> 31;
  };
  mix(s.position.x);
  mix(s.position.y);
  mix(s.position.z);
  for (int v : s.velocity) mix(v);
  for (int a : s.acceleration) mix(a);
  return static_cast<std::size_t>(h);
}

double primitive_cost(std::span<const double> u, double tau, double rho) {
  double sq = 0.0;
  for (double c : u) sq += c * c;
  return sq * tau + rho * tau;
}

ContinuousState to_continuous(const LatticeState& s, const LatticeConfig& config, const GridMap& map) {
  ContinuousState c;
  c.p = map.center(s.position);
  for (int a = 0; a < config.num_axes; ++a) {
    c.v[a] = s.velocity[a] * config.velocity_unit();
    if (config.order == Order::Third) c.a[a] = s.acceleration[a] * config.acceleration_unit();
  }
  return c;
}

ContinuousState evolve(const ContinuousState& s, const Vec3& u, double t, Order order, int num_axes) {
  ContinuousState out = s;
  for (int a = 0; a < num_axes; ++a) {
    if (order == Order::Second) {
      out.p[a] = s.p[a] + s.v[a] * t + 0.5 * u[a] * t * t;
      out.v[a] = s.v[a] + u[a] * t;
      out.a[a] = 0.0;
    } else {
      out.p[a] = s.p[a] + s.v[a] * t + 0.5 * s.a[a] * t * t + u[a] * t * t * t / 6.0;
      out.v[a] = s.v[a] + s.a[a] * t + 0.5 * u[a] * t * t;
      out.a[a] = s.a[a] + u[a] * t;
    }
  }
  return out;
}

LatticeState integrate(const LatticeState& s, const AxisIndex& input_index, const LatticeConfig& config) {
  check_input(input_index, config);
  auto next = try_step(s, input_index, config);
  if (!next) throw Error(ErrorCode::BoundExceeded, "primitive leaves the velocity/acceleration bounds");
  return *next;
}

int sample_intervals(const ContinuousState& start, const Vec3& u, const LatticeConfig& config) {
  const double tau = config.tau;
  double sq = 0.0;
  for (int a = 0; a < config.num_axes; ++a) {
    // |v(t)| is maximal at an end point or, for third order, at the vertex of the parabola.
    auto vel = [&](double t) {
      return config.order == Order::Second ? start.v[a] + u[a] * t
                                           : start.v[a] + start.a[a] * t + 0.5 * u[a] * t * t;
    };
    double peak = std::max(std::abs(vel(0.0)), std::abs(vel(tau)));
    if (config.order == Order::Third && u[a] != 0.0) {
      const double t_vertex = -start.a[a] / u[a];
      if (t_vertex > 0.0 && t_vertex < tau) peak = std::max(peak, std::abs(vel(t_vertex)));
    }
    sq += peak * peak;
  }
  const double travel_bound = std::sqrt(sq) * tau;
  const int needed = static_cast<int>(std::ceil(travel_bound / (0.5 * config.resolution)));
  return std::max(4, needed);
}

MotionPrimitive make_primitive(const LatticeState& s, const AxisIndex& input_index,
                               const LatticeConfig& config, const GridMap& map) {
  MotionPrimitive prim;
  prim.start = s;
  prim.end = integrate(s, input_index, config);
  prim.input_index = input_index;
  for (int a = 0; a < config.num_axes; ++a) prim.input[a] = input_index[a] * config.du;
  prim.duration = config.tau;
  prim.cost = primitive_cost(std::span<const double>(prim.input.data(), static_cast<std::size_t>(config.num_axes)),
                             config.tau, config.rho);
  const ContinuousState c0 = to_continuous(s, config, map);
  const int n = sample_intervals(c0, prim.input, config);
  prim.samples.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double t = config.tau * j / n;
    prim.samples.push_back(evolve(c0, prim.input, t, config.order, config.num_axes).p);
  }
  return prim;
}

bool collision_free(const MotionPrimitive& primitive, const GridMap& map) {
  for (const Point& p : primitive.samples) {
    if (!map.is_free(map.locate(p))) return false;
  }
  return map.is_free(primitive.end.position);
}

std::optional<Transition> try_transition(const LatticeState& s, const AxisIndex& input_index,
                                         const LatticeConfig& config, const GridMap& map) {
  auto end = try_step(s, input_index, config);
  if (!end || !map.is_free(end->position)) return std::nullopt;
  Vec3 u{0.0, 0.0, 0.0};
  for (int a = 0; a < config.num_axes; ++a) u[a] = input_index[a] * config.du;
  const ContinuousState c0 = to_continuous(s, config, map);
  const int n = sample_intervals(c0, u, config);
  for (int j = 0; j <= n; ++j) {
    const double t = config.tau * j / n;
    if (!map.is_free(map.locate(evolve(c0, u, t, config.order, config.num_axes).p))) return std::nullopt;
  }
  Transition tr;
  tr.end = *end;
  tr.cost = primitive_cost(std::span<const double>(u.data(), static_cast<std::size_t>(config.num_axes)),
                           config.tau, config.rho);
  return tr;
}

std::vector<AxisIndex> input_grid(const LatticeConfig& config) {
  const int k = config.input_steps();
  std::vector<AxisIndex> out;
  const int zr = config.num_axes == 3 ? k : 0;
  for (int ux = -k; ux <= k; ++ux) {
    for (int uy = -k; uy <= k; ++uy) {
      for (int uz = -zr; uz <= zr; ++uz) out.push_back({ux, uy, uz});
    }
  }
  return out;
}

std::vector<std::pair<MotionPrimitive, LatticeState>> successors(const LatticeState& s,
                                                                  const LatticeConfig& config,
                                                                  const GridMap& map) {
  std::vector<std::pair<MotionPrimitive, LatticeState>> out;
  for (const AxisIndex& k : input_grid(config)) {
    if (!try_step(s, k, config)) continue;
    MotionPrimitive prim = make_primitive(s, k, config, map);
    if (!collision_free(prim, map)) continue;
    LatticeState end = prim.end;
    out.emplace_back(std::move(prim), end);
  }
  return out;
}

bool within_bounds(const LatticeState& s, const LatticeConfig& config) {
  for (int a = 0; a < config.num_axes; ++a) {
    if (std::abs(s.velocity[a]) > config.max_velocity_index()) return false;
    if (config.order == Order::Third && std::abs(s.acceleration[a]) > config.max_acceleration_index()) {
      return false;
    }
  }
  return true;
}

}  // namespace dsp
