#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "grid_map.hpp"
#include "heuristics.hpp"
#include "lattice.hpp"
#include "lowdim_search.hpp"
#include "search_space.hpp"

namespace dsp {

/// Goal: the given cell with all velocity (and acceleration) components zero.
struct GoalSpec {
  Cell cell;
};

bool goal_satisfied(const LatticeState& s, const GoalSpec& goal);

struct Trajectory {
  std::vector<LatticeState> states;          // s_0 .. s_n
  std::vector<MotionPrimitive> primitives;   // n primitives
  double total_cost = 0.0;                   // sum of primitive costs
  double duration = 0.0;                     // n * tau
};

struct PlanLimits {
  std::size_t max_expansions = std::numeric_limits<std::size_t>::max();
  double max_time_s = std::numeric_limits<double>::infinity();
};

struct PlannerOptions {
  /// Re-expansions allowed per state and iteration; negative means unlimited.
  int reexpansions_per_iteration = 1;
};

enum class PlanStatus { Solved, NoSolution, LimitExceeded };

const char* to_string(PlanStatus status);

struct IterationRecord {
  double delta = 0.0;
  std::size_t expansions = 0;
  std::optional<double> cost;
};

struct PlanStats {
  /// Pops that generated successors, re-expansions included.
  std::size_t expansions = 0;
  /// Subset of `expansions` that expanded a state already expanded before.
  std::size_t reexpansions = 0;
  double wall_time_s = 0.0;
  std::optional<double> cost;
  bool success = false;
  std::vector<IterationRecord> iterations;
};

struct PlanResult {
  PlanStatus status = PlanStatus::NoSolution;
  std::optional<Trajectory> trajectory;
  PlanStats stats;
};

/// High-dimensional A* over a (pruned) lattice whose search state survives between calls.
///
/// Successors that fall outside the current search space are not discarded: they are kept in a
/// boundary list together with their cheapest parent. `resume` promotes the ones the grown space
/// now contains into the open list and continues the search. The closed list is not carried
/// over; each state may be expanded once plus `reexpansions_per_iteration` times per call.
///
/// The map must outlive the planner.
class Planner {
 public:
  Planner(const GridMap& map, LatticeConfig config, Heuristic heuristic, PlannerOptions options = {});

  /// Starts a fresh search. Throws Error(InvalidArgument) if the start is not Inside or collides.
  PlanResult plan(const SearchSpace& space, const LatticeState& start, const GoalSpec& goal,
                  const PlanLimits& limits = {});
  /// Continues the previous search over `grown`, which must contain the previous space.
  PlanResult resume(const SearchSpace& grown, const PlanLimits& limits = {});

  // Snapshot inspection.
  int iteration() const { return iteration_; }
  std::size_t open_size() const;
  std::vector<LatticeState> boundary_states() const;
  std::optional<double> g_value(const LatticeState& s) const;
  const std::optional<Trajectory>& incumbent() const { return incumbent_; }
  const SearchSpace& space() const { return *space_; }

 private:
  static constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    LatticeState state;
    double g = std::numeric_limits<double>::infinity();
    std::uint32_t parent = kNoParent;
    AxisIndex input{0, 0, 0};
    int expanded_iteration = -1;
    int expansions_in_iteration = 0;
    bool ever_expanded = false;
    bool in_open = false;
    bool in_boundary = false;
  };
  struct Entry {
    double f;
    double g;
    std::uint32_t id;
  };
  struct EntryOrder {
    const std::vector<Node>* nodes;
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.g != b.g) return a.g < b.g;
      return (*nodes)[b.id].state < (*nodes)[a.id].state;
    }
  };

  std::uint32_t node_for(const LatticeState& s);
  void push(std::uint32_t id);
  bool may_expand(const Node& n) const;
  PlanResult search(const PlanLimits& limits);
  Trajectory reconstruct(std::uint32_t goal_id) const;

  const GridMap* map_;
  LatticeConfig config_;
  Heuristic heuristic_;
  PlannerOptions options_;
  std::vector<AxisIndex> inputs_;

  std::optional<SearchSpace> space_;
  GoalSpec goal_;
  int iteration_ = 0;
  std::vector<Node> nodes_;
  std::unordered_map<LatticeState, std::uint32_t, LatticeStateHash> index_;
  std::priority_queue<Entry, std::vector<Entry>, EntryOrder> open_;
  std::vector<std::uint32_t> boundary_;
  std::optional<Trajectory> incumbent_;
};

struct AnytimeOptions {
  double delta0 = 1.0;
  double delta_step = 0.5;
  /// Wall-clock budget, checked between iterations.
  double budget_s = 1.0;
  /// Optional cap on delta: no iteration runs beyond it.
  std::optional<double> delta_max;
  PlanLimits iteration_limits;
  HeuristicSpec heuristic;
  PlannerOptions planner;
};

struct AnytimeResult {
  PlanStatus status = PlanStatus::NoSolution;
  std::optional<Trajectory> trajectory;
  PlanStats stats;
  double final_delta = 0.0;
  std::shared_ptr<const DeltaSpace> delta_space;  // null if the grid search found no path
};

/// Plans in a delta space of size delta0, then keeps growing delta by delta_step and resuming
/// both the grid searches and the lattice search while budget remains.
AnytimeResult plan_anytime(const GridMap& map, const LatticeState& start, const GoalSpec& goal,
                           const LatticeConfig& config, const AnytimeOptions& options);

/// Sum of primitive costs recomputed from the inputs.
double recompute_cost(const Trajectory& trajectory, const LatticeConfig& config);

/// Text export: `#` header (order, config echo, total cost, duration), an initial state line, then
/// per primitive a segment line `t0 u_x u_y [u_z] tau` followed by a state line `p .. v .. [a ..]`.
void write_trajectory(std::ostream& out, const Trajectory& trajectory, const LatticeConfig& config,
                      const GridMap& map);

struct TrajectoryRecord {
  struct Segment {
    double t0 = 0.0;
    std::vector<double> input;
    double tau = 0.0;
  };
  std::vector<ContinuousState> states;
  std::vector<Segment> segments;
  double total_cost = 0.0;
  double duration = 0.0;
};

TrajectoryRecord read_trajectory(std::istream& in);

}  // namespace dsp
