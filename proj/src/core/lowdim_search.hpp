#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <queue>
#include <vector>

#include "grid_map.hpp"

namespace dsp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Absolute slack used when comparing sums of grid step costs.
inline double cost_tolerance(double magnitude) { return 1e-9 * (1.0 + magnitude); }

enum class Direction { Forward, Backward };

/// A* over the grid that can be paused at an f-bound and resumed with a larger one.
///
/// The heuristic is the grid distance to `target`, which is consistent on the corner-cut-banned
/// graph, so every expanded cell carries its exact shortest-path cost from `root` and the
/// frontier f-value never decreases. Pausing and resuming therefore reproduces the exact pop
/// sequence of an uninterrupted run.
///
/// The map must outlive the search.
class ResumableSearch {
 public:
  ResumableSearch(const GridMap& map, Direction direction, Cell root, Cell target);

  /// Expands every cell whose f-value is <= bound. Bounds are expected to be non-decreasing.
  void run_until_f_exceeds(double bound);
  /// Expands until `cell` is expanded. Returns false if the open list runs dry first.
  bool run_until_expanded(const Cell& cell);

  Direction direction() const { return direction_; }
  const Cell& root() const { return root_; }
  const Cell& target() const { return target_; }

  /// f-value of the next cell to be expanded, +inf once the open list is exhausted.
  double f_frontier();
  bool exhausted();

  bool expanded(const Cell& c) const;
  /// Best known cost from the root; exact for expanded cells, +inf for unreached cells.
  double g(const Cell& c) const;
  std::size_t expansion_count() const { return expansion_order_.size(); }
  const std::vector<std::size_t>& expansion_order() const { return expansion_order_; }

 private:
  struct Entry {
    double f;
    double g;
    std::size_t index;
  };
  struct EntryOrder {
    // std::priority_queue pops the "largest"; lower f first, deeper (higher g) first on ties.
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.g != b.g) return a.g < b.g;
      return a.index > b.index;
    }
  };

  double heuristic(const Cell& c) const { return grid_distance(c, target_, map_->resolution()); }
  void drop_stale();
  void expand_top();

  const GridMap* map_;
  Direction direction_;
  Cell root_;
  Cell target_;
  std::vector<double> g_;
  std::vector<std::uint8_t> closed_;
  std::vector<std::size_t> expansion_order_;
  std::priority_queue<Entry, std::vector<Entry>, EntryOrder> open_;
};

/// The union of all grid cells lying on a start-goal path whose length is within `delta` of the
/// optimum. Built from one forward and one backward resumable search; growing delta resumes both.
class DeltaSpace {
 public:
  /// Throws Error(NoPath) if the goal cannot be reached.
  DeltaSpace(const GridMap& map, Cell start, Cell goal, double delta);

  const GridMap& map() const { return *map_; }
  const Cell& start_cell() const { return start_; }
  const Cell& goal_cell() const { return goal_; }
  double c_star() const { return c_star_; }
  double delta() const { return delta_; }
  const ResumableSearch& forward() const { return forward_; }
  const ResumableSearch& backward() const { return backward_; }

  bool contains(const Cell& c) const { return contains_within(c, delta_); }
  /// Membership under a (smaller) delta without touching the searches.
  bool contains_within(const Cell& c, double delta) const;

  /// Grows delta, resuming both searches. Returns the cells that became members, in forward
  /// expansion order.
  std::vector<Cell> extend(double new_delta);

  /// Exact grid path length from `c` to the goal. Throws Error(NotMember) for non-members.
  double cost_to_goal(const Cell& c) const;
  double cost_from_start(const Cell& c) const;

  std::vector<Cell> members() const;
  std::size_t member_count() const { return members().size(); }
  /// True once both searches have run dry: further growth cannot add members.
  bool saturated();

  /// Writes `x y [z] g_fwd g_bwd` per member cell.
  void dump(std::ostream& out) const;

 private:
  const GridMap* map_;
  Cell start_;
  Cell goal_;
  double c_star_ = 0.0;
  double delta_ = 0.0;
  ResumableSearch forward_;
  ResumableSearch backward_;
};

DeltaSpace build_delta_space(const GridMap& map, const Cell& start, const Cell& goal, double delta);
bool contains(const DeltaSpace& ds, const Cell& c);
std::vector<Cell> extend_delta_space(DeltaSpace& ds, double new_delta);
double cost_to_goal(const DeltaSpace& ds, const Cell& c);

/// One optimal start-goal grid path by greedy descent on the backward costs. Ties prefer the
/// neighbor with the smallest cost-to-goal, then the lexicographically smallest cell.
std::vector<Cell> extract_optimal_path(const DeltaSpace& ds);

/// A start-goal path through member `c` of length <= c_star + delta.
std::vector<Cell> witness_path(const DeltaSpace& ds, const Cell& c);

}  // namespace dsp
