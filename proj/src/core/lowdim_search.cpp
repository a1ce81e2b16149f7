#include "lowdim_search.hpp"

#include <algorithm>
#include <ostream>

#include "error.hpp"

namespace dsp {

ResumableSearch::ResumableSearch(const GridMap& map, Direction direction, Cell root, Cell target)
    : map_(&map),
      direction_(direction),
      root_(root),
      target_(target),
      g_(map.cell_count(), kInfinity),
      closed_(map.cell_count(), 0) {
  if (!map.is_free(root)) throw Error(ErrorCode::InvalidArgument, "search root must be a free cell");
  const std::size_t idx = map.index(root);
  g_[idx] = 0.0;
  open_.push({heuristic(root), 0.0, idx});
}

void ResumableSearch::drop_stale() {
  while (!open_.empty()) {
    const Entry& top = open_.top();
    if (closed_[top.index] || top.g > g_[top.index]) {
      open_.pop();
    } else {
      break;
    }
  }
}

double ResumableSearch::f_frontier() {
  drop_stale();
  return open_.empty() ? kInfinity : open_.top().f;
}

bool ResumableSearch::exhausted() {
  drop_stale();
  return open_.empty();
}

void ResumableSearch::expand_top() {
  const Entry top = open_.top();
  open_.pop();
  closed_[top.index] = 1;
  expansion_order_.push_back(top.index);
  const Cell cell = map_->cell_at(top.index);
  // The 8/26-neighborhood is symmetric, so the backward search walks the same edges.
  for (const Neighbor& n : map_->neighbors(cell)) {
    const std::size_t nidx = map_->index(n.cell);
    if (closed_[nidx]) continue;
    const double candidate = top.g + n.step_cost;
    if (candidate < g_[nidx]) {
      g_[nidx] = candidate;
      open_.push({candidate + heuristic(n.cell), candidate, nidx});
    }
  }
}

void ResumableSearch::run_until_f_exceeds(double bound) {
  const double limit = bound + cost_tolerance(std::abs(bound));
  while (true) {
    drop_stale();
    if (open_.empty() || open_.top().f > limit) return;
    expand_top();
  }
}

bool ResumableSearch::run_until_expanded(const Cell& cell) {
  if (!map_->in_bounds(cell)) return false;
  const std::size_t idx = map_->index(cell);
  while (!closed_[idx]) {
    drop_stale();
    if (open_.empty()) return false;
    expand_top();
  }
  return true;
}

bool ResumableSearch::expanded(const Cell& c) const {
  return map_->in_bounds(c) && closed_[map_->index(c)] != 0;
}

double ResumableSearch::g(const Cell& c) const {
  return map_->in_bounds(c) ? g_[map_->index(c)] : kInfinity;
}

DeltaSpace::DeltaSpace(const GridMap& map, Cell start, Cell goal, double delta)
    : map_(&map),
      start_(start),
      goal_(goal),
      delta_(delta),
      forward_(map, Direction::Forward, start, goal),
      backward_(map, Direction::Backward, goal, start) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be >= 0");
  if (!map.is_free(goal)) throw Error(ErrorCode::InvalidArgument, "goal must be a free cell");
  if (!forward_.run_until_expanded(goal)) {
    throw Error(ErrorCode::NoPath, "no grid path between start and goal");
  }
  c_star_ = forward_.g(goal);
  const double bound = c_star_ + delta_;
  forward_.run_until_f_exceeds(bound);
  backward_.run_until_f_exceeds(bound);
  if (!backward_.expanded(start)) {
    throw Error(ErrorCode::NoPath, "backward search did not reach the start");
  }
}

bool DeltaSpace::contains_within(const Cell& c, double delta) const {
  if (!forward_.expanded(c) || !backward_.expanded(c)) return false;
  const double limit = c_star_ + delta;
  return forward_.g(c) + backward_.g(c) <= limit + cost_tolerance(limit);
}

std::vector<Cell> DeltaSpace::extend(double new_delta) {
  if (!(new_delta >= delta_)) throw Error(ErrorCode::InvalidArgument, "delta can only grow");
  const double old_delta = delta_;
  delta_ = new_delta;
  const double bound = c_star_ + delta_;
  forward_.run_until_f_exceeds(bound);
  backward_.run_until_f_exceeds(bound);

  std::vector<Cell> added;
  for (std::size_t idx : forward_.expansion_order()) {
    const Cell c = map_->cell_at(idx);
    if (contains_within(c, delta_) && !contains_within(c, old_delta)) added.push_back(c);
  }
  return added;
}

double DeltaSpace::cost_to_goal(const Cell& c) const {
  if (!contains(c)) throw Error(ErrorCode::NotMember, "cell is not a member of the delta space");
  return backward_.g(c);
}

double DeltaSpace::cost_from_start(const Cell& c) const {
  if (!contains(c)) throw Error(ErrorCode::NotMember, "cell is not a member of the delta space");
  return forward_.g(c);
}

std::vector<Cell> DeltaSpace::members() const {
  std::vector<Cell> out;
  for (std::size_t idx : forward_.expansion_order()) {
    const Cell c = map_->cell_at(idx);
    if (contains(c)) out.push_back(c);
  }
  return out;
}

bool DeltaSpace::saturated() { return forward_.exhausted() && backward_.exhausted(); }

void DeltaSpace::dump(std::ostream& out) const {
  auto cells = members();
  std::sort(cells.begin(), cells.end());
  for (const Cell& c : cells) {
    out << c.x << ' ' << c.y << ' ';
    if (map_->num_axes() == 3) out << c.z << ' ';
    out << forward_.g(c) << ' ' << backward_.g(c) << '\n';
  }
}

DeltaSpace build_delta_space(const GridMap& map, const Cell& start, const Cell& goal, double delta) {
  return DeltaSpace(map, start, goal, delta);
}

bool contains(const DeltaSpace& ds, const Cell& c) { return ds.contains(c); }

std::vector<Cell> extend_delta_space(DeltaSpace& ds, double new_delta) { return ds.extend(new_delta); }

double cost_to_goal(const DeltaSpace& ds, const Cell& c) { return ds.cost_to_goal(c); }

namespace {

// Walks from `from` towards the search root of `search`, always stepping to a neighbor that lies
// on a shortest path. Ties: smaller remaining cost, then smaller cell.
std::vector<Cell> descend(const GridMap& map, const ResumableSearch& search, Cell from) {
  std::vector<Cell> path{from};
  Cell cur = from;
  while (cur != search.root()) {
    const double here = search.g(cur);
    bool found = false;
    Cell best{};
    double best_g = kInfinity;
    for (const Neighbor& n : map.neighbors(cur)) {
      if (!search.expanded(n.cell)) continue;
      const double gn = search.g(n.cell);
      if (std::abs(gn + n.step_cost - here) > cost_tolerance(here)) continue;
      if (!found || gn < best_g || (gn == best_g && n.cell < best)) {
        best = n.cell;
        best_g = gn;
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::NoPath, "descent stalled before reaching the search root");
    cur = best;
    path.push_back(cur);
  }
  return path;
}

}  // namespace

std::vector<Cell> extract_optimal_path(const DeltaSpace& ds) {
  return descend(ds.map(), ds.backward(), ds.start_cell());
}

std::vector<Cell> witness_path(const DeltaSpace& ds, const Cell& c) {
  if (!ds.contains(c)) throw Error(ErrorCode::NotMember, "witness requested for a non-member");
  std::vector<Cell> head = descend(ds.map(), ds.forward(), c);
  std::reverse(head.begin(), head.end());
  const std::vector<Cell> tail = descend(ds.map(), ds.backward(), c);
  head.insert(head.end(), tail.begin() + 1, tail.end());
  return head;
}

}  // namespace dsp
