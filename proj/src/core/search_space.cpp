#include "search_space.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace dsp {

double distance_to_polyline(const Point& p, const std::vector<Point>& vertices) {
  auto dist_sq = [](const Point& a, const Point& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
  };
  if (vertices.empty()) return kInfinity;
  double best = dist_sq(p, vertices.front());
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const Point& a = vertices[i - 1];
    const Point& b = vertices[i];
    double ab_sq = 0.0;
    double dot = 0.0;
    for (int k = 0; k < 3; ++k) {
      ab_sq += (b[k] - a[k]) * (b[k] - a[k]);
      dot += (p[k] - a[k]) * (b[k] - a[k]);
    }
    const double t = ab_sq > 0.0 ? std::clamp(dot / ab_sq, 0.0, 1.0) : 0.0;
    Point q;
    for (int k = 0; k < 3; ++k) q[k] = a[k] + t * (b[k] - a[k]);
    best = std::min(best, dist_sq(p, q));
  }
  return std::sqrt(best);
}

SearchSpace SearchSpace::full(const GridMap& map) {
  SearchSpace s;
  s.kind_ = SpaceKind::Full;
  s.map_ = &map;
  return s;
}

SearchSpace SearchSpace::tunnel(const GridMap& map, std::vector<Cell> path, double radius) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, "tunnel path is empty");
  if (!(radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tunnel radius must be >= 0");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!map.is_free(path[i])) throw Error(ErrorCode::InvalidArgument, "tunnel path crosses a blocked cell");
    if (i > 0) {
      const auto nbrs = map.neighbors(path[i - 1]);
      const bool linked = std::any_of(nbrs.begin(), nbrs.end(),
                                      [&](const Neighbor& n) { return n.cell == path[i]; });
      if (!linked) throw Error(ErrorCode::InvalidArgument, "tunnel path is not a neighbor chain");
    }
  }
  SearchSpace s;
  s.kind_ = SpaceKind::Tunnel;
  s.map_ = &map;
  s.radius_ = radius;
  std::vector<Point> vertices;
  vertices.reserve(path.size());
  for (const Cell& c : path) vertices.push_back(map.center(c));
  s.path_ = std::move(path);
  s.tunnel_mask_.assign(map.cell_count(), 0);
  const double limit = radius + cost_tolerance(radius);
  for (std::size_t idx = 0; idx < map.cell_count(); ++idx) {
    const Cell c = map.cell_at(idx);
    if (!map.is_free(c)) continue;
    if (distance_to_polyline(map.center(c), vertices) <= limit) s.tunnel_mask_[idx] = 1;
  }
  return s;
}

SearchSpace SearchSpace::delta(std::shared_ptr<const DeltaSpace> ds) {
  if (!ds) throw Error(ErrorCode::InvalidArgument, "delta space is null");
  SearchSpace s;
  s.kind_ = SpaceKind::Delta;
  s.map_ = &ds->map();
  s.ds_ = std::move(ds);
  return s;
}

bool SearchSpace::inside_cell(const Cell& c) const {
  switch (kind_) {
    case SpaceKind::Full:
      return map_->is_free(c);
    case SpaceKind::Tunnel:
      return map_->in_bounds(c) && tunnel_mask_[map_->index(c)] != 0;
    case SpaceKind::Delta:
      return ds_->contains(c);
  }
  return false;
}

Membership SearchSpace::classify(const LatticeState& s) const {
  return inside_cell(project(s)) ? Membership::Inside : Membership::Outside;
}

Membership SearchSpace::classify_successor(const LatticeState& from, const LatticeState& to) const {
  if (inside_cell(project(to))) return Membership::Inside;
  return inside_cell(project(from)) ? Membership::Boundary : Membership::Outside;
}

std::optional<double> SearchSpace::edge_cost(const LatticeState& from, const MotionPrimitive& primitive) const {
  if (!inside_cell(project(from)) || !inside_cell(project(primitive.end))) return std::nullopt;
  return primitive.cost;
}

Membership classify(const SearchSpace& space, const LatticeState& s) { return space.classify(s); }

std::optional<double> edge_cost(const SearchSpace& space, const LatticeState& from,
                                const MotionPrimitive& primitive) {
  return space.edge_cost(from, primitive);
}

SearchSpace tunnel_from_delta(const DeltaSpace& ds, double radius) {
  return SearchSpace::tunnel(ds.map(), extract_optimal_path(ds), radius);
}

}  // namespace dsp
