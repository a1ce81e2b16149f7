#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "grid_map.hpp"
#include "lattice.hpp"
#include "lowdim_search.hpp"

namespace dsp {

enum class Membership { Inside, Boundary, Outside };

enum class SpaceKind { Full, Tunnel, Delta };

/// Pruning applied to the high-dimensional lattice. Membership depends only on the projected
/// cell. A Delta space shares its DeltaSpace, so growing it (extend) grows the space in place.
class SearchSpace {
 public:
  static SearchSpace full(const GridMap& map);
  /// Cells whose center lies within `radius` meters of the path polyline.
  static SearchSpace tunnel(const GridMap& map, std::vector<Cell> path, double radius);
  static SearchSpace delta(std::shared_ptr<const DeltaSpace> ds);

  SpaceKind kind() const { return kind_; }
  const GridMap& map() const { return *map_; }
  const std::vector<Cell>& tunnel_path() const { return path_; }
  double tunnel_radius() const { return radius_; }
  const std::shared_ptr<const DeltaSpace>& delta_space() const { return ds_; }

  bool inside_cell(const Cell& c) const;
  /// Inside or Outside. Boundary only arises relative to an Inside predecessor; see
  /// classify_successor.
  Membership classify(const LatticeState& s) const;
  Membership classify_successor(const LatticeState& from, const LatticeState& to) const;

  /// Masked transition cost: the primitive cost if both end points are Inside, else nullopt
  /// (infinite).
  std::optional<double> edge_cost(const LatticeState& from, const MotionPrimitive& primitive) const;

 private:
  SpaceKind kind_ = SpaceKind::Full;
  const GridMap* map_ = nullptr;
  std::vector<Cell> path_;
  double radius_ = 0.0;
  std::vector<std::uint8_t> tunnel_mask_;
  std::shared_ptr<const DeltaSpace> ds_;
};

Membership classify(const SearchSpace& space, const LatticeState& s);
std::optional<double> edge_cost(const SearchSpace& space, const LatticeState& from,
                                const MotionPrimitive& primitive);

/// Tunnel of `radius` around one optimal grid path extracted from `ds`.
SearchSpace tunnel_from_delta(const DeltaSpace& ds, double radius);

/// Euclidean distance from `p` to the polyline through `vertices` (a single vertex is a point).
double distance_to_polyline(const Point& p, const std::vector<Point>& vertices);

}  // namespace dsp
