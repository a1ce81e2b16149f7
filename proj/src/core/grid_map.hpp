#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dsp {

/// Integer grid coordinate. 2D maps keep z = 0.
struct Cell {
  int x = 0;
  int y = 0;
  int z = 0;

  int operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  int& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(c.x);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(c.y);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(c.z);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

enum class CellState { Free, Occupied, OutOfBounds };

struct Neighbor {
  Cell cell;
  double step_cost;  // meters
};

using Point = std::array<double, 3>;

/// Uniform-resolution occupancy grid in 2 or 3 dimensions. Immutable once built.
class GridMap {
 public:
  GridMap(int num_axes, std::array<int, 3> dims, double resolution,
          Point origin = {0.0, 0.0, 0.0});
  GridMap(int num_axes, std::array<int, 3> dims, double resolution,
          std::vector<std::uint8_t> occupancy, Point origin = {0.0, 0.0, 0.0});

  int num_axes() const { return num_axes_; }
  const std::array<int, 3>& dims() const { return dims_; }
  double resolution() const { return resolution_; }
  const Point& origin() const { return origin_; }
  std::size_t cell_count() const { return occupancy_.size(); }
  std::size_t occupied_count() const;

  bool in_bounds(const Cell& c) const;
  CellState state(const Cell& c) const;
  bool is_free(const Cell& c) const { return state(c) == CellState::Free; }

  /// Dense index of an in-bounds cell.
  std::size_t index(const Cell& c) const {
    return (static_cast<std::size_t>(c.z) * dims_[1] + c.y) * dims_[0] + c.x;
  }
  Cell cell_at(std::size_t index) const;

  Point center(const Cell& c) const;
  /// Cell containing a metric point (may be out of bounds).
  Cell locate(const Point& p) const;
  /// Length of the metric diagonal of the whole map.
  double diagonal() const;

  /// Free neighbors (8- or 26-connected) with corner cutting banned.
  std::vector<Neighbor> neighbors(const Cell& c) const;

  std::span<const std::uint8_t> occupancy() const { return occupancy_; }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int num_axes_;
  std::array<int, 3> dims_;
  double resolution_;
  Point origin_;
  std::vector<std::uint8_t> occupancy_;
};

CellState cell_state(const GridMap& map, const Cell& c);
std::vector<Neighbor> neighbors(const GridMap& map, const Cell& c);

/// Grid-Euclidean (octile in 2D) distance: exact shortest path length on an obstacle-free grid.
double grid_distance(const Cell& a, const Cell& b, double resolution);

GridMap load_map(std::istream& in);
GridMap load_map_file(const std::string& path);
void save_map(const GridMap& map, std::ostream& out);
void save_map_file(const GridMap& map, const std::string& path);

/// Uniformly random obstacles. Occupies exactly round(density * cells) cells.
GridMap generate_random_map(std::uint64_t seed, int num_axes, std::array<int, 3> dims,
                            double resolution, double obstacle_density);

}  // namespace dsp
