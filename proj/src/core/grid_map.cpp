#include "grid_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "random.hpp"

namespace dsp {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;

void validate_shape(int num_axes, const std::array<int, 3>& dims, double resolution) {
  if (num_axes != 2 && num_axes != 3) {
    throw Error(ErrorCode::InvalidArgument, "map must have 2 or 3 axes");
  }
  for (int a = 0; a < num_axes; ++a) {
    if (dims[a] < 1) throw Error(ErrorCode::InvalidArgument, "map dimensions must be >= 1");
  }
  if (num_axes == 2 && dims[2] != 1) {
    throw Error(ErrorCode::InvalidArgument, "2D maps have a single z slice");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  }
}

std::size_t product(const std::array<int, 3>& dims) {
  return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

GridMap::GridMap(int num_axes, std::array<int, 3> dims, double resolution, Point origin)
    : num_axes_(num_axes), dims_(dims), resolution_(resolution), origin_(origin) {
  if (num_axes_ == 2) dims_[2] = 1;
  validate_shape(num_axes_, dims_, resolution_);
  occupancy_.assign(product(dims_), 0);
}

GridMap::GridMap(int num_axes, std::array<int, 3> dims, double resolution,
                 std::vector<std::uint8_t> occupancy, Point origin)
    : num_axes_(num_axes), dims_(dims), resolution_(resolution), origin_(origin),
      occupancy_(std::move(occupancy)) {
  if (num_axes_ == 2) dims_[2] = 1;
  validate_shape(num_axes_, dims_, resolution_);
  if (occupancy_.size() != product(dims_)) {
    throw Error(ErrorCode::InvalidArgument, "occupancy size does not match dimensions");
  }
  for (auto& v : occupancy_) v = v ? 1 : 0;
}

std::size_t GridMap::occupied_count() const {
  return static_cast<std::size_t>(std::count(occupancy_.begin(), occupancy_.end(), 1));
}

bool GridMap::in_bounds(const Cell& c) const {
  return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < dims_[0] && c.y < dims_[1] && c.z < dims_[2];
}

CellState GridMap::state(const Cell& c) const {
  if (!in_bounds(c)) return CellState::OutOfBounds;
  return occupancy_[index(c)] ? CellState::Occupied : CellState::Free;
}

Cell GridMap::cell_at(std::size_t index) const {
  Cell c;
  c.x = static_cast<int>(index % dims_[0]);
  index /= dims_[0];
  c.y = static_cast<int>(index % dims_[1]);
  c.z = static_cast<int>(index / dims_[1]);
  return c;
}

Point GridMap::center(const Cell& c) const {
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < num_axes_; ++a) p[a] = origin_[a] + (c[a] + 0.5) * resolution_;
  return p;
}

Cell GridMap::locate(const Point& p) const {
  Cell c;
  for (int a = 0; a < num_axes_; ++a) {
    c[a] = static_cast<int>(std::floor((p[a] - origin_[a]) / resolution_));
  }
  return c;
}

double GridMap::diagonal() const {
  double sq = 0.0;
  for (int a = 0; a < num_axes_; ++a) {
    const double len = dims_[a] * resolution_;
    sq += len * len;
  }
  return std::sqrt(sq);
}

std::vector<Neighbor> GridMap::neighbors(const Cell& c) const {
  std::vector<Neighbor> out;
  if (!is_free(c)) return out;
  out.reserve(num_axes_ == 3 ? 26 : 8);
  const int zr = num_axes_ == 3 ? 1 : 0;
  for (int dz = -zr; dz <= zr; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const std::array<int, 3> step{dx, dy, dz};
        const Cell target{c.x + dx, c.y + dy, c.z + dz};
        if (!is_free(target)) continue;
        int changed_mask = 0;
        int changed = 0;
        for (int a = 0; a < 3; ++a) {
          if (step[a] != 0) {
            changed_mask |= 1 << a;
            ++changed;
          }
        }
        // Every axis-aligned intermediate (a non-empty proper subset of the moved axes) must be free.
        bool cuts_corner = false;
        for (int sub = (changed_mask - 1) & changed_mask; sub > 0 && !cuts_corner;
             sub = (sub - 1) & changed_mask) {
          Cell mid = c;
          for (int a = 0; a < 3; ++a) {
            if (sub & (1 << a)) mid[a] += step[a];
          }
          cuts_corner = !is_free(mid);
        }
        if (cuts_corner) continue;
        const double unit = changed == 1 ? 1.0 : (changed == 2 ? kSqrt2 : kSqrt3);
        out.push_back({target, resolution_ * unit});
      }
    }
  }
  return out;
}

CellState cell_state(const GridMap& map, const Cell& c) { return map.state(c); }

std::vector<Neighbor> neighbors(const GridMap& map, const Cell& c) { return map.neighbors(c); }

double grid_distance(const Cell& a, const Cell& b, double resolution) {
  std::array<int, 3> d{std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)};
  std::sort(d.begin(), d.end(), std::greater<>());
  return resolution * (d[2] * kSqrt3 + (d[1] - d[2]) * kSqrt2 + (d[0] - d[1]));
}

GridMap load_map(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw Error(ErrorCode::Parse, "map: missing dimension line");
  int num_axes = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> num_axes) || (ls >> extra)) {
      throw Error(ErrorCode::Parse, "map: line 1 must hold the axis count");
    }
  }
  if (num_axes != 2 && num_axes != 3) throw Error(ErrorCode::Parse, "map: axis count must be 2 or 3");

  if (!next_line(in, line)) throw Error(ErrorCode::Parse, "map: missing size line");
  std::array<int, 3> dims{1, 1, 1};
  double resolution = 0.0;
  {
    std::istringstream ls(line);
    for (int a = 0; a < num_axes; ++a) {
      if (!(ls >> dims[a])) throw Error(ErrorCode::Parse, "map: malformed dimensions");
    }
    std::string extra;
    if (!(ls >> resolution) || (ls >> extra)) {
      throw Error(ErrorCode::Parse, "map: malformed resolution");
    }
  }
  for (int a = 0; a < num_axes; ++a) {
    if (dims[a] < 1) throw Error(ErrorCode::Parse, "map: dimensions must be >= 1");
  }
  if (!(resolution > 0.0)) throw Error(ErrorCode::Parse, "map: resolution must be positive");

  std::vector<std::uint8_t> occupancy(product(dims), 0);
  std::size_t pos = 0;
  for (int z = 0; z < dims[2]; ++z) {
    if (z > 0) {
      if (!next_line(in, line) || !line.empty()) {
        throw Error(ErrorCode::Parse, "map: slices must be separated by one blank line");
      }
    }
    for (int y = 0; y < dims[1]; ++y) {
      if (!next_line(in, line)) throw Error(ErrorCode::Parse, "map: payload has too few rows");
      if (static_cast<int>(line.size()) != dims[0]) {
        throw Error(ErrorCode::Parse, "map: row " + std::to_string(y) + " has wrong width");
      }
      for (char ch : line) {
        if (ch != '0' && ch != '1') throw Error(ErrorCode::Parse, "map: cells must be '0' or '1'");
        occupancy[pos++] = ch == '1' ? 1 : 0;
      }
    }
  }
  while (next_line(in, line)) {
    if (!line.empty()) throw Error(ErrorCode::Parse, "map: payload has extra rows");
  }
  return GridMap(num_axes, dims, resolution, std::move(occupancy));
}

GridMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open map file: " + path);
  return load_map(in);
}

void save_map(const GridMap& map, std::ostream& out) {
  const auto& dims = map.dims();
  out << map.num_axes() << '\n';
  for (int a = 0; a < map.num_axes(); ++a) out << dims[a] << ' ';
  std::ostringstream res;
  res.precision(17);
  res << map.resolution();
  out << res.str() << '\n';
  for (int z = 0; z < dims[2]; ++z) {
    if (z > 0) out << '\n';
    for (int y = 0; y < dims[1]; ++y) {
      std::string row(static_cast<std::size_t>(dims[0]), '0');
      for (int x = 0; x < dims[0]; ++x) {
        if (map.state({x, y, z}) == CellState::Occupied) row[static_cast<std::size_t>(x)] = '1';
      }
      out << row << '\n';
    }
  }
}

void save_map_file(const GridMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write map file: " + path);
  save_map(map, out);
}

GridMap generate_random_map(std::uint64_t seed, int num_axes, std::array<int, 3> dims,
                            double resolution, double obstacle_density) {
  if (!(obstacle_density >= 0.0 && obstacle_density <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "obstacle density must lie in [0, 1]");
  }
  if (num_axes == 2) dims[2] = 1;
  validate_shape(num_axes, dims, resolution);
  const std::size_t n = product(dims);
  const auto target = static_cast<std::size_t>(std::llround(obstacle_density * static_cast<double>(n)));

  // Partial Fisher-Yates: the first `target` slots of the permutation become obstacles.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::vector<std::uint8_t> occupancy(n, 0);
  for (std::size_t i = 0; i < target; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[j]);
    occupancy[order[i]] = 1;
  }
  return GridMap(num_axes, dims, resolution, std::move(occupancy));
}

}  // namespace dsp
