#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "grid_map.hpp"

namespace testutil {

// Builds a 2D map from rows given top (max y) to bottom, '#' = occupied.
inline dsp::GridMap ascii_map(const std::vector<std::string>& rows, double resolution = 1.0) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(w) * h, 0);
  for (int r = 0; r < h; ++r) {
    const int y = h - 1 - r;
    for (int x = 0; x < w; ++x) occ[static_cast<std::size_t>(y) * w + x] = rows[r][x] == '#' ? 1 : 0;
  }
  return dsp::GridMap(2, {w, h, 1}, resolution, occ);
}

inline dsp::GridMap empty_map(int w, int h, double resolution = 1.0) {
  return dsp::GridMap(2, {w, h, 1}, resolution);
}

}  // namespace testutil
