#pragma once

#include <string>
#include <vector>

#include "morreykit/grid.hpp"

namespace morreykit {

/// Discretization of "all balls B(x,r)": centers on a stride-subsampled
/// lattice of masked cells, radii on a shared geometric ladder running from
/// 2*(max cell spacing) up to diam(domain). Radii are strictly increasing.
struct BallFamily {
  GridPtr grid;
  std::vector<std::int64_t> centers;  // cell indices, ascending
  std::vector<double> radii;          // strictly increasing
  int center_stride = 1;
  std::string describe() const;
  bool dense() const { return center_stride == 1; }
};

BallFamily ball_family(const GridPtr& grid, int center_stride, int radius_count);

/// Same stride/ladder policy but radii span [r_lo, r_hi] explicitly.
BallFamily ball_family_range(const GridPtr& grid, int center_stride, int radius_count,
                             double r_lo, double r_hi);

}  // namespace morreykit
