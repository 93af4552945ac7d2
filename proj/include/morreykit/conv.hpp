#pragma once

#include <functional>
#include <string>
#include <vector>

#include "morreykit/grid.hpp"

namespace morreykit {

/// Translation-invariant kernel given by its value at integer cell lags.
/// `key` identifies the kernel for spectrum caching; it must encode every
/// parameter the values depend on (grid geometry included).
struct LagKernel {
  std::string key;
  std::function<double(int, int, int)> value;
};

/// Linear (zero-padded) convolution on the grid lattice:
///   out(x) = sum over all cells y of in(y) * ker(x - y).
/// Computed by FFT on a 2x padded box; exact up to roundoff.
std::vector<double> convolve(const GridPtr& grid, const std::vector<double>& in,
                             const LagKernel& ker);

/// Shared-input variant: transforms `in` once and applies each kernel.
std::vector<std::vector<double>> convolve_many(const GridPtr& grid, const std::vector<double>& in,
                                               const std::vector<LagKernel>& kernels);

/// Riesz kernel |lag|^(alpha-n) * cellvol with the self-lag replaced by the
/// exact integral of |y|^(alpha-n) over one cell.
LagKernel make_riesz_kernel(const GridPtr& grid, double alpha);

/// Indicator of the open ball of given radius (cell-center membership).
LagKernel make_ball_kernel(const GridPtr& grid, double radius);

/// Exact integral of |y|^(alpha-n) over the centered cell box, by dyadic
/// self-similarity plus Gauss-Legendre panels on the annular shell.
double riesz_self_cell_integral(const Grid& grid, double alpha);

/// Number of grid cells with center in the open ball of radius r around each
/// cell (ball clipped to the bounding box). Values are exact integers.
const std::vector<double>& ball_cell_counts(const GridPtr& grid, double radius);

double riesz_lag_value(const Grid& grid, double alpha, double self_integral, int di, int dj, int dk);

}  // namespace morreykit
