#include "morreykit/ball_family.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace morreykit {

std::string BallFamily::describe() const {
  std::ostringstream os;
  os << "stride=" << center_stride << " centers=" << centers.size() << " radii=[";
  for (size_t i = 0; i < radii.size(); ++i) os << (i ? "," : "") << radii[i];
  os << "]";
  return os.str();
}

BallFamily ball_family_range(const GridPtr& grid, int center_stride, int radius_count,
                             double r_lo, double r_hi) {
  if (center_stride < 1) throw std::invalid_argument("ball_family: center_stride must be >= 1");
  if (radius_count < 2) throw std::invalid_argument("ball_family: radius_count must be >= 2");
  if (!(r_lo > 0) || !(r_hi > r_lo)) throw std::invalid_argument("ball_family: bad radius range");
  BallFamily fam;
  fam.grid = grid;
  fam.center_stride = center_stride;
  for (std::int64_t idx : grid->masked_cells()) {
    auto c = grid->coords(idx);
    bool on = true;
    for (int d = 0; d < grid->dim(); ++d)
      if (c[d] % center_stride != 0) { on = false; break; }
    if (on) fam.centers.push_back(idx);
  }
  if (fam.centers.empty())
    throw std::invalid_argument("ball_family: stride leaves no centers");
  double ratio = std::pow(r_hi / r_lo, 1.0 / (radius_count - 1));
  for (int k = 0; k < radius_count; ++k)
    fam.radii.push_back(k + 1 == radius_count ? r_hi : r_lo * std::pow(ratio, k));
  return fam;
}

BallFamily ball_family(const GridPtr& grid, int center_stride, int radius_count) {
  double r_lo = 2.0 * grid->max_spacing();
  double r_hi = grid->domain_diameter();
  if (!(r_hi > r_lo))
    throw std::invalid_argument("ball_family: domain too small for the radius ladder");
  return ball_family_range(grid, center_stride, radius_count, r_lo, r_hi);
}

}  // namespace morreykit
