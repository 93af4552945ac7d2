#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace morreykit {

// Points are stored with 3 slots; unused axes are 0 in 2-D.
using Point = std::array<double, 3>;

double dist2(const Point& a, const Point& b, int dim);
double dist(const Point& a, const Point& b, int dim);
double unit_ball_volume(int dim);

struct BBox {
  int dim = 2;  // 2 or 3
  std::array<double, 3> lo{-1.0, -1.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 0.0};
  double diagonal() const;
};

struct MaskBox {};
struct MaskBall {
  Point center{0, 0, 0};
  double radius = 1.0;
};
struct MaskAnnulus {
  Point center{0, 0, 0};
  double r_inner = 0.5;
  double r_outer = 1.0;
};
// Row-major cell bitmap (x fastest). `source` is a free-form provenance tag.
struct MaskBitmap {
  std::vector<std::uint8_t> cells;
  std::string source;
};
using MaskSpec = std::variant<MaskBox, MaskBall, MaskAnnulus, MaskBitmap>;

std::string mask_spec_name(const MaskSpec& spec);

/// Uniform tensor lattice over a bounding box with a cell mask marking the
/// domain. Cells are addressed by linear index, x fastest; cell centers sit
/// at lo + (i+1/2)h so symmetric boxes never place a center on the origin.
/// Immutable after construction.
class Grid {
 public:
  int dim() const { return bbox_.dim; }
  const BBox& bbox() const { return bbox_; }
  const std::array<int, 3>& counts() const { return counts_; }
  const std::array<double, 3>& spacing() const { return spacing_; }
  double max_spacing() const { return max_spacing_; }
  double cell_volume() const { return cell_volume_; }
  std::int64_t ncells() const { return ncells_; }

  bool masked(std::int64_t idx) const { return mask_[static_cast<size_t>(idx)] != 0; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  const std::vector<std::int64_t>& masked_cells() const { return masked_cells_; }
  std::int64_t masked_count() const { return static_cast<std::int64_t>(masked_cells_.size()); }

  std::int64_t index(int i, int j, int k = 0) const {
    return i + static_cast<std::int64_t>(counts_[0]) * (j + static_cast<std::int64_t>(counts_[1]) * k);
  }
  std::array<int, 3> coords(std::int64_t idx) const {
    int i = static_cast<int>(idx % counts_[0]);
    std::int64_t r = idx / counts_[0];
    int j = static_cast<int>(r % counts_[1]);
    int k = static_cast<int>(r / counts_[1]);
    return {i, j, k};
  }
  double axis_center(int axis, int i) const {
    return bbox_.lo[axis] + (i + 0.5) * spacing_[axis];
  }
  Point center(std::int64_t idx) const {
    auto c = coords(idx);
    Point p{0, 0, 0};
    for (int d = 0; d < bbox_.dim; ++d) p[d] = axis_center(d, c[d]);
    return p;
  }
  // Squared distance between two cell centers, computed from integer lags so
  // the direct and FFT paths agree on ball membership bit for bit.
  double lag_dist2(const std::array<int, 3>& a, const std::array<int, 3>& b) const {
    double s = 0;
    for (int d = 0; d < bbox_.dim; ++d) {
      double dx = (a[d] - b[d]) * spacing_[d];
      s += dx * dx;
    }
    return s;
  }

  /// Diameter of the masked region (max center-to-center distance, via
  /// extremal cells over a direction fan; exact for practical purposes).
  double domain_diameter() const { return diameter_; }

  /// Cell index containing a point, or -1 if outside the bounding box.
  std::int64_t cell_at(const Point& p) const;

  static std::shared_ptr<const Grid> create(const BBox& bbox, const std::array<int, 3>& counts,
                                            const MaskSpec& spec);

  const std::string& mask_id() const { return mask_id_; }
  const std::string& mask_name() const { return mask_name_; }

 private:
  Grid() = default;
  BBox bbox_;
  std::array<int, 3> counts_{1, 1, 1};
  std::array<double, 3> spacing_{0, 0, 0};
  double max_spacing_ = 0;
  double cell_volume_ = 0;
  std::int64_t ncells_ = 0;
  std::vector<std::uint8_t> mask_;
  std::vector<std::int64_t> masked_cells_;
  double diameter_ = 0;
  std::string mask_id_;
  std::string mask_name_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// make_grid rejects empty and disconnected masks (face connectivity).
GridPtr make_grid(const BBox& bbox, const std::array<int, 3>& resolution, const MaskSpec& spec);
GridPtr make_grid2(double lo, double hi, int resolution, const MaskSpec& spec);

/// Euclidean distance from each cell center to the exterior (nearest unmasked
/// cell center or bounding-box face). Exact separable transform.
std::vector<double> distance_to_exterior(const Grid& g);

/// Distance from each cell center to the nearest cell of `sites` (euclidean).
std::vector<double> distance_to_cells(const Grid& g, const std::vector<std::int64_t>& sites);

MaskBitmap read_pgm_mask(const std::string& path);

std::uint64_t fnv1a64(const void* data, size_t nbytes, std::uint64_t seed = 1469598103934665603ull);

}  // namespace morreykit
