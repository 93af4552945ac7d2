#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "morreykit/grid.hpp"

namespace morreykit {

/// Scalar samples on a grid, one value per cell. Values on unmasked cells are
/// exactly zero (the domain's zero-extension convention); factories and
/// operations enforce this and reject non-finite values.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(GridPtr grid, std::vector<double> values);
  static ScalarField zeros(GridPtr grid);
  static ScalarField constant(GridPtr grid, double c);

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& values() const { return v_; }
  double operator[](std::int64_t idx) const { return v_[static_cast<size_t>(idx)]; }
  double& at(std::int64_t idx) { return v_[static_cast<size_t>(idx)]; }
  std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

  double max_abs() const;
  double min_value() const;
  double max_value() const;

  /// Re-apply the zero-outside-mask convention and verify finiteness.
  void enforce_convention();

 private:
  GridPtr grid_;
  std::vector<double> v_;
};

using Expr = std::function<double(const Point&)>;

/// Evaluate a closed-form expression at masked cell centers; zero elsewhere.
/// A non-finite value at a masked center raises an error naming the cell.
ScalarField sample(const Expr& expr, const GridPtr& grid);

struct RegionDomain {};
struct RegionBall {
  Point center{0, 0, 0};
  double radius = 1.0;
  bool closed = false;  // open by default
  bool contains(const Point& p, int dim) const {
    double d2 = dist2(p, center, dim);
    return closed ? d2 <= radius * radius : d2 < radius * radius;
  }
};
using Region = std::variant<RegionDomain, RegionBall>;

/// Midpoint-rule integral over masked cells whose centers lie in the region.
/// An empty intersection yields 0 and sets *empty_flag when provided.
double integrate(const ScalarField& f, const Region& region, bool* empty_flag = nullptr);

void write_fld(const ScalarField& f, const std::string& path);
ScalarField read_fld(const std::string& path, const GridPtr& grid);
std::string read_fld_header(const std::string& path);

ScalarField axpby(double a, const ScalarField& x, double b, const ScalarField& y);
ScalarField map_field(const ScalarField& x, const std::function<double(double)>& fn);

}  // namespace morreykit
