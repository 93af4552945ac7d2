#pragma once

#include <vector>

#include "morreykit/ball_family.hpp"
#include "morreykit/field.hpp"

namespace morreykit {

/// Order and regularization of the kernel |y-x|^(alpha-n). rho = 0 means the
/// self-cell term is the exact cell integral of the kernel (the default and
/// only regularization rule shipped); rho > 0 must resolve the cell.
struct RieszKernelSpec {
  double alpha = 1.0;
  double rho = 0.0;
  RieszKernelSpec() = default;
  RieszKernelSpec(double a, const Grid& g, double rho_ = 0.0);
};

/// Normalized ball mollifier chi_r = 1_B(0,r) / (omega_n r^n). Construction
/// checks that the discrete mass is within 2% of one on the given grid.
struct MollifierSpec {
  double radius = 0.0;
  double normalization = 0.0;  // 1/(omega_n r^n)
  double discrete_mass = 0.0;
  MollifierSpec(double r, const Grid& g);
};

enum class RieszMethod { direct, fast };

/// (I_alpha f)(x) = sum_y f(y) |y-x|^(alpha-n) cellvol, self-cell exact.
/// `fast` evaluates the same sum by padded FFT; both agree to roundoff.
ScalarField riesz_potential(const ScalarField& f, const RieszKernelSpec& spec,
                            RieszMethod method = RieszMethod::fast);

/// Mean of g over grid cells with centers in B(x,r), g zero-extended; the
/// ball is clipped to the bounding box and the mean is the plain cell mean.
ScalarField mollified_average(const ScalarField& g, double r);

/// Geometric radius ladder in [2h, delta] used by the oscillation functional.
std::vector<double> oscillation_ladder(const Grid& g, double delta, int ladder_size);

/// sup - inf of ball means of g at x over radii r in (0, delta), discretized
/// over the ladder. Explicit-radii overload for nested-ladder comparisons.
double oscillation(const ScalarField& g, std::int64_t cell, double delta, int ladder_size);
double oscillation_over(const ScalarField& g, std::int64_t cell, const std::vector<double>& radii);

/// Hardy-Littlewood maximal field: max over family radii (plus the radius->0
/// member |f| itself) of ball means of |f| at every masked cell.
ScalarField maximal_function(const ScalarField& f, const BallFamily& family);

/// Constant in the composition identity for unnormalized Riesz kernels:
/// the a-kernel convolved with the b-kernel equals this times the (a+b)-kernel.
double riesz_composition_constant(double a, double b, int n);

}  // namespace morreykit
