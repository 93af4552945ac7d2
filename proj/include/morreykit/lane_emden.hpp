#pragma once

#include <string>
#include <vector>

#include "morreykit/morrey.hpp"
#include "morreykit/pde.hpp"

namespace morreykit {

struct SolveOptions {
  int max_iters = 4000;
  double tol_scale = 1e-9;  // inner residual tolerance relative to source scale
};

struct DirichletSolve {
  ScalarField u;
  int iterations = 0;
  bool converged = false;
  double residual_inf = 0;
  double eps_reg = 0;
};

/// Zero-boundary minimizer of sum vol (|grad v|^p / p - source * v); the
/// p-degenerate weight carries an eps_reg = 1e-6 * (field scale) floor.
/// Requires 1 < p <= n. `warm` seeds the descent when provided.
DirichletSolve solve_dirichlet_p_laplace(const ScalarField& source, double p,
                                         const SolveOptions& opts = {},
                                         const ScalarField* warm = nullptr);

enum class NonlinearityTag { power, exponential, manufactured };

struct PLaplaceProblem {
  GridPtr grid;
  double p = 2.0;
  NonlinearityTag tag = NonlinearityTag::power;
  double q = 1.0;  // power exponent: rhs = u^(q+1)
  SolveOptions inner;
  int outer_iters = 200;
  double outer_tol = 1e-10;
  double damping = 0.5;  // exponential branch
  std::uint64_t seed = 0;
  PLaplaceProblem(GridPtr g, double p_, NonlinearityTag tag_, double q_ = 1.0);
};

struct SolutionReport {
  ScalarField u;
  double residual = 0;  // max normalized weak-form defect over the battery
  double energy = 0;    // sum vol |grad u|^p / p
  double ue_integral = 0;  // exponential case: integral of u e^u
  double lambda_scale = 0;  // power case: eigen-scale of the normalized fixed point
  int outer_iterations = 0;
  bool flagged = false;
  double eps_reg = 0;
  std::string notes;
};

/// Power nonlinearity: normalized inverse iteration on the frozen source
/// u_k^(q+1), then the homogeneity rescaling u = s w with s^(p-q-2) Lambda = 1.
/// Requires p != q+2; the iteration is seeded with an approximate first
/// Dirichlet eigenfunction so the zero fixed point is avoided.
SolutionReport solve_lane_emden_power(const PLaplaceProblem& prob);

/// Exponential nonlinearity: damped fixed-point iteration on the minimal
/// branch; divergence is flagged with the iterate history in `notes`.
SolutionReport solve_lane_emden_exp(const PLaplaceProblem& prob);

/// Battery of random compactly supported C1 bumps phi; returns the max of
/// |<|grad u|^(p-2) grad u, grad phi> - <rhs, phi>| over a scale-matched
/// denominator. The pairing uses the solver's forward-difference stencil.
double weak_residual_battery(const ScalarField& u, double p, const ScalarField& rhs, int count,
                             std::uint64_t seed);

/// Radial cutoff: 1 on B(x0, r/3), 0 off B(x0, r/2), C1 profile between with
/// max discrete gradient <= 8/r (the profile's slope bound is 7.5/r).
ScalarField cutoff(const Point& x0, double r, const GridPtr& grid);

struct CaccioppoliRow {
  Point center;
  double r = 0;
  double lhs = 0;    // integral of |grad u|^p over B(x0, r/3)
  double rhs = 0;    // zeroth-order side per the nonlinearity tag
  double ratio = 0;  // 0 by convention when rhs vanishes
};
struct CaccioppoliTable {
  std::vector<CaccioppoliRow> rows;
  double max_ratio = 0;
  double logr_slope = 0;  // trend of log(mean ratio per radius) vs log r
};

CaccioppoliTable caccioppoli_report(const ScalarField& u, double p, NonlinearityTag tag, double q,
                                    const std::vector<Point>& centers,
                                    const std::vector<double>& radii);

struct AdmissibilityRow {
  double q_tilde = 0;
  double lambda_min = 0;  // max{ n(q+2)/q~, p(n/q~ + 1) }
  bool admissible = false;  // lambda_min <= n
};
std::vector<AdmissibilityRow> gradient_morrey_admissibility(double p, double q, int n,
                                                            const std::vector<double>& q_tildes);

/// Morrey report of |grad u| at (p, lambda); the power tag validates lambda
/// against the admissibility bound for the supplied q~, the exponential tag
/// requires lambda = n.
SeminormReport gradient_morrey_check(const ScalarField& u, double p, double lambda,
                                     NonlinearityTag tag, double q, double q_tilde,
                                     const BallFamily& family);

}  // namespace morreykit
