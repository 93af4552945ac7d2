#pragma once

#include <vector>

#include "morreykit/field.hpp"

namespace morreykit {

/// Minimization of the pinned p-Dirichlet energy
///   E(v) = sum vol * (|grad v|^2 + eps^2)^(p/2) / p  -  sum vol * source * v
/// over cell values, with pinned cells held at fixed values. Gradients are
/// forward differences; a neighbor beyond the bounding box is a reflected
/// ghost (v_ghost = -v), which places the Dirichlet zero on the box face.
/// Unmasked cells are always pinned (to 0 unless stated otherwise).
struct PEnergyProblem {
  GridPtr grid;
  double p = 2.0;
  double eps_reg = 0.0;
  std::vector<std::uint8_t> pinned;  // per cell, 1 = fixed
  std::vector<double> pinned_values;
  std::vector<double> source;  // empty = zero
};

PEnergyProblem make_dirichlet_problem(const GridPtr& grid, double p, double eps_reg,
                                      const std::vector<double>& source);

struct MinimizeOptions {
  int max_iters = 2000;
  double residual_tol = 1e-8;  // on max |dE/dv| / cellvol over free cells
  bool require_descent = true;
};

struct MinimizeResult {
  ScalarField field;
  double energy = 0;          // regularized objective at the final iterate
  double residual_inf = 0;    // max |dE/dv| / cellvol over free cells
  int iterations = 0;
  bool converged = false;
};

/// Preconditioned nonlinear conjugate gradient (Polak-Ribiere+, secant line
/// search). The objective never increases between iterates.
MinimizeResult minimize_p_energy(const PEnergyProblem& prob, const std::vector<double>& init,
                                 const MinimizeOptions& opts);

/// Unregularized p-Dirichlet energy sum vol * |grad v|^p (forward differences,
/// same ghost rules as the minimizer).
double p_dirichlet_energy(const PEnergyProblem& prob, const std::vector<double>& v, double p);

/// Discrete weak pairing sum vol * |grad u|^(p-2) grad u . grad phi with the
/// minimizer's forward-difference stencil (zero-gradient cells contribute 0).
double weak_pairing(const PEnergyProblem& prob, const std::vector<double>& u,
                    const std::vector<double>& phi, double p);

/// |grad u| by central differences in the interior and one-sided differences
/// at the mask boundary; zero on unmasked cells.
ScalarField gradient_magnitude(const ScalarField& u);

}  // namespace morreykit
