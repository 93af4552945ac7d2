#pragma once

#include <string>
#include <vector>

#include "morreykit/morrey.hpp"

namespace morreykit {

/// Compact test set realized as grid cells. Balls/boxes are closed here
/// (center membership by <=); the induced cell set is intersected with the
/// domain mask and must be nonempty.
struct CompactSetSpec {
  enum class Kind { ball, box, two_balls, bitmap };
  Kind kind = Kind::ball;
  Point c1{0, 0, 0}, c2{0, 0, 0};
  double r1 = 0.25, r2 = 0.0;
  std::array<double, 6> box{0, 0, 0, 0, 0, 0};  // lo_x hi_x lo_y hi_y lo_z hi_z
  std::vector<std::int64_t> cells;              // for Kind::bitmap
  std::string name() const;

  static CompactSetSpec ball(const Point& c, double r);
  static CompactSetSpec make_box(const std::array<double, 6>& b);
  static CompactSetSpec two_balls(const Point& a, double ra, const Point& b, double rb);
  static CompactSetSpec bitmap(std::vector<std::int64_t> cells);

  std::vector<std::int64_t> realize(const Grid& g) const;
};

struct CapacityOptions {
  int max_iters = 350;
  double feas_tol = 1e-3;
  std::vector<double> penalty_stages{1e1, 1e3, 1e5};
  std::uint64_t seed = 0;
};

struct CapacityResult {
  double value = 0;            // objective of the best feasible density/field
  double upper_bound = 0;      // objective of the independent explicit feasible point
  double gap_estimate = 0;     // value minus the best penalized objective seen
  int iterations = 0;
  double constraint_violation_max = 0;
  bool flagged = false;
  ScalarField density;         // admissible h (or capacitary potential f)
  std::string family;
  std::string notes;
};

/// inf of the p-th power of the Morrey norm over densities h >= 0 with
/// (I_alpha h) >= 1 on K. Projected subgradient on a hinge-penalized
/// objective with 3-stage continuation; every iterate is rescaled through the
/// p-homogeneity of the objective to produce a certified feasible candidate,
/// so `value` is always the objective of an exactly feasible density.
CapacityResult riesz_morrey_capacity(const GridPtr& grid, const CompactSetSpec& K, double alpha,
                                     const MorreyIndex& idx, const BallFamily& family,
                                     const CapacityOptions& opts = {});

/// Warm-started variant (seed density added to the explicit feasible start).
CapacityResult riesz_morrey_capacity_seeded(const GridPtr& grid, const CompactSetSpec& K,
                                            double alpha, const MorreyIndex& idx,
                                            const BallFamily& family, const CapacityOptions& opts,
                                            const std::vector<double>* warm_start);

/// inf of sum |grad f|^p over fields with f = 1 on K and f = 0 outside the
/// domain; the obstacle is pinned, so this is a two-level Dirichlet problem
/// solved by the p-energy minimizer. The certificate is a cone profile.
CapacityResult variational_p_capacity(const GridPtr& grid, const CompactSetSpec& K, double p,
                                      const CapacityOptions& opts = {});

struct OuterCapacityResult {
  double value = 0;
  std::vector<double> step_values;
  std::vector<CapacityResult> steps;
};

/// sup of riesz_morrey_capacity along an increasing compact exhaustion of an
/// open cell set; an empty exhaustion yields 0.
OuterCapacityResult capacity_outer(const GridPtr& grid,
                                   const std::vector<CompactSetSpec>& exhaustion, double alpha,
                                   const MorreyIndex& idx, const BallFamily& family,
                                   const CapacityOptions& opts = {});

}  // namespace morreykit
