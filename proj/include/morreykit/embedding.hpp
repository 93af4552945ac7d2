#pragma once

#include <string>
#include <vector>

#include "morreykit/capacity.hpp"
#include "morreykit/lane_emden.hpp"

namespace morreykit {

/// Nonnegative weight density on the grid: nu = w dy.
struct MeasureSpec {
  ScalarField weight;
  double mass = 0;
  explicit MeasureSpec(ScalarField w);
  double measure_of(const std::vector<std::int64_t>& cells) const;
  double lq_norm(const ScalarField& f, double qexp) const;  // (int |f|^q dnu)^(1/q)
};

/// Seeded corpus of test fields: radial power tails, indicators and random
/// compactly supported bumps. Bump supports stay inside the domain so the
/// fields are admissible for gradient-side functionals.
std::vector<ScalarField> probe_corpus(const GridPtr& grid, double lambda_over_p,
                                      std::uint64_t seed, int bumps = 4);

struct RatioEstimate {
  double value = 0;
  std::string witness;
};

/// max over the corpus of ||I_alpha f||_target / ||f||_{p,lambda}; the target
/// is the intersection norm for p < lambda/alpha and BMO at p = lambda/alpha.
RatioEstimate sobolev_morrey_embedding_probe(const GridPtr& grid, double alpha, double p,
                                             double lambda, const BallFamily& family,
                                             std::uint64_t seed);

struct RatioRow {
  Point center;
  double r = 0;
  double ratio = 0;
};
struct RatioTable {
  std::vector<RatioRow> rows;
  double max_ratio = 0;
};

/// nu(B(x,r)) / r^(q(n-p)/p) over family balls contained in the domain.
RatioTable isocapacitary_check(const MeasureSpec& nu, double p, double q,
                               const BallFamily& balls);

struct CompactRatioRow {
  std::string set_name;
  double nu_K = 0;
  double capacity = 0;
  double ratio = 0;
  bool flagged = false;
};

/// nu(K) / C(K; grad-p)^(q/p) over a family of compact sets.
std::vector<CompactRatioRow> compact_isocapacitary_check(const GridPtr& grid,
                                                         const MeasureSpec& nu, double p, double q,
                                                         const std::vector<CompactSetSpec>& sets,
                                                         const CapacityOptions& opts = {});

struct OpenSetSpec {
  CompactSetSpec cells;  // reused geometry; treated as an open cell set
  std::string name;
};

struct FaberKrahnResult {
  double lambda = 0;  // Rayleigh-quotient upper bound at the best iterate
  int iterations = 0;
  bool flagged = false;
};

/// Rayleigh quotient inf of int |grad f|^p over int |f|^p dnu on fields
/// supported in O, by normalized inverse-power iteration on the p-energy.
FaberKrahnResult faber_krahn_lambda(const MeasureSpec& nu, double p, const OpenSetSpec& O,
                                    int outer_iters = 14, const SolveOptions& inner = {});

struct OperatorProbeResult {
  double riesz_constant = 0;      // max ||I_1 f||_{L^q(nu)} / ||f||_{L^p}
  double embedding_constant = 0;  // max ||f||_{L^q(nu)} / || |grad f| ||_{L^p}
  double bridge_violation = 0;    // max over corpus of max(|f| - c_n I_1 |grad f|)/||f||_inf
};

/// Corpus estimates for the operator-norm and gradient-embedding constants,
/// plus the pointwise bound |f| <= c_n I_1 |grad f| with c_n = Gamma(n/2)/(2 pi^(n/2)).
OperatorProbeResult operator_embedding_probe(const GridPtr& grid, const MeasureSpec& nu, double p,
                                             double q, std::uint64_t seed);

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace morreykit
