#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morreykit/ball_family.hpp"
#include "morreykit/conv.hpp"
#include "morreykit/field.hpp"

namespace morreykit {

struct MorreyIndex {
  double p = 2.0;
  double lambda = 1.0;
  MorreyIndex() = default;
  MorreyIndex(double p_, double lambda_, int dim);
};

struct BallWitness {
  Point center{0, 0, 0};
  double radius = 0;
  std::int64_t cell = -1;
};
struct PairWitness {
  Point a{0, 0, 0}, b{0, 0, 0};
  std::int64_t cell_a = -1, cell_b = -1;
};

struct SeminormReport {
  double value = 0;
  std::optional<BallWitness> ball;
  std::optional<PairWitness> pair;
  std::string family;
};

/// Reusable evaluator of the Morrey functional
///   F_p,lambda(f) = max over family of r^(lambda-n) * integral over
///   B(x,r) of |f|^p,
/// which is the p-th power of the Morrey norm. Ball integrals are batched by
/// radius through the FFT layer; for lambda == n the max reduces to the full
/// domain integral (the top ladder radius covers the domain from any center).
class MorreyEvaluator {
 public:
  MorreyEvaluator(MorreyIndex idx, BallFamily family);
  // p-th power of the norm plus the (lexicographically first) maximizing ball
  double eval_power(const ScalarField& f, BallWitness* witness = nullptr) const;
  SeminormReport norm(const ScalarField& f) const;
  const BallFamily& family() const { return family_; }
  const MorreyIndex& index() const { return idx_; }

 private:
  MorreyIndex idx_;
  BallFamily family_;
  bool plain_lp_ = false;
  std::vector<LagKernel> kernels_;
};

/// sup over the family of (r^(lambda-n) * int_{B cap domain} |f|^p)^(1/p).
SeminormReport morrey_norm(const ScalarField& f, const MorreyIndex& idx, const BallFamily& family);

/// max over the family of the mean oscillation of f over B(x,r) cap domain.
SeminormReport bmo_seminorm(const ScalarField& f, const BallFamily& family);

/// Sampled lower bound of sup |f(x)-f(y)| / |x-y|^beta: all face-neighbor
/// masked pairs plus `pair_budget` seeded random masked pairs.
SeminormReport holder_seminorm(const ScalarField& f, double beta, int pair_budget,
                               std::uint64_t seed);

struct ZorkoResult {
  ScalarField approximant;
  double achieved_error = 0;
  double rho = 0;
  bool achieved = false;
  std::vector<std::pair<double, double>> trace;  // (rho, error) along the ladder
};

/// Smooth-approximation map into the closure of compactly supported fields:
/// zero a boundary collar of width 2*rho, then mollify at radius rho; returns
/// the first ladder entry with target-norm error below eps, else the best.
ZorkoResult zorko_approximate(const ScalarField& f, const MorreyIndex& target, double source_lambda,
                              double eps, const std::vector<double>& rho_ladder,
                              const BallFamily& family);

}  // namespace morreykit
