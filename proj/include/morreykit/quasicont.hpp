#pragma once

#include <vector>

#include "morreykit/capacity.hpp"
#include "morreykit/riesz.hpp"

namespace morreykit {

/// Exponent bookkeeping for the truncation construction. The target scale is
/// mu = n - (n-lambda) q / p and thresholds follow s_r = r^(beta q/(q-p));
/// beta must clear beta_bound(), gamma must sit strictly below beta.
struct TruncationParams {
  double p = 2.0, lambda = 1.6;  // source index
  double q = 1.5, mu = 0.0;      // target index (mu derived)
  double alpha = 0.5;
  double beta = 0.1, gamma = 0.05;
  int dim = 2;

  TruncationParams(double p_, double lambda_, double q_, double alpha_, double beta_,
                   double gamma_, int dim_);
  double beta_bound() const;
  double threshold(double r) const;          // s_r
  double threshold_log2(double log2_r) const;  // s_r from log2(r), safe for tiny r
};

/// Radius schedule r_0 = 1 > r_1 > ... with (r_{j+1}/r_j)^gamma <= 1/2; the
/// shipped schedule takes r_j = 2^(-j/gamma), which meets the certificate
/// with equality, so r_j^gamma == 2^-j exactly.
struct TruncationSchedule {
  double gamma = 0.1;
  std::vector<double> radii;
  std::vector<double> log2_radii;
  double clamp_level(int j) const;  // r_j^gamma
  bool certificate() const;
};

TruncationSchedule make_schedule(double gamma, int J);

struct TruncationStep {
  ScalarField truncated;
  double threshold = 0;
  std::vector<std::int64_t> exceedance;  // cells with |f| > s_r
};

/// f_r = f where |f| <= s_r, 0 elsewhere; kept values are copied verbatim.
TruncationStep truncate(const ScalarField& f, double r, const TruncationParams& params);

/// Smoothness probe for the regime alpha > lambda/p: Holder seminorm of
/// I_alpha f at exponent delta = alpha - lambda/p, which must lie in (0,1).
SeminormReport lip_delta_check(const ScalarField& f, double alpha, const MorreyIndex& idx,
                               int pair_budget, std::uint64_t seed);

/// Pointwise clamp of h_next - h_cur to [-r^gamma, +r^gamma].
ScalarField clamp_increment(const ScalarField& h_next, const ScalarField& h_cur,
                            double clamp_level);

struct QuasicontinuityReport {
  ScalarField representative;          // h
  ScalarField potential;               // g = I_alpha f on the same grid
  std::vector<std::int64_t> exceptional;  // cells of O
  CapacityResult exceptional_capacity;    // solve for O (value 0 when empty)
  std::vector<double> step_capacities;    // certified bounds for each O_j
  SeminormReport holder;                  // gamma-seminorm of h
  int J = 0;                              // tail start selected
  int M = 0;                              // first inert truncation level
  bool tail_exact = false;                // f_{r_M} == f held bitwise
  bool flagged = false;
  std::string notes;
};

struct RepresentativeOptions {
  CapacityOptions capacity;
  BallFamily capacity_family;  // family for the exceptional-set solves
  int holder_pair_budget = 4000;
  std::uint64_t seed = 0;
  int max_levels = 24;  // schedule-length guard
};

/// The truncation pipeline: potentials h_j = I_alpha f_{r_j} along the
/// schedule, clamp sets O_j = {|h_{j+1}-h_j| > r_j^gamma}, smallest tail
/// start J with the summed certified capacities below eps. Off the union O
/// the clamps are inactive and the telescoped sum equals the last potential,
/// which is assigned directly, so h matches I_alpha f bit for bit there.
QuasicontinuityReport build_representative(const ScalarField& f, double alpha,
                                           const TruncationParams& params,
                                           const TruncationSchedule& schedule, double eps,
                                           const RepresentativeOptions& opts);

struct LebesgueScan {
  std::vector<std::int64_t> flagged;
  double measure = 0;
  CapacityResult capacity;
  std::vector<double> oscillation_at_min_delta;  // per flagged cell
};

/// Flags cells whose oscillation never falls below the threshold along the
/// (decreasing) delta ladder; since the oscillation is monotone in delta the
/// test reduces to the smallest delta. The flagged set's capacity is
/// estimated at the supplied index.
LebesgueScan lebesgue_scan(const ScalarField& g, const std::vector<double>& delta_ladder,
                           double omega_threshold, double alpha, const MorreyIndex& idx,
                           const BallFamily& capacity_family, const CapacityOptions& opts = {});

}  // namespace morreykit
