#include "morreykit/quasicont.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "morreykit/conv.hpp"

namespace morreykit {

TruncationParams::TruncationParams(double p_, double lambda_, double q_, double alpha_,
                                   double beta_, double gamma_, int dim_)
    : p(p_), lambda(lambda_), q(q_), alpha(alpha_), beta(beta_), gamma(gamma_), dim(dim_) {
  if (!(q > 1.0) || !(q < p)) throw std::invalid_argument("truncation needs 1 < q < p");
  if (!(lambda > 0) || !(lambda <= dim)) throw std::invalid_argument("lambda must lie in (0, n]");
  if (!(alpha > 0) || !(alpha < dim)) throw std::invalid_argument("alpha must lie in (0, n)");
  mu = dim - (dim - lambda) * q / p;
  double bound = beta_bound();
  if (!(beta > 0) || !(beta < bound))
    throw std::invalid_argument("beta " + std::to_string(beta) + " must lie in (0, " +
                                std::to_string(bound) + ")");
  if (!(gamma > 0) || !(gamma < beta))
    throw std::invalid_argument("gamma must lie in (0, beta)");
}

double TruncationParams::beta_bound() const {
  double b1 = alpha * (1.0 - q / p);
  double b2 = lambda * (1.0 - q / p) / (lambda + (1.0 - alpha) * q);
  return std::min({1.0, b1, b2});
}

double TruncationParams::threshold(double r) const {
  return std::pow(r, beta * q / (q - p));
}

double TruncationParams::threshold_log2(double log2_r) const {
  return std::exp2(log2_r * beta * q / (q - p));
}

double TruncationSchedule::clamp_level(int j) const { return std::exp2(-static_cast<double>(j)); }

bool TruncationSchedule::certificate() const {
  if (radii.empty() || radii.front() != 1.0) return false;
  for (size_t j = 0; j + 1 < radii.size(); ++j)
    if (!(gamma * (log2_radii[j + 1] - log2_radii[j]) <= -1.0 + 1e-12)) return false;
  return true;
}

TruncationSchedule make_schedule(double gamma, int J) {
  if (!(gamma > 0) || !(gamma < 1)) throw std::invalid_argument("schedule gamma must lie in (0,1)");
  if (J < 2) throw std::invalid_argument("schedule needs J >= 2");
  TruncationSchedule s;
  s.gamma = gamma;
  for (int j = 0; j <= J; ++j) {
    double l2 = -static_cast<double>(j) / gamma;
    s.log2_radii.push_back(l2);
    s.radii.push_back(std::exp2(l2));
  }
  if (!s.certificate()) throw std::logic_error("schedule certificate failed");
  return s;
}

TruncationStep truncate(const ScalarField& f, double r, const TruncationParams& params) {
  if (!(r > 0) || !(r <= 1)) throw std::invalid_argument("truncation radius must lie in (0, 1]");
  double s = params.threshold(r);
  TruncationStep out{ScalarField::zeros(f.grid()), s, {}};
  std::vector<double> v(f.values());
  for (std::int64_t i : f.grid()->masked_cells()) {
    if (std::fabs(v[i]) > s) {
      v[i] = 0.0;
      out.exceedance.push_back(i);
    }
  }
  out.truncated = ScalarField(f.grid(), std::move(v));
  return out;
}

SeminormReport lip_delta_check(const ScalarField& f, double alpha, const MorreyIndex& idx,
                               int pair_budget, std::uint64_t seed) {
  double delta = alpha - idx.lambda / idx.p;
  if (!(delta > 0) || !(delta < 1))
    throw std::invalid_argument("lip_delta_check needs delta = alpha - lambda/p in (0,1), got " +
                                std::to_string(delta));
  ScalarField g = riesz_potential(f, RieszKernelSpec(alpha, *f.grid()), RieszMethod::fast);
  return holder_seminorm(g, delta, pair_budget, seed);
}

ScalarField clamp_increment(const ScalarField& h_next, const ScalarField& h_cur,
                            double clamp_level) {
  if (h_next.grid() != h_cur.grid())
    throw std::invalid_argument("clamp_increment: fields on different grids");
  std::vector<double> v(h_next.values().size(), 0.0);
  for (std::int64_t i : h_next.grid()->masked_cells())
    v[i] = std::clamp(h_next[i] - h_cur[i], -clamp_level, clamp_level);
  return ScalarField(h_next.grid(), std::move(v));
}

QuasicontinuityReport build_representative(const ScalarField& f, double alpha,
                                           const TruncationParams& params,
                                           const TruncationSchedule& schedule, double eps,
                                           const RepresentativeOptions& opts) {
  const GridPtr& grid = f.grid();
  const Grid& g = *grid;
  if (params.gamma != schedule.gamma)
    throw std::invalid_argument("schedule gamma differs from truncation gamma");
  if (!(params.p < params.lambda / alpha))
    throw std::invalid_argument("hypotheses need p < lambda/alpha");
  if (!(params.q < std::min(params.p, params.lambda / alpha)))
    throw std::invalid_argument("hypotheses need q < min(p, lambda/alpha)");
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");

  QuasicontinuityReport rep{ScalarField::zeros(grid), ScalarField::zeros(grid), {},
                            CapacityResult{},          {},
                            SeminormReport{},          0,
                            0,                         false,
                            false,                     ""};

  const double fmax = f.max_abs();
  // first inert level: thresholds pass the grid sup of |f|, so the tail of
  // the construction vanishes identically
  int M = -1;
  int levels = std::min<int>(static_cast<int>(schedule.radii.size()) - 1, opts.max_levels);
  for (int j = 0; j <= levels; ++j) {
    if (params.threshold_log2(schedule.log2_radii[j]) >= fmax) { M = j; break; }
  }
  if (M < 0) {
    M = levels;
    rep.flagged = true;
    rep.notes += "schedule exhausted before the truncation became inert; ";
  }
  rep.M = M;

  // potentials along the schedule
  RieszKernelSpec kspec(alpha, g);
  std::vector<ScalarField> h;
  std::vector<std::vector<std::int64_t>> exceed;
  bool tail_bitwise = true;
  for (int j = 0; j <= M; ++j) {
    double s = params.threshold_log2(schedule.log2_radii[j]);
    std::vector<double> v(f.values());
    std::vector<std::int64_t> ex;
    for (std::int64_t i : g.masked_cells())
      if (std::fabs(v[i]) > s) {
        v[i] = 0.0;
        ex.push_back(i);
      }
    if (j == M && !ex.empty()) tail_bitwise = false;
    exceed.push_back(std::move(ex));
    h.push_back(riesz_potential(ScalarField(grid, std::move(v)), kspec, RieszMethod::fast));
  }
  rep.tail_exact = tail_bitwise;
  rep.potential = tail_bitwise ? h.back()
                               : riesz_potential(f, kspec, RieszMethod::fast);

  // clamp sets O_j and their certified capacities
  std::vector<std::vector<std::int64_t>> O(M);
  std::vector<CapacityResult> Ocap(M);
  std::vector<const std::vector<double>*> densities(M, nullptr);
  for (int j = 0; j + 1 <= M; ++j) {
    double lvl = schedule.clamp_level(j);
    for (std::int64_t i : g.masked_cells())
      if (std::fabs(h[j + 1][i] - h[j][i]) > lvl) O[j].push_back(i);
    if (!O[j].empty()) {
      Ocap[j] = riesz_morrey_capacity(grid, CompactSetSpec::bitmap(O[j]), alpha,
                                      MorreyIndex(params.q, params.mu, g.dim()),
                                      opts.capacity_family, opts.capacity);
      densities[j] = &Ocap[j].density.values();
    }
    rep.step_capacities.push_back(O[j].empty() ? 0.0 : Ocap[j].value);
  }

  // smallest J whose tail of certified bounds stays below eps
  int J = M;
  {
    double tail = 0;
    std::vector<double> tails(M + 1, 0.0);
    for (int j = M - 1; j >= 0; --j) {
      tail += rep.step_capacities[j];
      tails[j] = tail;
    }
    for (int j = 0; j <= M; ++j)
      if (tails[j] < eps) { J = j; break; }
  }
  rep.J = J;

  // union of the tail clamp sets
  std::vector<std::uint8_t> inO(static_cast<size_t>(g.ncells()), 0);
  for (int j = J; j < M; ++j)
    for (std::int64_t i : O[j]) inO[i] = 1;
  for (std::int64_t i = 0; i < g.ncells(); ++i)
    if (inO[i]) rep.exceptional.push_back(i);

  // assemble h: clamped partial sums on O, the telescoped limit elsewhere
  {
    std::vector<double> v(static_cast<size_t>(g.ncells()), 0.0);
    for (std::int64_t i : g.masked_cells()) {
      if (!inO[i]) {
        v[i] = h[M][i];
      } else {
        double acc = h[J][i];
        for (int j = J; j + 1 <= M; ++j) {
          double lvl = schedule.clamp_level(j);
          acc += std::clamp(h[j + 1][i] - h[j][i], -lvl, lvl);
        }
        v[i] = acc;
      }
    }
    rep.representative = ScalarField(grid, std::move(v));
  }

  // capacity of O itself, seeded with the max of the per-level densities so
  // the certified value inherits subadditivity
  if (!rep.exceptional.empty()) {
    std::vector<double> seedmax(static_cast<size_t>(g.ncells()), 0.0);
    for (int j = J; j < M; ++j)
      if (densities[j])
        for (std::int64_t i : g.masked_cells())
          seedmax[i] = std::max(seedmax[i], (*densities[j])[i]);
    rep.exceptional_capacity = riesz_morrey_capacity_seeded(
        grid, CompactSetSpec::bitmap(rep.exceptional), alpha,
        MorreyIndex(params.q, params.mu, g.dim()), opts.capacity_family, opts.capacity, &seedmax);
    if (!(rep.exceptional_capacity.value < eps)) {
      rep.flagged = true;
      rep.notes += "exceptional-set capacity did not fall below eps; ";
    }
  }

  rep.holder = holder_seminorm(rep.representative, params.gamma, opts.holder_pair_budget, opts.seed);
  return rep;
}

LebesgueScan lebesgue_scan(const ScalarField& g, const std::vector<double>& delta_ladder,
                           double omega_threshold, double alpha, const MorreyIndex& idx,
                           const BallFamily& capacity_family, const CapacityOptions& opts) {
  if (delta_ladder.empty()) throw std::invalid_argument("lebesgue_scan: empty delta ladder");
  for (size_t i = 1; i < delta_ladder.size(); ++i)
    if (!(delta_ladder[i] < delta_ladder[i - 1]))
      throw std::invalid_argument("lebesgue_scan: delta ladder must decrease");
  if (!(omega_threshold > 0)) throw std::invalid_argument("omega threshold must be positive");
  const GridPtr& grid = g.grid();
  const Grid& gr = *grid;
  double dmin = delta_ladder.back();

  // one master geometric ladder in [2h, dmin]; oscillation is max-min of the
  // ball means over it, evaluated on the whole grid radius by radius
  auto radii = oscillation_ladder(gr, dmin, 5);
  std::vector<double> lo(g.values().size()), hi(g.values().size());
  bool first = true;
  for (double r : radii) {
    auto num = convolve(grid, g.values(), make_ball_kernel(grid, r));
    const auto& den = ball_cell_counts(grid, r);
    for (std::int64_t i : gr.masked_cells()) {
      double m = num[i] / den[i];
      if (first) { lo[i] = hi[i] = m; }
      else {
        lo[i] = std::min(lo[i], m);
        hi[i] = std::max(hi[i], m);
      }
    }
    first = false;
  }
  LebesgueScan out;
  for (std::int64_t i : gr.masked_cells()) {
    double osc = hi[i] - lo[i];
    if (osc > omega_threshold) {
      out.flagged.push_back(i);
      out.oscillation_at_min_delta.push_back(osc);
    }
  }
  out.measure = static_cast<double>(out.flagged.size()) * gr.cell_volume();
  if (!out.flagged.empty())
    out.capacity = riesz_morrey_capacity(grid, CompactSetSpec::bitmap(out.flagged), alpha,
                                         MorreyIndex(idx.p, idx.lambda, gr.dim()), capacity_family,
                                         opts);
  return out;
}

}  // namespace morreykit
