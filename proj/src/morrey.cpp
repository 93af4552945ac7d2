#include "morreykit/morrey.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "morreykit/conv.hpp"
#include "morreykit/rng.hpp"

namespace morreykit {

MorreyIndex::MorreyIndex(double p_, double lambda_, int dim) : p(p_), lambda(lambda_) {
  if (!(p >= 1.0)) throw std::invalid_argument("Morrey integrability p must satisfy p >= 1");
  if (!(lambda > 0.0) || !(lambda <= dim))
    throw std::invalid_argument("Morrey scale lambda must lie in (0, n]");
}

MorreyEvaluator::MorreyEvaluator(MorreyIndex idx, BallFamily family)
    : idx_(idx), family_(std::move(family)) {
  if (family_.centers.empty() || family_.radii.empty())
    throw std::invalid_argument("MorreyEvaluator: empty ball family");
  const Grid& g = *family_.grid;
  plain_lp_ = idx_.lambda == g.dim() && family_.radii.back() >= g.domain_diameter() * (1 - 1e-12);
  if (!plain_lp_)
    for (double r : family_.radii) kernels_.push_back(make_ball_kernel(family_.grid, r));
}

double MorreyEvaluator::eval_power(const ScalarField& f, BallWitness* witness) const {
  const GridPtr& grid = family_.grid;
  if (f.grid() != grid) throw std::invalid_argument("MorreyEvaluator: field on another grid");
  const Grid& g = *grid;
  std::vector<double> fp(f.values().size(), 0.0);
  for (std::int64_t i : g.masked_cells()) fp[i] = std::pow(std::fabs(f[i]), idx_.p);
  if (plain_lp_) {
    // lambda == n and the top radius covers the domain: the max is the full
    // integral, attained at the top-radius ball of the first center.
    double total = 0;
    for (std::int64_t i : g.masked_cells()) total += fp[i];
    total *= g.cell_volume();
    if (witness) {
      witness->cell = family_.centers.front();
      witness->center = g.center(witness->cell);
      witness->radius = family_.radii.back();
    }
    return total;
  }
  double best = -1;
  BallWitness bw;
  auto all_sums = convolve_many(grid, fp, kernels_);
  for (size_t ri = 0; ri < family_.radii.size(); ++ri) {
    double r = family_.radii[ri];
    const auto& sums = all_sums[ri];
    double w = std::pow(r, idx_.lambda - g.dim()) * g.cell_volume();
    for (std::int64_t c : family_.centers) {
      double term = w * sums[c];
      if (term > best) {
        best = term;
        bw.cell = c;
        bw.radius = r;
      }
    }
  }
  best = std::max(best, 0.0);
  if (witness) {
    bw.center = g.center(bw.cell);
    *witness = bw;
  }
  return best;
}

SeminormReport MorreyEvaluator::norm(const ScalarField& f) const {
  SeminormReport rep;
  BallWitness bw;
  double power = eval_power(f, &bw);
  rep.value = std::pow(power, 1.0 / idx_.p);
  rep.ball = bw;
  rep.family = family_.describe();
  return rep;
}

SeminormReport morrey_norm(const ScalarField& f, const MorreyIndex& idx, const BallFamily& family) {
  return MorreyEvaluator(MorreyIndex(idx.p, idx.lambda, family.grid->dim()), family).norm(f);
}

SeminormReport bmo_seminorm(const ScalarField& f, const BallFamily& family) {
  const GridPtr& grid = family.grid;
  if (f.grid() != grid) throw std::invalid_argument("bmo_seminorm: field on another grid");
  const Grid& g = *grid;
  SeminormReport rep;
  rep.family = family.describe();
  BallWitness bw;
  double best = -1;
  // offsets are shared across centers for each radius
  for (double r : family.radii) {
    std::vector<std::array<int, 3>> offs;
    std::array<int, 3> reach{0, 0, 0};
    for (int d = 0; d < g.dim(); ++d) reach[d] = static_cast<int>(r / g.spacing()[d]) + 1;
    double r2 = r * r;
    for (int dk = -reach[2]; dk <= reach[2]; ++dk)
      for (int dj = -reach[1]; dj <= reach[1]; ++dj)
        for (int di = -reach[0]; di <= reach[0]; ++di) {
          double dx = di * g.spacing()[0], dy = dj * g.spacing()[1];
          double s = dx * dx + dy * dy;
          if (g.dim() == 3) s += dk * g.spacing()[2] * dk * g.spacing()[2];
          if (s < r2) offs.push_back({di, dj, dk});
        }
    std::vector<std::int64_t> members;
    members.reserve(offs.size());
    for (std::int64_t c : family.centers) {
      auto cc = g.coords(c);
      members.clear();
      double sum = 0;
      for (const auto& o : offs) {
        int i = cc[0] + o[0], j = cc[1] + o[1], k = cc[2] + o[2];
        if (i < 0 || i >= g.counts()[0] || j < 0 || j >= g.counts()[1] || k < 0 ||
            k >= g.counts()[2])
          continue;
        std::int64_t idx = g.index(i, j, k);
        if (!g.masked(idx)) continue;
        members.push_back(idx);
        sum += f[idx];
      }
      if (members.empty()) continue;
      double mean = sum / static_cast<double>(members.size());
      double dev = 0;
      for (std::int64_t idx : members) dev += std::fabs(f[idx] - mean);
      dev /= static_cast<double>(members.size());
      if (dev > best) {
        best = dev;
        bw.cell = c;
        bw.radius = r;
      }
    }
  }
  rep.value = std::max(best, 0.0);
  bw.center = g.center(bw.cell);
  rep.ball = bw;
  return rep;
}

SeminormReport holder_seminorm(const ScalarField& f, double beta, int pair_budget,
                               std::uint64_t seed) {
  if (!(beta > 0) || !(beta > 0 && beta <= 1))
    throw std::invalid_argument("Holder exponent must lie in (0, 1]");
  const Grid& g = *f.grid();
  SeminormReport rep;
  PairWitness pw;
  double best = 0;
  auto consider = [&](std::int64_t a, std::int64_t b) {
    if (a == b) return;
    double d = dist(g.center(a), g.center(b), g.dim());
    double q = std::fabs(f[a] - f[b]) / std::pow(d, beta);
    if (q > best) {
      best = q;
      pw.cell_a = a;
      pw.cell_b = b;
    }
  };
  // all face-neighbor masked pairs
  for (std::int64_t idx : g.masked_cells()) {
    auto c = g.coords(idx);
    for (int d = 0; d < g.dim(); ++d) {
      auto cc = c;
      cc[d] += 1;
      if (cc[d] >= g.counts()[d]) continue;
      std::int64_t j = g.index(cc[0], cc[1], cc[2]);
      if (g.masked(j)) consider(idx, j);
    }
  }
  // seeded random masked pairs
  auto rng = labeled_rng(seed, "morrey.holder.pairs");
  const auto& cells = g.masked_cells();
  for (int t = 0; t < pair_budget; ++t) {
    std::int64_t a = cells[uniform_index(rng, g.masked_count())];
    std::int64_t b = cells[uniform_index(rng, g.masked_count())];
    consider(a, b);
  }
  rep.value = best;
  if (pw.cell_a >= 0) {
    pw.a = g.center(pw.cell_a);
    pw.b = g.center(pw.cell_b);
    rep.pair = pw;
  }
  rep.family = "neighbors+" + std::to_string(pair_budget) + " random pairs";
  return rep;
}

ZorkoResult zorko_approximate(const ScalarField& f, const MorreyIndex& target, double source_lambda,
                              double eps, const std::vector<double>& rho_ladder,
                              const BallFamily& family) {
  const GridPtr& grid = f.grid();
  if (!(target.lambda > source_lambda))
    throw std::invalid_argument("zorko_approximate needs target gamma > source lambda");
  if (rho_ladder.empty()) throw std::invalid_argument("zorko_approximate: empty rho ladder");
  for (size_t i = 1; i < rho_ladder.size(); ++i)
    if (!(rho_ladder[i] < rho_ladder[i - 1]))
      throw std::invalid_argument("zorko_approximate: rho ladder must decrease");
  MorreyEvaluator eval(MorreyIndex(target.p, target.lambda, grid->dim()), family);
  auto bdist = distance_to_exterior(*grid);
  ZorkoResult out{ScalarField::zeros(grid), 0, 0, false, {}};
  bool have_best = false;
  for (double rho : rho_ladder) {
    if (rho < 2.0 * grid->max_spacing()) break;  // below mollifier resolution
    // inner truncation: drop a collar of width 2*rho, then mollify at rho
    std::vector<double> v(f.values());
    for (std::int64_t i : grid->masked_cells())
      if (bdist[i] <= 2.0 * rho) v[i] = 0.0;
    ScalarField truncated(grid, std::move(v));
    ScalarField g = mollified_average(truncated, rho);
    double err = std::pow(eval.eval_power(axpby(1.0, f, -1.0, g)), 1.0 / target.p);
    out.trace.emplace_back(rho, err);
    if (!have_best || err < out.achieved_error) {
      out.approximant = g;
      out.achieved_error = err;
      out.rho = rho;
      have_best = true;
    }
    if (err < eps) {
      out.approximant = g;
      out.achieved_error = err;
      out.rho = rho;
      out.achieved = true;
      break;
    }
  }
  if (!have_best) throw std::invalid_argument("zorko_approximate: no resolvable rho in ladder");
  return out;
}

}  // namespace morreykit
