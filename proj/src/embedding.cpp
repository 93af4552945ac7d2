#include "morreykit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "morreykit/riesz.hpp"
#include "morreykit/rng.hpp"

namespace morreykit {

MeasureSpec::MeasureSpec(ScalarField w) : weight(std::move(w)) {
  for (std::int64_t i : weight.grid()->masked_cells())
    if (weight[i] < 0) throw std::invalid_argument("measure weight must be nonnegative");
  mass = integrate(weight, RegionDomain{});
  if (!(mass > 0) || !std::isfinite(mass))
    throw std::invalid_argument("measure mass must be finite and positive");
}

double MeasureSpec::measure_of(const std::vector<std::int64_t>& cells) const {
  double s = 0;
  for (std::int64_t i : cells) s += weight[i];
  return s * weight.grid()->cell_volume();
}

double MeasureSpec::lq_norm(const ScalarField& f, double qexp) const {
  const Grid& g = *weight.grid();
  double s = 0;
  for (std::int64_t i : g.masked_cells()) s += weight[i] * std::pow(std::fabs(f[i]), qexp);
  return std::pow(s * g.cell_volume(), 1.0 / qexp);
}

std::vector<ScalarField> probe_corpus(const GridPtr& grid, double lambda_over_p,
                                      std::uint64_t seed, int bumps) {
  const Grid& g = *grid;
  std::vector<ScalarField> out;
  double R = 0.45 * g.domain_diameter();
  // radial power tails around the critical exponent
  for (int k = 1; k <= 3; ++k) {
    double expo = std::max(0.05, lambda_over_p - 0.05 * k);
    out.push_back(sample([expo](const Point& x) {
      double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      return std::pow(std::max(r, 1e-9), -expo);
    }, grid));
  }
  // indicator of a centered ball
  out.push_back(sample([R](const Point& x) {
    return (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < R * R * 0.25) ? 1.0 : 0.0;
  }, grid));
  // random compactly supported bumps
  auto bdist = distance_to_exterior(g);
  auto rng = labeled_rng(seed, "embedding.corpus");
  const auto& cells = g.masked_cells();
  int made = 0, guard = 0;
  while (made < bumps && guard++ < bumps * 500) {
    std::int64_t c = cells[uniform_index(rng, g.masked_count())];
    double w = uniform(rng, 0.1, 0.3) * g.domain_diameter();
    double amp = uniform(rng, 0.5, 2.0);
    if (bdist[c] < w) continue;
    Point x0 = g.center(c);
    out.push_back(sample([x0, w, amp, &g](const Point& x) {
      double t = dist(x, x0, g.dim()) / w;
      if (t >= 1.0) return 0.0;
      double s = 1.0 - t * t;
      return amp * s * s;
    }, grid));
    ++made;
  }
  return out;
}

RatioEstimate sobolev_morrey_embedding_probe(const GridPtr& grid, double alpha, double p,
                                             double lambda, const BallFamily& family,
                                             std::uint64_t seed) {
  const int n = grid->dim();
  if (!(p > 1)) throw std::invalid_argument("probe needs p > 1");
  if (p > lambda / alpha + 1e-12)
    throw std::invalid_argument("p > lambda/alpha belongs to the Lipschitz probe");
  bool bmo_case = std::fabs(p - lambda / alpha) < 1e-9;
  MorreyEvaluator source_eval(MorreyIndex(p, lambda, n), family);
  RieszKernelSpec spec(alpha, *grid);
  RatioEstimate best;
  auto corpus = probe_corpus(grid, lambda / p, seed);
  for (size_t ci = 0; ci < corpus.size(); ++ci) {
    const auto& f = corpus[ci];
    double fn = std::pow(source_eval.eval_power(f), 1.0 / p);
    if (!(fn > 0)) continue;  // zero fields are excluded from ratios
    ScalarField g = riesz_potential(f, spec, RieszMethod::fast);
    double target;
    if (bmo_case) {
      target = bmo_seminorm(g, family).value;
    } else {
      double q1 = lambda * p / (lambda - alpha * p);
      double l2 = lambda - alpha * p;
      double n1 = morrey_norm(g, MorreyIndex(q1, lambda, n), family).value;
      double n2 = morrey_norm(g, MorreyIndex(p, l2, n), family).value;
      target = std::max(n1, n2);
    }
    double ratio = target / fn;
    if (ratio > best.value) {
      best.value = ratio;
      best.witness = "corpus[" + std::to_string(ci) + "]";
    }
  }
  return best;
}

RatioTable isocapacitary_check(const MeasureSpec& nu, double p, double q,
                               const BallFamily& balls) {
  const Grid& g = *nu.weight.grid();
  const int n = g.dim();
  if (!(p > 1) || !(p < std::min(static_cast<double>(n), q)))
    throw std::invalid_argument("isocapacitary_check needs 1 < p < min(n, q)");
  double expo = q * (n - p) / p;
  auto bdist = distance_to_exterior(g);
  RatioTable out;
  // ball masses by direct enumeration per (center, radius), balls inside the domain only
  for (double r : balls.radii) {
    double w = std::pow(r, expo);
    for (std::int64_t c : balls.centers) {
      if (bdist[c] <= r) continue;  // require B(x,r) inside the domain
      RegionBall ball{g.center(c), r, false};
      double m = integrate(nu.weight, ball);
      RatioRow row{g.center(c), r, m / w};
      out.max_ratio = std::max(out.max_ratio, row.ratio);
      out.rows.push_back(row);
    }
  }
  return out;
}

std::vector<CompactRatioRow> compact_isocapacitary_check(const GridPtr& grid,
                                                         const MeasureSpec& nu, double p, double q,
                                                         const std::vector<CompactSetSpec>& sets,
                                                         const CapacityOptions& opts) {
  std::vector<CompactRatioRow> rows;
  for (const auto& spec : sets) {
    auto cells = spec.realize(*grid);
    auto cap = variational_p_capacity(grid, spec, p, opts);
    CompactRatioRow row;
    row.set_name = spec.name();
    row.nu_K = nu.measure_of(cells);
    row.capacity = cap.value;
    row.flagged = cap.flagged;
    row.ratio = cap.value > 0 ? row.nu_K / std::pow(cap.value, q / p) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

FaberKrahnResult faber_krahn_lambda(const MeasureSpec& nu, double p, const OpenSetSpec& O,
                                    int outer_iters, const SolveOptions& inner) {
  const GridPtr& grid = nu.weight.grid();
  const Grid& g = *grid;
  auto cells = O.cells.realize(g);
  double nuO = nu.measure_of(cells);
  if (!(nuO > 0)) throw std::invalid_argument("faber_krahn_lambda needs nu(O) > 0");

  std::vector<std::uint8_t> inO(static_cast<size_t>(g.ncells()), 0);
  for (std::int64_t i : cells) inO[i] = 1;

  PEnergyProblem prob = make_dirichlet_problem(grid, p, 0.0, {});
  for (std::int64_t i = 0; i < g.ncells(); ++i)
    if (!inO[i]) { prob.pinned[i] = 1; prob.pinned_values[i] = 0.0; }
  prob.eps_reg = 1e-6;

  auto rayleigh = [&](const std::vector<double>& v) {
    double num = p_dirichlet_energy(prob, v, p);
    double den = 0;
    for (std::int64_t i : cells) den += nu.weight[i] * std::pow(std::fabs(v[i]), p);
    den *= g.cell_volume();
    return den > 0 ? num / den : std::numeric_limits<double>::infinity();
  };

  std::vector<double> f(static_cast<size_t>(g.ncells()), 0.0);
  for (std::int64_t i : cells) f[i] = 1.0;
  FaberKrahnResult out;
  out.lambda = rayleigh(f);
  MinimizeOptions mopts;
  mopts.max_iters = inner.max_iters;
  for (int it = 0; it < outer_iters; ++it) {
    // inverse-power sweep: solve the p-problem with source w |f|^(p-1)
    std::vector<double> src(f.size(), 0.0);
    for (std::int64_t i : cells)
      src[i] = nu.weight[i] * std::pow(std::fabs(f[i]), p - 1.0);
    PEnergyProblem step = prob;
    step.source = src;
    double smax = 0;
    for (double x : src) smax = std::max(smax, std::fabs(x));
    mopts.residual_tol = inner.tol_scale * std::max(1.0, smax);
    MinimizeResult res = minimize_p_energy(step, f, mopts);
    double norm = 0;
    for (std::int64_t i : cells)
      norm += nu.weight[i] * std::pow(std::fabs(res.field[i]), p);
    norm = std::pow(norm * g.cell_volume(), 1.0 / p);
    if (!(norm > 0)) { out.flagged = true; break; }
    for (std::int64_t i : cells) f[i] = res.field[i] / norm;
    double lam = rayleigh(f);
    out.iterations = it + 1;
    if (lam > out.lambda * (1 + 1e-12) && it > 2) break;  // stalled
    out.lambda = std::min(out.lambda, lam);
  }
  if (!std::isfinite(out.lambda)) out.flagged = true;
  return out;
}

OperatorProbeResult operator_embedding_probe(const GridPtr& grid, const MeasureSpec& nu, double p,
                                             double q, std::uint64_t seed) {
  const Grid& g = *grid;
  const int n = g.dim();
  if (!(p > 1) || !(p < std::min(static_cast<double>(n), q)))
    throw std::invalid_argument("operator_embedding_probe needs 1 < p < min(n, q)");
  const double pi = 3.14159265358979323846;
  double c_n = std::tgamma(n / 2.0) / (2.0 * std::pow(pi, n / 2.0));
  RieszKernelSpec spec(1.0, g);
  OperatorProbeResult out;
  auto corpus = probe_corpus(grid, 0.4, seed);
  auto bdist = distance_to_exterior(g);
  for (const auto& f : corpus) {
    double lp = 0;
    for (std::int64_t i : g.masked_cells()) lp += std::pow(std::fabs(f[i]), p);
    lp = std::pow(lp * g.cell_volume(), 1.0 / p);
    if (!(lp > 0)) continue;
    ScalarField If = riesz_potential(f, spec, RieszMethod::fast);
    out.riesz_constant = std::max(out.riesz_constant, nu.lq_norm(If, q) / lp);

    // the gradient-side functionals need Sobolev members vanishing near the
    // boundary; skip jump fields (their gradient is a measure, not a function)
    bool compact = true;
    for (std::int64_t i : g.masked_cells())
      if (f[i] != 0.0 && bdist[i] <= 2.0 * g.max_spacing()) { compact = false; break; }
    if (!compact) continue;

    ScalarField gm = gradient_magnitude(f);
    if (gm.max_value() * g.max_spacing() > 0.5 * f.max_abs()) continue;
    double gp = 0;
    for (std::int64_t i : g.masked_cells()) gp += std::pow(gm[i], p);
    gp = std::pow(gp * g.cell_volume(), 1.0 / p);
    if (gp > 0)
      out.embedding_constant = std::max(out.embedding_constant, nu.lq_norm(f, q) / gp);

    // pointwise bridge |f| <= c_n I_1 |grad f|
    ScalarField Ig = riesz_potential(gm, spec, RieszMethod::fast);
    double fmax = f.max_abs();
    if (fmax > 0) {
      double viol = 0;
      for (std::int64_t i : g.masked_cells())
        viol = std::max(viol, std::fabs(f[i]) - c_n * Ig[i]);
      out.bridge_violation = std::max(out.bridge_violation, viol / fmax);
    }
  }
  return out;
}

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("kendall_tau needs two sequences of equal length >= 2");
  const int m = static_cast<int>(a.size());
  int concordant = 0, discordant = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double s = (a[j] - a[i]) * (b[j] - b[i]);
      if (s > 0) ++concordant;
      else if (s < 0) ++discordant;
    }
  return 2.0 * (concordant - discordant) / (m * (m - 1.0));
}

}  // namespace morreykit
