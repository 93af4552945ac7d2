#include "morreykit/lane_emden.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "morreykit/rng.hpp"

namespace morreykit {

PLaplaceProblem::PLaplaceProblem(GridPtr g, double p_, NonlinearityTag tag_, double q_)
    : grid(std::move(g)), p(p_), tag(tag_), q(q_) {
  if (!(p > 1.0) || !(p <= grid->dim()))
    throw std::invalid_argument("p must lie in (1, n]");
  if (tag == NonlinearityTag::power && !(q > 0))
    throw std::invalid_argument("power nonlinearity needs q > 0");
}

DirichletSolve solve_dirichlet_p_laplace(const ScalarField& source, double p,
                                         const SolveOptions& opts, const ScalarField* warm) {
  const GridPtr& grid = source.grid();
  if (!(p > 1.0) || !(p <= grid->dim())) throw std::invalid_argument("p must lie in (1, n]");
  double src_scale = source.max_abs();
  // eps floor relative to the expected gradient scale of the solution
  double grad_scale = std::max(1.0, std::pow(std::max(src_scale, 1e-30), 1.0 / (p - 1.0)));
  PEnergyProblem prob = make_dirichlet_problem(grid, p, 1e-6 * grad_scale, source.values());
  MinimizeOptions mopts;
  mopts.max_iters = opts.max_iters;
  mopts.residual_tol = opts.tol_scale * std::max(1.0, src_scale);
  std::vector<double> init(static_cast<size_t>(grid->ncells()), 0.0);
  if (warm) init = warm->values();
  MinimizeResult res = minimize_p_energy(prob, init, mopts);
  return {res.field, res.iterations, res.converged, res.residual_inf, prob.eps_reg};
}

namespace {

ScalarField eigen_seed(const GridPtr& grid, const SolveOptions& inner) {
  // a few inverse-power sweeps of the Laplacian approximate the ground state
  ScalarField w = ScalarField::constant(grid, 1.0);
  for (int k = 0; k < 5; ++k) {
    auto s = solve_dirichlet_p_laplace(w, 2.0, inner);
    double m = s.u.max_abs();
    if (!(m > 0)) throw std::runtime_error("eigen seed collapsed to zero");
    w = map_field(s.u, [m](double x) { return x / m; });
  }
  return w;
}

double denom_scale(const ScalarField& u, double p, const ScalarField& rhs,
                   const ScalarField& phi) {
  const Grid& g = *u.grid();
  ScalarField gu = gradient_magnitude(u);
  ScalarField gp = gradient_magnitude(phi);
  double d = 0;
  for (std::int64_t i : g.masked_cells())
    d += std::pow(gu[i], p - 1.0) * gp[i] + std::fabs(rhs[i] * phi[i]);
  return d * g.cell_volume();
}

}  // namespace

double weak_residual_battery(const ScalarField& u, double p, const ScalarField& rhs, int count,
                             std::uint64_t seed) {
  const GridPtr& grid = u.grid();
  const Grid& g = *grid;
  PEnergyProblem prob = make_dirichlet_problem(grid, p, 0.0, {});
  auto bdist = distance_to_exterior(g);
  auto rng = labeled_rng(seed, "lane_emden.battery");
  const auto& cells = g.masked_cells();
  double worst = 0;
  int made = 0;
  int guard = 0;
  while (made < count && guard++ < count * 200) {
    std::int64_t c = cells[uniform_index(rng, g.masked_count())];
    double w = uniform(rng, 0.08, 0.25) * g.domain_diameter();
    if (bdist[c] < w) continue;  // keep the bump compactly supported
    Point x0 = g.center(c);
    std::vector<double> phi(static_cast<size_t>(g.ncells()), 0.0);
    for (std::int64_t i : cells) {
      double t = dist(g.center(i), x0, g.dim()) / w;
      if (t < 1.0) {
        double s = 1.0 - t * t;
        phi[i] = s * s;
      }
    }
    double A = weak_pairing(prob, u.values(), phi, p);
    double B = 0;
    for (std::int64_t i : cells) B += rhs[i] * phi[i];
    B *= g.cell_volume();
    double den = denom_scale(u, p, rhs, ScalarField(grid, std::vector<double>(phi)));
    if (den <= 0) continue;
    worst = std::max(worst, std::fabs(A - B) / den);
    ++made;
  }
  if (made < count) throw std::runtime_error("battery could not place enough bumps");
  return worst;
}

SolutionReport solve_lane_emden_power(const PLaplaceProblem& prob) {
  if (prob.tag != NonlinearityTag::power)
    throw std::invalid_argument("solve_lane_emden_power: wrong nonlinearity tag");
  if (std::fabs(prob.p - (prob.q + 2.0)) < 1e-12)
    throw std::invalid_argument("rescaling needs p != q+2");
  const GridPtr& grid = prob.grid;
  SolutionReport rep{ScalarField::zeros(grid), 0, 0, 0, 0, 0, false, 0, ""};

  ScalarField w = eigen_seed(grid, prob.inner);
  ScalarField prev_v = ScalarField::zeros(grid);
  double c_scale = 0;
  double prev_delta = 1e300;
  int grow_streak = 0;
  int it = 0;
  for (; it < prob.outer_iters; ++it) {
    ScalarField src = map_field(w, [&](double x) { return std::pow(std::max(x, 0.0), prob.q + 1.0); });
    auto s = solve_dirichlet_p_laplace(src, prob.p, prob.inner, it > 0 ? &prev_v : nullptr);
    prev_v = s.u;
    rep.eps_reg = s.eps_reg;
    c_scale = s.u.max_value();
    if (!(c_scale > 0)) {
      rep.flagged = true;
      rep.notes += "iteration collapsed to zero; ";
      break;
    }
    ScalarField w_new = map_field(s.u, [c_scale](double x) { return std::max(x, 0.0) / c_scale; });
    double delta = 0;
    for (std::int64_t i : grid->masked_cells())
      delta = std::max(delta, std::fabs(w_new[i] - w[i]));
    w = w_new;
    if (delta > prev_delta * 1.02) {
      if (++grow_streak >= 8) {
        rep.flagged = true;
        rep.notes += "normalized iteration oscillating/diverging; ";
        break;
      }
    } else {
      grow_streak = 0;
    }
    prev_delta = delta;
    if (delta < prob.outer_tol) break;
  }
  rep.outer_iterations = it;
  if (it >= prob.outer_iters) {
    rep.flagged = true;
    rep.notes += "outer budget exhausted; ";
  }

  double lambda = std::pow(c_scale, 1.0 - prob.p);
  rep.lambda_scale = lambda;
  double s_scale = std::pow(lambda, 1.0 / (prob.q + 2.0 - prob.p));
  ScalarField u = map_field(w, [s_scale](double x) { return s_scale * std::max(x, 0.0); });
  rep.u = u;
  ScalarField rhs = map_field(u, [&](double x) { return std::pow(x, prob.q + 1.0); });
  rep.residual = weak_residual_battery(u, prob.p, rhs, 50, prob.seed);
  PEnergyProblem pe = make_dirichlet_problem(grid, prob.p, 0.0, {});
  rep.energy = p_dirichlet_energy(pe, u.values(), prob.p) / prob.p;
  if (rep.residual > 1e-4) {
    rep.flagged = true;
    rep.notes += "weak residual above tolerance; ";
  }
  return rep;
}

SolutionReport solve_lane_emden_exp(const PLaplaceProblem& prob) {
  if (prob.tag != NonlinearityTag::exponential)
    throw std::invalid_argument("solve_lane_emden_exp: wrong nonlinearity tag");
  const GridPtr& grid = prob.grid;
  SolutionReport rep{ScalarField::zeros(grid), 0, 0, 0, 0, 0, false, 0, ""};
  ScalarField u = ScalarField::zeros(grid);
  std::ostringstream hist;
  int it = 0;
  for (; it < prob.outer_iters; ++it) {
    ScalarField src = map_field(u, [](double x) { return std::exp(x); });
    auto s = solve_dirichlet_p_laplace(src, prob.p, prob.inner, it > 0 ? &u : nullptr);
    rep.eps_reg = s.eps_reg;
    double delta = 0;
    std::vector<double> v(u.values());
    for (std::int64_t i : grid->masked_cells()) {
      double next = (1.0 - prob.damping) * u[i] + prob.damping * std::max(s.u[i], 0.0);
      delta = std::max(delta, std::fabs(next - u[i]));
      v[i] = next;
    }
    u = ScalarField(grid, std::move(v));
    double umax = u.max_value();
    hist << "it=" << it << " max_u=" << umax << " delta=" << delta << "; ";
    if (umax > 50.0) {
      rep.flagged = true;
      rep.notes += "minimal-branch blow-up: " + hist.str();
      break;
    }
    if (delta < prob.outer_tol) break;
  }
  rep.outer_iterations = it;
  if (it >= prob.outer_iters) {
    rep.flagged = true;
    rep.notes += "outer budget exhausted; history: " + hist.str();
  }
  rep.u = u;
  ScalarField rhs = map_field(u, [](double x) { return std::exp(x); });
  rep.residual = weak_residual_battery(u, prob.p, rhs, 50, prob.seed);
  PEnergyProblem pe = make_dirichlet_problem(grid, prob.p, 0.0, {});
  rep.energy = p_dirichlet_energy(pe, u.values(), prob.p) / prob.p;
  double ue = 0;
  for (std::int64_t i : grid->masked_cells()) ue += u[i] * std::exp(u[i]);
  rep.ue_integral = ue * grid->cell_volume();
  if (rep.residual > 1e-4) {
    rep.flagged = true;
    rep.notes += "weak residual above tolerance; ";
  }
  return rep;
}

ScalarField cutoff(const Point& x0, double r, const GridPtr& grid) {
  const Grid& g = *grid;
  if (r < 12.0 * g.max_spacing())
    throw std::invalid_argument("cutoff radius below 12 cell spacings is unresolved");
  for (int d = 0; d < g.dim(); ++d)
    if (x0[d] - r / 2 < g.bbox().lo[d] || x0[d] + r / 2 > g.bbox().hi[d])
      throw std::invalid_argument("cutoff support B(x0, r/2) leaves the bounding box");
  // C1 ramp with trapezoidal slope; peak slope 1.25/width = 7.5/r
  const double a = 0.2, m = 1.0 / (1.0 - a);
  auto profile = [a, m](double s) {
    if (s <= 0) return 1.0;
    if (s >= 1) return 0.0;
    if (s < a) return 1.0 - m * s * s / (2 * a);
    if (s <= 1 - a) return 1.0 - m * (s - a / 2);
    double t = 1.0 - s;
    return m * t * t / (2 * a);
  };
  std::vector<double> v(static_cast<size_t>(g.ncells()), 0.0);
  for (std::int64_t i : g.masked_cells()) {
    double d = dist(g.center(i), x0, g.dim());
    v[i] = profile((d - r / 3) / (r / 2 - r / 3));
  }
  return ScalarField(grid, std::move(v));
}

CaccioppoliTable caccioppoli_report(const ScalarField& u, double p, NonlinearityTag tag, double q,
                                    const std::vector<Point>& centers,
                                    const std::vector<double>& radii) {
  const Grid& g = *u.grid();
  ScalarField gm = gradient_magnitude(u);
  CaccioppoliTable table;
  std::vector<double> mean_ratio_per_radius;
  for (double r : radii) {
    double acc = 0;
    int used = 0;
    for (const auto& c : centers) {
      RegionBall ball{c, r / 3.0, false};
      double lhs = 0, zq = 0, zp = 0;
      for (std::int64_t i : g.masked_cells()) {
        if (!ball.contains(g.center(i), g.dim())) continue;
        lhs += std::pow(gm[i], p);
        if (tag == NonlinearityTag::exponential)
          zq += u[i] * std::exp(u[i]);
        else
          zq += std::pow(std::max(u[i], 0.0), q + 2.0);
        zp += std::pow(std::fabs(u[i]), p);
      }
      double vol = g.cell_volume();
      CaccioppoliRow row{c, r, lhs * vol, (zq + std::pow(r, -p) * zp) * vol, 0};
      if (row.rhs > 0) row.ratio = row.lhs / row.rhs;
      table.max_ratio = std::max(table.max_ratio, row.ratio);
      table.rows.push_back(row);
      acc += row.ratio;
      ++used;
    }
    mean_ratio_per_radius.push_back(used ? acc / used : 0.0);
  }
  // least-squares slope of log(mean ratio) against log r
  int m = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < radii.size(); ++k) {
    if (!(mean_ratio_per_radius[k] > 0)) continue;
    double x = std::log(radii[k]);
    double y = std::log(mean_ratio_per_radius[k]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  if (m >= 2) table.logr_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return table;
}

std::vector<AdmissibilityRow> gradient_morrey_admissibility(double p, double q, int n,
                                                            const std::vector<double>& q_tildes) {
  std::vector<AdmissibilityRow> rows;
  for (double qt : q_tildes) {
    AdmissibilityRow r;
    r.q_tilde = qt;
    if (qt < std::max(p, q + 2.0)) {
      r.lambda_min = std::numeric_limits<double>::infinity();
      r.admissible = false;
    } else {
      r.lambda_min = std::max(n * (q + 2.0) / qt, p * (n / qt + 1.0));
      r.admissible = r.lambda_min <= n;
    }
    rows.push_back(r);
  }
  return rows;
}

SeminormReport gradient_morrey_check(const ScalarField& u, double p, double lambda,
                                     NonlinearityTag tag, double q, double q_tilde,
                                     const BallFamily& family) {
  const int n = u.grid()->dim();
  if (tag == NonlinearityTag::exponential) {
    if (std::fabs(lambda - n) > 1e-12)
      throw std::invalid_argument("exponential case requires lambda = n");
  } else if (tag == NonlinearityTag::power) {
    if (q_tilde < std::max(p, q + 2.0))
      throw std::invalid_argument("q~ must satisfy q~ >= max{p, q+2}");
    double lam_min = std::max(n * (q + 2.0) / q_tilde, p * (n / q_tilde + 1.0));
    if (lambda < lam_min || lambda > n) {
      std::ostringstream os;
      os << "lambda " << lambda << " violates max{n(q+2)/q~, p(n/q~+1)} = " << lam_min
         << " <= lambda <= n = " << n;
      throw std::invalid_argument(os.str());
    }
  }
  return morrey_norm(gradient_magnitude(u), MorreyIndex(p, lambda, n), family);
}

}  // namespace morreykit
