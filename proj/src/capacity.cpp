#include "morreykit/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "morreykit/conv.hpp"
#include "morreykit/pde.hpp"

namespace morreykit {

std::string CompactSetSpec::name() const {
  switch (kind) {
    case Kind::ball: return "ball";
    case Kind::box: return "box";
    case Kind::two_balls: return "two-balls";
    default: return "bitmap";
  }
}

CompactSetSpec CompactSetSpec::ball(const Point& c, double r) {
  CompactSetSpec s;
  s.kind = Kind::ball;
  s.c1 = c;
  s.r1 = r;
  return s;
}
CompactSetSpec CompactSetSpec::make_box(const std::array<double, 6>& b) {
  CompactSetSpec s;
  s.kind = Kind::box;
  s.box = b;
  return s;
}
CompactSetSpec CompactSetSpec::two_balls(const Point& a, double ra, const Point& b, double rb) {
  CompactSetSpec s;
  s.kind = Kind::two_balls;
  s.c1 = a;
  s.r1 = ra;
  s.c2 = b;
  s.r2 = rb;
  return s;
}
CompactSetSpec CompactSetSpec::bitmap(std::vector<std::int64_t> cells) {
  CompactSetSpec s;
  s.kind = Kind::bitmap;
  s.cells = std::move(cells);
  return s;
}

std::vector<std::int64_t> CompactSetSpec::realize(const Grid& g) const {
  std::vector<std::int64_t> out;
  if (kind == Kind::bitmap) {
    for (std::int64_t idx : cells)
      if (idx >= 0 && idx < g.ncells() && g.masked(idx)) out.push_back(idx);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  } else {
    for (std::int64_t idx : g.masked_cells()) {
      Point p = g.center(idx);
      bool in = false;
      if (kind == Kind::ball) {
        in = dist2(p, c1, g.dim()) <= r1 * r1;
      } else if (kind == Kind::two_balls) {
        in = dist2(p, c1, g.dim()) <= r1 * r1 || dist2(p, c2, g.dim()) <= r2 * r2;
      } else {
        in = true;
        for (int d = 0; d < g.dim(); ++d)
          if (p[d] < box[2 * d] || p[d] > box[2 * d + 1]) { in = false; break; }
      }
      if (in) out.push_back(idx);
    }
  }
  if (out.empty()) throw std::invalid_argument("compact set realizes to no cells");
  return out;
}

namespace {

double set_diameter(const Grid& g, const std::vector<std::int64_t>& cells) {
  // cheap bound via per-axis extents
  std::array<double, 3> lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (std::int64_t idx : cells) {
    Point p = g.center(idx);
    for (int d = 0; d < g.dim(); ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  double s = 0;
  for (int d = 0; d < g.dim(); ++d) s += (hi[d] - lo[d]) * (hi[d] - lo[d]);
  return std::sqrt(s);
}

}  // namespace

CapacityResult riesz_morrey_capacity_seeded(const GridPtr& grid, const CompactSetSpec& Kspec,
                                            double alpha, const MorreyIndex& idx,
                                            const BallFamily& family, const CapacityOptions& opts,
                                            const std::vector<double>* warm_start) {
  const Grid& g = *grid;
  if (!(idx.p > 1.0)) throw std::invalid_argument("riesz_morrey_capacity requires p > 1");
  MorreyIndex midx(idx.p, idx.lambda, g.dim());
  auto K = Kspec.realize(g);
  const double p = midx.p;
  MorreyEvaluator eval(midx, family);
  LagKernel riesz = make_riesz_kernel(grid, alpha);
  const double vol = g.cell_volume();

  auto potential_on = [&](const std::vector<double>& h) { return convolve(grid, h, riesz); };
  auto min_on_K = [&](const std::vector<double>& Ih) {
    double m = std::numeric_limits<double>::infinity();
    for (std::int64_t c : K) m = std::min(m, Ih[c]);
    return m;
  };

  // explicit feasible point: constant density on K dilated by diam(K)/2
  double dil = 0.5 * set_diameter(g, K) + g.max_spacing();
  auto dK = distance_to_cells(g, K);
  std::vector<double> support(static_cast<size_t>(g.ncells()), 0.0);
  for (std::int64_t i : g.masked_cells())
    if (dK[i] <= dil) support[i] = 1.0;
  {
    auto IhD = potential_on(support);
    double m = min_on_K(IhD);
    if (!(m > 0)) throw std::logic_error("feasible-point construction degenerate");
    for (double& x : support) x /= m;
  }
  ScalarField cert(grid, std::vector<double>(support));
  double ub = eval.eval_power(cert);

  std::vector<double> h = support;
  if (warm_start) {
    if (warm_start->size() != h.size())
      throw std::invalid_argument("warm start size mismatch");
    for (size_t i = 0; i < h.size(); ++i) h[i] = std::max(h[i], (*warm_start)[i]);
  }

  double best_feasible = std::numeric_limits<double>::infinity();
  std::vector<double> best_h;
  double best_scale = 1.0;
  double phi_floor = std::numeric_limits<double>::infinity();
  int iters_done = 0;

  std::vector<double> grad(h.size());
  std::vector<double> active(h.size());
  for (double pen : opts.penalty_stages) {
    double phi_best_stage = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iters; ++it) {
      ++iters_done;
      auto Ih = potential_on(h);
      double m = min_on_K(Ih);
      BallWitness bw;
      double F = eval.eval_power(ScalarField(grid, std::vector<double>(h)), &bw);
      if (m > 0) {
        // homogeneity: F(h/m) = F(h)/m^p is the objective of a feasible point
        double cand = F / std::pow(m, p);
        if (cand < best_feasible) {
          best_feasible = cand;
          best_h = h;
          best_scale = m;
        }
      }
      double viol = 0;
      std::fill(active.begin(), active.end(), 0.0);
      for (std::int64_t c : K) {
        double v = 1.0 - Ih[c];
        if (v > 0) {
          viol += v;
          active[c] = 1.0;
        }
      }
      double phi = F + pen * vol * viol;
      phi_best_stage = std::min(phi_best_stage, phi);
      phi_floor = std::min(phi_floor, phi);

      // subgradient: maximizing ball term + hinge penalty
      std::fill(grad.begin(), grad.end(), 0.0);
      {
        double w = std::pow(bw.radius, midx.lambda - g.dim()) * vol;
        auto cc = g.coords(bw.cell);
        std::array<int, 3> reach{0, 0, 0};
        for (int d = 0; d < g.dim(); ++d)
          reach[d] = static_cast<int>(bw.radius / g.spacing()[d]) + 1;
        double r2 = bw.radius * bw.radius;
        for (int dk = -reach[2]; dk <= reach[2]; ++dk) {
          int k = cc[2] + dk;
          if (k < 0 || k >= g.counts()[2]) continue;
          for (int dj = -reach[1]; dj <= reach[1]; ++dj) {
            int j = cc[1] + dj;
            if (j < 0 || j >= g.counts()[1]) continue;
            for (int di = -reach[0]; di <= reach[0]; ++di) {
              int i = cc[0] + di;
              if (i < 0 || i >= g.counts()[0]) continue;
              double dx = di * g.spacing()[0], dy = dj * g.spacing()[1];
              double s = dx * dx + dy * dy;
              if (g.dim() == 3) s += dk * g.spacing()[2] * dk * g.spacing()[2];
              if (s >= r2) continue;
              std::int64_t cell = g.index(i, j, k);
              if (!g.masked(cell) || h[cell] == 0.0) continue;
              grad[cell] += p * w * std::pow(h[cell], p - 1.0);
            }
          }
        }
      }
      if (viol > 0) {
        auto pull = potential_on(active);  // kernel is symmetric
        for (std::int64_t i : g.masked_cells()) grad[i] -= pen * vol * pull[i];
      }
      double gnorm2 = 0;
      for (std::int64_t i : g.masked_cells()) gnorm2 += grad[i] * grad[i];
      if (gnorm2 <= 0) break;
      // Polyak-style step toward a shrinking target below the best seen
      double target = phi_best_stage * (1.0 - 0.2 / (1.0 + it / 40.0));
      double step = (phi - target) / gnorm2;
      if (!(step > 0) || !std::isfinite(step)) step = 1.0 / std::sqrt(gnorm2);
      for (std::int64_t i : g.masked_cells()) h[i] = std::max(0.0, h[i] - step * grad[i]);
    }
  }

  CapacityResult out;
  out.family = family.describe();
  out.iterations = iters_done;
  out.upper_bound = ub;
  if (!best_h.empty()) {
    for (double& x : best_h) x /= best_scale;
    out.density = ScalarField(grid, std::move(best_h));
  } else {
    out.density = cert;
    out.flagged = true;
    out.notes = "no feasible iterate found; certificate returned";
  }
  out.value = eval.eval_power(out.density);
  {
    auto Ih = potential_on(out.density.values());
    out.constraint_violation_max = std::max(0.0, 1.0 - min_on_K(Ih));
  }
  if (out.constraint_violation_max > opts.feas_tol) out.flagged = true;
  out.gap_estimate = std::max(0.0, out.value - std::min(phi_floor, out.value));
  if (out.value > out.upper_bound * (1 + 1e-9)) out.flagged = true;
  return out;
}

CapacityResult riesz_morrey_capacity(const GridPtr& grid, const CompactSetSpec& K, double alpha,
                                     const MorreyIndex& idx, const BallFamily& family,
                                     const CapacityOptions& opts) {
  return riesz_morrey_capacity_seeded(grid, K, alpha, idx, family, opts, nullptr);
}

CapacityResult variational_p_capacity(const GridPtr& grid, const CompactSetSpec& Kspec, double p,
                                      const CapacityOptions& opts) {
  const Grid& g = *grid;
  if (!(p > 1.0) || !(p < g.dim()))
    throw std::invalid_argument("variational_p_capacity requires 1 < p < n");
  auto K = Kspec.realize(g);

  PEnergyProblem prob = make_dirichlet_problem(grid, p, 0.0, {});
  for (std::int64_t c : K) {
    prob.pinned[c] = 1;
    prob.pinned_values[c] = 1.0;
  }
  // cone certificate: 1 on K, sloping to 0 over half the clearance to the exterior
  auto dK = distance_to_cells(g, K);
  double clearance = std::numeric_limits<double>::infinity();
  {
    auto dx = distance_to_exterior(g);
    for (std::int64_t c : K) clearance = std::min(clearance, dx[c]);
  }
  double slope_w = std::max(0.5 * clearance, 2.0 * g.max_spacing());
  std::vector<double> cone(static_cast<size_t>(g.ncells()), 0.0);
  for (std::int64_t i : g.masked_cells()) cone[i] = std::clamp(1.0 - dK[i] / slope_w, 0.0, 1.0);
  for (std::int64_t i = 0; i < g.ncells(); ++i)
    if (prob.pinned[i]) cone[i] = prob.pinned_values[i];
  double ub = p_dirichlet_energy(prob, cone, p);

  prob.eps_reg = 1e-6 * (1.0 + 1.0 / slope_w);  // gradient-scale regularization
  MinimizeOptions mopts;
  mopts.max_iters = opts.max_iters;
  mopts.residual_tol = 1e-7 / g.cell_volume() * 1e-2;
  mopts.residual_tol = std::max(mopts.residual_tol, 1e-10);
  MinimizeResult res = minimize_p_energy(prob, cone, mopts);

  CapacityResult out;
  out.density = res.field;
  out.value = p_dirichlet_energy(prob, res.field.values(), p);
  out.upper_bound = ub;
  out.iterations = res.iterations;
  out.constraint_violation_max = 0.0;  // obstacle is pinned
  out.flagged = !res.converged && res.residual_inf > 100 * mopts.residual_tol;
  out.gap_estimate = std::max(0.0, ub - out.value);
  out.family = "pinned-obstacle p-energy";
  if (out.value > out.upper_bound * (1 + 1e-9)) out.flagged = true;
  return out;
}

OuterCapacityResult capacity_outer(const GridPtr& grid,
                                   const std::vector<CompactSetSpec>& exhaustion, double alpha,
                                   const MorreyIndex& idx, const BallFamily& family,
                                   const CapacityOptions& opts) {
  OuterCapacityResult out;
  std::vector<std::int64_t> prev;
  for (const auto& spec : exhaustion) {
    auto cells = spec.realize(*grid);
    if (!prev.empty() && !std::includes(cells.begin(), cells.end(), prev.begin(), prev.end()))
      throw std::invalid_argument("capacity_outer: exhaustion is not increasing");
    prev = cells;
    auto res = riesz_morrey_capacity(grid, spec, alpha, idx, family, opts);
    out.step_values.push_back(res.value);
    out.value = std::max(out.value, res.value);
    out.steps.push_back(std::move(res));
  }
  return out;
}

}  // namespace morreykit
