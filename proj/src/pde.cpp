#include "morreykit/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace morreykit {

PEnergyProblem make_dirichlet_problem(const GridPtr& grid, double p, double eps_reg,
                                      const std::vector<double>& source) {
  PEnergyProblem prob;
  prob.grid = grid;
  prob.p = p;
  prob.eps_reg = eps_reg;
  prob.pinned.assign(static_cast<size_t>(grid->ncells()), 0);
  prob.pinned_values.assign(static_cast<size_t>(grid->ncells()), 0.0);
  for (std::int64_t i = 0; i < grid->ncells(); ++i)
    if (!grid->masked(i)) prob.pinned[i] = 1;
  prob.source = source;
  return prob;
}

namespace {

struct Stencil {
  const Grid& g;
  const PEnergyProblem& prob;
  // forward difference along axis d at cell c; ghost beyond the box reflects
  inline double diff(const std::vector<double>& v, const std::array<int, 3>& c, std::int64_t idx,
                     int d, std::int64_t* nb) const {
    auto cc = c;
    cc[d] += 1;
    if (cc[d] >= g.counts()[d]) {
      *nb = -1;
      return (-v[idx] - v[idx]) / g.spacing()[d];
    }
    std::int64_t j = g.index(cc[0], cc[1], cc[2]);
    *nb = j;
    return (v[j] - v[idx]) / g.spacing()[d];
  }
};

double energy_and_gradient(const PEnergyProblem& prob, const std::vector<double>& v,
                           std::vector<double>* grad) {
  const Grid& g = *prob.grid;
  const double p = prob.p;
  const double e2 = prob.eps_reg * prob.eps_reg;
  const double vol = g.cell_volume();
  if (grad) grad->assign(v.size(), 0.0);
  Stencil st{g, prob};
  double energy = 0;
  const int dim = g.dim();
  for (std::int64_t idx = 0; idx < g.ncells(); ++idx) {
    auto c = g.coords(idx);
    double t[3] = {0, 0, 0};
    std::int64_t nb[3] = {-1, -1, -1};
    double s = e2;
    for (int d = 0; d < dim; ++d) {
      t[d] = st.diff(v, c, idx, d, &nb[d]);
      s += t[d] * t[d];
    }
    if (s == 0.0) continue;
    energy += vol * std::pow(s, p / 2.0) / p;
    if (grad) {
      double w = std::pow(s, (p - 2.0) / 2.0);
      for (int d = 0; d < dim; ++d) {
        double gd = vol * w * t[d] / g.spacing()[d];
        if (nb[d] >= 0) {
          (*grad)[idx] -= gd;
          (*grad)[nb[d]] += gd;
        } else {
          (*grad)[idx] -= 2.0 * gd;  // reflected ghost depends on -v(idx)
        }
      }
    }
  }
  if (!prob.source.empty()) {
    for (std::int64_t i = 0; i < g.ncells(); ++i) {
      if (prob.pinned[i]) continue;
      energy -= vol * prob.source[i] * v[i];
      if (grad) (*grad)[i] -= vol * prob.source[i];
    }
  }
  if (grad)
    for (std::int64_t i = 0; i < g.ncells(); ++i)
      if (prob.pinned[i]) (*grad)[i] = 0.0;
  return energy;
}

double directional_derivative(const PEnergyProblem& prob, const std::vector<double>& v,
                              const std::vector<double>& d) {
  const Grid& g = *prob.grid;
  const double p = prob.p;
  const double e2 = prob.eps_reg * prob.eps_reg;
  const double vol = g.cell_volume();
  Stencil st{g, prob};
  double acc = 0;
  const int dim = g.dim();
  for (std::int64_t idx = 0; idx < g.ncells(); ++idx) {
    auto c = g.coords(idx);
    double tv[3], td[3];
    std::int64_t nb;
    double s = e2;
    for (int ax = 0; ax < dim; ++ax) {
      tv[ax] = st.diff(v, c, idx, ax, &nb);
      td[ax] = st.diff(d, c, idx, ax, &nb);
      s += tv[ax] * tv[ax];
    }
    if (s == 0.0) continue;
    double w = std::pow(s, (p - 2.0) / 2.0);
    double dot = 0;
    for (int ax = 0; ax < dim; ++ax) dot += tv[ax] * td[ax];
    acc += vol * w * dot;
  }
  if (!prob.source.empty())
    for (std::int64_t i = 0; i < g.ncells(); ++i)
      if (!prob.pinned[i]) acc -= vol * prob.source[i] * d[i];
  return acc;
}

}  // namespace

MinimizeResult minimize_p_energy(const PEnergyProblem& prob, const std::vector<double>& init,
                                 const MinimizeOptions& opts) {
  const Grid& g = *prob.grid;
  if (static_cast<std::int64_t>(init.size()) != g.ncells())
    throw std::invalid_argument("minimize_p_energy: init size mismatch");
  std::vector<double> v = init;
  for (std::int64_t i = 0; i < g.ncells(); ++i)
    if (prob.pinned[i]) v[i] = prob.pinned_values[i];

  std::vector<double> grad, grad_prev, dir;
  double energy = energy_and_gradient(prob, v, &grad);
  const double vol = g.cell_volume();
  auto res_inf = [&](const std::vector<double>& gr) {
    double m = 0;
    for (double x : gr) m = std::max(m, std::fabs(x));
    return m / vol;
  };
  double alpha_prev = 1.0;
  MinimizeResult out{ScalarField::zeros(prob.grid), energy, res_inf(grad), 0, false};
  dir.assign(v.size(), 0.0);
  double gg_prev = 0;
  std::vector<double> vtrial(v.size());
  for (int it = 0; it < opts.max_iters; ++it) {
    double rinf = res_inf(grad);
    out.residual_inf = rinf;
    out.iterations = it;
    if (rinf <= opts.residual_tol) {
      out.converged = true;
      break;
    }
    double gg = 0;
    for (double x : grad) gg += x * x;
    if (it == 0 || (it % 50) == 0) {
      for (size_t i = 0; i < v.size(); ++i) dir[i] = -grad[i];
    } else {
      double num = 0;
      for (size_t i = 0; i < v.size(); ++i) num += grad[i] * (grad[i] - grad_prev[i]);
      double beta = std::max(0.0, num / gg_prev);
      for (size_t i = 0; i < v.size(); ++i) dir[i] = -grad[i] + beta * dir[i];
      double gd = 0;
      for (size_t i = 0; i < v.size(); ++i) gd += grad[i] * dir[i];
      if (gd >= 0)
        for (size_t i = 0; i < v.size(); ++i) dir[i] = -grad[i];
    }
    gg_prev = gg;
    grad_prev = grad;

    // secant search on phi'(a) followed by an Armijo guard
    double d0 = 0;
    for (size_t i = 0; i < v.size(); ++i) d0 += grad[i] * dir[i];
    double a1 = alpha_prev;
    double phi0p = d0;
    double a = a1, ap = 0.0, dp = phi0p;
    double da = 0;
    for (int ls = 0; ls < 10; ++ls) {
      for (size_t i = 0; i < v.size(); ++i) vtrial[i] = v[i] + a * dir[i];
      da = directional_derivative(prob, vtrial, dir);
      if (std::fabs(da) <= 0.1 * std::fabs(phi0p)) break;
      double denom = da - dp;
      double step;
      if (denom == 0.0 || !std::isfinite(denom)) {
        step = (da > 0) ? 0.5 * (ap + a) : 2.0 * a;
      } else {
        step = a - da * (a - ap) / denom;
      }
      if (!(step > 0) || !std::isfinite(step)) step = 0.5 * a;
      if (da > 0) {
        // overshoot: keep bracket
        double hi = a;
        step = std::clamp(step, 0.05 * hi, 0.95 * hi);
      } else {
        ap = a;
        dp = da;
        step = std::clamp(step, 1.1 * a, 16.0 * a);
      }
      a = step;
    }
    // Armijo: never accept an energy increase
    double enew = 0;
    int guard = 0;
    while (true) {
      for (size_t i = 0; i < v.size(); ++i) vtrial[i] = v[i] + a * dir[i];
      enew = energy_and_gradient(prob, vtrial, nullptr);
      if (enew <= energy + 1e-4 * a * d0 || guard++ > 40) break;
      a *= 0.5;
    }
    if (!(enew <= energy)) {
      // direction exhausted at roundoff level
      out.converged = rinf <= 10 * opts.residual_tol;
      break;
    }
    v.swap(vtrial);
    energy = enew;
    alpha_prev = std::max(a, 1e-12);
    energy_and_gradient(prob, v, &grad);
    if (energy > out.energy + 1e-12 && opts.require_descent)
      throw std::logic_error("p-energy increased during descent");
    out.energy = energy;
  }
  out.energy = energy;
  out.field = ScalarField(prob.grid, std::move(v));
  return out;
}

double p_dirichlet_energy(const PEnergyProblem& prob, const std::vector<double>& v, double p) {
  PEnergyProblem raw = prob;
  raw.eps_reg = 0.0;
  raw.p = p;
  raw.source.clear();
  return p * energy_and_gradient(raw, v, nullptr);
}

double weak_pairing(const PEnergyProblem& prob, const std::vector<double>& u,
                    const std::vector<double>& phi, double p) {
  const Grid& g = *prob.grid;
  const double vol = g.cell_volume();
  Stencil st{g, prob};
  double acc = 0;
  const int dim = g.dim();
  for (std::int64_t idx = 0; idx < g.ncells(); ++idx) {
    auto c = g.coords(idx);
    double tu[3], tp[3];
    std::int64_t nb;
    double s = 0;
    for (int ax = 0; ax < dim; ++ax) {
      tu[ax] = st.diff(u, c, idx, ax, &nb);
      tp[ax] = st.diff(phi, c, idx, ax, &nb);
      s += tu[ax] * tu[ax];
    }
    if (s == 0.0) continue;
    double w = std::pow(s, (p - 2.0) / 2.0);
    double dot = 0;
    for (int ax = 0; ax < dim; ++ax) dot += tu[ax] * tp[ax];
    acc += vol * w * dot;
  }
  return acc;
}

ScalarField gradient_magnitude(const ScalarField& u) {
  const Grid& g = *u.grid();
  std::vector<double> out(u.values().size(), 0.0);
  for (std::int64_t idx : g.masked_cells()) {
    auto c = g.coords(idx);
    double s = 0;
    for (int d = 0; d < g.dim(); ++d) {
      auto cm = c, cp = c;
      cm[d] -= 1;
      cp[d] += 1;
      bool has_m = cm[d] >= 0 && g.masked(g.index(cm[0], cm[1], cm[2]));
      bool has_p = cp[d] < g.counts()[d] && g.masked(g.index(cp[0], cp[1], cp[2]));
      double der = 0;
      if (has_m && has_p) {
        der = (u[g.index(cp[0], cp[1], cp[2])] - u[g.index(cm[0], cm[1], cm[2])]) /
              (2 * g.spacing()[d]);
      } else if (has_p) {
        der = (u[g.index(cp[0], cp[1], cp[2])] - u[idx]) / g.spacing()[d];
      } else if (has_m) {
        der = (u[idx] - u[g.index(cm[0], cm[1], cm[2])]) / g.spacing()[d];
      }
      s += der * der;
    }
    out[idx] = std::sqrt(s);
  }
  return ScalarField(u.grid(), std::move(out));
}

}  // namespace morreykit
