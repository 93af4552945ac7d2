#include "morreykit/riesz.hpp"

#include <cmath>
#include <stdexcept>

#include "morreykit/conv.hpp"

namespace morreykit {

RieszKernelSpec::RieszKernelSpec(double a, const Grid& g, double rho_) : alpha(a), rho(rho_) {
  if (!(alpha > 0) || !(alpha < g.dim()))
    throw std::invalid_argument("riesz order alpha must lie in (0, n)");
  double half_diag = 0;
  for (int d = 0; d < g.dim(); ++d) half_diag += g.spacing()[d] * g.spacing()[d];
  half_diag = 0.5 * std::sqrt(half_diag);
  if (rho != 0.0 && rho < half_diag)
    throw std::invalid_argument("regularization radius must be 0 or >= half the cell diagonal");
}

MollifierSpec::MollifierSpec(double r, const Grid& g) : radius(r) {
  if (!(r > 0)) throw std::invalid_argument("mollifier radius must be positive");
  normalization = 1.0 / (unit_ball_volume(g.dim()) * std::pow(r, g.dim()));
  // count lattice cells in the centered ball
  std::int64_t count = 0;
  int reach = static_cast<int>(r / g.spacing()[0]) + 1;
  int zreach = g.dim() == 3 ? static_cast<int>(r / g.spacing()[2]) + 1 : 0;
  for (int dk = -zreach; dk <= zreach; ++dk)
    for (int dj = -reach; dj <= reach; ++dj)
      for (int di = -reach; di <= reach; ++di) {
        double dx = di * g.spacing()[0], dy = dj * g.spacing()[1];
        double s = dx * dx + dy * dy;
        if (g.dim() == 3) s += dk * g.spacing()[2] * dk * g.spacing()[2];
        if (s < r * r) ++count;
      }
  discrete_mass = count * g.cell_volume() * normalization;
  if (std::fabs(discrete_mass - 1.0) > 0.02)
    throw std::invalid_argument("mollifier mass " + std::to_string(discrete_mass) +
                                " deviates from 1 by more than 2%; radius unresolved");
}

ScalarField riesz_potential(const ScalarField& f, const RieszKernelSpec& spec, RieszMethod method) {
  const GridPtr& grid = f.grid();
  RieszKernelSpec checked(spec.alpha, *grid, spec.rho);
  if (f.max_abs() > 1e150) throw std::overflow_error("field magnitude beyond 1e150");
  std::vector<double> out;
  if (method == RieszMethod::fast) {
    out = convolve(grid, f.values(), make_riesz_kernel(grid, spec.alpha));
  } else {
    const Grid& g = *grid;
    double self = riesz_self_cell_integral(g, spec.alpha);
    out.assign(static_cast<size_t>(g.ncells()), 0.0);
    for (std::int64_t x : g.masked_cells()) {
      auto cx = g.coords(x);
      double acc = 0;
      for (std::int64_t y : g.masked_cells()) {
        double fy = f[y];
        if (fy == 0.0) continue;
        auto cy = g.coords(y);
        acc += fy * riesz_lag_value(g, spec.alpha, self, cx[0] - cy[0], cx[1] - cy[1],
                                    cx[2] - cy[2]);
      }
      out[x] = acc;
    }
  }
  // potentials live on the domain; zero off the mask by convention
  for (std::int64_t i = 0; i < grid->ncells(); ++i)
    if (!grid->masked(i)) out[i] = 0.0;
  return ScalarField(grid, std::move(out));
}

ScalarField mollified_average(const ScalarField& g, double r) {
  const GridPtr& grid = g.grid();
  if (r < 2.0 * grid->max_spacing())
    throw std::invalid_argument("mollification radius below 2 cell spacings is unresolved");
  auto num = convolve(grid, g.values(), make_ball_kernel(grid, r));
  const auto& den = ball_cell_counts(grid, r);
  std::vector<double> out(num.size(), 0.0);
  for (std::int64_t i : grid->masked_cells()) out[i] = num[i] / den[i];
  return ScalarField(grid, std::move(out));
}

std::vector<double> oscillation_ladder(const Grid& g, double delta, int ladder_size) {
  double r_lo = 2.0 * g.max_spacing();
  if (delta < 2.0 * r_lo) throw std::invalid_argument("oscillation window delta below 4 cell spacings");
  if (ladder_size < 3) throw std::invalid_argument("oscillation ladder needs at least 3 radii");
  std::vector<double> radii(ladder_size);
  double ratio = std::pow(delta / r_lo, 1.0 / (ladder_size - 1));
  for (int k = 0; k < ladder_size; ++k)
    radii[k] = (k + 1 == ladder_size) ? delta : r_lo * std::pow(ratio, k);
  return radii;
}

namespace {
double ball_mean_at(const ScalarField& g, std::int64_t cell, double r) {
  const Grid& gr = *g.grid();
  auto c = gr.coords(cell);
  std::array<int, 3> reach{0, 0, 0};
  for (int d = 0; d < gr.dim(); ++d) reach[d] = static_cast<int>(r / gr.spacing()[d]) + 1;
  double sum = 0;
  std::int64_t count = 0;
  double r2 = r * r;
  for (int dk = -reach[2]; dk <= reach[2]; ++dk) {
    int k = c[2] + dk;
    if (k < 0 || k >= gr.counts()[2]) continue;
    for (int dj = -reach[1]; dj <= reach[1]; ++dj) {
      int j = c[1] + dj;
      if (j < 0 || j >= gr.counts()[1]) continue;
      for (int di = -reach[0]; di <= reach[0]; ++di) {
        int i = c[0] + di;
        if (i < 0 || i >= gr.counts()[0]) continue;
        double dx = di * gr.spacing()[0], dy = dj * gr.spacing()[1];
        double s = dx * dx + dy * dy;
        if (gr.dim() == 3) s += dk * gr.spacing()[2] * dk * gr.spacing()[2];
        if (s >= r2) continue;
        sum += g[gr.index(i, j, k)];
        ++count;
      }
    }
  }
  return count ? sum / count : 0.0;
}
}  // namespace

double oscillation_over(const ScalarField& g, std::int64_t cell, const std::vector<double>& radii) {
  if (!g.grid()->masked(cell)) throw std::invalid_argument("oscillation point lies outside the domain");
  double lo = 0, hi = 0;
  bool first = true;
  for (double r : radii) {
    double m = ball_mean_at(g, cell, r);
    if (first) { lo = hi = m; first = false; }
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return hi - lo;
}

double oscillation(const ScalarField& g, std::int64_t cell, double delta, int ladder_size) {
  return oscillation_over(g, cell, oscillation_ladder(*g.grid(), delta, ladder_size));
}

ScalarField maximal_function(const ScalarField& f, const BallFamily& family) {
  const GridPtr& grid = f.grid();
  if (family.grid != grid) throw std::invalid_argument("maximal_function: family on another grid");
  if (!family.dense() &&
      static_cast<std::int64_t>(family.centers.size()) != grid->masked_count())
    throw std::invalid_argument("maximal_function requires a dense family (stride 1)");
  std::vector<double> absf(f.values().size(), 0.0);
  for (std::int64_t i : grid->masked_cells()) absf[i] = std::fabs(f[i]);
  std::vector<double> out = absf;  // radius->0 member of the ladder
  for (double r : family.radii) {
    auto num = convolve(grid, absf, make_ball_kernel(grid, r));
    const auto& den = ball_cell_counts(grid, r);
    for (std::int64_t i : grid->masked_cells()) out[i] = std::max(out[i], num[i] / den[i]);
  }
  for (std::int64_t i = 0; i < grid->ncells(); ++i)
    if (!grid->masked(i)) out[i] = 0.0;
  return ScalarField(grid, std::move(out));
}

double riesz_composition_constant(double a, double b, int n) {
  if (!(a > 0) || !(b > 0) || !(a + b < n))
    throw std::invalid_argument("composition constant needs a, b > 0 and a + b < n");
  const double pi = 3.14159265358979323846;
  auto G = [](double x) { return std::tgamma(x); };
  return std::pow(pi, n / 2.0) * G(a / 2) * G(b / 2) * G((n - a - b) / 2) /
         (G((n - a) / 2) * G((n - b) / 2) * G((a + b) / 2));
}

}  // namespace morreykit
