#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "morreykit/riesz.hpp"
#include "morreykit/rng.hpp"

using namespace morreykit;

namespace {
const double kPi = 3.14159265358979323846;

ScalarField random_field(const GridPtr& g, std::uint64_t seed, const std::string& label,
                         double lo = -1.0, double hi = 1.0) {
  auto rng = labeled_rng(seed, label);
  std::vector<double> v(static_cast<size_t>(g->ncells()), 0.0);
  for (std::int64_t i : g->masked_cells()) v[i] = uniform(rng, lo, hi);
  return ScalarField(g, std::move(v));
}

double ball_mean_oracle(const ScalarField& f, std::int64_t cell, double r) {
  // independent of the FFT path: direct cell enumeration
  const Grid& g = *f.grid();
  Point x = g.center(cell);
  double sum = 0;
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < g.ncells(); ++i) {
    auto ci = g.coords(i);
    auto cc = g.coords(cell);
    double d2 = g.lag_dist2(ci, cc);
    (void)x;
    if (d2 < r * r) {
      sum += f[i];
      ++count;
    }
  }
  return count ? sum / count : 0.0;
}
}  // namespace

TEST_CASE("kernel spec validation") {
  auto g = make_grid2(-1.0, 1.0, 32, MaskBox{});
  CHECK_THROWS_AS(RieszKernelSpec(0.0, *g), std::invalid_argument);
  CHECK_THROWS_AS(RieszKernelSpec(2.0, *g), std::invalid_argument);
  CHECK_THROWS_AS(RieszKernelSpec(1.0, *g, 1e-6), std::invalid_argument);
  CHECK_NOTHROW(RieszKernelSpec(1.0, *g, 0.0));
}

TEST_CASE("mollifier mass check accepts resolved radii and rejects tiny ones") {
  auto g = make_grid2(-1.0, 1.0, 128, MaskBox{});
  MollifierSpec ok(0.5, *g);
  CHECK(std::fabs(ok.discrete_mass - 1.0) <= 0.02);
  CHECK_THROWS_AS(MollifierSpec(2.0 * g->max_spacing(), *g), std::invalid_argument);
}

TEST_CASE("potential of zero is zero") {
  auto g = make_grid2(-1.0, 1.0, 32, MaskBall{{0, 0, 0}, 1.0});
  auto z = ScalarField::zeros(g);
  auto pot = riesz_potential(z, RieszKernelSpec(0.8, *g), RieszMethod::fast);
  CHECK(pot.max_abs() == 0.0);
}

TEST_CASE("potential is linear and positive") {
  auto g = make_grid2(-1.0, 1.0, 32, MaskBall{{0, 0, 0}, 1.0});
  RieszKernelSpec spec(0.8, *g);
  auto f1 = random_field(g, 3, "riesz.lin.a");
  auto f2 = random_field(g, 3, "riesz.lin.b");
  auto lhs = riesz_potential(axpby(2.0, f1, 3.0, f2), spec, RieszMethod::fast);
  auto r1 = riesz_potential(f1, spec, RieszMethod::fast);
  auto r2 = riesz_potential(f2, spec, RieszMethod::fast);
  auto rhs = axpby(2.0, r1, 3.0, r2);
  double scale = rhs.max_abs();
  for (std::int64_t i : g->masked_cells())
    CHECK(std::fabs(lhs[i] - rhs[i]) <= 1e-12 * scale);

  auto pos = random_field(g, 4, "riesz.pos", 0.0, 1.0);
  auto pot = riesz_potential(pos, spec, RieszMethod::fast);
  for (std::int64_t i : g->masked_cells()) CHECK(pot[i] >= -1e-12 * pot.max_abs());
}

TEST_CASE("direct equals fast to 1e-10 on a 48^2 disk") {
  auto g = make_grid2(-1.0, 1.0, 48, MaskBall{{0, 0, 0}, 1.0});
  RieszKernelSpec spec(1.3, *g);
  auto f = random_field(g, 5, "riesz.agree");
  auto pf = riesz_potential(f, spec, RieszMethod::fast);
  auto pd = riesz_potential(f, spec, RieszMethod::direct);
  double scale = pf.max_abs();
  for (std::int64_t i : g->masked_cells())
    CHECK(std::fabs(pf[i] - pd[i]) <= 1e-10 * scale);
}

TEST_CASE("ball-potential oracle at modest resolution") {
  auto g = make_grid2(-1.0, 1.0, 96, MaskBox{});
  auto f = sample([](const Point& x) { return x[0] * x[0] + x[1] * x[1] < 1.0 ? 1.0 : 0.0; }, g);
  auto pot = riesz_potential(f, RieszKernelSpec(1.0, *g), RieszMethod::fast);
  std::int64_t nearest = -1;
  double best = 1e300;
  for (std::int64_t i : g->masked_cells()) {
    Point p = g->center(i);
    double d = p[0] * p[0] + p[1] * p[1];
    if (d < best) { best = d; nearest = i; }
  }
  CHECK(std::fabs(pot[nearest] - 2 * kPi) / (2 * kPi) < 0.03);
}

TEST_CASE("overflow guard rejects huge fields") {
  auto g = make_grid2(-1.0, 1.0, 16, MaskBox{});
  auto f = ScalarField::constant(g, 1e151);
  CHECK_THROWS_AS(riesz_potential(f, RieszKernelSpec(1.0, *g), RieszMethod::fast),
                  std::overflow_error);
}

TEST_CASE("potential converges under refinement at interior probes") {
  Point probe{0.21, -0.13, 0};
  std::vector<double> vals;
  for (int res : {32, 64, 128}) {
    auto g = make_grid2(-1.0, 1.0, res, MaskBox{});
    auto f = sample([](const Point& x) {
      return std::cos(1.7 * x[0]) * std::sin(2.1 * x[1] + 0.3);
    }, g);
    auto pot = riesz_potential(f, RieszKernelSpec(0.9, *g), RieszMethod::fast);
    vals.push_back(pot[g->cell_at(probe)]);
  }
  double e1 = std::fabs(vals[0] - vals[2]);
  double e2 = std::fabs(vals[1] - vals[2]);
  CHECK(std::log2(e1 / e2) >= 1.0);  // empirical order >= 1 toward the fine value
}

TEST_CASE("mollified average: constants, linears, interface") {
  auto g = make_grid2(-1.0, 1.0, 64, MaskBox{});
  auto c = ScalarField::constant(g, 3.25);
  auto mc = mollified_average(c, 0.3);
  for (std::int64_t i : g->masked_cells()) CHECK(mc[i] == doctest::Approx(3.25).epsilon(1e-12));

  auto lin = sample([](const Point& x) { return 0.7 * x[0] - 1.3 * x[1]; }, g);
  auto ml = mollified_average(lin, 0.3);
  std::int64_t center = g->cell_at({0.0, 0.0, 0});
  CHECK(std::fabs(ml[center] - lin[center]) <= 1e-10);

  auto half = sample([](const Point& x) { return x[0] < 0 ? 1.0 : 0.0; }, g);
  std::int64_t iface = g->cell_at({g->spacing()[0] * 0.4, 0.0, 0});
  auto mh = mollified_average(half, 0.4);
  CHECK(std::fabs(mh[iface] - 0.5) <= 2.5 * g->spacing()[0] / 0.4);

  CHECK_THROWS_AS(mollified_average(c, 0.5 * g->max_spacing()), std::invalid_argument);
}

TEST_CASE("oscillation: constants, nested monotonicity, localized jump") {
  auto g = make_grid2(-1.0, 1.0, 64, MaskBox{});
  auto c = ScalarField::constant(g, 2.0);
  std::int64_t mid = g->cell_at({0.0, 0.0, 0});
  CHECK(oscillation(c, mid, 0.5, 5) == 0.0);

  auto f = sample([](const Point& x) { return std::sin(3 * x[0]) + std::cos(2 * x[1]); }, g);
  auto ladder = oscillation_ladder(*g, 0.6, 8);
  std::vector<double> prefix(ladder.begin(), ladder.begin() + 5);
  CHECK(oscillation_over(f, mid, ladder) >= oscillation_over(f, mid, prefix));

  // indicator of a small ball seen from its center: small radii mean ~1,
  // large radii mean ~0, so the oscillation spans the jump height
  auto ind = sample([](const Point& x) {
    return x[0] * x[0] + x[1] * x[1] < 0.15 * 0.15 ? 1.0 : 0.0;
  }, g);
  std::int64_t nearest = g->cell_at({g->spacing()[0] / 2, g->spacing()[1] / 2, 0});
  double osc = oscillation(ind, nearest, 0.8, 10);
  CHECK(std::fabs(osc - 1.0) <= 0.10);

  auto disk = make_grid2(-1.0, 1.0, 64, MaskBall{{0, 0, 0}, 1.0});
  auto fd = ScalarField::constant(disk, 1.0);
  CHECK_THROWS_AS(oscillation(fd, disk->index(0, 0), 0.5, 5), std::invalid_argument);
}

TEST_CASE("maximal function dominates |f| and matches enumeration on an indicator") {
  auto g = make_grid2(-1.0, 1.0, 64, MaskBox{});
  auto fam = ball_family(g, 1, 8);

  auto c = ScalarField::constant(g, -1.5);
  auto mc = maximal_function(c, fam);
  for (std::int64_t i : g->masked_cells()) CHECK(mc[i] == doctest::Approx(1.5).epsilon(1e-12));

  auto f = random_field(g, 9, "maximal.dom");
  auto mf = maximal_function(f, fam);
  for (std::int64_t i : g->masked_cells()) CHECK(mf[i] >= std::fabs(f[i]) - 1e-13);

  const double R = 0.2;
  auto ind = sample([R](const Point& x) { return x[0] * x[0] + x[1] * x[1] < R * R ? 1.0 : 0.0; },
                    g);
  auto mi = maximal_function(ind, fam);
  std::int64_t probe = g->cell_at({2 * R, 0.0, 0});
  double oracle = std::fabs(ind[probe]);
  for (double r : fam.radii) oracle = std::max(oracle, ball_mean_oracle(ind, probe, r));
  CHECK(mi[probe] == doctest::Approx(oracle).epsilon(1e-8));

  auto strided = ball_family(g, 4, 8);
  CHECK_THROWS_AS(maximal_function(f, strided), std::invalid_argument);
}

TEST_CASE("composition of potentials carries the classical constant") {
  auto g = make_grid2(-1.0, 1.0, 96, MaskBox{});
  const double a = 0.4, b = 0.7;
  auto f = sample([](const Point& x) {
    double t = dist(x, {0.05, -0.1, 0}, 2) / 0.45;
    if (t >= 1) return 0.0;
    double s = 1 - t * t;
    return s * s;
  }, g);
  auto inner = riesz_potential(f, RieszKernelSpec(b, *g), RieszMethod::fast);
  auto composed = riesz_potential(inner, RieszKernelSpec(a, *g), RieszMethod::fast);
  auto direct = riesz_potential(f, RieszKernelSpec(a + b, *g), RieszMethod::fast);
  double C = riesz_composition_constant(a, b, 2);
  // probe well inside: the outer quarter of the domain is excluded
  for (Point probe : {Point{0, 0, 0}, Point{0.2, 0.1, 0}, Point{-0.15, -0.2, 0}}) {
    std::int64_t i = g->cell_at(probe);
    double ratio = composed[i] / direct[i];
    CHECK(std::fabs(ratio - C) / C < 0.05);
  }
}
