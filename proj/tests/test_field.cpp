#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "morreykit/ball_family.hpp"
#include "morreykit/field.hpp"
#include "morreykit/morrey.hpp"
#include "morreykit/rng.hpp"

using namespace morreykit;

namespace {
const double kPi = 3.14159265358979323846;

ScalarField random_field(const GridPtr& g, std::uint64_t seed, const std::string& label) {
  auto rng = labeled_rng(seed, label);
  std::vector<double> v(static_cast<size_t>(g->ncells()), 0.0);
  for (std::int64_t i : g->masked_cells()) v[i] = uniform(rng, -1.0, 1.0);
  return ScalarField(g, std::move(v));
}
}  // namespace

TEST_CASE("unit square grid has the documented cell count and volume") {
  BBox b;
  b.dim = 2;
  b.lo = {0, 0, 0};
  b.hi = {1, 1, 0};
  auto g = make_grid(b, {64, 64, 1}, MaskBox{});
  CHECK(g->ncells() == 4096);
  CHECK(g->masked_count() == 4096);
  CHECK(g->cell_volume() == doctest::Approx(1.0 / (64.0 * 64.0)).epsilon(1e-14));
}

TEST_CASE("disk mask area approaches pi/4 of the box") {
  auto g = make_grid2(-1.0, 1.0, 128, MaskBall{{0, 0, 0}, 1.0});
  double frac = static_cast<double>(g->masked_count()) / static_cast<double>(g->ncells());
  CHECK(std::fabs(frac - kPi / 4.0) / (kPi / 4.0) < 0.02);
}

TEST_CASE("disconnected bitmap is rejected with a diagnostic") {
  std::vector<std::uint8_t> cells(16 * 16, 0);
  auto at = [&](int i, int j) -> std::uint8_t& { return cells[j * 16 + i]; };
  for (int j = 1; j < 4; ++j)
    for (int i = 1; i < 4; ++i) at(i, j) = 1;
  for (int j = 10; j < 14; ++j)
    for (int i = 10; i < 14; ++i) at(i, j) = 1;
  CHECK_THROWS_WITH_AS(make_grid2(-1.0, 1.0, 16, MaskBitmap{cells, "two blobs"}),
                       doctest::Contains("disconnected"), std::invalid_argument);
}

TEST_CASE("empty mask and tiny resolutions are rejected") {
  std::vector<std::uint8_t> cells(16 * 16, 0);
  CHECK_THROWS_AS(make_grid2(-1.0, 1.0, 16, MaskBitmap{cells, "empty"}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid2(-1.0, 1.0, 3, MaskBox{}), std::invalid_argument);
}

TEST_CASE("sampling a constant fills masked cells only") {
  auto g = make_grid2(-1.0, 1.0, 32, MaskBall{{0, 0, 0}, 1.0});
  auto f = sample([](const Point&) { return 1.0; }, g);
  for (std::int64_t i = 0; i < g->ncells(); ++i)
    CHECK(f[i] == (g->masked(i) ? 1.0 : 0.0));
}

TEST_CASE("sampling |x|^-0.5 on the offset lattice stays finite") {
  auto g = make_grid2(-1.0, 1.0, 64, MaskBall{{0, 0, 0}, 1.0});
  auto f = sample([](const Point& x) {
    return std::pow(std::sqrt(x[0] * x[0] + x[1] * x[1]), -0.5);
  }, g);
  CHECK(std::isfinite(f.max_abs()));
}

TEST_CASE("sampling a pole at a cell center names the cell") {
  auto g = make_grid2(0.0, 1.0, 8, MaskBox{});
  Point first = g->center(g->masked_cells().front());
  CHECK_THROWS_AS(sample([first](const Point& x) {
    return 1.0 / (std::fabs(x[0] - first[0]) + std::fabs(x[1] - first[1]));
  }, g), std::runtime_error);
}

TEST_CASE("half-plane indicator integrates to half the area") {
  auto g = make_grid2(-1.0, 1.0, 64, MaskBox{});
  auto f = sample([](const Point& x) { return x[0] < 0 ? 1.0 : 0.0; }, g);
  for (std::int64_t i : g->masked_cells()) CHECK((f[i] == 0.0 || f[i] == 1.0));
  double total = integrate(f, RegionDomain{});
  CHECK(total == doctest::Approx(2.0).epsilon(1e-12));  // area 4, half of it
}

TEST_CASE("integration oracles: volume, disk, zero, empty region") {
  BBox b;
  b.dim = 2;
  b.lo = {0, 0, 0};
  b.hi = {1, 1, 0};
  auto g = make_grid(b, {128, 128, 1}, MaskBox{});
  auto one = ScalarField::constant(g, 1.0);
  CHECK(integrate(one, RegionDomain{}) == doctest::Approx(1.0).epsilon(1e-12));

  auto g2 = make_grid2(-1.0, 1.0, 128, MaskBox{});
  auto one2 = ScalarField::constant(g2, 1.0);
  double disk = integrate(one2, RegionBall{{0, 0, 0}, 0.5, false});
  CHECK(std::fabs(disk - kPi * 0.25) / (kPi * 0.25) < 0.02);

  auto zero = ScalarField::zeros(g2);
  CHECK(integrate(zero, RegionDomain{}) == 0.0);

  bool empty = false;
  double v = integrate(one2, RegionBall{{5, 5, 0}, 0.1, false}, &empty);
  CHECK(v == 0.0);
  CHECK(empty);
}

TEST_CASE("integrate is linear to roundoff") {
  auto g = make_grid2(-1.0, 1.0, 48, MaskBall{{0, 0, 0}, 1.0});
  auto f1 = random_field(g, 7, "lin.a");
  auto f2 = random_field(g, 7, "lin.b");
  RegionBall ball{{0.1, -0.2, 0}, 0.6, false};
  double lhs = integrate(axpby(2.5, f1, -1.75, f2), ball);
  double rhs = 2.5 * integrate(f1, ball) - 1.75 * integrate(f2, ball);
  CHECK(std::fabs(lhs - rhs) <= 1e-12 * (std::fabs(lhs) + std::fabs(rhs) + 1));
}

TEST_CASE("midpoint integration converges at second order on sinusoids") {
  BBox b;
  b.dim = 2;
  b.lo = {0, 0, 0};
  b.hi = {1, 1, 0};
  double exact = 4.0 / (kPi * kPi);
  std::vector<double> errs;
  for (int res : {32, 64, 128}) {
    auto g = make_grid(b, {res, res, 1}, MaskBox{});
    auto f = sample([](const Point& x) { return std::sin(kPi * x[0]) * std::sin(kPi * x[1]); }, g);
    errs.push_back(std::fabs(integrate(f, RegionDomain{}) - exact));
  }
  double order1 = std::log2(errs[0] / errs[1]);
  double order2 = std::log2(errs[1] / errs[2]);
  CHECK(order1 >= 1.8);
  CHECK(order2 >= 1.8);
}

TEST_CASE("ball family: counts, ladder endpoints, stride errors") {
  auto g = make_grid2(-1.0, 1.0, 64, MaskBox{});
  auto fam = ball_family(g, 8, 6);
  CHECK(fam.centers.size() <= 64);
  CHECK(fam.radii.size() == 6);
  CHECK(fam.radii.front() == doctest::Approx(2.0 * g->max_spacing()).epsilon(1e-14));
  CHECK(fam.radii.back() == doctest::Approx(g->domain_diameter()).epsilon(1e-14));
  for (size_t i = 1; i < fam.radii.size(); ++i) CHECK(fam.radii[i] > fam.radii[i - 1]);
  CHECK_THROWS_AS(ball_family(g, 100000, 6), std::invalid_argument);
}

TEST_CASE("enlarging a family never decreases a sup-type functional") {
  auto g = make_grid2(-1.0, 1.0, 64, MaskBall{{0, 0, 0}, 1.0});
  auto coarse = ball_family(g, 8, 6);
  auto fine = ball_family(g, 4, 11);  // stride-4 lattice and 11-rung ladder contain the coarse ones
  for (size_t k = 0; k < coarse.radii.size(); ++k)
    CHECK(fine.radii[2 * k] == doctest::Approx(coarse.radii[k]).epsilon(1e-12));
  for (int trial = 0; trial < 3; ++trial) {
    auto f = random_field(g, 100 + trial, "fam.mono");
    double a = morrey_norm(f, MorreyIndex(2.0, 1.5, 2), coarse).value;
    double b = morrey_norm(f, MorreyIndex(2.0, 1.5, 2), fine).value;
    CHECK(b >= a * (1 - 1e-12));
  }
}

TEST_CASE("diameter stays below the bounding-box diagonal") {
  auto g = make_grid2(-1.0, 1.0, 64, MaskBall{{0, 0, 0}, 1.0});
  CHECK(g->domain_diameter() <= g->bbox().diagonal());
  CHECK(g->domain_diameter() == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("fld snapshots round-trip bit for bit") {
  auto g = make_grid2(-1.0, 1.0, 32, MaskBall{{0, 0, 0}, 1.0});
  auto f = random_field(g, 11, "fld.roundtrip");
  auto path = std::filesystem::temp_directory_path() / "morreykit_test_field.fld";
  write_fld(f, path.string());
  auto back = read_fld(path.string(), g);
  CHECK(back.values() == f.values());
  CHECK(read_fld_header(path.string()).find("dim 2") == 0);
  std::filesystem::remove(path);
}

TEST_CASE("pgm masks load and reject junk") {
  auto dir = std::filesystem::temp_directory_path();
  auto path = dir / "morreykit_mask.pgm";
  {
    std::string header = "P5\n# comment\n8 8\n255\n";
    std::vector<unsigned char> pix(64, 0);
    for (int j = 2; j < 6; ++j)
      for (int i = 2; i < 6; ++i) pix[j * 8 + i] = 255;
    std::ofstream out(path, std::ios::binary);
    out << header;
    out.write(reinterpret_cast<const char*>(pix.data()), 64);
  }
  auto bm = read_pgm_mask(path.string());
  auto g = make_grid2(-1.0, 1.0, 8, bm);
  CHECK(g->masked_count() == 16);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_pgm_mask((dir / "missing.pgm").string()), std::runtime_error);
}
