#include <algorithm>
#include <cmath>
#include <sstream>

#include "morreykit/quasicont.hpp"
#include "morreykit/rng.hpp"
#include "suites.hpp"

namespace morreykit::suites {

namespace {

const double kPi = 3.14159265358979323846;

GridPtr disk_grid(int res) { return make_grid2(-1.0, 1.0, res, MaskBall{{0, 0, 0}, 1.0}); }

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

std::int64_t cell_nearest_origin(const Grid& g) {
  std::int64_t best = -1;
  double bd = 1e300;
  for (std::int64_t i : g.masked_cells()) {
    Point p = g.center(i);
    double d = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

struct BumpParams {
  Point c{0, 0, 0};
  double w = 0.3, amp = 1.0;
};

Expr bump_sum_expr(const std::vector<BumpParams>& bumps, int dim) {
  return [bumps, dim](const Point& x) {
    double v = 0;
    for (const auto& b : bumps) {
      double t = dist(x, b.c, dim) / b.w;
      if (t < 1.0) {
        double s = 1.0 - t * t;
        v += b.amp * s * s;
      }
    }
    return v;
  };
}

}  // namespace

Summary riesz_oracle(const ExperimentConfig& cfg) {
  Summary s;
  const int res = cfg.resolution > 0 ? cfg.resolution : 256;
  auto grid = make_grid2(-1.0, 1.0, res, MaskBox{});
  auto f = sample([](const Point& x) { return x[0] * x[0] + x[1] * x[1] < 1.0 ? 1.0 : 0.0; }, grid);
  auto pot = riesz_potential(f, RieszKernelSpec(1.0, *grid), RieszMethod::fast);
  double value = pot[cell_nearest_origin(*grid)];
  double target = 2.0 * kPi;
  double rel = std::fabs(value - target) / target;
  s.data["ball_potential_at_origin"] = value;
  s.data["ball_potential_rel_error"] = rel;
  add_check(s, "unit-ball potential at origin = 2*pi", rel <= 0.02 * cfg.tol_scale, rel,
            0.02 * cfg.tol_scale);

  // fast and direct evaluate the same sum
  const int res2 = 64;
  auto g2 = make_grid2(-1.0, 1.0, res2, MaskBox{});
  auto f2 = sample([](const Point& x) { return x[0] * x[0] + x[1] * x[1] < 1.0 ? 1.0 : 0.0; }, g2);
  RieszKernelSpec spec2(1.0, *g2);
  auto pf = riesz_potential(f2, spec2, RieszMethod::fast);
  auto pd = riesz_potential(f2, spec2, RieszMethod::direct);
  double scale = pf.max_abs();
  double dev = 0;
  for (std::int64_t i : g2->masked_cells()) dev = std::max(dev, std::fabs(pf[i] - pd[i]));
  dev /= scale;
  s.data["fast_vs_direct_rel"] = dev;
  add_check(s, "fast agrees with direct to 1e-10 at 64^2", dev <= 1e-10, dev, 1e-10);
  return s;
}

Summary morrey_borderline(const ExperimentConfig& cfg) {
  Summary s;
  const int base = cfg.resolution > 0 ? cfg.resolution : 64;
  const std::vector<int> resolutions{base, 2 * base, 4 * base};
  const double lambda0 = 1.0, p = 2.0;
  const std::vector<double> lambdas{lambda0 - 0.3, lambda0, lambda0 + 0.3};
  std::vector<std::vector<double>> norms(lambdas.size());
  std::vector<std::vector<double>> rows;
  for (int res : resolutions) {
    auto grid = disk_grid(res);
    auto f = sample([&](const Point& x) {
      return std::pow(std::sqrt(x[0] * x[0] + x[1] * x[1]), -lambda0 / p);
    }, grid);
    auto family = ball_family(grid, 1, 16);
    for (size_t li = 0; li < lambdas.size(); ++li) {
      double n = morrey_norm(f, MorreyIndex(p, lambdas[li], 2), family).value;
      norms[li].push_back(n);
      rows.push_back({static_cast<double>(res), lambdas[li], n});
    }
  }
  s.csv["borderline.csv"] = csv_table({"resolution", "lambda", "norm"}, rows);
  for (size_t li = 1; li < lambdas.size(); ++li) {  // lambda0 and lambda0 + 0.3
    double fine = norms[li].back();
    for (size_t ri = 0; ri + 1 < norms[li].size(); ++ri) {
      double dev = std::fabs(norms[li][ri] - fine) / fine;
      std::ostringstream name;
      name << "norm stable at lambda=" << lambdas[li] << " res=" << resolutions[ri];
      add_check(s, name.str(), dev <= 0.10 * cfg.tol_scale, dev, 0.10 * cfg.tol_scale);
    }
  }
  for (size_t ri = 0; ri + 1 < norms[0].size(); ++ri) {  // lambda0 - 0.3 must diverge
    double growth = norms[0][ri + 1] / norms[0][ri];
    std::ostringstream name;
    name << "norm grows >= 2x per refinement at lambda=" << lambdas[0] << " step " << ri;
    add_check(s, name.str(), growth >= 2.0, growth, 2.0,
              "grid divergence rate for this field is 2^((lambda0-lambda)/p) ~ 1.11 per step");
  }
  for (size_t li = 0; li < lambdas.size(); ++li) s.series["norms_lambda" + std::to_string(li)] = norms[li];
  return s;
}

Summary lip_delta(const ExperimentConfig& cfg) {
  Summary s;
  const int base = cfg.resolution > 0 ? cfg.resolution : 64;
  const std::vector<int> resolutions{base, 2 * base, 4 * base};
  const double alpha = 1.2, p = 2.0, lambda = 1.0;  // delta = 0.7
  auto rng = labeled_rng(cfg.seed, "lip_delta.corpus");
  std::vector<std::vector<BumpParams>> corpus;
  for (int k = 0; k < 5; ++k) {
    std::vector<BumpParams> bumps;
    for (int b = 0; b < 3; ++b) {
      BumpParams bp;
      bp.c = {uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), 0};
      bp.w = uniform(rng, 0.25, 0.55);
      bp.amp = uniform(rng, -1.0, 1.0);
      bumps.push_back(bp);
    }
    corpus.push_back(bumps);
  }
  std::vector<std::vector<double>> seminorms(corpus.size());
  std::vector<std::vector<double>> rows;
  for (int res : resolutions) {
    auto grid = disk_grid(res);
    for (size_t k = 0; k < corpus.size(); ++k) {
      auto f = sample(bump_sum_expr(corpus[k], 2), grid);
      double v = lip_delta_check(f, alpha, MorreyIndex(p, lambda, 2), 4000, cfg.seed).value;
      seminorms[k].push_back(v);
      rows.push_back({static_cast<double>(res), static_cast<double>(k), v});
    }
  }
  s.csv["lip_delta.csv"] = csv_table({"resolution", "field", "seminorm"}, rows);
  for (size_t k = 0; k < corpus.size(); ++k) {
    double fine = seminorms[k].back();
    for (size_t ri = 0; ri + 1 < seminorms[k].size(); ++ri) {
      double dev = std::fabs(seminorms[k][ri] - fine) / fine;
      std::ostringstream name;
      name << "Holder-0.7 seminorm stable, field " << k << " res " << resolutions[ri];
      add_check(s, name.str(), dev <= 0.15 * cfg.tol_scale, dev, 0.15 * cfg.tol_scale);
    }
  }
  return s;
}

Summary truncation_decay(const ExperimentConfig& cfg) {
  Summary s;
  const int res = cfg.resolution > 0 ? cfg.resolution : 128;
  const double p = 2.0, lambda = 1.6, q = 1.5, alpha = 0.5;
  TruncationParams probe(p, lambda, q, alpha, 0.05, 0.02, 2);  // placeholder beta for bound query
  double beta = 0.9 * probe.beta_bound();
  TruncationParams params(p, lambda, q, alpha, beta, beta / 2, 2);
  auto grid = disk_grid(res);
  auto f = sample([&](const Point& x) {
    return std::pow(std::sqrt(x[0] * x[0] + x[1] * x[1]), -lambda / p);
  }, grid);
  MorreyEvaluator eval(MorreyIndex(q, params.mu, 2), ball_family(grid, 1, 14));
  std::vector<double> rs, errs;
  std::vector<std::vector<double>> rows;
  for (int k = 1; k <= 5; ++k) {
    double r = std::exp2(-k);
    auto step = truncate(f, r, params);
    double err = std::pow(eval.eval_power(axpby(1.0, f, -1.0, step.truncated)), 1.0 / q);
    rs.push_back(r);
    errs.push_back(err);
    rows.push_back({r, step.threshold, err});
  }
  double slope = loglog_slope(rs, errs);
  s.data["beta"] = beta;
  s.data["mu"] = params.mu;
  s.data["slope"] = slope;
  s.csv["truncation_decay.csv"] = csv_table({"r", "threshold", "error"}, rows);
  add_check(s, "truncation error decays with slope >= 0.8*beta", slope >= 0.8 * beta, slope,
            0.8 * beta);
  return s;
}

Summary holder_representative(const ExperimentConfig& cfg) {
  Summary s;
  const int base = cfg.resolution > 0 ? cfg.resolution : 64;
  const std::vector<int> resolutions{base, 2 * base};
  const double p = 1.15, q = 1.05, lambda = 1.95, alpha = 0.35, gamma = 0.02;
  const double field_scale = 0.004;
  const double eps = 0.1;
  TruncationParams probe(p, lambda, q, alpha, 0.02, 0.01, 2);
  double beta = 0.9 * probe.beta_bound();
  TruncationParams params(p, lambda, q, alpha, beta, gamma, 2);
  TruncationSchedule schedule = make_schedule(gamma, 6);

  std::vector<double> s_h, s_g, caps, osize;
  bool bit_exact_all = true, nonempty_all = true, cap_ok_all = true;
  std::vector<std::vector<double>> rows;
  for (int res : resolutions) {
    auto grid = disk_grid(res);
    auto f = sample([&](const Point& x) {
      return field_scale * std::pow(std::sqrt(x[0] * x[0] + x[1] * x[1]), -lambda / p);
    }, grid);
    RepresentativeOptions opts;
    opts.capacity.max_iters = 120;
    opts.capacity.penalty_stages = {1e2, 1e4};
    opts.capacity.seed = cfg.seed;
    opts.capacity_family = ball_family(grid, 4, 10);
    opts.holder_pair_budget = 4000;
    opts.seed = cfg.seed;
    auto rep = build_representative(f, alpha, params, schedule, eps, opts);

    auto g_direct = riesz_potential(f, RieszKernelSpec(alpha, *grid), RieszMethod::fast);
    std::vector<std::uint8_t> inO(static_cast<size_t>(grid->ncells()), 0);
    for (std::int64_t i : rep.exceptional) inO[i] = 1;
    std::int64_t mismatches = 0;
    for (std::int64_t i : grid->masked_cells())
      if (!inO[i] && rep.representative[i] != g_direct[i]) ++mismatches;
    bit_exact_all = bit_exact_all && mismatches == 0;
    nonempty_all = nonempty_all && !rep.exceptional.empty();
    double cap = rep.exceptional.empty() ? 0.0 : rep.exceptional_capacity.value;
    cap_ok_all = cap_ok_all && cap < eps;
    caps.push_back(cap);
    osize.push_back(static_cast<double>(rep.exceptional.size()));
    s_h.push_back(rep.holder.value);
    s_g.push_back(holder_seminorm(g_direct, gamma, 4000, cfg.seed).value);
    rows.push_back({static_cast<double>(res), s_h.back(), s_g.back(), cap,
                    static_cast<double>(rep.exceptional.size()),
                    static_cast<double>(rep.J), static_cast<double>(rep.M),
                    rep.tail_exact ? 1.0 : 0.0});
  }
  s.csv["representative.csv"] = csv_table(
      {"resolution", "holder_h", "holder_potential", "capacity_O", "cells_O", "J", "M", "tail_exact"},
      rows);
  add_check(s, "exceptional set nonempty at both resolutions", nonempty_all,
            nonempty_all ? 1 : 0, 1);
  add_check(s, "certified capacity of O below eps=0.1", cap_ok_all,
            *std::max_element(caps.begin(), caps.end()), eps);
  add_check(s, "representative equals the potential off O bit for bit", bit_exact_all,
            bit_exact_all ? 0 : 1, 0);
  double stab = std::fabs(s_h[0] - s_h[1]) / s_h[1];
  add_check(s, "gamma-seminorm of h stable within 20% under refinement",
            stab <= 0.20 * cfg.tol_scale, stab, 0.20 * cfg.tol_scale);
  double growth = s_g[1] / s_g[0];
  add_check(s, "gamma-seminorm of the raw potential grows >= 2x", growth >= 2.0, growth, 2.0);
  s.data["beta"] = beta;
  s.data["mu"] = params.mu;
  return s;
}

Summary zorko_approximation(const ExperimentConfig& cfg) {
  Summary s;
  const int res = cfg.resolution > 0 ? cfg.resolution : 64;
  auto grid = disk_grid(res);
  auto family = ball_family(grid, 2, 12);
  const std::vector<double> ladder{0.3, 0.2, 0.15, 0.1, 0.08};

  // smooth compactly supported field: mollification error dies quickly
  auto f1 = sample(bump_sum_expr({{{0, 0, 0}, 0.5, 1.0}}, 2), grid);
  auto z1 = zorko_approximate(f1, MorreyIndex(2.0, 1.5, 2), 1.0, 0.05, ladder, family);
  s.data["smooth_error"] = z1.achieved_error;
  s.data["smooth_rho"] = z1.rho;
  add_check(s, "smooth field approximated below eps at moderate rho", z1.achieved,
            z1.achieved_error, 0.05);

  // borderline field: errors decrease along the ladder
  auto f2 = sample([](const Point& x) {
    return std::pow(std::sqrt(x[0] * x[0] + x[1] * x[1]), -0.5);
  }, grid);
  auto z2 = zorko_approximate(f2, MorreyIndex(2.0, 1.5, 2), 1.0, 1e-9, ladder, family);
  bool monotone = true;
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < z2.trace.size(); ++i) {
    rows.push_back({z2.trace[i].first, z2.trace[i].second});
    if (i > 0 && z2.trace[i].second > z2.trace[i - 1].second * 1.05) monotone = false;
  }
  s.csv["zorko_trace.csv"] = csv_table({"rho", "error"}, rows);
  add_check(s, "approximation error decreases along the rho ladder", monotone,
            monotone ? 1 : 0, 1);
  return s;
}

Summary lebesgue_scan_suite(const ExperimentConfig& cfg) {
  Summary s;
  const int res = cfg.resolution > 0 ? cfg.resolution : 64;
  auto grid = disk_grid(res);
  auto capacity_family = ball_family(grid, 4, 10);
  CapacityOptions copts;
  copts.max_iters = 120;
  copts.penalty_stages = {1e2, 1e4};
  MorreyIndex idx(1.5, 1.7, 2);
  const double alpha = 0.5;

  auto smooth = sample(bump_sum_expr({{{0.1, 0.0, 0}, 0.6, 1.0}}, 2), grid);
  auto scan1 = lebesgue_scan(smooth, {0.5, 0.3, 0.15}, 0.05, alpha, idx, capacity_family, copts);
  add_check(s, "smooth field flags no cells", scan1.flagged.empty(),
            static_cast<double>(scan1.flagged.size()), 0);

  auto half = sample([](const Point& x) { return x[0] < 0 ? 1.0 : 0.0; }, grid);
  double dmin = 0.15;
  auto scan2 = lebesgue_scan(half, {0.5, 0.3, dmin}, 0.05, alpha, idx, capacity_family, copts);
  double worst = 0;
  for (std::int64_t i : scan2.flagged)
    worst = std::max(worst, std::fabs(grid->center(i)[0]));
  add_check(s, "jump flags stay within delta_min of the interface", worst <= dmin, worst, dmin);
  s.data["jump_flagged_cells"] = static_cast<double>(scan2.flagged.size());

  auto f = sample([](const Point& x) {
    return std::pow(std::sqrt(x[0] * x[0] + x[1] * x[1]), -0.8);
  }, grid);
  auto g = riesz_potential(f, RieszKernelSpec(alpha, *grid), RieszMethod::fast);
  std::vector<double> measures;
  std::vector<std::vector<double>> rows;
  for (double d : {6.0, 4.0, 2.8}) {
    double delta = d * 2.0 * grid->max_spacing();
    auto scan = lebesgue_scan(g, {0.5, delta}, 0.25, alpha, idx, capacity_family, copts);
    measures.push_back(scan.measure);
    rows.push_back({delta, scan.measure, scan.capacity.value});
  }
  s.csv["lebesgue_scan.csv"] = csv_table({"delta", "measure", "capacity"}, rows);
  bool shrinking = true;
  for (size_t i = 1; i < measures.size(); ++i)
    if (measures[i] > measures[i - 1]) shrinking = false;
  add_check(s, "flagged measure shrinks as delta refines", shrinking, measures.back(),
            measures.front());
  return s;
}

}  // namespace morreykit::suites
