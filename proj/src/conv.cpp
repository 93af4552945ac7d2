#include "morreykit/conv.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>

namespace morreykit {

namespace {

struct PlanSet {
  std::array<int, 3> P{1, 1, 1};  // padded dims, x fastest in memory
  std::int64_t real_n = 0, cplx_n = 0;
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
  ~PlanSet() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (rbuf) fftw_free(rbuf);
    if (cbuf) fftw_free(cbuf);
  }
};

std::array<int, 3> padded_dims(const Grid& g) {
  std::array<int, 3> P{1, 1, 1};
  for (int d = 0; d < g.dim(); ++d) P[d] = 2 * g.counts()[d];
  return P;
}

PlanSet& plan_for(const std::array<int, 3>& P) {
  static std::map<std::array<int, 3>, std::unique_ptr<PlanSet>> cache;
  auto it = cache.find(P);
  if (it != cache.end()) return *it->second;
  auto ps = std::make_unique<PlanSet>();
  ps->P = P;
  ps->real_n = static_cast<std::int64_t>(P[0]) * P[1] * P[2];
  ps->cplx_n = static_cast<std::int64_t>(P[0] / 2 + 1) * P[1] * P[2];
  ps->rbuf = fftw_alloc_real(static_cast<size_t>(ps->real_n));
  ps->cbuf = fftw_alloc_complex(static_cast<size_t>(ps->cplx_n));
  // fftw takes dims slowest-first; x is fastest in our layout
  int rank = (P[2] > 1) ? 3 : 2;
  int dims[3] = {P[2], P[1], P[0]};
  int* dp = (rank == 3) ? dims : dims + 1;
  ps->fwd = fftw_plan_dft_r2c(rank, dp, ps->rbuf, ps->cbuf, FFTW_ESTIMATE);
  ps->bwd = fftw_plan_dft_c2r(rank, dp, ps->cbuf, ps->rbuf, FFTW_ESTIMATE);
  if (!ps->fwd || !ps->bwd) throw std::runtime_error("fftw plan creation failed");
  auto& ref = *ps;
  cache.emplace(P, std::move(ps));
  return ref;
}

using Spectrum = std::vector<std::complex<double>>;

void embed_field(const Grid& g, const std::vector<double>& in, PlanSet& ps) {
  std::fill(ps.rbuf, ps.rbuf + ps.real_n, 0.0);
  const auto& n = g.counts();
  const auto& P = ps.P;
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j) {
      const double* src = in.data() + g.index(0, j, k);
      double* dst = ps.rbuf + (static_cast<std::int64_t>(k) * P[1] + j) * P[0];
      std::copy(src, src + n[0], dst);
    }
}

Spectrum forward(PlanSet& ps) {
  fftw_execute(ps.fwd);
  Spectrum s(static_cast<size_t>(ps.cplx_n));
  for (std::int64_t i = 0; i < ps.cplx_n; ++i) s[i] = {ps.cbuf[i][0], ps.cbuf[i][1]};
  return s;
}

Spectrum kernel_spectrum_uncached(const Grid& g, const LagKernel& ker, PlanSet& ps) {
  std::fill(ps.rbuf, ps.rbuf + ps.real_n, 0.0);
  const auto& n = g.counts();
  const auto& P = ps.P;
  int lz = (g.dim() == 3) ? n[2] - 1 : 0;
  for (int dk = -lz; dk <= lz; ++dk)
    for (int dj = -(n[1] - 1); dj <= n[1] - 1; ++dj)
      for (int di = -(n[0] - 1); di <= n[0] - 1; ++di) {
        double v = ker.value(di, dj, dk);
        if (v == 0.0) continue;
        int x = (di + P[0]) % P[0];
        int y = (dj + P[1]) % P[1];
        int z = (dk + P[2]) % P[2];
        ps.rbuf[(static_cast<std::int64_t>(z) * P[1] + y) * P[0] + x] = v;
      }
  return forward(ps);
}

const Spectrum& kernel_spectrum(const Grid& g, const LagKernel& ker, PlanSet& ps) {
  static std::map<std::string, Spectrum> cache;
  static std::int64_t cached_bytes = 0;
  const std::int64_t budget = 512ll << 20;
  auto it = cache.find(ker.key);
  if (it != cache.end()) return it->second;
  Spectrum s = kernel_spectrum_uncached(g, ker, ps);
  std::int64_t bytes = static_cast<std::int64_t>(s.size()) * 16;
  if (cached_bytes + bytes > budget) {
    static Spectrum scratch;
    scratch = std::move(s);
    return scratch;
  }
  cached_bytes += bytes;
  return cache.emplace(ker.key, std::move(s)).first->second;
}

std::vector<double> apply_spectrum(const Grid& g, const Spectrum& field_spec,
                                   const Spectrum& ker_spec, PlanSet& ps) {
  const double scale = 1.0 / static_cast<double>(ps.real_n);
  for (std::int64_t i = 0; i < ps.cplx_n; ++i) {
    std::complex<double> z = field_spec[i] * ker_spec[i];
    ps.cbuf[i][0] = z.real() * scale;
    ps.cbuf[i][1] = z.imag() * scale;
  }
  fftw_execute(ps.bwd);
  const auto& n = g.counts();
  const auto& P = ps.P;
  std::vector<double> out(static_cast<size_t>(g.ncells()));
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j) {
      const double* src = ps.rbuf + (static_cast<std::int64_t>(k) * P[1] + j) * P[0];
      std::copy(src, src + n[0], out.data() + g.index(0, j, k));
    }
  return out;
}

}  // namespace

std::vector<double> convolve(const GridPtr& grid, const std::vector<double>& in,
                             const LagKernel& ker) {
  PlanSet& ps = plan_for(padded_dims(*grid));
  embed_field(*grid, in, ps);
  Spectrum fs = forward(ps);
  const Spectrum& ks = kernel_spectrum(*grid, ker, ps);
  return apply_spectrum(*grid, fs, ks, ps);
}

std::vector<std::vector<double>> convolve_many(const GridPtr& grid, const std::vector<double>& in,
                                               const std::vector<LagKernel>& kernels) {
  PlanSet& ps = plan_for(padded_dims(*grid));
  embed_field(*grid, in, ps);
  Spectrum fs = forward(ps);
  std::vector<std::vector<double>> out;
  out.reserve(kernels.size());
  for (const auto& ker : kernels) {
    const Spectrum& ks = kernel_spectrum(*grid, ker, ps);
    out.push_back(apply_spectrum(*grid, fs, ks, ps));
  }
  return out;
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1], Newton on the recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  const double pi = 3.14159265358979323846;
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1);
      double dt = p0 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    double p0 = 1, p1 = 0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1);
    x[i] = t;
    w[i] = 2.0 / ((1 - t * t) * dp * dp);
  }
}

double gl_box_integral(const std::array<double, 6>& box, int dim, double expo) {
  static std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(16, gx, gw);
  const int m = static_cast<int>(gx.size());
  double total = 0;
  if (dim == 2) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        double x = 0.5 * (box[1] + box[0]) + 0.5 * (box[1] - box[0]) * gx[a];
        double y = 0.5 * (box[3] + box[2]) + 0.5 * (box[3] - box[2]) * gx[b];
        total += gw[a] * gw[b] * std::pow(x * x + y * y, expo / 2.0);
      }
    total *= 0.25 * (box[1] - box[0]) * (box[3] - box[2]);
  } else {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          double x = 0.5 * (box[1] + box[0]) + 0.5 * (box[1] - box[0]) * gx[a];
          double y = 0.5 * (box[3] + box[2]) + 0.5 * (box[3] - box[2]) * gx[b];
          double z = 0.5 * (box[5] + box[4]) + 0.5 * (box[5] - box[4]) * gx[c];
          total += gw[a] * gw[b] * gw[c] * std::pow(x * x + y * y + z * z, expo / 2.0);
        }
    total *= 0.125 * (box[1] - box[0]) * (box[3] - box[2]) * (box[5] - box[4]);
  }
  return total;
}

}  // namespace

double riesz_self_cell_integral(const Grid& grid, double alpha) {
  const int dim = grid.dim();
  const double expo = alpha - dim;
  std::array<double, 3> a{0, 0, 0};
  for (int d = 0; d < dim; ++d) a[d] = grid.spacing()[d] / 2.0;
  // shell C \ C/2 as axis-aligned boxes, then geometric series in the dyadic
  // scaling |y|^(alpha-n): integral over C/2 is 2^(-alpha) times over C.
  double shell = 0;
  int segs = 3;
  for (int sx = 0; sx < segs; ++sx)
    for (int sy = 0; sy < segs; ++sy)
      for (int sz = 0; sz < (dim == 3 ? segs : 1); ++sz) {
        if (sx == 1 && sy == 1 && (dim == 2 || sz == 1)) continue;  // central box
        auto seg = [](int s, double half) -> std::array<double, 2> {
          if (s == 0) return {-half, -half / 2};
          if (s == 1) return {-half / 2, half / 2};
          return {half / 2, half};
        };
        auto bx = seg(sx, a[0]);
        auto by = seg(sy, a[1]);
        auto bz = dim == 3 ? seg(sz, a[2]) : std::array<double, 2>{0, 0};
        std::array<double, 6> box{bx[0], bx[1], by[0], by[1], bz[0], bz[1]};
        shell += gl_box_integral(box, dim, expo);
      }
  return shell / (1.0 - std::pow(2.0, -alpha));
}

double riesz_lag_value(const Grid& grid, double alpha, double self_integral, int di, int dj,
                       int dk) {
  if (di == 0 && dj == 0 && dk == 0) return self_integral;
  double s = 0;
  const auto& h = grid.spacing();
  double dx = di * h[0], dy = dj * h[1];
  s = dx * dx + dy * dy;
  if (grid.dim() == 3) {
    double dz = dk * h[2];
    s += dz * dz;
  }
  return std::pow(s, 0.5 * (alpha - grid.dim())) * grid.cell_volume();
}

namespace {
std::string grid_geom_key(const Grid& g) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d:%d,%d,%d:%a,%a,%a", g.dim(), g.counts()[0], g.counts()[1],
                g.counts()[2], g.spacing()[0], g.spacing()[1], g.spacing()[2]);
  return buf;
}
}  // namespace

LagKernel make_riesz_kernel(const GridPtr& grid, double alpha) {
  if (!(alpha > 0) || !(alpha < grid->dim()))
    throw std::invalid_argument("riesz order alpha must lie in (0, n)");
  double self = riesz_self_cell_integral(*grid, alpha);
  char buf[64];
  std::snprintf(buf, sizeof buf, "riesz:%a|", alpha);
  LagKernel k;
  k.key = std::string(buf) + grid_geom_key(*grid);
  GridPtr g = grid;
  k.value = [g, alpha, self](int di, int dj, int dk) {
    return riesz_lag_value(*g, alpha, self, di, dj, dk);
  };
  return k;
}

LagKernel make_ball_kernel(const GridPtr& grid, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  char buf[64];
  std::snprintf(buf, sizeof buf, "ball:%a|", radius);
  LagKernel k;
  k.key = std::string(buf) + grid_geom_key(*grid);
  GridPtr g = grid;
  double r2 = radius * radius;
  k.value = [g, r2](int di, int dj, int dk) {
    const auto& h = g->spacing();
    double dx = di * h[0], dy = dj * h[1];
    double s = dx * dx + dy * dy;
    if (g->dim() == 3) {
      double dz = dk * h[2];
      s += dz * dz;
    }
    return s < r2 ? 1.0 : 0.0;
  };
  return k;
}

const std::vector<double>& ball_cell_counts(const GridPtr& grid, double radius) {
  static std::map<std::string, std::vector<double>> cache;
  char buf[64];
  std::snprintf(buf, sizeof buf, "counts:%a|", radius);
  std::string key = std::string(buf) + grid_geom_key(*grid);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> ones(static_cast<size_t>(grid->ncells()), 1.0);
  auto c = convolve(grid, ones, make_ball_kernel(grid, radius));
  for (double& x : c) x = std::round(x);
  return cache.emplace(key, std::move(c)).first->second;
}

}  // namespace morreykit
