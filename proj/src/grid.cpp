#include "morreykit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <deque>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace morreykit {

double dist2(const Point& a, const Point& b, int dim) {
  double s = 0;
  for (int d = 0; d < dim; ++d) {
    double dx = a[d] - b[d];
    s += dx * dx;
  }
  return s;
}

double dist(const Point& a, const Point& b, int dim) { return std::sqrt(dist2(a, b, dim)); }

double unit_ball_volume(int dim) {
  const double pi = 3.14159265358979323846;
  if (dim == 1) return 2.0;
  if (dim == 2) return pi;
  if (dim == 3) return 4.0 * pi / 3.0;
  throw std::invalid_argument("unit_ball_volume: dim must be 1, 2 or 3");
}

double BBox::diagonal() const {
  double s = 0;
  for (int d = 0; d < dim; ++d) {
    double e = hi[d] - lo[d];
    s += e * e;
  }
  return std::sqrt(s);
}

std::string mask_spec_name(const MaskSpec& spec) {
  if (std::holds_alternative<MaskBox>(spec)) return "box";
  if (std::holds_alternative<MaskBall>(spec)) return "ball";
  if (std::holds_alternative<MaskAnnulus>(spec)) return "annulus";
  return "bitmap";
}

std::uint64_t fnv1a64(const void* data, size_t nbytes, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (size_t i = 0; i < nbytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::int64_t Grid::cell_at(const Point& p) const {
  std::array<int, 3> c{0, 0, 0};
  for (int d = 0; d < bbox_.dim; ++d) {
    double t = (p[d] - bbox_.lo[d]) / spacing_[d];
    if (t < 0 || t >= counts_[d]) return -1;
    c[d] = static_cast<int>(t);
  }
  return index(c[0], c[1], c[2]);
}

namespace {

std::vector<std::uint8_t> build_mask(const BBox& bbox, const std::array<int, 3>& counts,
                                     const MaskSpec& spec, std::int64_t ncells,
                                     const Grid& partial) {
  std::vector<std::uint8_t> mask(static_cast<size_t>(ncells), 0);
  if (const auto* bm = std::get_if<MaskBitmap>(&spec)) {
    if (static_cast<std::int64_t>(bm->cells.size()) != ncells)
      throw std::invalid_argument("mask bitmap size does not match grid cell count");
    for (std::int64_t i = 0; i < ncells; ++i) mask[i] = bm->cells[i] ? 1 : 0;
    return mask;
  }
  for (std::int64_t idx = 0; idx < ncells; ++idx) {
    Point p = partial.center(idx);
    bool in = false;
    if (std::holds_alternative<MaskBox>(spec)) {
      in = true;
    } else if (const auto* b = std::get_if<MaskBall>(&spec)) {
      in = dist2(p, b->center, bbox.dim) < b->radius * b->radius;
    } else if (const auto* a = std::get_if<MaskAnnulus>(&spec)) {
      double d2 = dist2(p, a->center, bbox.dim);
      in = d2 >= a->r_inner * a->r_inner && d2 < a->r_outer * a->r_outer;
    }
    mask[idx] = in ? 1 : 0;
  }
  return mask;
}

void check_connected(const Grid& g) {
  const auto& cells = g.masked_cells();
  if (cells.empty()) throw std::invalid_argument("mask is empty");
  std::vector<std::uint8_t> seen(static_cast<size_t>(g.ncells()), 0);
  std::deque<std::int64_t> q;
  q.push_back(cells.front());
  seen[cells.front()] = 1;
  std::int64_t reached = 0;
  const auto& n = g.counts();
  while (!q.empty()) {
    std::int64_t idx = q.front();
    q.pop_front();
    ++reached;
    auto c = g.coords(idx);
    for (int d = 0; d < g.dim(); ++d) {
      for (int s = -1; s <= 1; s += 2) {
        auto cc = c;
        cc[d] += s;
        if (cc[d] < 0 || cc[d] >= n[d]) continue;
        std::int64_t j = g.index(cc[0], cc[1], cc[2]);
        if (g.masked(j) && !seen[j]) {
          seen[j] = 1;
          q.push_back(j);
        }
      }
    }
  }
  if (reached != g.masked_count())
    throw std::invalid_argument("mask is disconnected: flood fill reached " +
                                std::to_string(reached) + " of " +
                                std::to_string(g.masked_count()) + " cells");
}

double masked_diameter(const Grid& g) {
  // Extremal cells over a direction fan, then pairwise among candidates.
  std::vector<Point> dirs;
  const double pi = 3.14159265358979323846;
  if (g.dim() == 2) {
    for (int k = 0; k < 256; ++k) {
      double a = pi * k / 256.0;
      dirs.push_back({std::cos(a), std::sin(a), 0});
    }
  } else {
    const double ga = pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < 512; ++k) {
      double z = 1.0 - 2.0 * (k + 0.5) / 512.0;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      dirs.push_back({r * std::cos(ga * k), r * std::sin(ga * k), z});
    }
  }
  std::vector<std::int64_t> cand;
  for (const auto& u : dirs) {
    double best = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    std::int64_t bi = -1, wi = -1;
    for (std::int64_t idx : g.masked_cells()) {
      Point p = g.center(idx);
      double t = 0;
      for (int d = 0; d < g.dim(); ++d) t += p[d] * u[d];
      if (t > best) { best = t; bi = idx; }
      if (t < worst) { worst = t; wi = idx; }
    }
    cand.push_back(bi);
    cand.push_back(wi);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  double best = 0;
  for (size_t a = 0; a < cand.size(); ++a)
    for (size_t b = a + 1; b < cand.size(); ++b)
      best = std::max(best, dist2(g.center(cand[a]), g.center(cand[b]), g.dim()));
  return std::sqrt(best);
}

}  // namespace

std::shared_ptr<const Grid> Grid::create(const BBox& bbox, const std::array<int, 3>& counts,
                                         const MaskSpec& spec) {
  if (bbox.dim != 2 && bbox.dim != 3) throw std::invalid_argument("grid dimension must be 2 or 3");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->bbox_ = bbox;
  g->counts_ = counts;
  g->ncells_ = 1;
  for (int d = 0; d < bbox.dim; ++d) {
    if (counts[d] < 4) throw std::invalid_argument("resolution must be >= 4 per axis");
    if (!(bbox.hi[d] > bbox.lo[d])) throw std::invalid_argument("bounding box is degenerate");
    g->spacing_[d] = (bbox.hi[d] - bbox.lo[d]) / counts[d];
    g->max_spacing_ = std::max(g->max_spacing_, g->spacing_[d]);
    g->ncells_ *= counts[d];
  }
  if (bbox.dim == 2) g->counts_[2] = 1;
  g->cell_volume_ = 1;
  for (int d = 0; d < bbox.dim; ++d) g->cell_volume_ *= g->spacing_[d];
  g->mask_ = build_mask(bbox, g->counts_, spec, g->ncells_, *g);
  for (std::int64_t i = 0; i < g->ncells_; ++i)
    if (g->mask_[i]) g->masked_cells_.push_back(i);
  if (g->masked_cells_.empty()) throw std::invalid_argument("mask is empty");
  check_connected(*g);
  g->diameter_ = masked_diameter(*g);
  if (g->diameter_ > bbox.diagonal() * (1 + 1e-12))
    throw std::logic_error("mask diameter exceeds bounding-box diagonal");
  g->mask_name_ = mask_spec_name(spec);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(g->mask_.data(), g->mask_.size())));
  g->mask_id_ = buf;
  return g;
}

GridPtr make_grid(const BBox& bbox, const std::array<int, 3>& resolution, const MaskSpec& spec) {
  return Grid::create(bbox, resolution, spec);
}

GridPtr make_grid2(double lo, double hi, int resolution, const MaskSpec& spec) {
  BBox b;
  b.dim = 2;
  b.lo = {lo, lo, 0};
  b.hi = {hi, hi, 0};
  return make_grid(b, {resolution, resolution, 1}, spec);
}

namespace {

// Felzenszwalb-Huttenlocher 1-D squared distance transform.
void edt_1d(const std::vector<double>& f, const std::vector<double>& x, std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto sq = [](double t) { return t * t; };
  for (int q = 1; q < n; ++q) {
    if (f[q] == std::numeric_limits<double>::infinity() &&
        f[v[k]] == std::numeric_limits<double>::infinity())
      continue;
    double s;
    while (true) {
      s = (f[q] + sq(x[q]) - f[v[k]] - sq(x[v[k]])) / (2 * x[q] - 2 * x[v[k]]);
      if (s <= z[k]) { --k; } else { break; }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < x[q]) ++k;
    out[q] = sq(x[q] - x[v[k]]) + f[v[k]];
  }
}

std::vector<double> edt_from_seed(const Grid& g, std::vector<double> d2) {
  const auto& n = g.counts();
  // sweep each axis
  for (int axis = 0; axis < g.dim(); ++axis) {
    int len = n[axis];
    std::vector<double> f(len), out(len), x(len);
    for (int i = 0; i < len; ++i) x[i] = i * g.spacing()[axis];
    std::array<int, 3> lim = {n[0], n[1], n[2]};
    lim[axis] = 1;
    for (int k = 0; k < lim[2]; ++k)
      for (int j = 0; j < lim[1]; ++j)
        for (int i = 0; i < lim[0]; ++i) {
          std::array<int, 3> c{i, j, k};
          for (int t = 0; t < len; ++t) {
            c[axis] = t;
            f[t] = d2[g.index(c[0], c[1], c[2])];
          }
          bool all_inf = true;
          for (int t = 0; t < len; ++t)
            if (f[t] < std::numeric_limits<double>::infinity()) { all_inf = false; break; }
          if (all_inf) continue;
          edt_1d(f, x, out);
          for (int t = 0; t < len; ++t) {
            c[axis] = t;
            d2[g.index(c[0], c[1], c[2])] = out[t];
          }
        }
  }
  return d2;
}

}  // namespace

std::vector<double> distance_to_cells(const Grid& g, const std::vector<std::int64_t>& sites) {
  std::vector<double> d2(static_cast<size_t>(g.ncells()), std::numeric_limits<double>::infinity());
  for (std::int64_t s : sites) d2[s] = 0.0;
  d2 = edt_from_seed(g, std::move(d2));
  std::vector<double> out(d2.size());
  for (size_t i = 0; i < d2.size(); ++i) out[i] = std::sqrt(d2[i]);
  return out;
}

std::vector<double> distance_to_exterior(const Grid& g) {
  std::vector<std::int64_t> sites;
  for (std::int64_t i = 0; i < g.ncells(); ++i)
    if (!g.masked(i)) sites.push_back(i);
  std::vector<double> d;
  if (sites.empty()) {
    d.assign(static_cast<size_t>(g.ncells()), std::numeric_limits<double>::infinity());
  } else {
    d = distance_to_cells(g, sites);
  }
  // exterior also starts beyond the bounding-box faces
  for (std::int64_t idx = 0; idx < g.ncells(); ++idx) {
    auto c = g.coords(idx);
    for (int ax = 0; ax < g.dim(); ++ax) {
      double lo_d = (c[ax] + 1) * g.spacing()[ax];  // to first phantom cell below
      double hi_d = (g.counts()[ax] - c[ax]) * g.spacing()[ax];
      d[idx] = std::min({d[idx], lo_d, hi_d});
    }
  }
  return d;
}

MaskBitmap read_pgm_mask(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open PGM file: " + path);
  auto next_token = [&in, &path]() {
    std::string tok;
    while (true) {
      int c = in.get();
      if (c == EOF) throw std::runtime_error("truncated PGM header: " + path);
      if (c == '#') {
        while (c != EOF && c != '\n') c = in.get();
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
  };
  if (next_token() != "P5") throw std::runtime_error("not a binary PGM (P5): " + path);
  int w = std::stoi(next_token());
  int h = std::stoi(next_token());
  int maxval = std::stoi(next_token());
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
    throw std::runtime_error("unsupported PGM geometry in " + path);
  std::vector<std::uint8_t> raw(static_cast<size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw std::runtime_error("truncated PGM payload: " + path);
  MaskBitmap bm;
  bm.source = path;
  bm.cells.resize(raw.size());
  // PGM rows run top to bottom; grid rows run with increasing y.
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col)
      bm.cells[static_cast<size_t>(row) * w + col] =
          raw[static_cast<size_t>(h - 1 - row) * w + col] > maxval / 2 ? 1 : 0;
  return bm;
}

}  // namespace morreykit
