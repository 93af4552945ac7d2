#include "morreykit/field.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace morreykit {

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("ScalarField: null grid");
  if (static_cast<std::int64_t>(v_.size()) != grid_->ncells())
    throw std::invalid_argument("ScalarField: value count does not match grid cell count");
  enforce_convention();
}

ScalarField ScalarField::zeros(GridPtr grid) {
  return ScalarField(std::move(grid), std::vector<double>(0));
}

ScalarField ScalarField::constant(GridPtr grid, double c) {
  std::vector<double> v(static_cast<size_t>(grid->ncells()), 0.0);
  for (std::int64_t idx : grid->masked_cells()) v[idx] = c;
  return ScalarField(std::move(grid), std::move(v));
}

void ScalarField::enforce_convention() {
  if (v_.empty() && grid_) v_.assign(static_cast<size_t>(grid_->ncells()), 0.0);
  for (std::int64_t i = 0; i < grid_->ncells(); ++i) {
    if (!grid_->masked(i)) {
      v_[i] = 0.0;
    } else if (!std::isfinite(v_[i])) {
      auto c = grid_->coords(i);
      throw std::runtime_error("non-finite field value at cell (" + std::to_string(c[0]) + "," +
                               std::to_string(c[1]) + "," + std::to_string(c[2]) + ")");
    }
  }
}

double ScalarField::max_abs() const {
  double m = 0;
  for (double x : v_) m = std::max(m, std::fabs(x));
  return m;
}

double ScalarField::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::int64_t i : grid_->masked_cells()) m = std::min(m, v_[i]);
  return m;
}

double ScalarField::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::int64_t i : grid_->masked_cells()) m = std::max(m, v_[i]);
  return m;
}

ScalarField sample(const Expr& expr, const GridPtr& grid) {
  std::vector<double> v(static_cast<size_t>(grid->ncells()), 0.0);
  for (std::int64_t idx : grid->masked_cells()) {
    double val = expr(grid->center(idx));
    if (!std::isfinite(val)) {
      auto c = grid->coords(idx);
      auto p = grid->center(idx);
      std::ostringstream os;
      os << "expression not finite at masked cell (" << c[0] << "," << c[1] << "," << c[2]
         << ") center (" << p[0] << "," << p[1] << "," << p[2] << ")";
      throw std::runtime_error(os.str());
    }
    v[idx] = val;
  }
  return ScalarField(grid, std::move(v));
}

double integrate(const ScalarField& f, const Region& region, bool* empty_flag) {
  const Grid& g = *f.grid();
  double sum = 0;
  std::int64_t hit = 0;
  if (std::holds_alternative<RegionDomain>(region)) {
    for (std::int64_t idx : g.masked_cells()) sum += f[idx];
    hit = g.masked_count();
  } else {
    const auto& ball = std::get<RegionBall>(region);
    // restrict the scan to the ball's bounding box
    std::array<int, 3> lo{0, 0, 0}, hi{g.counts()[0] - 1, g.counts()[1] - 1, g.counts()[2] - 1};
    for (int d = 0; d < g.dim(); ++d) {
      double a = (ball.center[d] - ball.radius - g.bbox().lo[d]) / g.spacing()[d];
      double b = (ball.center[d] + ball.radius - g.bbox().lo[d]) / g.spacing()[d];
      lo[d] = std::max(lo[d], static_cast<int>(std::floor(a)) - 1);
      hi[d] = std::min(hi[d], static_cast<int>(std::ceil(b)) + 1);
    }
    if (g.dim() == 2) { lo[2] = hi[2] = 0; }
    for (int k = lo[2]; k <= hi[2]; ++k)
      for (int j = lo[1]; j <= hi[1]; ++j)
        for (int i = lo[0]; i <= hi[0]; ++i) {
          std::int64_t idx = g.index(i, j, k);
          if (!g.masked(idx)) continue;
          if (!ball.contains(g.center(idx), g.dim())) continue;
          sum += f[idx];
          ++hit;
        }
  }
  if (empty_flag) *empty_flag = (hit == 0);
  return sum * g.cell_volume();
}

ScalarField axpby(double a, const ScalarField& x, double b, const ScalarField& y) {
  if (x.grid() != y.grid()) throw std::invalid_argument("axpby: fields on different grids");
  std::vector<double> v(x.values().size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = a * x.values()[i] + b * y.values()[i];
  return ScalarField(x.grid(), std::move(v));
}

ScalarField map_field(const ScalarField& x, const std::function<double(double)>& fn) {
  std::vector<double> v(x.values().size(), 0.0);
  for (std::int64_t i : x.grid()->masked_cells()) v[i] = fn(x.values()[i]);
  return ScalarField(x.grid(), std::move(v));
}

void write_fld(const ScalarField& f, const std::string& path) {
  const Grid& g = *f.grid();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "FLD 1\n";
  out << "dim " << g.dim() << "\n";
  out << "counts";
  for (int d = 0; d < g.dim(); ++d) out << " " << g.counts()[d];
  out << "\n";
  out << "bbox";
  out.precision(17);
  for (int d = 0; d < g.dim(); ++d) out << " " << g.bbox().lo[d] << " " << g.bbox().hi[d];
  out << "\n";
  out << "mask " << g.mask_id() << "\n";
  out << "data\n";
  static_assert(sizeof(double) == 8);
  // payload is little-endian float64, row-major (x fastest)
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {
void parse_fld_header(std::istream& in, int& dim, std::array<int, 3>& counts,
                      std::array<double, 6>& bbox, std::string& mask_id) {
  std::string line;
  if (!std::getline(in, line) || line != "FLD 1") throw std::runtime_error("bad .fld magic");
  counts = {1, 1, 1};
  bbox = {0, 0, 0, 0, 0, 0};
  while (std::getline(in, line)) {
    if (line == "data") return;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dim") ls >> dim;
    else if (key == "counts") { for (int d = 0; d < dim; ++d) ls >> counts[d]; }
    else if (key == "bbox") { for (int d = 0; d < 2 * dim; ++d) ls >> bbox[d]; }
    else if (key == "mask") ls >> mask_id;
    else throw std::runtime_error("unknown .fld header key: " + key);
    if (!ls) throw std::runtime_error("malformed .fld header line: " + line);
  }
  throw std::runtime_error("missing data section in .fld");
}
}  // namespace

ScalarField read_fld(const std::string& path, const GridPtr& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  int dim = 0;
  std::array<int, 3> counts;
  std::array<double, 6> bbox;
  std::string mask_id;
  parse_fld_header(in, dim, counts, bbox, mask_id);
  if (dim != grid->dim()) throw std::runtime_error("field/grid dimension mismatch: " + path);
  for (int d = 0; d < dim; ++d) {
    if (counts[d] != grid->counts()[d]) throw std::runtime_error("field/grid count mismatch: " + path);
    if (std::fabs(bbox[2 * d] - grid->bbox().lo[d]) > 1e-14 ||
        std::fabs(bbox[2 * d + 1] - grid->bbox().hi[d]) > 1e-14)
      throw std::runtime_error("field/grid bbox mismatch: " + path);
  }
  if (mask_id != grid->mask_id()) throw std::runtime_error("field/grid mask id mismatch: " + path);
  std::vector<double> v(static_cast<size_t>(grid->ncells()));
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
    throw std::runtime_error("truncated .fld payload: " + path);
  return ScalarField(grid, std::move(v));
}

std::string read_fld_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  int dim = 0;
  std::array<int, 3> counts;
  std::array<double, 6> bbox;
  std::string mask_id;
  parse_fld_header(in, dim, counts, bbox, mask_id);
  std::ostringstream os;
  os << "dim " << dim << " counts";
  for (int d = 0; d < dim; ++d) os << " " << counts[d];
  os << " bbox";
  for (int d = 0; d < 2 * dim; ++d) os << " " << bbox[d];
  os << " mask " << mask_id;
  return os.str();
}

}  // namespace morreykit
