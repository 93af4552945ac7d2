#include "morreykit/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "suites.hpp"

namespace morreykit {

bool Summary::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Summary::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["config"] = config_echo;
  j["pass"] = all_pass();
  nlohmann::json checks_j = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["value"] = c.value;
    cj["threshold"] = c.threshold;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks_j.push_back(cj);
  }
  j["checks"] = checks_j;
  j["data"] = data;
  j["series"] = series;
  return j.dump(2) + "\n";
}

namespace suites {

void add_check(Summary& s, const std::string& name, bool pass, double value, double threshold,
               const std::string& detail) {
  s.checks.push_back({name, pass, value, threshold, detail});
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope fit needs two equal-length series");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) continue;
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("slope fit has fewer than two positive points");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace suites

namespace {

struct Entry {
  ExperimentInfo info;
  Summary (*run)(const ExperimentConfig&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"riesz-oracle", "Riesz operator against the closed-form ball potential; fast-vs-direct agreement",
        "grid.resolution (default 256)"},
       suites::riesz_oracle},
      {{"morrey-borderline", "resolution stability of the Morrey norm around the borderline scale",
        "grid.resolution = coarsest of the 3-step sweep (default 64)"},
       suites::morrey_borderline},
      {{"lip-delta", "Holder seminorm stability of potentials in the smooth regime alpha > lambda/p",
        "grid.resolution = coarsest of the 3-step sweep (default 64)"},
       suites::lip_delta},
      {{"truncation-decay", "decay rate of the truncation error in the target Morrey norm",
        "grid.resolution (default 128)"},
       suites::truncation_decay},
      {{"holder-representative", "clamped-telescope representative: capacity, exact agreement, seminorm contrast",
        "grid.resolution = coarse level of the 2-step sweep (default 64)"},
       suites::holder_representative},
      {{"capacity-oracles", "variational capacity against the radial oracle; monotonicity and certificates",
        "grid.resolution (default 256)"},
       suites::capacity_oracles},
      {{"lane-emden", "manufactured solve, power and exponential runs, energy estimates",
        "grid.resolution (default 128)"},
       suites::lane_emden},
      {{"embedding-equivalence", "joint blow-up signature of the five embedding constants; eigenvalue oracle",
        "grid.resolution (default 64)"},
       suites::embedding_equivalence},
      {{"zorko-approximation", "compact-support smoothing error along a mollification ladder",
        "grid.resolution (default 64)"},
       suites::zorko_approximation},
      {{"lebesgue-scan", "oscillation-based exceptional-set scan with capacity estimate",
        "grid.resolution (default 64)"},
       suites::lebesgue_scan_suite},
  };
  return entries;
}

}  // namespace

const std::vector<ExperimentInfo>& list_experiments() {
  static std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

Summary run_experiment(const ExperimentConfig& cfg) {
  for (const auto& e : registry()) {
    if (e.info.name == cfg.experiment) {
      Summary s = e.run(cfg);
      s.experiment = cfg.experiment;
      s.seed = cfg.seed;
      s.config_echo = cfg.to_config().serialize();
      return s;
    }
  }
  throw std::invalid_argument("unknown experiment: " + cfg.experiment);
}

void write_summary(const Summary& s, const std::string& dir_path) {
  std::filesystem::create_directories(dir_path);
  auto dir = std::filesystem::path(dir_path);
  {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << s.to_json();
  }
  for (const auto& [name, content] : s.csv) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
  }
}

int run_and_write(const ExperimentConfig& cfg) {
  Summary s = run_experiment(cfg);
  if (!cfg.out_dir.empty()) write_summary(s, cfg.out_dir);
  return s.all_pass() ? 0 : 1;
}

}  // namespace morreykit
