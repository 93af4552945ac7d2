#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "morreykit/experiments.hpp"
#include "morreykit/field.hpp"

namespace {

int cap_threads_from_env() {
  // single stream today; the cap is honored so configs stay portable
  const char* v = std::getenv("MORREYKIT_THREADS");
  if (!v) return 1;
  int n = std::atoi(v);
  return n >= 1 ? n : 1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace morreykit;
  CLI::App app{"morreykit - potential-theory experiment runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a registered experiment suite");
  std::string experiment, config_path, out_dir, grid_arg;
  std::uint64_t seed = 0;
  bool seed_set = false, grid_set = false;
  double tol_scale = 0;
  bool tol_set = false;
  run->add_option("--experiment", experiment, "experiment name (see `morreykit list`)");
  run->add_option("--config", config_path, "TOML-style config file");
  run->add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& v) { seed = v; seed_set = true; }, "seed override");
  run->add_option("--out", out_dir, "output directory for summary.json / CSV / .fld");
  run->add_option_function<std::string>(
      "--grid", [&](const std::string& v) { grid_arg = v; grid_set = true; },
      "grid resolution override");
  run->add_option_function<double>(
      "--tol-scale", [&](const double& v) { tol_scale = v; tol_set = true; },
      "tolerance scale override");

  auto* list = app.add_subcommand("list", "list registered experiments");
  auto* inspect = app.add_subcommand("inspect", "print a .fld header or a summary file");
  std::string inspect_path;
  inspect->add_option("path", inspect_path, "file to inspect")->required();

  CLI11_PARSE(app, argc, argv);
  (void)cap_threads_from_env();

  try {
    if (list->parsed()) {
      for (const auto& e : list_experiments())
        std::cout << e.name << "\n    " << e.description << "\n    parameters: " << e.parameters
                  << "\n";
      return 0;
    }
    if (inspect->parsed()) {
      if (inspect_path.size() > 4 && inspect_path.substr(inspect_path.size() - 4) == ".fld") {
        std::cout << read_fld_header(inspect_path) << "\n";
      } else {
        std::cout << slurp(inspect_path);
      }
      return 0;
    }
    // run
    Config c;
    if (!config_path.empty()) c = Config::parse(slurp(config_path));
    ExperimentConfig cfg = ExperimentConfig::from_config(c);
    if (!experiment.empty()) cfg.experiment = experiment;
    if (seed_set) cfg.seed = seed;
    if (grid_set) cfg.resolution = std::stoi(grid_arg);
    if (tol_set) cfg.tol_scale = tol_scale;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (cfg.experiment.empty())
      throw std::invalid_argument("no experiment named (use --experiment or [experiment] name)");
    Summary s = run_experiment(cfg);
    if (!cfg.out_dir.empty()) write_summary(s, cfg.out_dir);
    for (const auto& ch : s.checks) {
      std::cout << (ch.pass ? "[ ok ] " : "[FAIL] ") << ch.name << " (value " << ch.value
                << ", threshold " << ch.threshold << ")\n";
    }
    return s.all_pass() ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
