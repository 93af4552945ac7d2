#pragma once

#include <map>
#include <string>
#include <vector>

#include "morreykit/config.hpp"

namespace morreykit {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0;
  double threshold = 0;
  std::string detail;
};

struct Summary {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string config_echo;
  std::vector<Check> checks;
  std::map<std::string, double> data;                 // named scalar results
  std::map<std::string, std::string> csv;             // file name -> content
  std::map<std::string, std::vector<double>> series;  // named numeric columns
  bool all_pass() const;
  std::string to_json() const;  // deterministic byte-for-byte for fixed inputs
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string parameters;
};

const std::vector<ExperimentInfo>& list_experiments();

/// Runs a registered suite. Throws std::invalid_argument for an unknown name
/// or invalid configuration (the CLI maps that to exit code 2).
Summary run_experiment(const ExperimentConfig& cfg);

/// Writes summary.json and the CSV tables under dir.
void write_summary(const Summary& s, const std::string& dir);

/// Runs and writes summary.json, CSV tables and .fld snapshots under
/// cfg.out_dir (if set). Returns 0 when all checks pass, 1 otherwise.
int run_and_write(const ExperimentConfig& cfg);

}  // namespace morreykit
