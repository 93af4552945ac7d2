#pragma once

// Internal suite implementations behind the experiment registry.

#include "morreykit/experiments.hpp"

namespace morreykit::suites {

Summary riesz_oracle(const ExperimentConfig&);
Summary morrey_borderline(const ExperimentConfig&);
Summary lip_delta(const ExperimentConfig&);
Summary truncation_decay(const ExperimentConfig&);
Summary holder_representative(const ExperimentConfig&);
Summary capacity_oracles(const ExperimentConfig&);
Summary lane_emden(const ExperimentConfig&);
Summary embedding_equivalence(const ExperimentConfig&);
Summary zorko_approximation(const ExperimentConfig&);
Summary lebesgue_scan_suite(const ExperimentConfig&);

// shared helpers
void add_check(Summary& s, const std::string& name, bool pass, double value, double threshold,
               const std::string& detail = "");
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace morreykit::suites
