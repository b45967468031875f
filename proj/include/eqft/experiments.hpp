#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eqft/config.hpp"

namespace eqft {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentOutcome {
  std::string name;
  std::vector<CriterionResult> criteria;
  double seconds = 0.0;

  bool pass() const {
    for (const auto& c : criteria)
      if (!c.pass) return false;
    return true;
  }
};

const std::vector<std::string>& experiment_names();

/// Runs one named experiment: computes, writes CSV/JSON artifacts under
/// out_dir/<name>/, and returns pass/fail per checked criterion.
ExperimentOutcome run_experiment(const std::string& name, const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir);

/// Runs a list of experiments ("all" expands to every experiment), honoring
/// the thread-count environment variable EQFT_THREADS; results are merged in
/// list order regardless of scheduling.
std::vector<ExperimentOutcome> run_experiments(const std::vector<std::string>& names,
                                               const ExperimentConfig& config,
                                               const std::filesystem::path& out_dir);

}  // namespace eqft
