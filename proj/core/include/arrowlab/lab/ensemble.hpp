#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "arrowlab/lab/scenarios.hpp"

namespace arrowlab::lab {

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single run
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
};

struct EnsembleResult {
  Scenario scenario = Scenario::Fig3a;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<ScenarioResult> runs;  // ordered by run index
  std::map<std::string, MetricSummary> summary;
  std::size_t passed_runs = 0;
};

/// Run i uses derive_seed(cfg.seed, i). Results do not depend on `parallel`.
/// Per-run outputs go to out_dir/run_XXXX when opts.write_outputs is set,
/// plus ensemble.json, ensemble_runs.csv and manifest.json in out_dir.
EnsembleResult run_ensemble(const ScenarioConfig& cfg, std::size_t runs, std::size_t parallel,
                            const RunOptions& opts = {});

MetricSummary summarize(std::vector<double> values);

}  // namespace arrowlab::lab
