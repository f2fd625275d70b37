#include "arrowlab/lab/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"
#include "arrowlab/core/rng.hpp"

namespace arrowlab::lab {

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

EnsembleResult run_ensemble(const ScenarioConfig& cfg, std::size_t runs, std::size_t parallel,
                            const RunOptions& opts) {
  if (runs == 0) throw ConfigError("--runs must be at least 1");
  if (parallel == 0) throw ConfigError("--parallel must be at least 1");

  EnsembleResult out;
  out.scenario = cfg.scenario;
  out.base_seed = cfg.seed;
  out.runs.resize(runs);
  for (std::size_t i = 0; i < runs; ++i) out.seeds.push_back(core::derive_seed(cfg.seed, i));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(runs);
  const auto worker = [&] {
    for (std::size_t i = next++; i < runs; i = next++) {
      try {
        ScenarioConfig c = cfg;
        c.seed = out.seeds[i];
        c.params["seed"] = c.seed;
        RunOptions o = opts;
        o.out_dir = opts.out_dir / fmt::format("run_{:04d}", i);
        out.runs[i] = run_scenario(c, o);
      } catch (const ConfigError& e) {
        failures[i] = std::make_exception_ptr(ConfigError(fmt::format("run {}: {}", i, e.what())));
      } catch (const std::exception& e) {
        failures[i] = std::make_exception_ptr(Error(fmt::format("run {}: {}", i, e.what())));
      }
    }
  };
  const std::size_t n_threads = std::min(parallel, runs);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::set<std::string> keys;
  for (const auto& r : out.runs) {
    for (const auto& [k, v] : r.metrics) keys.insert(k);
    out.passed_runs += r.passed();
  }
  for (const auto& k : keys) {
    std::vector<double> values;
    for (const auto& r : out.runs) {
      if (auto it = r.metrics.find(k); it != r.metrics.end()) values.push_back(it->second);
    }
    out.summary[k] = summarize(std::move(values));
  }

  if (opts.write_outputs) {
    std::filesystem::create_directories(opts.out_dir);
    nlohmann::json doc;
    doc["scenario"] = std::string(to_string(cfg.scenario));
    doc["base_seed"] = cfg.seed;
    doc["runs"] = runs;
    doc["passed_runs"] = out.passed_runs;
    doc["seeds"] = out.seeds;
    for (const auto& [k, s] : out.summary) {
      doc["metrics"][k] = {{"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}, {"median", s.median}};
    }
    std::ofstream(opts.out_dir / "ensemble.json") << doc.dump(2) << "\n";

    std::ofstream csv(opts.out_dir / "ensemble_runs.csv");
    csv << "run,seed,passed";
    for (const auto& k : keys) csv << "," << k;
    csv << "\n";
    for (std::size_t i = 0; i < runs; ++i) {
      const auto& r = out.runs[i];
      csv << fmt::format("{},{},{}", i, out.seeds[i], r.passed() ? 1 : 0);
      for (const auto& k : keys) {
        auto it = r.metrics.find(k);
        csv << "," << (it == r.metrics.end() ? std::string() : fmt::format("{}", it->second));
      }
      csv << "\n";
    }
    csv.close();

    std::vector<std::string> outputs{"ensemble.json", "ensemble_runs.csv"};
    for (std::size_t i = 0; i < runs; ++i) outputs.push_back(fmt::format("run_{:04d}/manifest.json", i));
    core::write_manifest({cfg.seed, std::string(to_string(cfg.scenario)), core::config_digest(cfg.params), outputs,
                          opts.timestamp},
                         opts.out_dir / "manifest.json");
  }
  return out;
}

}  // namespace arrowlab::lab
