#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arrowlab/billiard/engine.hpp"
#include "arrowlab/core/manifest.hpp"
#include "arrowlab/grw/collapse.hpp"
#include "arrowlab/lab/config.hpp"

namespace arrowlab::lab {

/// Random streams used by the scenarios, keyed by the run seed.
namespace streams {
inline constexpr std::uint64_t kPerturbation = 2;
inline constexpr std::uint64_t kGrw = 3;
inline constexpr std::uint64_t kSternGerlach = 4;
}  // namespace streams

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ScenarioResult {
  Scenario scenario = Scenario::Fig3a;
  std::uint64_t seed = 0;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> labels;
  std::vector<Assertion> assertions;
  std::optional<core::RunManifest> manifest;
  std::vector<std::string> report;  // human-readable lines for the CLI

  bool passed() const;
};

struct RunOptions {
  bool write_outputs = true;
  std::filesystem::path out_dir;
  std::string timestamp = "1970-01-01T00:00:00Z";

  static RunOptions in_memory() {
    RunOptions o;
    o.write_outputs = false;
    return o;
  }
};

/// Runs the configured scenario. With write_outputs, CSV/SVG/JSON files and
/// manifest.json are written into out_dir (created if needed).
ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

// Building blocks shared with the tests.

struct Perturbation {
  std::size_t ball = 0;
  billiard::FixedVec2 displacement;
};

/// One ball and a displacement of magnitude cell_width * fraction in a
/// random direction, both drawn from the perturbation stream of `seed`.
Perturbation draw_perturbation(std::uint64_t seed, std::size_t n_balls, double cell_width, double fraction);

struct BilliardRun {
  billiard::DiscState initial;
  billiard::DiscState final_state;
  billiard::Trajectory trajectory;  // both legs for reversal scenarios
  std::int64_t reversal_step = -1;  // -1 when there is no reversal
  std::optional<Perturbation> perturbation;
  bool recovered = false;
};

/// fig3a: forward run. fig3b: forward, reverse, backward. fig4a: fig3a with a
/// perturbation at forward_perturb_step. fig4b: fig3b with a perturbation
/// right after the reversal.
BilliardRun run_billiard(Scenario kind, const ScenarioConfig::Billiard& b, std::uint64_t seed);

/// Mean entropy over samples with step >= from_step.
double window_mean_entropy(const billiard::Trajectory& t, std::int64_t from_step, std::int64_t to_step);
/// Least-squares slope of entropy against step.
double entropy_slope(const billiard::Trajectory& t);

/// Left-half gas per the config's grw section.
grw::WaveFunction grw_initial_state(const ScenarioConfig::Grw& g);

/// Mean over records with step >= 0.9 * steps (the last 10% of the run).
double tail_mean(const std::vector<grw::GrwRecord>& records, std::int64_t steps, double grw::GrwRecord::*field);

}  // namespace arrowlab::lab
