// arrow-lab: runs the named time-arrow scenarios and writes their outputs.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "arrowlab/core/error.hpp"
#include "arrowlab/core/manifest.hpp"
#include "arrowlab/lab/config.hpp"
#include "arrowlab/lab/ensemble.hpp"
#include "arrowlab/lab/scenarios.hpp"

namespace {

using namespace arrowlab;

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

constexpr const char* kOutEnv = "ARROW_LAB_OUT";

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string config_file;
  std::string out;
  bool wall_clock = false;
};

lab::ScenarioConfig resolve_config(const Common& c) {
  const auto s = lab::parse_scenario(c.scenario);
  auto cfg = c.config_file.empty() ? lab::make_config(s) : lab::load_config(s, c.config_file);
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.params["seed"] = *c.seed;
  }
  return cfg;
}

// --out, then $ARROW_LAB_OUT, then the config's output_dir, then ./arrow-lab-out.
std::filesystem::path resolve_out_dir(const Common& c, const lab::ScenarioConfig& cfg) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv(kOutEnv); env && *env) return std::filesystem::path(env) / c.scenario;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return std::filesystem::path("arrow-lab-out") / c.scenario;
}

std::string run_timestamp(bool wall_clock) {
  if (wall_clock) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    return core::iso8601_utc(std::chrono::duration_cast<std::chrono::seconds>(now).count());
  }
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde && *sde) {
    return core::iso8601_utc(std::stoll(sde));
  }
  return core::iso8601_utc(0);
}

int cmd_run(const Common& c) {
  const auto cfg = resolve_config(c);
  lab::RunOptions opts{true, resolve_out_dir(c, cfg), run_timestamp(c.wall_clock)};
  const auto result = lab::run_scenario(cfg, opts);
  for (const auto& line : result.report) std::cout << line << "\n";
  std::cout << fmt::format("outputs: {}\n", opts.out_dir.string());
  return result.passed() ? kExitOk : kExitAssertion;
}

int cmd_ensemble(const Common& c, std::size_t runs, std::size_t parallel) {
  const auto cfg = resolve_config(c);
  lab::RunOptions opts{true, resolve_out_dir(c, cfg), run_timestamp(c.wall_clock)};
  const auto result = lab::run_ensemble(cfg, runs, parallel, opts);
  std::cout << fmt::format("{} runs of {}, {} passed\n", runs, c.scenario, result.passed_runs);
  for (const auto& [name, s] : result.summary) {
    std::cout << fmt::format("  {:<36} mean {:.6g}  sd {:.3g}  min {:.6g}  max {:.6g}\n", name, s.mean, s.stddev,
                             s.min, s.max);
  }
  std::cout << fmt::format("outputs: {}\n", opts.out_dir.string());
  return result.passed_runs == runs ? kExitOk : kExitAssertion;
}

int cmd_classify(const std::string& file, const std::string& out, bool wall_clock) {
  nlohmann::json overrides = {{"classify", {{"input", file}}}};
  const auto cfg = lab::make_config(lab::Scenario::Classify, overrides);
  lab::RunOptions opts;
  opts.write_outputs = !out.empty();
  opts.out_dir = out;
  opts.timestamp = run_timestamp(wall_clock);
  const auto result = lab::run_scenario(cfg, opts);
  std::cout << result.labels.at("topology") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-arrow laboratory: reversible billiards, GRW collapse, and uncertainty topologies"};
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", common.scenario, "fig3a | fig3b | fig4a | fig4b | grw-gas | grw-reversal | sg-xtopology")
        ->required();
    sub->add_option("--seed", common.seed, "Base seed (default from config)");
    sub->add_option("--config", common.config_file, "JSON overrides for the scenario defaults")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, fmt::format("Output directory (overrides ${})", kOutEnv));
    sub->add_flag("--wall-clock", common.wall_clock, "Stamp manifests with the current time");
  };

  auto* run = app.add_subcommand("run", "Run one scenario");
  add_common(run);

  std::size_t runs = 0;
  std::size_t parallel = 1;
  auto* ensemble = app.add_subcommand("ensemble", "Run a seeded ensemble of a scenario");
  add_common(ensemble);
  ensemble->add_option("--runs", runs, "Number of runs")->required()->check(CLI::PositiveNumber);
  ensemble->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

  std::string ts_file;
  std::string classify_out;
  bool classify_wall_clock = false;
  auto* classify = app.add_subcommand("classify", "Classify a transition system as I, V, LAMBDA or X");
  classify->add_option("file", ts_file, "Transition system JSON")->required()->check(CLI::ExistingFile);
  classify->add_option("--out", classify_out, "Also write classification.json and a manifest here");
  classify->add_flag("--wall-clock", classify_wall_clock, "Stamp the manifest with the current time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(common);
    if (*ensemble) return cmd_ensemble(common, runs, parallel);
    return cmd_classify(ts_file, classify_out, classify_wall_clock);
  } catch (const ConfigError& e) {
    std::cerr << "arrow-lab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "arrow-lab: " << e.what() << "\n";
    return kExitAssertion;
  }
}
