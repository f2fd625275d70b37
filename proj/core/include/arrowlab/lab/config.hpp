#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "arrowlab/billiard/engine.hpp"
#include "arrowlab/grw/collapse.hpp"

namespace arrowlab::lab {

enum class Scenario { Fig3a, Fig3b, Fig4a, Fig4b, GrwGas, GrwReversal, SgXTopology, Classify };

std::string_view to_string(Scenario s);
/// Throws ConfigError for unknown names.
Scenario parse_scenario(std::string_view name);

inline constexpr int kConfigVersion = 1;

/// Scenario configuration: a JSON document whose shape is fixed by
/// default_config(). Overrides may only use keys present in the defaults.
struct ScenarioConfig {
  Scenario scenario = Scenario::Fig3a;
  std::uint64_t seed = 1;
  std::string output_dir;  // empty: decided by the caller
  nlohmann::json params;   // full document, including the fields above

  /// Parsed sections.
  struct Billiard {
    billiard::OrderedLayout layout;
    billiard::ForceLaw law;
    std::int64_t steps = 0;  // integrator steps per leg (time_units / dt)
    std::int64_t record_every = 1;
    std::size_t cells = 8;
    double perturbation_cell_fraction = 1.0 / 16.0;
    std::int64_t forward_perturb_step = 0;
    core::CoarseGraining graining() const;
  };
  struct Grw {
    std::size_t sites = 32;
    std::size_t particles = 16;
    grw::SiteRange region;
    grw::Mode mode = grw::Mode::Product;
    grw::LatticeHamiltonian hamiltonian;
    double dt = 0.5;
    std::int64_t steps = 0;
    grw::GrwParams params;
    double reversal_threshold = 0.5;
  };
  struct Sg {
    std::size_t trials = 10000;
    double tolerance = 0.02;
  };

  Billiard billiard() const;
  Grw grw() const;
  Sg sg() const;
  /// Path of the transition-system JSON for the classify scenario (may be empty).
  std::string classify_input() const;
};

/// Documented defaults for a scenario (versioned by "config_version").
nlohmann::json default_config(Scenario s);

/// Merges `overrides` over the scenario defaults. Throws ConfigError for
/// unknown keys, type mismatches, or a version/scenario mismatch.
ScenarioConfig make_config(Scenario s, const nlohmann::json& overrides = nlohmann::json::object());

ScenarioConfig load_config(Scenario s, const std::filesystem::path& file);

}  // namespace arrowlab::lab
