#include "arrowlab/lab/config.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"

namespace arrowlab::lab {
namespace {

using nlohmann::json;
using core::FixedPoint;

constexpr std::pair<Scenario, std::string_view> kNames[] = {
    {Scenario::Fig3a, "fig3a"},
    {Scenario::Fig3b, "fig3b"},
    {Scenario::Fig4a, "fig4a"},
    {Scenario::Fig4b, "fig4b"},
    {Scenario::GrwGas, "grw-gas"},
    {Scenario::GrwReversal, "grw-reversal"},
    {Scenario::SgXTopology, "sg-xtopology"},
    {Scenario::Classify, "classify"},
};

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

void merge_checked(json& target, const json& patch, const std::string& path) {
  if (!patch.is_object()) throw ConfigError(fmt::format("'{}' must be an object", path.empty() ? "<root>" : path));
  for (const auto& [key, value] : patch.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!target.contains(key)) throw ConfigError(fmt::format("unknown config field '{}'", where));
    json& slot = target[key];
    if (slot.is_object()) {
      merge_checked(slot, value, where);
    } else {
      if (!same_kind(slot, value)) {
        throw ConfigError(fmt::format("config field '{}' expects {}, got {}", where, slot.type_name(), value.type_name()));
      }
      slot = value;
    }
  }
}

template <typename T>
T get(const json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config field '{}.{}': {}", section, key, e.what()));
  }
}

std::int64_t positive_int(const json& j, const char* section, const char* key) {
  const auto v = get<double>(j, section, key);
  if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(fmt::format("'{}.{}' must be a positive integer", section, key));
  return static_cast<std::int64_t>(v);
}

double positive(const json& j, const char* section, const char* key) {
  const auto v = get<double>(j, section, key);
  if (!(v > 0.0)) throw ConfigError(fmt::format("'{}.{}' must be positive", section, key));
  return v;
}

FixedPoint fixed(const json& j, const char* section, const char* key) {
  return FixedPoint::from_double(get<double>(j, section, key));
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& [k, name] : kNames) {
    if (k == s) return name;
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ConfigError(fmt::format("unknown scenario '{}' (expected fig3a, fig3b, fig4a, fig4b, grw-gas, grw-reversal, "
                                "sg-xtopology or classify)",
                                name));
}

json default_config(Scenario s) {
  json billiard = {
      {"box", 56.0},
      {"radius", 1.0},
      {"n_cluster", 15},
      {"striker_speed", 2.0},
      {"striker_x", 8.0},
      {"striker_jitter", 1.0},
      {"cluster_origin", {{"x", 35.5}, {"y", 28.5}}},
      {"dt", 0.015625},
      {"time_units", 350},
      {"record_every", 64},
      {"pair_stiffness", 64.0},
      {"wall_stiffness", 1024.0},
      {"cells", 8},
      {"perturbation_cell_fraction", 0.0625},
      {"forward_perturb_time", 175},
  };
  json grw = {
      {"sites", 32},
      {"particles", 16},
      {"region", {{"first", 0}, {"last", 15}}},
      {"mode", "product"},
      {"hopping", 1.0},
      {"boundary", "open"},
      {"interaction", 0.0},
      {"dt", 0.5},
      {"steps", 6000},
      {"hit_prob", 0.01},
      {"gaussian_width", 3.0},
      {"reversal_threshold", 0.5},
  };
  if (s == Scenario::GrwReversal) {
    grw["particles"] = 4;
    grw["hit_prob"] = 0.05;
    grw["steps"] = 200;
  }
  return json{
      {"config_version", kConfigVersion},
      {"scenario", std::string(to_string(s))},
      {"seed", 1},
      {"output_dir", ""},
      {"billiard", billiard},
      {"grw", grw},
      {"sg", {{"trials", 10000}, {"tolerance", 0.02}}},
      {"classify", {{"input", ""}}},
  };
}

ScenarioConfig make_config(Scenario s, const json& overrides) {
  json doc = default_config(s);
  merge_checked(doc, overrides, "");
  if (doc.at("config_version").get<double>() != kConfigVersion) {
    throw ConfigError(fmt::format("unsupported config_version {} (expected {})", doc.at("config_version").dump(),
                                  kConfigVersion));
  }
  if (doc.at("scenario").get<std::string>() != to_string(s)) {
    throw ConfigError(fmt::format("config is for scenario '{}', not '{}'", doc.at("scenario").get<std::string>(),
                                  to_string(s)));
  }
  const json& seed = doc.at("seed");
  if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
    throw ConfigError("'seed' must be a nonnegative integer");
  }
  ScenarioConfig cfg;
  cfg.scenario = s;
  cfg.seed = seed.get<std::uint64_t>();
  cfg.output_dir = doc.at("output_dir").get<std::string>();
  cfg.params = std::move(doc);
  // Surface section errors now rather than mid-run.
  (void)cfg.billiard();
  (void)cfg.grw();
  (void)cfg.sg();
  return cfg;
}

ScenarioConfig load_config(Scenario s, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", file.string()));
  json overrides;
  try {
    overrides = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config file {} is not valid JSON: {}", file.string(), e.what()));
  }
  return make_config(s, overrides);
}

core::CoarseGraining ScenarioConfig::Billiard::graining() const {
  return core::CoarseGraining::uniform_grid(layout.box.width.to_double(), layout.box.height.to_double(), cells, cells);
}

ScenarioConfig::Billiard ScenarioConfig::billiard() const {
  const json& j = params;
  Billiard b;
  const FixedPoint box = fixed(j, "billiard", "box");
  b.layout.box = {box, box};
  b.layout.radius = fixed(j, "billiard", "radius");
  b.layout.n_cluster = get<std::int64_t>(j, "billiard", "n_cluster");
  b.layout.striker_speed = fixed(j, "billiard", "striker_speed");
  b.layout.striker_x = fixed(j, "billiard", "striker_x");
  b.layout.striker_jitter = fixed(j, "billiard", "striker_jitter");
  const auto& origin = j.at("billiard").at("cluster_origin");
  b.layout.cluster_origin = {FixedPoint::from_double(origin.at("x").get<double>()),
                             FixedPoint::from_double(origin.at("y").get<double>())};
  b.layout.dt = fixed(j, "billiard", "dt");
  b.layout.rng_seed = seed;
  if (b.layout.dt <= FixedPoint{} || b.layout.radius <= FixedPoint{} || box <= FixedPoint{}) {
    throw ConfigError("billiard box, radius and dt must be positive");
  }
  const double steps = static_cast<double>(positive_int(j, "billiard", "time_units")) / b.layout.dt.to_double();
  if (steps != std::floor(steps)) throw ConfigError("billiard.time_units / billiard.dt must be an integer");
  b.steps = static_cast<std::int64_t>(steps);
  b.record_every = positive_int(j, "billiard", "record_every");
  b.cells = static_cast<std::size_t>(positive_int(j, "billiard", "cells"));
  b.law = billiard::ForceLaw::for_radius(b.layout.radius, fixed(j, "billiard", "pair_stiffness"),
                                         fixed(j, "billiard", "wall_stiffness"));
  b.perturbation_cell_fraction = positive(j, "billiard", "perturbation_cell_fraction");
  const double perturb_steps =
      static_cast<double>(positive_int(j, "billiard", "forward_perturb_time")) / b.layout.dt.to_double();
  b.forward_perturb_step = static_cast<std::int64_t>(perturb_steps);
  if (b.forward_perturb_step > b.steps) throw ConfigError("billiard.forward_perturb_time exceeds the run");
  return b;
}

ScenarioConfig::Grw ScenarioConfig::grw() const {
  const json& j = params;
  Grw g;
  g.sites = static_cast<std::size_t>(positive_int(j, "grw", "sites"));
  g.particles = static_cast<std::size_t>(positive_int(j, "grw", "particles"));
  const auto& region = j.at("grw").at("region");
  g.region = {region.at("first").get<std::size_t>(), region.at("last").get<std::size_t>()};
  const auto mode = get<std::string>(j, "grw", "mode");
  if (mode == "product") {
    g.mode = grw::Mode::Product;
  } else if (mode == "entangled") {
    g.mode = grw::Mode::Entangled;
  } else {
    throw ConfigError(fmt::format("grw.mode must be 'product' or 'entangled', got '{}'", mode));
  }
  const auto boundary = get<std::string>(j, "grw", "boundary");
  if (boundary != "open" && boundary != "periodic") {
    throw ConfigError(fmt::format("grw.boundary must be 'open' or 'periodic', got '{}'", boundary));
  }
  g.hamiltonian = grw::LatticeHamiltonian::free(g.sites, get<double>(j, "grw", "hopping"),
                                                boundary == "open" ? grw::Boundary::Open : grw::Boundary::Periodic);
  g.hamiltonian.interaction = get<double>(j, "grw", "interaction");
  if (g.hamiltonian.interaction != 0.0 && g.mode == grw::Mode::Product) {
    throw ConfigError("grw.interaction needs grw.mode = 'entangled'");
  }
  g.dt = positive(j, "grw", "dt");
  g.steps = get<std::int64_t>(j, "grw", "steps");
  if (g.steps < 0) throw ConfigError("grw.steps must be >= 0");
  g.params = {get<double>(j, "grw", "hit_prob"), get<double>(j, "grw", "gaussian_width")};
  try {
    g.params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("grw: {}", e.what()));
  }
  g.reversal_threshold = positive(j, "grw", "reversal_threshold");
  return g;
}

ScenarioConfig::Sg ScenarioConfig::sg() const {
  return {static_cast<std::size_t>(positive_int(params, "sg", "trials")), positive(params, "sg", "tolerance")};
}

std::string ScenarioConfig::classify_input() const { return get<std::string>(params, "classify", "input"); }

}  // namespace arrowlab::lab
