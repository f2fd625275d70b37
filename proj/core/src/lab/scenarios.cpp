#include "arrowlab/lab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"
#include "arrowlab/core/rng.hpp"
#include "arrowlab/lab/svg.hpp"
#include "arrowlab/topology/stern_gerlach.hpp"
#include "arrowlab/topology/transition_system.hpp"

namespace arrowlab::lab {
namespace {

using billiard::DiscState;
using billiard::Trajectory;
using core::FixedPoint;
using nlohmann::json;

// Collects output files relative to the run directory.
class OutputSink {
 public:
  OutputSink(const RunOptions& opts) : opts_(opts) {
    if (opts_.write_outputs) std::filesystem::create_directories(opts_.out_dir);
  }

  void write(const std::string& name, const std::string& bytes) {
    if (!opts_.write_outputs) return;
    std::ofstream out(opts_.out_dir / name, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write {}", (opts_.out_dir / name).string()));
    out << bytes;
    names_.push_back(name);
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  const RunOptions& opts_;
  std::vector<std::string> names_;
};

void add_assertion(ScenarioResult& r, std::string name, bool ok, std::string detail) {
  r.report.push_back(fmt::format("{} = {} ({})", name, ok ? "true" : "false", detail));
  r.assertions.push_back({std::move(name), ok, std::move(detail)});
}

std::string entropy_csv(const Trajectory& t) {
  std::string s = "step,entropy\n";
  for (const auto& e : t.entropy_series) s += fmt::format("{},{}\n", e.step, e.entropy);
  return s;
}

std::string histogram_csv(const DiscState& st, const core::CoarseGraining& g) {
  const auto pts = st.positions_as_points();
  std::ostringstream out;
  core::coarse_grain(pts, g).write_csv(out);
  return out.str();
}

std::vector<std::pair<double, double>> entropy_points(const Trajectory& t) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : t.entropy_series) pts.emplace_back(static_cast<double>(e.step), e.entropy);
  return pts;
}

json summary_json(const ScenarioResult& r) {
  json assertions = json::array();
  for (const auto& a : r.assertions) assertions.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  return {{"scenario", std::string(to_string(r.scenario))},
          {"seed", r.seed},
          {"metrics", r.metrics},
          {"labels", r.labels},
          {"assertions", assertions},
          {"passed", r.passed()}};
}

void run_billiard_scenario(const ScenarioConfig& cfg, ScenarioResult& r, OutputSink& out) {
  const auto b = cfg.billiard();
  const auto g = b.graining();
  const auto run = run_billiard(cfg.scenario, b, cfg.seed);
  const auto& traj = run.trajectory;
  const double initial_entropy = traj.entropy_series.front().entropy;
  const double final_entropy = traj.entropy_series.back().entropy;
  r.metrics["initial_entropy"] = initial_entropy;
  r.metrics["final_entropy"] = final_entropy;
  r.metrics["ln_cell_count"] = std::log(static_cast<double>(g.cell_count()));
  r.metrics["energy_initial"] = billiard::total_energy(run.initial, b.law, b.layout.dt);
  r.metrics["energy_final"] = billiard::total_energy(run.final_state, b.law, b.layout.dt);

  const std::int64_t tail = b.steps - b.steps / 10;
  const bool reversal = cfg.scenario == Scenario::Fig3b || cfg.scenario == Scenario::Fig4b;
  if (reversal) {
    const double forward_eq = window_mean_entropy(traj, tail, b.steps);
    r.metrics["forward_equilibrium_entropy"] = forward_eq;
    r.metrics["reversal_entropy"] = window_mean_entropy(traj, b.steps, b.steps);
    r.metrics["backward_tail_entropy"] = window_mean_entropy(traj, b.steps + tail, 2 * b.steps);
    r.metrics["recovered"] = run.recovered ? 1.0 : 0.0;
  } else {
    r.metrics["equilibrium_entropy"] = window_mean_entropy(traj, tail, b.steps);
    r.metrics["entropy_slope"] = entropy_slope(traj);
  }
  if (run.perturbation) {
    r.metrics["perturbed_ball"] = static_cast<double>(run.perturbation->ball);
    r.labels["perturbation"] = fmt::format("ball {} by ({}, {})", run.perturbation->ball,
                                           run.perturbation->displacement.x.to_string(),
                                           run.perturbation->displacement.y.to_string());
  }

  switch (cfg.scenario) {
    case Scenario::Fig3a:
    case Scenario::Fig4a:
      add_assertion(r, "entropy_increased", r.metrics["equilibrium_entropy"] > initial_entropy,
                    fmt::format("S(0) = {:.4f}, tail mean = {:.4f}", initial_entropy, r.metrics["equilibrium_entropy"]));
      break;
    case Scenario::Fig3b:
      add_assertion(r, "recovered", run.recovered,
                    "positions bitwise equal to t=0 with exactly negated velocities after the backward leg");
      break;
    case Scenario::Fig4b:
      add_assertion(r, "not_recovered", !run.recovered,
                    fmt::format("final entropy {:.4f}, forward equilibrium {:.4f}", final_entropy,
                                r.metrics["forward_equilibrium_entropy"]));
      r.report.back() = fmt::format("recovered = {} ({})", run.recovered ? "true" : "false", r.assertions.back().detail);
      break;
    default:
      break;
  }

  std::ostringstream csv;
  billiard::write_spacetime_csv(csv, billiard::spacetime_export(traj));
  out.write("trajectory.csv", csv.str());
  out.write("entropy.csv", entropy_csv(traj));
  out.write("histogram_initial.csv", histogram_csv(run.initial, g));
  out.write("histogram_final.csv", histogram_csv(run.final_state, g));
  const std::string name(to_string(cfg.scenario));
  out.write("spacetime.svg", emit_spacetime_svg(traj, {name + " spacetime diagram", "x", "step"}));
  out.write("entropy.svg", emit_series_svg(entropy_points(traj), {name + " coarse-grained entropy", "step", "S (nats)"}));
}

void run_grw_scenario(const ScenarioConfig& cfg, ScenarioResult& r, OutputSink& out) {
  const auto g = cfg.grw();
  const auto psi0 = grw_initial_state(g);
  auto rng = core::rng_stream(cfg.seed, streams::kGrw);
  const auto traj = grw::run(psi0, g.hamiltonian, g.params, g.steps, g.dt, rng);
  const auto& recs = traj.records;
  const double n = static_cast<double>(g.particles);

  r.metrics["initial_entropy"] = recs.front().entropy;
  r.metrics["final_entropy"] = tail_mean(recs, g.steps, &grw::GrwRecord::entropy);
  r.metrics["initial_gas_entropy_per_particle"] = recs.front().gas_entropy / n;
  r.metrics["final_gas_entropy_per_particle"] = tail_mean(recs, g.steps, &grw::GrwRecord::gas_entropy) / n;
  r.metrics["ln_sites"] = std::log(static_cast<double>(g.sites));
  r.metrics["energy_initial"] = recs.front().energy;
  r.metrics["energy_final"] = recs.back().energy;
  r.metrics["hits"] = static_cast<double>(traj.hits.size());
  double worst_norm = 0.0;
  for (const auto& rec : recs) worst_norm = std::max(worst_norm, std::abs(rec.norm - 1.0));
  r.metrics["max_norm_error"] = worst_norm;

  if (cfg.scenario == Scenario::GrwGas) {
    add_assertion(r, "gas_spread", r.metrics["final_gas_entropy_per_particle"] > r.metrics["initial_gas_entropy_per_particle"],
                  fmt::format("gas entropy per particle {:.4f} -> {:.4f} (ln M = {:.4f})",
                              r.metrics["initial_gas_entropy_per_particle"], r.metrics["final_gas_entropy_per_particle"],
                              r.metrics["ln_sites"]));
  } else {
    const auto back = grw::reverse_run(traj.final_state, g.hamiltonian, g.dt, g.steps, traj.hits, g.params.gaussian_width);
    const double f = grw::fidelity(back, psi0);
    r.metrics["fidelity"] = f;
    r.metrics["reversal_threshold"] = g.reversal_threshold;
    r.report.push_back(fmt::format("reversal fidelity = {:.6g} after {} hits", f, traj.hits.size()));
    // A single seed may see few hits; the pinned criterion is on the ensemble median.
    add_assertion(r, "irreversible", f < 1.0 - 1e-3 || traj.hits.empty(),
                  fmt::format("fidelity {:.6g} (ensemble median threshold {})", f, g.reversal_threshold));
  }

  std::ostringstream csv;
  grw::write_trajectory_csv(csv, traj);
  out.write("grw_trajectory.csv", csv.str());
  std::ostringstream hits;
  grw::write_hit_log_csv(hits, traj.hits);
  out.write("hits.csv", hits.str());
  std::vector<std::pair<double, double>> pts;
  for (const auto& rec : recs) pts.emplace_back(static_cast<double>(rec.step), rec.entropy);
  out.write("entropy.svg", emit_series_svg(pts, {std::string(to_string(cfg.scenario)) + " marginal entropy", "step",
                                                 "sum_k S_k (nats)"}));
}

void run_sg_scenario(const ScenarioConfig& cfg, ScenarioResult& r, OutputSink& out) {
  const auto sg = cfg.sg();
  auto rng = core::rng_stream(cfg.seed, streams::kSternGerlach);
  const auto stats = topology::sg_experiment(sg.trials, rng);
  const double trials = static_cast<double>(sg.trials);
  r.metrics["freq_a_from_s"] = static_cast<double>(stats.detector_a_from_s) / trials;
  r.metrics["freq_a_from_p"] = static_cast<double>(stats.detector_a_from_p) / trials;
  r.metrics["freq_return_to_s"] = static_cast<double>(stats.returns_to_s) / trials;
  r.metrics["freq_reversed_a_to_s"] =
      stats.reversed_a == 0 ? 0.0 : static_cast<double>(stats.reversed_a_to_s) / static_cast<double>(stats.reversed_a);

  // Eigenstate control: |x+> analyzed along x never changes.
  std::size_t stays = 0;
  for (std::size_t i = 0; i < sg.trials; ++i) {
    stays += topology::measure(topology::basis_states(topology::Basis::X)[0], topology::Basis::X, rng).outcome == 0;
  }
  r.metrics["eigenstate_control"] = static_cast<double>(stays) / trials;

  const auto topo = topology::classify(stats.aggregate);
  r.labels["topology"] = std::string(topology::to_string(topo));
  const auto within = [&](const char* key) { return std::abs(r.metrics[key] - 0.5) <= sg.tolerance; };
  for (const char* key : {"freq_a_from_s", "freq_a_from_p", "freq_return_to_s", "freq_reversed_a_to_s"}) {
    add_assertion(r, key, within(key), fmt::format("{:.4f} vs 0.5 +- {}", r.metrics[key], sg.tolerance));
  }
  add_assertion(r, "eigenstate_control", r.metrics["eigenstate_control"] == 1.0, "x+ measured along x");
  add_assertion(r, "x_topology", topo == topology::Topology::X, fmt::format("aggregate classifies as {}", r.labels["topology"]));
  out.write("sg_aggregate.json", topology::to_json(stats.aggregate).dump(2) + "\n");
}

topology::TransitionSystem sg_reference_system() {
  return topology::TransitionSystem::from_labels({{"S", "A"}, {"S", "B"}, {"P", "A"}, {"P", "B"}});
}

void run_classify_scenario(const ScenarioConfig& cfg, ScenarioResult& r, OutputSink& out) {
  const auto input = cfg.classify_input();
  topology::TransitionSystem ts = sg_reference_system();
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw ConfigError(fmt::format("cannot open transition system {}", input));
    try {
      ts = topology::transition_system_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
      throw ConfigError(fmt::format("{} is not valid JSON: {}", input, e.what()));
    }
  }
  const auto topo = topology::classify(ts);
  const auto rep = topology::branching_report(ts);
  r.labels["topology"] = std::string(topology::to_string(topo));
  r.metrics["max_out_degree"] = static_cast<double>(rep.max_out);
  r.metrics["max_in_degree"] = static_cast<double>(rep.max_in);
  r.report.push_back(r.labels["topology"]);
  json doc = {{"topology", r.labels["topology"]},
              {"max_out_degree", rep.max_out},
              {"max_in_degree", rep.max_in},
              {"causes", rep.causes},
              {"effects", rep.effects},
              {"system", topology::to_json(ts)}};
  out.write("classification.json", doc.dump(2) + "\n");
}

}  // namespace

bool ScenarioResult::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

Perturbation draw_perturbation(std::uint64_t seed, std::size_t n_balls, double cell_width, double fraction) {
  auto rng = core::rng_stream(seed, streams::kPerturbation);
  Perturbation p;
  p.ball = static_cast<std::size_t>(rng.below(n_balls));
  const double angle = 2.0 * std::numbers::pi * rng.uniform();
  const double mag = cell_width * fraction;
  p.displacement = {FixedPoint::from_double(mag * std::cos(angle)), FixedPoint::from_double(mag * std::sin(angle))};
  return p;
}

BilliardRun run_billiard(Scenario kind, const ScenarioConfig::Billiard& b, std::uint64_t seed) {
  auto layout = b.layout;
  layout.rng_seed = seed;
  const auto g = b.graining();
  const auto dt = layout.dt;
  BilliardRun out;
  out.initial = billiard::init_ordered(layout);
  const auto perturbation = [&] {
    return draw_perturbation(seed, out.initial.size(), g.cell_size(), b.perturbation_cell_fraction);
  };

  switch (kind) {
    case Scenario::Fig3a: {
      auto [s, t] = billiard::advance(out.initial, b.steps, b.law, dt, b.record_every, g);
      out.final_state = std::move(s);
      out.trajectory = std::move(t);
      break;
    }
    case Scenario::Fig4a: {
      auto [mid, first] = billiard::advance(out.initial, b.forward_perturb_step, b.law, dt, b.record_every, g);
      out.perturbation = perturbation();
      mid = billiard::perturb(mid, out.perturbation->ball, out.perturbation->displacement);
      auto [s, second] = billiard::advance(mid, b.steps - b.forward_perturb_step, b.law, dt, b.record_every, g);
      first.append(second);
      out.final_state = std::move(s);
      out.trajectory = std::move(first);
      break;
    }
    case Scenario::Fig3b:
    case Scenario::Fig4b: {
      auto [turn, forward] = billiard::advance(out.initial, b.steps, b.law, dt, b.record_every, g);
      out.reversal_step = turn.step_index;
      auto reversed = billiard::reverse_momenta(turn, b.law, dt);
      if (kind == Scenario::Fig4b) {
        out.perturbation = perturbation();
        reversed = billiard::perturb(reversed, out.perturbation->ball, out.perturbation->displacement);
      }
      auto [s, backward] = billiard::advance(reversed, b.steps, b.law, dt, b.record_every, g);
      forward.append(backward);
      out.final_state = std::move(s);
      out.trajectory = std::move(forward);
      out.recovered = billiard::recovered(out.final_state, out.initial, b.law, dt);
      break;
    }
    default:
      throw DomainError(fmt::format("{} is not a billiard scenario", to_string(kind)));
  }
  return out;
}

double window_mean_entropy(const Trajectory& t, std::int64_t from_step, std::int64_t to_step) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& e : t.entropy_series) {
    if (e.step < from_step || e.step > to_step) continue;
    sum += e.entropy;
    ++n;
  }
  if (n == 0) throw DomainError(fmt::format("no entropy samples in steps [{}, {}]", from_step, to_step));
  return sum / static_cast<double>(n);
}

double entropy_slope(const Trajectory& t) {
  const auto& es = t.entropy_series;
  if (es.size() < 2) return 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (const auto& e : es) {
    mx += static_cast<double>(e.step);
    my += e.entropy;
  }
  mx /= static_cast<double>(es.size());
  my /= static_cast<double>(es.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& e : es) {
    const double dx = static_cast<double>(e.step) - mx;
    sxy += dx * (e.entropy - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

grw::WaveFunction grw_initial_state(const ScenarioConfig::Grw& g) {
  return grw::init_gas(g.particles, g.sites, g.region, g.mode);
}

double tail_mean(const std::vector<grw::GrwRecord>& records, std::int64_t steps, double grw::GrwRecord::*field) {
  const std::int64_t from = steps - steps / 10;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& rec : records) {
    if (rec.step < from) continue;
    sum += rec.*field;
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  ScenarioResult r;
  r.scenario = cfg.scenario;
  r.seed = cfg.seed;
  OutputSink out(opts);
  try {
    switch (cfg.scenario) {
      case Scenario::Fig3a:
      case Scenario::Fig3b:
      case Scenario::Fig4a:
      case Scenario::Fig4b:
        run_billiard_scenario(cfg, r, out);
        break;
      case Scenario::GrwGas:
      case Scenario::GrwReversal:
        run_grw_scenario(cfg, r, out);
        break;
      case Scenario::SgXTopology:
        run_sg_scenario(cfg, r, out);
        break;
      case Scenario::Classify:
        run_classify_scenario(cfg, r, out);
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw Error(fmt::format("scenario {} (seed {}): {}", to_string(cfg.scenario), cfg.seed, e.what()));
  }

  out.write("config.json", cfg.params.dump(2) + "\n");
  out.write("summary.json", summary_json(r).dump(2) + "\n");
  if (opts.write_outputs) {
    core::RunManifest m{cfg.seed, std::string(to_string(cfg.scenario)), core::config_digest(cfg.params), out.names(),
                        opts.timestamp};
    core::write_manifest(m, opts.out_dir / "manifest.json");
    r.manifest = std::move(m);
  }
  return r;
}

}  // namespace arrowlab::lab
