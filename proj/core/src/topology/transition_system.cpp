#include "arrowlab/topology/transition_system.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"

namespace arrowlab::topology {

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::I: return "I";
    case Topology::V: return "V";
    case Topology::Lambda: return "LAMBDA";
    case Topology::X: return "X";
  }
  return "?";
}

TransitionSystem::TransitionSystem(std::vector<std::string> states, std::vector<Edge> edges)
    : states_(std::move(states)), edges_(std::move(edges)) {
  std::set<std::string> labels;
  for (const auto& s : states_) {
    if (!labels.insert(s).second) throw ConfigError(fmt::format("duplicate state label '{}'", s));
  }
  std::vector<bool> touched(states_.size(), false);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges_) {
    if (e.from >= states_.size() || e.to >= states_.size()) {
      throw ConfigError(fmt::format("edge ({}, {}) refers to an unknown state", e.from, e.to));
    }
    if (!seen.insert({e.from, e.to}).second) {
      throw ConfigError(fmt::format("duplicate edge {} -> {}", states_[e.from], states_[e.to]));
    }
    if (e.probability && !(*e.probability >= 0.0 && *e.probability <= 1.0)) {
      throw ConfigError(fmt::format("edge {} -> {} has probability {}", states_[e.from], states_[e.to], *e.probability));
    }
    touched[e.from] = touched[e.to] = true;
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!touched[i]) throw ConfigError(fmt::format("state '{}' is on no edge", states_[i]));
  }
  for (std::size_t s = 0; s < states_.size(); ++s) {
    std::size_t with = 0;
    std::size_t without = 0;
    double sum = 0.0;
    for (const auto& e : edges_) {
      if (e.from != s) continue;
      if (e.probability) {
        ++with;
        sum += *e.probability;
      } else {
        ++without;
      }
    }
    if (with > 0 && without > 0) {
      throw ConfigError(fmt::format("state '{}' mixes edges with and without probabilities", states_[s]));
    }
    if (with > 0 && std::abs(sum - 1.0) > 1e-12) {
      throw ConfigError(fmt::format("outgoing probabilities of '{}' sum to {}", states_[s], sum));
    }
  }
}

TransitionSystem TransitionSystem::from_labels(const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::string> states;
  const auto id = [&](const std::string& label) {
    const auto it = std::find(states.begin(), states.end(), label);
    if (it != states.end()) return static_cast<std::size_t>(it - states.begin());
    states.push_back(label);
    return states.size() - 1;
  };
  std::vector<Edge> out;
  for (const auto& [from, to] : edges) {
    const auto f = id(from);
    const auto t = id(to);
    out.push_back({f, t, std::nullopt});
  }
  return TransitionSystem(std::move(states), std::move(out));
}

std::size_t TransitionSystem::index_of(std::string_view label) const {
  const auto it = std::find(states_.begin(), states_.end(), label);
  if (it == states_.end()) throw DomainError(fmt::format("unknown state '{}'", label));
  return static_cast<std::size_t>(it - states_.begin());
}

std::vector<std::size_t> TransitionSystem::out_degrees() const {
  std::vector<std::size_t> d(states_.size(), 0);
  for (const auto& e : edges_) ++d[e.from];
  return d;
}

std::vector<std::size_t> TransitionSystem::in_degrees() const {
  std::vector<std::size_t> d(states_.size(), 0);
  for (const auto& e : edges_) ++d[e.to];
  return d;
}

Topology classify(const TransitionSystem& ts) {
  if (ts.states().empty()) throw DomainError("cannot classify an empty transition system");
  const auto outs = ts.out_degrees();
  const auto ins = ts.in_degrees();
  const bool forward = std::any_of(outs.begin(), outs.end(), [](std::size_t d) { return d >= 2; });
  const bool backward = std::any_of(ins.begin(), ins.end(), [](std::size_t d) { return d >= 2; });
  if (forward && backward) return Topology::X;
  if (forward) return Topology::V;
  if (backward) return Topology::Lambda;
  return Topology::I;
}

TransitionSystem reverse(const TransitionSystem& ts) {
  std::vector<Edge> edges;
  edges.reserve(ts.edges().size());
  for (const auto& e : ts.edges()) edges.push_back({e.to, e.from, std::nullopt});
  return TransitionSystem(ts.states(), std::move(edges));
}

BranchingReport branching_report(const TransitionSystem& ts) {
  BranchingReport r;
  for (auto d : ts.out_degrees()) {
    r.max_out = std::max(r.max_out, d);
    r.causes += d > 0 ? 1 : 0;
  }
  for (auto d : ts.in_degrees()) {
    r.max_in = std::max(r.max_in, d);
    r.effects += d > 0 ? 1 : 0;
  }
  return r;
}

TransitionSystem transition_system_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("transition system JSON must be an object");
    for (const auto& [key, value] : j.items()) {
      if (key != "states" && key != "edges") throw ConfigError(fmt::format("unknown field '{}'", key));
    }
    const auto states = j.at("states").get<std::vector<std::string>>();
    std::vector<Edge> edges;
    for (const auto& row : j.at("edges")) {
      if (!row.is_array() || row.size() < 2 || row.size() > 3) {
        throw ConfigError(fmt::format("edge must be [from, to] or [from, to, prob], got {}", row.dump()));
      }
      const auto lookup = [&](const nlohmann::json& label) {
        const auto name = label.get<std::string>();
        const auto it = std::find(states.begin(), states.end(), name);
        if (it == states.end()) throw ConfigError(fmt::format("edge names unknown state '{}'", name));
        return static_cast<std::size_t>(it - states.begin());
      };
      Edge e{lookup(row[0]), lookup(row[1]), std::nullopt};
      if (row.size() == 3 && !row[2].is_null()) e.probability = row[2].get<double>();
      edges.push_back(e);
    }
    return TransitionSystem(states, std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed transition system: {}", e.what()));
  }
}

nlohmann::json to_json(const TransitionSystem& ts) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : ts.edges()) {
    nlohmann::json row = {ts.states()[e.from], ts.states()[e.to]};
    if (e.probability) row.push_back(*e.probability);
    edges.push_back(row);
  }
  return {{"states", ts.states()}, {"edges", edges}};
}

}  // namespace arrowlab::topology
