#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace arrowlab::topology {

/// Shapes of a dynamics' cause/effect structure: deterministic both ways
/// (I), branching forward (V), branching backward (Lambda), both (X).
enum class Topology { I, V, Lambda, X };

/// "I", "V", "LAMBDA" or "X".
std::string_view to_string(Topology t);

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::optional<double> probability;
};

/// Finite forward transition relation over labeled states.
class TransitionSystem {
 public:
  /// Validates: unique labels, edge endpoints in range, every state on at
  /// least one edge, and outgoing probabilities (when any are given for a
  /// state, all of that state's edges need one) summing to 1 +- 1e-12.
  /// Duplicate (from, to) pairs are rejected.
  TransitionSystem(std::vector<std::string> states, std::vector<Edge> edges);

  /// Convenience: edges given by label.
  static TransitionSystem from_labels(const std::vector<std::pair<std::string, std::string>>& edges);

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t index_of(std::string_view label) const;

  std::vector<std::size_t> out_degrees() const;
  std::vector<std::size_t> in_degrees() const;

 private:
  std::vector<std::string> states_;
  std::vector<Edge> edges_;
};

/// Forward branching: some state has >= 2 successors. Backward branching:
/// some state has >= 2 predecessors. Throws DomainError for an empty system.
Topology classify(const TransitionSystem& ts);

/// Transposes every edge; probabilities are dropped because retrodiction
/// weights are not determined by the forward kernel.
TransitionSystem reverse(const TransitionSystem& ts);

/// Largest out-degree and in-degree, for diagnostics.
struct BranchingReport {
  std::size_t max_out = 0;
  std::size_t max_in = 0;
  std::size_t causes = 0;   // states with an outgoing edge
  std::size_t effects = 0;  // states with an incoming edge
};
BranchingReport branching_report(const TransitionSystem& ts);

/// `{states: [...], edges: [[from, to, prob?], ...]}`; throws ConfigError.
TransitionSystem transition_system_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TransitionSystem& ts);

}  // namespace arrowlab::topology
