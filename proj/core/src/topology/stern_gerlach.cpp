#include "arrowlab/topology/stern_gerlach.hpp"

#include <cmath>

namespace arrowlab::topology {

double SpinState::norm() const { return std::sqrt(std::norm(up) + std::norm(down)); }

std::array<SpinState, 2> basis_states(Basis b) {
  if (b == Basis::Z) return {SpinState{1.0, 0.0}, SpinState{0.0, 1.0}};
  const double h = 1.0 / std::sqrt(2.0);
  return {SpinState{h, h}, SpinState{h, -h}};
}

Measurement measure(const SpinState& psi, Basis basis, core::RngStream& rng) {
  const auto e = basis_states(basis);
  const auto amp = [&](const SpinState& v) { return std::conj(v.up) * psi.up + std::conj(v.down) * psi.down; };
  const double p[2] = {std::norm(amp(e[0])), std::norm(amp(e[1]))};
  const int outcome = static_cast<int>(rng.categorical(p));
  return {outcome, e[static_cast<std::size_t>(outcome)]};
}

ForwardOutcome sg_forward(Source source, core::RngStream& rng) {
  const auto x = basis_states(Basis::X);
  const SpinState prepared = source == Source::S_xplus ? x[0] : x[1];
  const auto m = measure(prepared, Basis::Z, rng);
  return {source, m.outcome == 0 ? Detector::A_zplus : Detector::B_zminus, m.collapsed};
}

ReturnPath sg_reverse(const ForwardOutcome& outcome, core::RngStream& rng) {
  const auto m = measure(outcome.collapsed, Basis::X, rng);
  return m.outcome == 0 ? ReturnPath::returns_to_S_xplus : ReturnPath::deflects_to_P_xminus;
}

std::string_view to_string(Source s) { return s == Source::S_xplus ? "S" : "P"; }
std::string_view to_string(Detector d) { return d == Detector::A_zplus ? "A" : "B"; }

SgStatistics sg_experiment(std::size_t trials, core::RngStream& rng) {
  SgStatistics stats{trials, 0, 0, 0, 0, 0, TransitionSystem::from_labels({{"S", "A"}})};
  bool link[2][2] = {};  // [source][detector]
  for (const Source src : {Source::S_xplus, Source::P_xminus}) {
    for (std::size_t t = 0; t < trials; ++t) {
      const auto out = sg_forward(src, rng);
      const int s = src == Source::S_xplus ? 0 : 1;
      const int d = out.detector == Detector::A_zplus ? 0 : 1;
      link[s][d] = true;
      if (d == 0) (s == 0 ? stats.detector_a_from_s : stats.detector_a_from_p) += 1;

      const auto back = sg_reverse(out, rng);
      const int arrived = back == ReturnPath::returns_to_S_xplus ? 0 : 1;
      link[arrived][d] = true;
      if (s == 0 && arrived == 0) ++stats.returns_to_s;
      if (d == 0) {
        ++stats.reversed_a;
        if (arrived == 0) ++stats.reversed_a_to_s;
      }
    }
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < 2; ++d) {
      if (link[s][d]) edges.emplace_back(s == 0 ? "S" : "P", d == 0 ? "A" : "B");
    }
  }
  stats.aggregate = TransitionSystem::from_labels(edges);
  return stats;
}

}  // namespace arrowlab::topology
