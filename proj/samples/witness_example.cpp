// Witness report for the sigma_z / sigma_x / sigma_y triple, then the same
// triple pushed toward compatibility by white noise.

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qrac/qrac.hpp"

int main() {
  const auto sc = qrac::Scenario::uniform(3, 2, 2);
  for (double eta : {1.0, 0.9, 0.8, 1.0 / std::sqrt(3.0)}) {
    std::vector<std::vector<qrac::Matrix>> effects;
    for (const auto& axis : {std::array{0.0, 0.0, 1.0}, std::array{1.0, 0.0, 0.0}, std::array{0.0, 1.0, 0.0}})
      effects.push_back({qrac::pauli::bloch_projector(eta * axis[0], eta * axis[1], eta * axis[2]),
                         qrac::pauli::bloch_projector(eta * axis[0], eta * axis[1], eta * axis[2], -1)});
    const auto ms = qrac::MeasurementSet::from_matrices(effects);
    const auto report = qrac::assemble_witness_report(ms, sc);
    const auto verdict = qrac::feasibility_check(ms);
    std::printf("eta=%.4f  S=%.6f  S_c=%s  %-12s  solver=%s\n", eta, report.s_quantum,
                qrac::to_string(report.s_classical.value).c_str(), std::string(to_string(report.verdict)).c_str(),
                std::string(to_string(verdict.status)).c_str());
  }
}
