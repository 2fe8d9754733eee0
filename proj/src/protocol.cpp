#include "nlm/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlm/errors.hpp"

namespace nlm {

Branch branch_of(const StateVector& state, int aux_value) {
  const double probability = state.marginal(Register::BAux, aux_value);
  if (probability < kZeroProbability) {
    return Branch{DensityMatrix{}, 0.0};
  }
  const Projection projected = project(state, Register::BAux, aux_value);
  return Branch{partial_trace_to_polarization(projected.state), probability};
}

std::pair<StateVector, double> alice_stage(const StateVector& state) {
  const StateVector coupled = apply(state, cnot(Register::APol, kPolV, Register::APath));
  const Projection selected = project(coupled, Register::APath, kPathDown);
  return {selected.state, selected.probability};
}

StateVector bob_coupling(const StateVector& state) {
  const StateVector pol_coupled = apply(state, cnot(Register::BPol, kPolV, Register::BAux));
  return apply(pol_coupled, cnot(Register::BPath, kPathUp, Register::BAux));
}

std::pair<StateVector, double> erase(const StateVector& state) {
  const StateVector rotated = apply(state, hadamard(Register::BPath));
  const Projection selected = project(rotated, Register::BPath, kPathDown);
  return {selected.state, selected.probability};
}

ProtocolOutcome run_protocol(const SystemAmplitudes& sys) {
  sys.require_normalized();
  const StateVector initial = build_initial_state(sys);
  const auto [after_alice, p_a] = alice_stage(initial);
  const StateVector coupled = bob_coupling(after_alice);
  const auto [final_state, p_b] = erase(coupled);

  ProtocolOutcome outcome;
  outcome.success_probability = p_a * p_b;
  outcome.final_state = final_state;
  outcome.even = branch_of(final_state, kAuxRight);
  outcome.odd = branch_of(final_state, kAuxLeft);
  return outcome;
}

ParityDistribution parity_readout(const ProtocolOutcome& outcome) {
  return ParityDistribution{outcome.even.probability, outcome.odd.probability};
}

std::string_view bell_label_name(BellLabel label) {
  switch (label) {
    case BellLabel::PsiPlus:
      return "psi_plus";
    case BellLabel::PsiMinus:
      return "psi_minus";
    case BellLabel::PhiPlus:
      return "phi_plus";
    case BellLabel::PhiMinus:
      return "phi_minus";
  }
  return "";
}

SystemAmplitudes bell_state(BellLabel label) {
  const double s = 1.0 / std::numbers::sqrt2;
  switch (label) {
    case BellLabel::PsiPlus:
      return SystemAmplitudes{s, 0.0, 0.0, s};
    case BellLabel::PsiMinus:
      return SystemAmplitudes{s, 0.0, 0.0, -s};
    case BellLabel::PhiPlus:
      return SystemAmplitudes{0.0, s, s, 0.0};
    case BellLabel::PhiMinus:
      return SystemAmplitudes{0.0, s, -s, 0.0};
  }
  return SystemAmplitudes{};
}

double sigma_xx_plus_probability(const DensityMatrix& rho) {
  // sigma_x (x) sigma_x swaps HH<->VV and HV<->VH, so its expectation is
  // 2 Re rho(HH,VV) + 2 Re rho(HV,VH).
  const Eigen::Matrix4cd& m = rho.matrix();
  const double expectation = 2.0 * m(0, 3).real() + 2.0 * m(1, 2).real();
  return std::clamp(0.5 * (rho.trace_real() + expectation), 0.0, 1.0);
}

BellDistribution bell_distribution_of(const Branch& even, const Branch& odd) {
  BellDistribution dist{};
  const double even_plus = even.probability > 0.0 ? sigma_xx_plus_probability(even.rho) : 0.0;
  const double odd_plus = odd.probability > 0.0 ? sigma_xx_plus_probability(odd.rho) : 0.0;
  dist[static_cast<int>(BellLabel::PsiPlus)] = even.probability * even_plus;
  dist[static_cast<int>(BellLabel::PsiMinus)] = even.probability * (1.0 - even_plus);
  dist[static_cast<int>(BellLabel::PhiPlus)] = odd.probability * odd_plus;
  dist[static_cast<int>(BellLabel::PhiMinus)] = odd.probability * (1.0 - odd_plus);
  return dist;
}

BellDistribution bell_distribution(const ProtocolOutcome& outcome) {
  return bell_distribution_of(outcome.even, outcome.odd);
}

BellDistribution bell_measure(const SystemAmplitudes& sys) {
  return bell_distribution(run_protocol(sys));
}

double SnapshotDistribution::sum() const {
  double total = 0.0;
  for (const auto& by_path : p) {
    for (const auto& by_basis : by_path) {
      for (double v : by_basis) {
        total += v;
      }
    }
  }
  return total;
}

SnapshotDistribution snapshot_distribution(const StateVector& state) {
  state.require_normalized();
  SnapshotDistribution dist;
  for (std::size_t i = 0; i < kDim; ++i) {
    const double mass = std::norm(state.amplitude(i));
    if (mass == 0.0) continue;
    const int aux = bit_of(i, Register::BAux);
    const int path = bit_of(i, Register::BPath);
    const int basis = bit_of(i, Register::APol) * 2 + bit_of(i, Register::BPol);
    dist.at(aux, path, basis) += mass;
  }
  return dist;
}

SnapshotDistribution pre_erasure_snapshot(const SystemAmplitudes& sys) {
  sys.require_normalized();
  const StateVector initial = build_initial_state(sys);
  const auto [after_alice, p_a] = alice_stage(initial);
  (void)p_a;
  return snapshot_distribution(bob_coupling(after_alice));
}

}  // namespace nlm
