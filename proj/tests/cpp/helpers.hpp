#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "nlm/protocol.hpp"
#include "nlm/state.hpp"

// Independent closed-form constructions used as oracles. These expand the
// pipeline stages by hand from the coupling structure and never call the code
// paths they check.
namespace nlm::test {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

inline SystemAmplitudes random_system(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Complex a(normal(rng), normal(rng));
  const Complex b(normal(rng), normal(rng));
  const Complex c(normal(rng), normal(rng));
  const Complex d(normal(rng), normal(rng));
  const double n = std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  return SystemAmplitudes{a / n, b / n, c / n, d / n};
}

inline StateVector random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Amplitudes amps;
  double norm_squared = 0.0;
  for (auto& a : amps) {
    a = Complex(normal(rng), normal(rng));
    norm_squared += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm_squared);
  for (auto& a : amps) a *= scale;
  return StateVector::from_amplitudes(amps);
}

// Tensor expansion of psi_s (x) (|ud> + |du>)/sqrt2 (x) |b0> by direct index
// arithmetic.
inline StateVector expected_initial_state(const SystemAmplitudes& s) {
  const Complex coeff[2][2] = {{s.alpha, s.beta}, {s.gamma, s.eta}};
  Amplitudes amps{};
  for (int apol = 0; apol < 2; ++apol) {
    for (int bpol = 0; bpol < 2; ++bpol) {
      amps[basis_index(apol, 1, bpol, 0, 0)] += coeff[apol][bpol] * kInvSqrt2;
      amps[basis_index(apol, 0, bpol, 1, 0)] += coeff[apol][bpol] * kInvSqrt2;
    }
  }
  return StateVector::from_amplitudes(amps);
}

// State after Alice's polarization-path coupling: H terms keep the EPR pair
// (u_A d_B + d_A u_B), V terms carry the flipped pair (d_A d_B + u_A u_B).
inline StateVector expected_after_alice_cnot(const SystemAmplitudes& s) {
  Amplitudes amps{};
  amps[basis_index(0, 1, 0, 0, 0)] += s.alpha * kInvSqrt2;
  amps[basis_index(0, 0, 0, 1, 0)] += s.alpha * kInvSqrt2;
  amps[basis_index(0, 1, 1, 0, 0)] += s.beta * kInvSqrt2;
  amps[basis_index(0, 0, 1, 1, 0)] += s.beta * kInvSqrt2;
  amps[basis_index(1, 0, 0, 0, 0)] += s.gamma * kInvSqrt2;
  amps[basis_index(1, 1, 0, 1, 0)] += s.gamma * kInvSqrt2;
  amps[basis_index(1, 0, 1, 0, 0)] += s.eta * kInvSqrt2;
  amps[basis_index(1, 1, 1, 1, 0)] += s.eta * kInvSqrt2;
  return StateVector::from_amplitudes(amps);
}

// Normalized post-selected stage after Alice: APath = d kept, so H terms ride
// b_u and V terms ride b_d, ancilla still at b0.
inline StateVector expected_after_alice_stage(const SystemAmplitudes& s) {
  Amplitudes amps{};
  amps[basis_index(0, 0, 0, 1, 0)] = s.alpha;
  amps[basis_index(0, 0, 1, 1, 0)] = s.beta;
  amps[basis_index(1, 0, 0, 0, 0)] = s.gamma;
  amps[basis_index(1, 0, 1, 0, 0)] = s.eta;
  return StateVector::from_amplitudes(amps);
}

// After Bob's polarization C-NOT only: the ancilla copies BPol.
// HH -> (u, 0), HV -> (u, 1), VH -> (d, 0), VV -> (d, 1).
inline StateVector expected_after_bob_pol_cnot(const SystemAmplitudes& s) {
  Amplitudes amps{};
  amps[basis_index(0, 0, 0, 1, 0)] = s.alpha;
  amps[basis_index(0, 0, 1, 1, 1)] = s.beta;
  amps[basis_index(1, 0, 0, 0, 0)] = s.gamma;
  amps[basis_index(1, 0, 1, 0, 1)] = s.eta;
  return StateVector::from_amplitudes(amps);
}

// After Bob's two couplings the ancilla holds the parity record:
// HH -> (u, 1), HV -> (u, 0), VH -> (d, 0), VV -> (d, 1).
inline StateVector expected_after_bob(const SystemAmplitudes& s) {
  Amplitudes amps{};
  amps[basis_index(0, 0, 0, 1, 1)] = s.alpha;
  amps[basis_index(0, 0, 1, 1, 0)] = s.beta;
  amps[basis_index(1, 0, 0, 0, 0)] = s.gamma;
  amps[basis_index(1, 0, 1, 0, 1)] = s.eta;
  return StateVector::from_amplitudes(amps);
}

// After the eraser Hadamard, before its post-selection: the b_u branches pick
// up (b_d - b_u)/sqrt2, the b_d branches (b_d + b_u)/sqrt2.
inline StateVector expected_after_eraser_hadamard(const SystemAmplitudes& s) {
  Amplitudes amps{};
  amps[basis_index(0, 0, 0, 0, 1)] += s.alpha * kInvSqrt2;
  amps[basis_index(0, 0, 0, 1, 1)] -= s.alpha * kInvSqrt2;
  amps[basis_index(0, 0, 1, 0, 0)] += s.beta * kInvSqrt2;
  amps[basis_index(0, 0, 1, 1, 0)] -= s.beta * kInvSqrt2;
  amps[basis_index(1, 0, 0, 0, 0)] += s.gamma * kInvSqrt2;
  amps[basis_index(1, 0, 0, 1, 0)] += s.gamma * kInvSqrt2;
  amps[basis_index(1, 0, 1, 0, 1)] += s.eta * kInvSqrt2;
  amps[basis_index(1, 0, 1, 1, 1)] += s.eta * kInvSqrt2;
  return StateVector::from_amplitudes(amps);
}

// Closed-form final state: (alpha|HH>|1> + beta|HV>|0> + gamma|VH>|0> +
// eta|VV>|1>) (x) |a_d b_d>; orthogonal terms, so already normalized.
inline StateVector expected_final_state(const SystemAmplitudes& s) {
  Amplitudes amps{};
  amps[basis_index(0, 0, 0, 0, 1)] = s.alpha;
  amps[basis_index(0, 0, 1, 0, 0)] = s.beta;
  amps[basis_index(1, 0, 0, 0, 0)] = s.gamma;
  amps[basis_index(1, 0, 1, 0, 1)] = s.eta;
  return StateVector::from_amplitudes(amps);
}

inline double max_amplitude_difference(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) {
    worst = std::max(worst, std::abs(a.amplitude(i) - b.amplitude(i)));
  }
  return worst;
}

// Polarization kets in the {HH, HV, VH, VV} ordering.
inline Eigen::Vector4cd polarization_ket(const SystemAmplitudes& s) {
  return Eigen::Vector4cd(s.alpha, s.beta, s.gamma, s.eta);
}

}  // namespace nlm::test
