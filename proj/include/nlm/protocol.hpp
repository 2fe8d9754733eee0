#pragma once

#include <array>
#include <string_view>
#include <utility>

#include "nlm/state.hpp"

namespace nlm {

struct Branch {
  DensityMatrix rho;         // zero matrix when probability is 0
  double probability = 0.0;  // conditioned on protocol success
};

/// Result of the full pipeline, conditioned on both post-selections passing.
/// The even branch lives on BAux = 1 (span{HH, VV}), the odd branch on
/// BAux = 0 (span{HV, VH}).
struct ProtocolOutcome {
  double success_probability = 0.0;
  Branch even;
  Branch odd;
  StateVector final_state;  // post-eraser, normalized
};

/// C-NOT(APol=V -> APath) followed by post-selection of APath = d.
/// Returns the renormalized state and the selection probability (1/2 for any
/// normalized system input).
std::pair<StateVector, double> alice_stage(const StateVector& state);

/// C-NOT(BPol=V -> BAux) then C-NOT(BPath=u -> BAux): writes the which-path
/// parity record into the ancilla.
StateVector bob_coupling(const StateVector& state);

/// Hadamard on BPath followed by post-selection of BPath = d; erases the
/// which-path record, leaving parity in BAux. Probability is 1/2 for any
/// valid input.
std::pair<StateVector, double> erase(const StateVector& state);

ProtocolOutcome run_protocol(const SystemAmplitudes& sys);

struct ParityDistribution {
  double p_even = 0.0;  // eigenvalue +1
  double p_odd = 0.0;   // eigenvalue -1
  double expectation() const { return p_even - p_odd; }
};

ParityDistribution parity_readout(const ProtocolOutcome& outcome);

/// Psi± = (|HH> ± |VV>)/sqrt2 and Phi± = (|HV> ± |VH>)/sqrt2; the labels
/// biject with (parity, sigma_x-product): (even,+1) -> Psi+, (even,-1) -> Psi-,
/// (odd,+1) -> Phi+, (odd,-1) -> Phi-.
enum class BellLabel { PsiPlus = 0, PsiMinus = 1, PhiPlus = 2, PhiMinus = 3 };

inline constexpr std::array<BellLabel, 4> kBellLabels = {
    BellLabel::PsiPlus, BellLabel::PsiMinus, BellLabel::PhiPlus, BellLabel::PhiMinus};

std::string_view bell_label_name(BellLabel label);
SystemAmplitudes bell_state(BellLabel label);

/// Joint label probabilities, indexed by BellLabel.
using BellDistribution = std::array<double, 4>;

/// Runs the protocol, then projects each branch onto sigma_x eigenstates of
/// both polarizations and multiplies the outcomes. Computed analytically from
/// the branch density matrices.
BellDistribution bell_measure(const SystemAmplitudes& sys);
BellDistribution bell_distribution(const ProtocolOutcome& outcome);

/// Joint distribution over (BAux, BPath) x polarization basis after Bob's
/// couplings, before erasure, while the which-path record is still readable.
/// Basis index = APol*2 + BPol as in DensityMatrix.
struct SnapshotDistribution {
  // p[aux][path][basis]
  std::array<std::array<std::array<double, 4>, 2>, 2> p{};

  double& at(int aux, int path, int basis) { return p[aux][path][basis]; }
  double at(int aux, int path, int basis) const { return p[aux][path][basis]; }
  double sum() const;
};

SnapshotDistribution pre_erasure_snapshot(const SystemAmplitudes& sys);
/// Same distribution read off an arbitrary (normalized) state.
SnapshotDistribution snapshot_distribution(const StateVector& state);

/// Probability that sigma_x (x) sigma_x reads +1 on a polarization state.
double sigma_xx_plus_probability(const DensityMatrix& rho);

/// Conditional polarization state and probability of the BAux = aux_value
/// branch of an arbitrary normalized state (zero branch -> zero matrix).
Branch branch_of(const StateVector& state, int aux_value);

/// Bell distribution computed from explicit branches (used by the executor).
BellDistribution bell_distribution_of(const Branch& even, const Branch& odd);

}  // namespace nlm
