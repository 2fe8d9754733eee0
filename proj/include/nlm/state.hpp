#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "nlm/gates.hpp"
#include "nlm/registers.hpp"

namespace nlm {

using Complex = std::complex<double>;
using Amplitudes = std::array<Complex, kDim>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kPsdEigenvalueFloor = -1e-8;
inline constexpr double kZeroProbability = 1e-14;

/// Coefficients of |HH>, |HV>, |VH>, |VV> for the two-polarization system.
struct SystemAmplitudes {
  Complex alpha{};
  Complex beta{};
  Complex gamma{};
  Complex eta{};

  double norm_squared() const;
  bool is_normalized(double tol = kNormTolerance) const;
  /// Throws NotNormalizedError when |alpha|^2+|beta|^2+|gamma|^2+|eta|^2 != 1.
  void require_normalized() const;
};

/// Dense 32-amplitude state over the five registers. Immutable after
/// construction; the squared norm is computed once and cached.
class StateVector {
 public:
  StateVector() = default;  // all-zero amplitudes

  static StateVector from_amplitudes(const Amplitudes& amps);
  /// Basis state |apol, apath, bpol, bpath, baux>.
  static StateVector basis_state(int apol, int apath, int bpol, int bpath, int baux);

  const Amplitudes& amplitudes() const { return amps_; }
  Complex amplitude(std::size_t index) const { return amps_[index]; }
  double norm_squared() const { return norm_squared_; }
  bool is_normalized(double tol = kNormTolerance) const;
  void require_normalized() const;

  /// Marginal probability of finding `reg` = `value` (assumes normalized input
  /// for the probabilistic reading; otherwise returns projected mass).
  double marginal(Register reg, int value) const;

  StateVector scaled(const Complex& factor) const;
  StateVector plus(const StateVector& other) const;

 private:
  explicit StateVector(const Amplitudes& amps);

  Amplitudes amps_{};
  double norm_squared_ = 0.0;
};

/// 4x4 density matrix over the {HH, HV, VH, VV} polarization basis
/// (row/column index = APol*2 + BPol).
class DensityMatrix {
 public:
  DensityMatrix() : m_(Eigen::Matrix4cd::Zero()) {}

  /// Validates Hermiticity (1e-10 entrywise); throws InvalidDensityMatrixError.
  static DensityMatrix from_matrix(const Eigen::Matrix4cd& m);
  /// Projector onto a (not necessarily normalized) pure polarization state.
  static DensityMatrix pure(const Eigen::Vector4cd& psi);
  static DensityMatrix maximally_mixed();

  const Eigen::Matrix4cd& matrix() const { return m_; }
  double trace_real() const { return m_.trace().real(); }

  bool is_hermitian(double tol = kHermitianTolerance) const;
  bool is_unit_trace(double tol = kHermitianTolerance) const;
  /// Smallest eigenvalue >= -1e-8.
  bool is_psd(double floor = kPsdEigenvalueFloor) const;
  /// Full invariant check (Hermitian, PSD, unit trace); throws
  /// InvalidDensityMatrixError naming the violated property.
  void validate(bool require_unit_trace = true) const;

 private:
  explicit DensityMatrix(const Eigen::Matrix4cd& m) : m_(m) {}

  Eigen::Matrix4cd m_;
};

/// psi_s (x) (|ud> + |du>)/sqrt2 (x) |b0>: the full 32-amplitude start state
/// with the meter registers in the shared EPR pair and the ancilla at b0.
StateVector build_initial_state(const SystemAmplitudes& sys);

/// U * state. Norm is preserved to 1e-12 for unitary ops.
StateVector apply(const StateVector& state, const GateOp& op);

struct Projection {
  StateVector state;   // renormalized post-selected state
  double probability;  // mass of the selected branch
};

/// Post-selects `reg` = `value` and renormalizes. Throws
/// ZeroProbabilityBranchError when the branch mass is below 1e-14.
Projection project(const StateVector& state, Register reg, int value);

/// Reduced density matrix over (APol, BPol), tracing out both paths and the
/// ancilla. Input must be normalized.
DensityMatrix partial_trace_to_polarization(const StateVector& state);
inline DensityMatrix to_density(const StateVector& state) {
  return partial_trace_to_polarization(state);
}

/// |<a|b>| for normalized states; equals 1 iff a and b agree up to global phase.
double overlap_magnitude(const StateVector& a, const StateVector& b);

}  // namespace nlm
