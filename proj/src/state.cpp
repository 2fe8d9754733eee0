#include "nlm/state.hpp"

#include <cmath>
#include <numbers>

#include "nlm/errors.hpp"

namespace nlm {

namespace {

double norm_squared_of(const Amplitudes& amps) {
  double total = 0.0;
  for (const auto& a : amps) {
    total += std::norm(a);
  }
  return total;
}

}  // namespace

double SystemAmplitudes::norm_squared() const {
  return std::norm(alpha) + std::norm(beta) + std::norm(gamma) + std::norm(eta);
}

bool SystemAmplitudes::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

void SystemAmplitudes::require_normalized() const {
  if (!is_normalized()) {
    throw NotNormalizedError("system amplitudes are not normalized");
  }
}

StateVector::StateVector(const Amplitudes& amps)
    : amps_(amps), norm_squared_(norm_squared_of(amps)) {}

StateVector StateVector::from_amplitudes(const Amplitudes& amps) { return StateVector(amps); }

StateVector StateVector::basis_state(int apol, int apath, int bpol, int bpath, int baux) {
  Amplitudes amps{};
  amps[basis_index(apol, apath, bpol, bpath, baux)] = Complex(1.0, 0.0);
  return StateVector(amps);
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(norm_squared_ - 1.0) <= tol;
}

void StateVector::require_normalized() const {
  if (!is_normalized()) {
    throw NotNormalizedError("state vector is not normalized");
  }
}

double StateVector::marginal(Register reg, int value) const {
  double mass = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) {
    if (bit_of(i, reg) == value) {
      mass += std::norm(amps_[i]);
    }
  }
  return mass;
}

StateVector StateVector::scaled(const Complex& factor) const {
  Amplitudes amps = amps_;
  for (auto& a : amps) {
    a *= factor;
  }
  return StateVector(amps);
}

StateVector StateVector::plus(const StateVector& other) const {
  Amplitudes amps = amps_;
  for (std::size_t i = 0; i < kDim; ++i) {
    amps[i] += other.amps_[i];
  }
  return StateVector(amps);
}

DensityMatrix DensityMatrix::from_matrix(const Eigen::Matrix4cd& m) {
  DensityMatrix rho(m);
  if (!rho.is_hermitian()) {
    throw InvalidDensityMatrixError("density matrix is not Hermitian");
  }
  return rho;
}

DensityMatrix DensityMatrix::pure(const Eigen::Vector4cd& psi) {
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) {
    return DensityMatrix();
  }
  return DensityMatrix((psi * psi.adjoint()) / n2);
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Eigen::Matrix4cd::Identity() * 0.25);
}

bool DensityMatrix::is_hermitian(double tol) const {
  return ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol);
}

bool DensityMatrix::is_unit_trace(double tol) const {
  return std::abs(m_.trace().real() - 1.0) <= tol && std::abs(m_.trace().imag()) <= tol;
}

bool DensityMatrix::is_psd(double floor) const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= floor;
}

void DensityMatrix::validate(bool require_unit_trace) const {
  if (!is_hermitian()) {
    throw InvalidDensityMatrixError("density matrix is not Hermitian");
  }
  if (require_unit_trace && !is_unit_trace()) {
    throw InvalidDensityMatrixError("density matrix trace differs from 1");
  }
  if (!is_psd()) {
    throw InvalidDensityMatrixError("density matrix has a negative eigenvalue");
  }
}

StateVector build_initial_state(const SystemAmplitudes& sys) {
  sys.require_normalized();
  const Complex coeffs[2][2] = {{sys.alpha, sys.beta}, {sys.gamma, sys.eta}};
  const double s = 1.0 / std::numbers::sqrt2;
  Amplitudes amps{};
  for (int apol = 0; apol < 2; ++apol) {
    for (int bpol = 0; bpol < 2; ++bpol) {
      const Complex c = coeffs[apol][bpol] * s;
      // Meter EPR pair (|ud> + |du>)/sqrt2 on (APath, BPath); ancilla at b0.
      amps[basis_index(apol, kPathUp, bpol, kPathDown, kAuxLeft)] += c;
      amps[basis_index(apol, kPathDown, bpol, kPathUp, kAuxLeft)] += c;
    }
  }
  return StateVector::from_amplitudes(amps);
}

StateVector apply(const StateVector& state, const GateOp& op) {
  const std::size_t k = op.footprint.size();
  if (k == 0 || k > 2) {
    throw FootprintMismatchError("gate footprint must hold one or two registers");
  }
  for (Register r : op.footprint) {
    if (static_cast<unsigned>(r) >= kNumRegisters) {
      throw FootprintMismatchError("gate references an unknown register");
    }
  }
  const std::size_t dim = std::size_t{1} << k;
  if (static_cast<std::size_t>(op.matrix.rows()) != dim ||
      static_cast<std::size_t>(op.matrix.cols()) != dim) {
    throw FootprintMismatchError("gate matrix does not match its footprint size");
  }

  Amplitudes out{};
  if (k == 1) {
    const std::size_t mask = std::size_t{1} << bit_position(op.footprint[0]);
    for (std::size_t i = 0; i < kDim; ++i) {
      if (i & mask) continue;
      const std::size_t j = i | mask;
      const Complex a0 = state.amplitude(i);
      const Complex a1 = state.amplitude(j);
      out[i] = op.matrix(0, 0) * a0 + op.matrix(0, 1) * a1;
      out[j] = op.matrix(1, 0) * a0 + op.matrix(1, 1) * a1;
    }
  } else {
    if (op.footprint[0] == op.footprint[1]) {
      throw DuplicateRegisterError("gate footprint repeats a register");
    }
    const std::size_t hi = std::size_t{1} << bit_position(op.footprint[0]);
    const std::size_t lo = std::size_t{1} << bit_position(op.footprint[1]);
    for (std::size_t i = 0; i < kDim; ++i) {
      if ((i & hi) || (i & lo)) continue;
      const std::size_t idx[4] = {i, i | lo, i | hi, i | hi | lo};
      Complex in[4];
      for (int v = 0; v < 4; ++v) in[v] = state.amplitude(idx[v]);
      for (int r = 0; r < 4; ++r) {
        Complex acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += op.matrix(r, c) * in[c];
        out[idx[r]] = acc;
      }
    }
  }
  return StateVector::from_amplitudes(out);
}

Projection project(const StateVector& state, Register reg, int value) {
  state.require_normalized();
  const double probability = state.marginal(reg, value);
  if (probability < kZeroProbability) {
    throw ZeroProbabilityBranchError(
        std::string("post-selection on ") + std::string(register_name(reg)) + " = " +
        std::string(value_symbol(reg, value)) + " has zero probability");
  }
  const double scale = 1.0 / std::sqrt(probability);
  Amplitudes amps{};
  for (std::size_t i = 0; i < kDim; ++i) {
    if (bit_of(i, reg) == value) {
      amps[i] = state.amplitude(i) * scale;
    }
  }
  return Projection{StateVector::from_amplitudes(amps), probability};
}

DensityMatrix partial_trace_to_polarization(const StateVector& state) {
  state.require_normalized();
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  // Row/column index = APol*2 + BPol; sum over the traced path/aux registers.
  for (int apath = 0; apath < 2; ++apath) {
    for (int bpath = 0; bpath < 2; ++bpath) {
      for (int baux = 0; baux < 2; ++baux) {
        Eigen::Vector4cd column;
        for (int apol = 0; apol < 2; ++apol) {
          for (int bpol = 0; bpol < 2; ++bpol) {
            column(apol * 2 + bpol) =
                state.amplitude(basis_index(apol, apath, bpol, bpath, baux));
          }
        }
        rho += column * column.adjoint();
      }
    }
  }
  return DensityMatrix::from_matrix(rho);
}

double overlap_magnitude(const StateVector& a, const StateVector& b) {
  Complex inner = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) {
    inner += std::conj(a.amplitude(i)) * b.amplitude(i);
  }
  return std::abs(inner);
}

}  // namespace nlm
