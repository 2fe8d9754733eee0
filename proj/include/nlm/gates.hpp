#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nlm/registers.hpp"

namespace nlm {

/// A unitary with a declared register footprint. For two-register gates the
/// first footprint entry is the high bit of the gate-local index.
struct GateOp {
  std::vector<Register> footprint;
  Eigen::MatrixXcd matrix;
  std::string label;

  bool is_unitary(double tol = 1e-12) const;
};

enum class WavePlateKind { HWP, QWP };
enum class PauliAxis { X, Y, Z };

GateOp identity_gate(Register reg);

/// Flips `target` exactly when `control` holds `control_value`. Equal to the
/// evolution exp(-i pi/2 P (x) (sigma_x - I)) with P the projector onto
/// control_value; the identity is asserted in the tests rather than assumed.
GateOp cnot(Register control, int control_value, Register target);

/// |0> -> (|0>+|1>)/sqrt2, |1> -> (|0>-|1>)/sqrt2. With the d->0, u->1 path
/// encoding this is the eraser transform acting on a path register.
GateOp hadamard(Register reg);

/// Jones unitary of a wave plate with optical axis at `angle_deg`:
/// HWP(t) = [[cos2t, sin2t], [sin2t, -cos2t]]; QWP(t) = R(t) diag(1,i) R(-t).
GateOp waveplate(WavePlateKind kind, double angle_deg, Register reg);

GateOp pauli(Register reg, PauliAxis axis);

}  // namespace nlm
