#include "nlm/gates.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nlm/errors.hpp"

namespace nlm {

namespace {

using Complex = std::complex<double>;

Eigen::Matrix2cd rotation(double theta) {
  Eigen::Matrix2cd r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace

bool GateOp::is_unitary(double tol) const {
  const Eigen::MatrixXcd product = matrix * matrix.adjoint();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
  return ((product - id).cwiseAbs().maxCoeff() <= tol);
}

GateOp identity_gate(Register reg) {
  return GateOp{{reg}, Eigen::Matrix2cd::Identity(), "I"};
}

GateOp cnot(Register control, int control_value, Register target) {
  if (control == target) {
    throw DuplicateRegisterError("cnot: control and target must differ");
  }
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  // Local index = control*2 + target; target flips on the control_value rows.
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      const int in = c * 2 + t;
      const int out = c * 2 + (c == control_value ? (t ^ 1) : t);
      m(out, in) = 1.0;
    }
  }
  std::ostringstream label;
  label << "cnot(" << register_name(control) << "=" << value_symbol(control, control_value)
        << " -> " << register_name(target) << ")";
  return GateOp{{control, target}, m, label.str()};
}

GateOp hadamard(Register reg) {
  const double s = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd m;
  m << s, s, s, -s;
  return GateOp{{reg}, m, std::string("h(") + std::string(register_name(reg)) + ")"};
}

GateOp waveplate(WavePlateKind kind, double angle_deg, Register reg) {
  const double theta = angle_deg * std::numbers::pi / 180.0;
  Eigen::Matrix2cd m;
  if (kind == WavePlateKind::HWP) {
    const double c = std::cos(2 * theta);
    const double s = std::sin(2 * theta);
    m << c, s, s, -c;
  } else {
    // Quarter wave plate: diag(1, i) in its own axis frame, rotated into H/V.
    Eigen::Matrix2cd retarder = Eigen::Matrix2cd::Zero();
    retarder(0, 0) = Complex(1.0, 0.0);
    retarder(1, 1) = Complex(0.0, 1.0);
    m = rotation(theta) * retarder * rotation(-theta);
  }
  std::ostringstream label;
  label << (kind == WavePlateKind::HWP ? "hwp" : "qwp") << "(" << angle_deg << ", "
        << register_name(reg) << ")";
  return GateOp{{reg}, m, label.str()};
}

GateOp pauli(Register reg, PauliAxis axis) {
  Eigen::Matrix2cd m;
  const Complex i(0.0, 1.0);
  switch (axis) {
    case PauliAxis::X:
      m << 0, 1, 1, 0;
      break;
    case PauliAxis::Y:
      m << 0, -i, i, 0;
      break;
    case PauliAxis::Z:
      m << 1, 0, 0, -1;
      break;
  }
  const char* name = axis == PauliAxis::X ? "x" : axis == PauliAxis::Y ? "y" : "z";
  return GateOp{{reg}, m, std::string(name) + "(" + std::string(register_name(reg)) + ")"};
}

}  // namespace nlm
