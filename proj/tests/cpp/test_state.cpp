#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "nlm/errors.hpp"
#include "nlm/io.hpp"
#include "nlm/state.hpp"

using namespace nlm;
using namespace nlm::test;

namespace {

int count_nonzero(const StateVector& s, double floor = 1e-15) {
  int n = 0;
  for (const auto& a : s.amplitudes()) {
    if (std::abs(a) > floor) ++n;
  }
  return n;
}

// Small gate inventory for property sweeps.
std::vector<GateOp> gate_inventory() {
  return {
      cnot(Register::APol, kPolV, Register::APath),
      cnot(Register::BPol, kPolV, Register::BAux),
      cnot(Register::BPath, kPathUp, Register::BAux),
      cnot(Register::APath, kPathDown, Register::APol),
      hadamard(Register::BPath),
      hadamard(Register::APol),
      waveplate(WavePlateKind::HWP, 22.5, Register::BPol),
      waveplate(WavePlateKind::QWP, 37.0, Register::APol),
      pauli(Register::BPol, PauliAxis::Y),
      pauli(Register::BAux, PauliAxis::X),
  };
}

}  // namespace

TEST_CASE("initial state of a single-term system") {
  const StateVector s = build_initial_state(SystemAmplitudes{1.0, 0.0, 0.0, 0.0});
  CHECK(count_nonzero(s) == 2);
  CHECK(s.amplitude(basis_index(0, 1, 0, 0, 0)).real() == doctest::Approx(kInvSqrt2));
  CHECK(s.amplitude(basis_index(0, 0, 0, 1, 0)).real() == doctest::Approx(kInvSqrt2));
  CHECK(s.is_normalized());
}

TEST_CASE("initial state of an even superposition has 4 quarter amplitudes") {
  const StateVector s =
      build_initial_state(SystemAmplitudes{kInvSqrt2, 0.0, 0.0, kInvSqrt2});
  CHECK(count_nonzero(s) == 4);
  for (const auto& a : s.amplitudes()) {
    if (std::abs(a) > 1e-15) {
      CHECK(a.real() == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(a.imag() == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("initial state of the full superposition has 8 equal-modulus amplitudes") {
  const Complex mi(0.0, -0.5);
  const StateVector s = build_initial_state(SystemAmplitudes{0.5, mi, 0.5, mi});
  CHECK(count_nonzero(s) == 8);
  const double expected = 1.0 / (2.0 * std::numbers::sqrt2);
  for (const auto& a : s.amplitudes()) {
    if (std::abs(a) > 1e-15) {
      CHECK(std::abs(a) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("initial state matches the direct tensor expansion for random inputs") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemAmplitudes sys = random_system(rng);
    CHECK(max_amplitude_difference(build_initial_state(sys), expected_initial_state(sys)) <
          1e-14);
  }
}

TEST_CASE("initial state rejects unnormalized coefficients") {
  CHECK_THROWS_AS(build_initial_state(SystemAmplitudes{1.0, 1.0, 0.0, 0.0}),
                  NotNormalizedError);
}

TEST_CASE("norm cache agrees with a direct sum") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector s = random_state(rng).scaled(Complex(1.7, -0.3));
    double direct = 0.0;
    for (const auto& a : s.amplitudes()) direct += std::norm(a);
    CHECK(s.norm_squared() == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("identity gate leaves states unchanged") {
  std::mt19937_64 rng(103);
  const StateVector s = random_state(rng);
  CHECK(max_amplitude_difference(apply(s, identity_gate(Register::BPol)), s) == 0.0);
}

TEST_CASE("applying Pauli-X twice restores the input") {
  std::mt19937_64 rng(104);
  const StateVector s = random_state(rng);
  const GateOp x = pauli(Register::APol, PauliAxis::X);
  CHECK(max_amplitude_difference(apply(apply(s, x), x), s) < 1e-14);
}

TEST_CASE("Alice's coupling reproduces the hand-expanded amplitudes") {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemAmplitudes sys = random_system(rng);
    const StateVector coupled =
        apply(build_initial_state(sys), cnot(Register::APol, kPolV, Register::APath));
    CHECK(max_amplitude_difference(coupled, expected_after_alice_cnot(sys)) < 1e-14);
  }
}

TEST_CASE("apply rejects a gate naming an unknown register") {
  GateOp bad = pauli(Register::APol, PauliAxis::X);
  bad.footprint[0] = static_cast<Register>(7);
  CHECK_THROWS_AS(apply(StateVector::basis_state(0, 0, 0, 0, 0), bad),
                  FootprintMismatchError);
}

TEST_CASE("apply rejects a matrix that does not match the footprint") {
  GateOp bad = cnot(Register::APol, kPolV, Register::APath);
  bad.matrix = Eigen::Matrix2cd::Identity();
  CHECK_THROWS_AS(apply(StateVector::basis_state(0, 0, 0, 0, 0), bad),
                  FootprintMismatchError);
}

TEST_CASE("projection on an already definite register is certain") {
  const StateVector s = StateVector::basis_state(0, 0, 0, 1, 0);  // |H,d,H,u,0>
  const Projection p = project(s, Register::APath, kPathDown);
  CHECK(p.probability == doctest::Approx(1.0));
  CHECK(max_amplitude_difference(p.state, s) < 1e-15);
}

TEST_CASE("post-selecting APath = d after Alice's coupling always halves the norm") {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemAmplitudes sys = random_system(rng);
    const StateVector coupled =
        apply(build_initial_state(sys), cnot(Register::APol, kPolV, Register::APath));
    const Projection p = project(coupled, Register::APath, kPathDown);
    CHECK(p.probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(max_amplitude_difference(p.state, expected_after_alice_stage(sys)) < 1e-12);
  }
}

TEST_CASE("projecting onto an orthogonal branch raises ZeroProbabilityBranch") {
  const StateVector s = StateVector::basis_state(0, 1, 0, 1, 0);  // |H,u,H,u,0>
  CHECK_THROWS_AS(project(s, Register::APath, kPathDown), ZeroProbabilityBranchError);
}

TEST_CASE("projection probabilities over both values sum to one") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 1000; ++trial) {
    const StateVector s = random_state(rng);
    for (Register reg : kAllRegisters) {
      CHECK(s.marginal(reg, 0) + s.marginal(reg, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("unitarity of the gate inventory over random states") {
  std::mt19937_64 rng(108);
  const auto gates = gate_inventory();
  for (int trial = 0; trial < 1000; ++trial) {
    const StateVector s = random_state(rng);
    const GateOp& g = gates[trial % gates.size()];
    CHECK(apply(s, g).norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("apply is linear") {
  std::mt19937_64 rng(109);
  const auto gates = gate_inventory();
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector s1 = random_state(rng);
    const StateVector s2 = random_state(rng);
    const Complex a(0.3, -0.8);
    const Complex b(-1.1, 0.25);
    const GateOp& g = gates[trial % gates.size()];
    const StateVector lhs = apply(s1.scaled(a).plus(s2.scaled(b)), g);
    const StateVector rhs = apply(s1, g).scaled(a).plus(apply(s2, g).scaled(b));
    CHECK(max_amplitude_difference(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("partial trace of a pure basis state is the matching projector") {
  const StateVector s = StateVector::basis_state(0, 0, 0, 0, 0);  // |H,d,H,d,0>
  const DensityMatrix rho = partial_trace_to_polarization(s);
  Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
  expected(0, 0) = 1.0;
  CHECK((rho.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("even-parity branch of the final state reduces to the Bell projector") {
  // Final-state structure restricted to BAux = 1 with alpha = eta = 1/sqrt2.
  Amplitudes amps{};
  amps[basis_index(0, 0, 0, 0, 1)] = kInvSqrt2;
  amps[basis_index(1, 0, 1, 0, 1)] = kInvSqrt2;
  const DensityMatrix rho =
      partial_trace_to_polarization(StateVector::from_amplitudes(amps));
  Eigen::Vector4cd bell(kInvSqrt2, 0.0, 0.0, kInvSqrt2);
  const Eigen::Matrix4cd expected = bell * bell.adjoint();
  CHECK((rho.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("paths trace out of a product state") {
  // |HH> polarization riding an equal superposition of all 4 path configs.
  Amplitudes amps{};
  for (int apath = 0; apath < 2; ++apath) {
    for (int bpath = 0; bpath < 2; ++bpath) {
      amps[basis_index(0, apath, 0, bpath, 0)] = 0.5;
    }
  }
  const DensityMatrix rho =
      partial_trace_to_polarization(StateVector::from_amplitudes(amps));
  Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
  expected(0, 0) = 1.0;
  CHECK((rho.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace of polarization x path products recovers the factor") {
  std::mt19937_64 rng(110);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const SystemAmplitudes pol = random_system(rng);
    std::array<Complex, 8> path;
    double n2 = 0.0;
    for (auto& c : path) {
      c = Complex(normal(rng), normal(rng));
      n2 += std::norm(c);
    }
    for (auto& c : path) c /= std::sqrt(n2);

    Amplitudes amps{};
    const Complex coeff[2][2] = {{pol.alpha, pol.beta}, {pol.gamma, pol.eta}};
    for (int apol = 0; apol < 2; ++apol)
      for (int bpol = 0; bpol < 2; ++bpol)
        for (int apath = 0; apath < 2; ++apath)
          for (int bpath = 0; bpath < 2; ++bpath)
            for (int baux = 0; baux < 2; ++baux)
              amps[basis_index(apol, apath, bpol, bpath, baux)] =
                  coeff[apol][bpol] * path[apath * 4 + bpath * 2 + baux];

    const DensityMatrix rho =
        partial_trace_to_polarization(StateVector::from_amplitudes(amps));
    const Eigen::Vector4cd psi = polarization_ket(pol);
    CHECK((rho.matrix() - psi * psi.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("density matrix invariants are validated") {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 1) = Complex(0.0, 1.0);  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix::from_matrix(m), InvalidDensityMatrixError);

  Eigen::Matrix4cd indefinite = Eigen::Matrix4cd::Identity();
  indefinite(3, 3) = -0.5;
  indefinite /= indefinite.trace().real();
  CHECK_THROWS_AS(DensityMatrix::from_matrix(indefinite).validate(),
                  InvalidDensityMatrixError);
}

TEST_CASE("state JSON uses the documented schema and round-trips") {
  std::mt19937_64 rng(111);
  const StateVector s = random_state(rng);
  const nlohmann::json j = state_to_json(s);
  CHECK(j["registers"] ==
        nlohmann::json::array({"APol", "APath", "BPol", "BPath", "BAux"}));
  CHECK(j["amplitudes"].size() == 32);
  CHECK(j["amplitudes"][0].size() == 2);
  CHECK(max_amplitude_difference(state_from_json(j), s) == 0.0);
}
