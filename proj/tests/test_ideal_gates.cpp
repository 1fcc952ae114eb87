#include "nmrqc/errors.hpp"
#include "nmrqc/ideal_gates.hpp"
#include "nmrqc/integrator.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

using namespace nmrqc;

namespace {

double max_abs(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

// x turns reduced into [0, 2), the period of a spin-1/2 rotation.
long double reduce_two_turns(long double x) {
  long double r = std::fmod(x, 2.0L);
  if (r < 0.0L) r += 2.0L;
  return r;
}

const std::vector<std::string> kRotations = {
    "X1", "X2", "Y1", "Y2", "X1bar", "X2bar", "Y1bar", "Y2bar",
    "X1p", "X2p", "Y1p", "X1pp", "X2pp", "X1pbar", "Y1pbar", "X2ppbar"};

}  // namespace

TEST(IdealGates, ParseRoundTrip) {
  for (const auto& name : kRotations) EXPECT_EQ(parse_gate(name).name(), name);
  for (const char* name : {"I", "Ip", "G", "CNOT"}) EXPECT_EQ(parse_gate(name).name(), name);
  for (const char* bad : {"", "X3", "Z1", "Y2p", "Y1pp", "Xbar", "cnot1", "X1barp"})
    EXPECT_THROW(parse_gate(bad), ConfigError) << bad;
}

TEST(IdealGates, RotationsMatchKroneckerExponentials) {
  for (int spin : {1, 2}) {
    for (int axis : {0, 1}) {
      for (double angle : {M_PI / 2, -M_PI / 2, 1.234, 3 * M_PI}) {
        const Matrix4 r = rotation_matrix(spin, axis == 0 ? Axis::x : Axis::y, angle);
        EXPECT_LT(max_abs(r - oracle::rotation(spin, axis, angle)), 1e-14);
      }
    }
  }
  EXPECT_THROW(rotation_matrix(1, Axis::z, 1.0), ConfigError);
}

TEST(IdealGates, Y2barOnOneOne) {
  const auto out = apply_unitary(prepare_basis_state(2, {1, 1}), ideal_gate("Y2bar").matrix);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(out[3] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out[1] + r), 0.0, 1e-15);
}

TEST(IdealGates, CnotTruthTable) {
  const Matrix4 cnot = ideal_gate("CNOT").matrix;
  const int in[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (const auto& b : in) {
    const auto out = apply_unitary(prepare_basis_state(2, {b[0], b[1]}), cnot);
    const int target = b[0] + 2 * (b[0] ^ b[1]);
    EXPECT_NEAR(std::abs(out[target]), 1.0, 1e-15);
  }
  EXPECT_LT(max_abs(cnot * cnot - std::polar(1.0, M_PI / 2) * Matrix4::Identity()), 1e-15);
  EXPECT_LT(oracle::phase_distance(cnot, oracle::cnot_permutation()), 1e-15);
}

TEST(IdealGates, InversesCancel) {
  for (const char* name : {"X1", "X2", "Y1", "Y2", "X1p", "Y1p", "X2pp"}) {
    const Matrix4 a = ideal_gate(name).matrix;
    const Matrix4 b = ideal_gate(std::string(name) + "bar").matrix;
    EXPECT_LT(max_abs(a * b - Matrix4::Identity()), 1e-14) << name;
  }
}

TEST(IdealGates, AllGatesUnitary) {
  for (const auto& name : kRotations) EXPECT_LT(unitarity_defect(ideal_gate(name).matrix), 1e-14);
  for (const char* name : {"I", "Ip", "G", "CNOT"})
    EXPECT_LT(unitarity_defect(ideal_gate(name).matrix), 1e-12) << name;
}

TEST(IdealGates, ZeroPhaseGateIsIdentity) {
  EXPECT_EQ(max_abs(phase_gate({0, 0, 0, 0}) - Matrix4::Identity()), 0.0);
}

TEST(IdealGates, ConjugatedIsingIsCnot) {
  const std::vector<std::string> seq = {"Y2bar", "I", "Y2"};
  const Matrix4 m = compose(seq);
  EXPECT_LT(max_abs(m - std::polar(1.0, M_PI / 4) * oracle::cnot_permutation()), 1e-8);
  EXPECT_THROW(compose(std::vector<std::string>{}), ConfigError);
}

TEST(IdealGates, ConjugatedPhaseGate) {
  // P with phi0 = phi1 = phi2 = 0 and phi3 = -2 alpha. Conjugating by the
  // y rotation of spin 2 mixes |10> and |11>:
  //   e^{-i alpha} [[cos a, i sin a], [i sin a, cos a]] on (|10>, |11>).
  for (double alpha : {0.3, -1.1, M_PI / 4}) {
    const Matrix4 p = phase_gate({0.0, 0.0, 0.0, -2 * alpha});
    const Matrix4 m = oracle::rotation(2, 1, -M_PI / 2) * p * oracle::rotation(2, 1, M_PI / 2);
    Matrix4 expected = Matrix4::Zero();
    const Complex e = std::polar(1.0, -alpha);
    const Complex i(0, 1);
    expected(0, 0) = expected(2, 2) = 1.0;
    expected(1, 1) = expected(3, 3) = e * std::cos(alpha);
    expected(1, 3) = expected(3, 1) = e * i * std::sin(alpha);
    EXPECT_LT(max_abs(m - expected), 1e-14) << alpha;
    const Matrix4 lib = rotation_matrix(2, Axis::y, -M_PI / 2) * p * rotation_matrix(2, Axis::y, M_PI / 2);
    EXPECT_LT(max_abs(lib - expected), 1e-14) << alpha;
  }
}

TEST(IdealGates, IsingDuration) {
  EXPECT_NEAR(ising_duration_over_2pi(), 1162790.6977, 5e-5);
  MachineConfig bad;
  bad.J = 0.1;
  EXPECT_THROW(ising_duration_over_2pi(bad), ConfigError);
}

TEST(IdealGates, PrimedAngles) {
  const PrimedAngles a = derive_primed_angles();
  EXPECT_NEAR(a.x1p, -0.4477, 5e-5);
  EXPECT_NEAR(a.x2p, -1.4244, 5e-5);
  EXPECT_NEAR(a.x1pp, -0.6977, 5e-5);
  EXPECT_NEAR(a.x2pp, -1.6744, 5e-5);
  EXPECT_EQ(a.y1p, a.x1p);

  // Independent recomputation in extended precision.
  const MachineConfig m;
  const long double tau = -1.0L / (2.0L * static_cast<long double>(m.J));
  const long double h = -static_cast<long double>(m.J) / 2.0L;
  EXPECT_NEAR(a.x1p, -static_cast<double>(reduce_two_turns(tau * (m.h1z - h))), 1e-8);
  EXPECT_NEAR(a.x2p, -static_cast<double>(reduce_two_turns(tau * (m.h2z - h))), 1e-8);
  EXPECT_NEAR(a.x1pp, -static_cast<double>(reduce_two_turns(tau * m.h1z)), 1e-8);
  EXPECT_NEAR(a.x2pp, -static_cast<double>(reduce_two_turns(tau * m.h2z)), 1e-8);
}

TEST(IdealGates, RotationTurns) {
  EXPECT_DOUBLE_EQ(rotation_turns(parse_gate("X1")), 0.25);
  EXPECT_DOUBLE_EQ(rotation_turns(parse_gate("Y2bar")), -0.25);
  EXPECT_DOUBLE_EQ(rotation_turns(parse_gate("X2ppbar")), -derive_primed_angles().x2pp);
  EXPECT_THROW(rotation_turns(parse_gate("Ip")), ConfigError);
}

TEST(IdealGates, CnotVariantsFromPrimedRotations) {
  const std::vector<std::vector<std::string>> variants = {
      {"Y1", "X1p", "Y1bar", "X2p", "Y2bar", "Ip", "Y2"},
      {"Y1", "X1p", "X2p", "Y1bar", "Y2bar", "Ip", "Y2"},
      {"X1bar", "Y1p", "X2p", "X1", "Y2bar", "Ip", "Y2"},
      {"X1bar", "Y1p", "X2p", "Y2bar", "X1", "Ip", "Y2"}};
  for (const auto& v : variants) {
    EXPECT_LT(oracle::phase_distance(compose(v), oracle::cnot_permutation()), 1e-6);
    const Matrix4 m = compose(v);
    EXPECT_LT(max_abs(m * m - std::polar(1.0, M_PI / 2) * Matrix4::Identity()), 1e-6);
  }
}

TEST(IdealGates, ConditionalPhaseFromMachineEvolution) {
  const std::vector<std::string> seq = {"Y2", "X2pp", "Y2bar", "Y1", "X1pp", "Y1bar", "Ip"};
  EXPECT_LT(oracle::phase_distance(compose(seq), ideal_gate("G").matrix), 1e-6);
}

TEST(IdealGates, ElementaryOperationsReproduceGates) {
  for (const auto& name : kRotations) {
    const EOParams eo = ideal_eo_params(name);
    EXPECT_EQ(eo.time_step_delta, 1.0);
    const Matrix4 u = reference_propagator(eo, 1.0);
    EXPECT_LT(oracle::phase_distance(u, ideal_gate(name).matrix), 1e-6) << name;
  }
  for (const char* name : {"I", "Ip", "G"}) {
    const EOParams eo = ideal_eo_params(name);
    EXPECT_TRUE(eo.is_diagonal());
    const Matrix4 u = propagator(eo, {std::nullopt, Method::exact_diagonal});
    EXPECT_LT(oracle::phase_distance(u, ideal_gate(name).matrix), 1e-6) << name;
  }
  EXPECT_THROW(ideal_eo_params("CNOT"), ConfigError);
}

TEST(IdealGates, PhaseAlignedDistanceIgnoresGlobalPhase) {
  const Matrix4 a = ideal_gate("X1").matrix;
  EXPECT_LT(phase_aligned_distance(a, std::polar(1.0, 2.0) * a), 1e-15);
  EXPECT_GT(phase_aligned_distance(a, ideal_gate("Y1").matrix), 0.1);
}
