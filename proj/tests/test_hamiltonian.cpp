#include "nmrqc/errors.hpp"
#include "nmrqc/hamiltonian.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nmrqc;

namespace {

oracle::Fields to_fields(const EOParams& p) {
  oracle::Fields f;
  f.J = p.J;
  for (int j = 0; j < 2; ++j) {
    for (int a = 0; a < 3; ++a) f.h[j][a] = p.static_field[j][a];
    for (int a = 0; a < 2; ++a) f.ht[j][a] = p.sf_amplitude[j][a];
  }
  f.omega = p.omega;
  f.phi_x = p.phi_x;
  f.phi_y = p.phi_y;
  return f;
}

EOParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  EOParams p;
  p.J = u(rng);
  for (auto& s : p.static_field)
    for (auto& x : s) x = u(rng);
  for (auto& s : p.sf_amplitude)
    for (auto& x : s) x = u(rng);
  p.omega = u(rng) * 3;
  p.phi_x = u(rng) * 3;
  p.phi_y = u(rng) * 3;
  return p;
}

}  // namespace

TEST(Hamiltonian, CouplingOnlyIsDiagonal) {
  EOParams p;
  p.J = 0.8;
  const Matrix4 h = hamiltonian_at(p, 0.0);
  const double expected[4] = {-0.2, 0.2, 0.2, -0.2};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(std::abs(h(i, j) - Complex(i == j ? expected[i] : 0.0)), 0.0, 1e-15);
}

TEST(Hamiltonian, IsingWithEqualFields) {
  EOParams p;
  p.J = -0.43e-6;
  const double h = -p.J / 2;
  p.static_field[0][2] = p.static_field[1][2] = h;
  const auto e = diagonal_energies(p);
  EXPECT_NEAR(e[0], -p.J / 4 - h, 1e-20);
  EXPECT_NEAR(e[1], p.J / 4, 1e-20);
  EXPECT_NEAR(e[2], p.J / 4, 1e-20);
  EXPECT_NEAR(e[3], -p.J / 4 + h, 1e-20);
}

TEST(Hamiltonian, MatchesKroneckerOracle) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const EOParams p = random_params(rng);
    const double t = trial * 0.37;
    const Matrix4 h = hamiltonian_at(p, t);
    EXPECT_LT((h - oracle::hamiltonian(to_fields(p), t)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Hamiltonian, TimeIndependentWithoutSinusoidalField) {
  std::mt19937 rng(5);
  EOParams p = random_params(rng);
  p.sf_amplitude = {};
  EXPECT_FALSE(p.has_sinusoidal_field());
  const Matrix4 h0 = hamiltonian_at(p, 0.0);
  for (double t : {0.1, 1.0, 77.7}) EXPECT_EQ((hamiltonian_at(p, t) - h0).norm(), 0.0);
}

TEST(Hamiltonian, LinearInFields) {
  std::mt19937 rng(9);
  const EOParams a = random_params(rng);
  EOParams b = random_params(rng);
  b.omega = a.omega;
  b.phi_x = a.phi_x;
  b.phi_y = a.phi_y;
  EOParams sum = a;
  sum.J += b.J;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 3; ++k) sum.static_field[j][k] += b.static_field[j][k];
    for (int k = 0; k < 2; ++k) sum.sf_amplitude[j][k] += b.sf_amplitude[j][k];
  }
  const double t = 1.3;
  const Matrix4 lhs = hamiltonian_at(sum, t);
  const Matrix4 rhs = hamiltonian_at(a, t) + hamiltonian_at(b, t);
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Hamiltonian, DiagonalPredicate) {
  EOParams p;
  p.static_field[0][2] = 1.0;
  EXPECT_TRUE(p.is_diagonal());
  p.static_field[1][0] = 0.1;
  EXPECT_FALSE(p.is_diagonal());
  p.static_field[1][0] = 0.0;
  p.sf_amplitude[0][1] = 0.1;
  EXPECT_FALSE(p.is_diagonal());
  EXPECT_TRUE(p.has_sinusoidal_field());
}

TEST(Hamiltonian, SpinOperators) {
  EXPECT_LT((spin::on(1, Axis::x) - oracle::on1(oracle::sx())).norm(), 1e-15);
  EXPECT_LT((spin::on(2, Axis::y) - oracle::on2(oracle::sy())).norm(), 1e-15);
  EXPECT_LT((spin::on(2, Axis::z) - oracle::on2(oracle::sz())).norm(), 1e-15);
}

TEST(MachineValidation, RotatingPulseRowIsValid) {
  MachineConfig m;
  EOParams p;
  p.J = m.J;
  p.static_field[0][2] = m.h1z;
  p.static_field[1][2] = m.h2z;
  p.sf_amplitude[0] = {-0.03125, -0.03125};
  p.sf_amplitude[1] = {-0.0078125, -0.0078125};
  p.omega = 1.0;
  p.phi_x = -M_PI / 2;
  EXPECT_TRUE(validate_machine(p, m).ok);
  EXPECT_NO_THROW(enforce_machine(p, m));
}

TEST(MachineValidation, EqualTransverseFieldsRejected) {
  MachineConfig m;
  EOParams p;
  p.static_field[0][2] = m.h1z;
  p.static_field[1][2] = m.h2z;
  p.sf_amplitude[0][0] = 0.03125;
  p.sf_amplitude[1][0] = 0.03125;
  const auto r = validate_machine(p, m);
  EXPECT_FALSE(r.ok);
  ASSERT_FALSE(r.violations.empty());
  try {
    enforce_machine(p, m);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("x"), std::string::npos);
  }
}

TEST(MachineValidation, GammaOutOfRange) {
  MachineConfig m;
  m.gamma = 1.5;
  m.h2z = 1.5;
  EXPECT_FALSE(validate_machine(EOParams{}, m).ok);
  m.gamma = 0.25;
  m.h2z = 0.3;
  EXPECT_FALSE(validate_machine(EOParams{}, m).ok);
}
