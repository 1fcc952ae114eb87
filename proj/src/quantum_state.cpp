#include "nmrqc/quantum_state.hpp"

#include "nmrqc/errors.hpp"

#include <cmath>
#include <string>

namespace nmrqc {

namespace {

// Inputs further than this from unit norm are rejected; anything closer is
// rescaled so stored states are normalized to rounding precision.
constexpr double kNormTolerance = 1e-10;

void require_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 20) {
    throw ConfigError("qubit count must be in [1, 20], got " +
                      std::to_string(n_qubits));
  }
}

// exp(i angle S^axis) for a single spin, axis in {x, y}.
Matrix2 rotation(char axis, double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  Matrix2 m;
  if (axis == 'x') {
    m << c, Complex(0, s), Complex(0, s), c;
  } else {
    m << c, s, -s, c;
  }
  return m;
}

}  // namespace

StateVector::StateVector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  require_qubit_count(n_qubits);
  if (amplitudes_.size() != (Eigen::Index{1} << n_qubits)) {
    throw ConfigError("state of " + std::to_string(n_qubits) + " qubits needs " +
                      std::to_string(1 << n_qubits) + " amplitudes, got " +
                      std::to_string(amplitudes_.size()));
  }
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance) {
    throw NumericalError("state is not normalized: norm = " +
                         std::to_string(norm));
  }
  amplitudes_ /= norm;
}

double StateVector::max_deviation(const StateVector& other) const {
  if (other.dimension() != dimension()) {
    throw ConfigError("cannot compare states of different size");
  }
  return (amplitudes_ - other.amplitudes_).cwiseAbs().maxCoeff();
}

StateVector prepare_basis_state(int n_qubits, std::span<const int> bits) {
  require_qubit_count(n_qubits);
  if (static_cast<int>(bits.size()) != n_qubits) {
    throw ConfigError("expected " + std::to_string(n_qubits) + " bits, got " +
                      std::to_string(bits.size()));
  }
  Eigen::Index index = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] != 0 && bits[j] != 1) {
      throw ConfigError("basis bits must be 0 or 1");
    }
    index |= static_cast<Eigen::Index>(bits[j]) << j;
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amps[index] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector prepare_basis_state(int n_qubits, std::initializer_list<int> bits) {
  return prepare_basis_state(n_qubits, std::span<const int>(bits.begin(), bits.size()));
}

StateVector prepare_singlet() {
  // |00> -> |01> by a -pi rotation of spin 2 about y, then a pi/2 rotation of
  // spin 1 about y gives (|01> - |11>)/sqrt(2), then the exact CNOT permutation.
  Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(4, 4);
  cnot(0, 0) = cnot(1, 3) = cnot(2, 2) = cnot(3, 1) = 1.0;
  const Eigen::MatrixXcd flip2 = embed_single(rotation('y', -M_PI), 2, 2);
  const Eigen::MatrixXcd y1 = embed_single(rotation('y', M_PI / 2), 1, 2);
  StateVector state = prepare_basis_state(2, {0, 0});
  state = apply_unitary(state, flip2);
  state = apply_unitary(state, y1);
  return apply_unitary(state, cnot);
}

QubitExpectation expectation_qubit(const StateVector& state, int j) {
  if (j < 1 || j > state.n_qubits()) {
    throw ConfigError("qubit index " + std::to_string(j) + " out of range [1, " +
                      std::to_string(state.n_qubits()) + "]");
  }
  const Eigen::Index mask = Eigen::Index{1} << (j - 1);
  double value = 0.0;
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) {
    if (i & mask) value += std::norm(state.amplitudes()[i]);
  }
  return {j, value};
}

double unitarity_defect(const Eigen::MatrixXcd& U) {
  if (U.rows() != U.cols()) return INFINITY;
  const Eigen::MatrixXcd gram = U.adjoint() * U;
  return (gram - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
}

StateVector apply_unitary(const StateVector& state, const Eigen::MatrixXcd& U,
                          double unitarity_tolerance) {
  if (U.rows() != state.dimension() || U.cols() != state.dimension()) {
    throw ConfigError("unitary dimension does not match the state");
  }
  const double defect = unitarity_defect(U);
  if (!(defect <= unitarity_tolerance)) {
    throw NumericalError("matrix is not unitary: max |U^+U - 1| = " +
                         std::to_string(defect));
  }
  Eigen::VectorXcd out = U * state.amplitudes();
  return StateVector(state.n_qubits(), std::move(out));
}

Eigen::MatrixXcd embed_single(const Matrix2& op, int j, int n_qubits) {
  require_qubit_count(n_qubits);
  if (j < 1 || j > n_qubits) {
    throw ConfigError("qubit index out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  const Eigen::Index mask = Eigen::Index{1} << (j - 1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int bc = (col & mask) ? 1 : 0;
    for (int br = 0; br < 2; ++br) {
      const Eigen::Index row = br ? (col | mask) : (col & ~mask);
      out(row, col) = op(br, bc);
    }
  }
  return out;
}

}  // namespace nmrqc
