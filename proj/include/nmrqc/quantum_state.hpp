#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace nmrqc {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

// Basis label b1 b2 ... bn maps to index b1 + 2*b2 + 4*b3 + ...; qubit 1 is the
// fast index, so the two-qubit order is |00>, |10>, |01>, |11>.
//
// A bit value of 0 is spin up (Sz = +1/2), 1 is spin down.

/// State of n spin-1/2 qubits. Immutable after construction; operations
/// return new states. The global phase is kept as is.
class StateVector {
 public:
  /// Takes ownership of the amplitudes. Throws ConfigError if the size is not
  /// 2^n and NumericalError if the norm is off by more than 1e-10; smaller
  /// rounding drift is divided out.
  StateVector(int n_qubits, Eigen::VectorXcd amplitudes);

  int n_qubits() const { return n_qubits_; }
  int dimension() const { return static_cast<int>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex operator[](int index) const { return amplitudes_[index]; }
  double norm() const { return amplitudes_.norm(); }

  /// Largest element-wise |a_i - b_i| between two states of equal size.
  double max_deviation(const StateVector& other) const;

 private:
  int n_qubits_;
  Eigen::VectorXcd amplitudes_;
};

struct QubitExpectation {
  int qubit_index;  // 1-based
  double value;     // <Q_j> = 1/2 - <S_j^z>, in [0, 1]
};

/// Amplitude 1 on |b1 b2 ... bn>. Throws ConfigError on length mismatch or a
/// bit that is not 0/1.
StateVector prepare_basis_state(int n_qubits, std::span<const int> bits);
StateVector prepare_basis_state(int n_qubits, std::initializer_list<int> bits);

/// (|01> - |10>)/sqrt(2), built from |00> by exact matrix rotations.
StateVector prepare_singlet();

/// <Q_j> for 1-based qubit j.
QubitExpectation expectation_qubit(const StateVector& state, int j);

/// state' = U state. Throws NumericalError if U^dagger U deviates from the
/// identity by more than `unitarity_tolerance` in any element.
StateVector apply_unitary(const StateVector& state, const Eigen::MatrixXcd& U,
                          double unitarity_tolerance = 1e-10);

/// Largest element of |U^dagger U - 1|.
double unitarity_defect(const Eigen::MatrixXcd& U);

/// Embeds a single-spin operator acting on 1-based qubit `j` of an n-qubit
/// register.
Eigen::MatrixXcd embed_single(const Matrix2& op, int j, int n_qubits);

}  // namespace nmrqc
