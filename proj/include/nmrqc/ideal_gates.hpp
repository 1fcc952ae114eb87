#pragma once

#include "nmrqc/hamiltonian.hpp"
#include "nmrqc/quantum_state.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nmrqc {

// Gate vocabulary (also used by the program text format):
//   X1 X2 Y1 Y2           pi/2 rotations exp(i pi S_j^a / 2)
//   X1p X2p Y1p           rotations that undo the z precession accumulated
//   X1pp X2pp             during the Ising evolution (see derive_primed_angles)
//   <any of the above>bar inverse rotation
//   I                     Ising evolution with equal fields h = -J/2
//   Ip                    Ising evolution under the machine's own z fields
//   G                     conditional phase shift diag(e^-ipi/4, e^ipi/4, e^ipi/4, e^-ipi/4)
//   CNOT                  controlled NOT, qubit 1 controls qubit 2

enum class GateKind { rotation, ising, ising_machine, conditional_phase, cnot };
enum class Prime { none, single, double_ };

struct GateToken {
  GateKind kind = GateKind::rotation;
  int spin = 1;  // rotations only
  Axis axis = Axis::x;
  Prime prime = Prime::none;
  bool inverse = false;

  std::string name() const;
  bool operator==(const GateToken&) const = default;
};

/// Throws ConfigError for names outside the vocabulary.
GateToken parse_gate(std::string_view name);

/// Signed rotation angles, in turns (angle / 2pi), of the primed rotations.
/// Equivalently the field amplitude of a tau/2pi = 1 ideal operation.
struct PrimedAngles {
  double x1p = 0.0;
  double x2p = 0.0;
  double y1p = 0.0;
  double x1pp = 0.0;
  double x2pp = 0.0;
};

/// With tau = -pi/J and h = -J/2 the z phases left by the Ising evolution are
/// tau (h_jz - h) for the CNOT and tau h_jz for G. Each primed angle is minus
/// that phase reduced modulo 4pi (the period of a spin-1/2 rotation), so the
/// conjugated rotations reproduce the phases exactly, global sign included.
/// Requires J < 0 and h1z > 0.
PrimedAngles derive_primed_angles(const MachineConfig& machine = {});

/// tau/2pi = -1/(2J) of the Ising evolutions.
double ising_duration_over_2pi(const MachineConfig& machine = {});

/// Signed rotation angle in turns for a rotation token.
double rotation_turns(const GateToken& token, const MachineConfig& machine = {});

struct IdealGate {
  std::string name;
  Matrix4 matrix;
};

IdealGate ideal_gate(std::string_view name, const MachineConfig& machine = {});
IdealGate ideal_gate(const GateToken& token, const MachineConfig& machine = {});

/// exp(i angle S_j^axis) on the two-qubit register.
Matrix4 rotation_matrix(int spin, Axis axis, double angle);

/// P = diag(e^{i phi0}, e^{i phi1}, e^{i phi2}, e^{i phi3}).
Matrix4 phase_gate(const std::array<double, 4>& phases);

/// Product of the gates in written (operator) order: the rightmost name acts
/// first, so {"Y2bar", "I", "Y2"} is the CNOT construction. Throws ConfigError
/// on an empty sequence.
Matrix4 compose(std::span<const std::string> written_order,
                const MachineConfig& machine = {});

/// Parameters of the ideal elementary operation implementing `name`, with
/// integrator step delta/2pi = 1. CNOT is a sequence and is rejected.
EOParams ideal_eo_params(std::string_view name, const MachineConfig& machine = {});
EOParams ideal_eo_params(const GateToken& token, const MachineConfig& machine = {});

/// Largest element-wise difference between A and B after removing the global
/// phase that best aligns them.
double phase_aligned_distance(const Matrix4& a, const Matrix4& b);
double phase_aligned_distance(const StateVector& a, const StateVector& b);

}  // namespace nmrqc
