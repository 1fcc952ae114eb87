#pragma once

#include "nmrqc/quantum_state.hpp"

#include <array>
#include <string>
#include <vector>

namespace nmrqc {

inline constexpr double kTwoPi = 2.0 * M_PI;

enum class Axis { x = 0, y = 1, z = 2 };

/// Spin-1/2 operators S^alpha = sigma^alpha / 2 with |0> = spin up.
namespace spin {
Matrix2 op(Axis axis);
/// S_j^alpha on the two-qubit register, j in {1, 2}.
Matrix4 on(int j, Axis axis);
}  // namespace spin

/// Fixed physical constants of the two-spin machine, rescaled so h1z = 1.
struct MachineConfig {
  double J = -0.43e-6;
  double h1z = 1.0;
  double h2z = 0.25;
  double gamma = 0.25;  // h2z / h1z

  bool operator==(const MachineConfig&) const = default;
};

/// One elementary operation: every Hamiltonian parameter is held fixed for
/// `duration_over_2pi` time units (tau / 2pi, with hbar = h1z = 1). The
/// sinusoidal-field time origin is the start of the operation.
struct EOParams {
  std::string label;
  double duration_over_2pi = 0.0;
  double J = 0.0;
  /// h[spin][alpha], spin index 0 or 1, alpha = x, y, z.
  std::array<std::array<double, 3>, 2> static_field{};
  /// Amplitudes of the sinusoidal field, h~[spin][alpha] for alpha = x, y.
  std::array<std::array<double, 2>, 2> sf_amplitude{};
  double omega = 0.0;
  double phi_x = 0.0;
  double phi_y = 0.0;
  /// Integrator step delta / 2pi.
  double time_step_delta = 0.01;

  double duration() const { return kTwoPi * duration_over_2pi; }
  double step() const { return kTwoPi * time_step_delta; }

  /// True when there are no transverse fields of either kind, so H is
  /// diagonal and time independent.
  bool is_diagonal() const;
  bool has_sinusoidal_field() const;

  bool operator==(const EOParams&) const = default;
};

/// H(t) = -J S1z S2z - sum h[j][a] S_j^a
///        - sum_j h~[j][x] S_j^x sin(wt + phi_x) - sum_j h~[j][y] S_j^y sin(wt + phi_y)
/// with t measured from the start of the operation.
Matrix4 hamiltonian_at(const EOParams& params, double t);

/// Diagonal of H for the z-only part (J and the static z fields), in basis order.
std::array<double, 4> diagonal_energies(const EOParams& params);

struct MachineReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks 0 < gamma < 1, h2z = gamma h1z for the machine, and that every
/// spin-2 field of `params` is gamma times the matching spin-1 field.
MachineReport validate_machine(const EOParams& params, const MachineConfig& machine);

/// Same checks, throwing ValidationError that lists every offending field.
void enforce_machine(const EOParams& params, const MachineConfig& machine);

}  // namespace nmrqc
