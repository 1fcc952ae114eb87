#pragma once

#include "nmrqc/hamiltonian.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nmrqc {

/// gamma = h2z / h1z approximated by N / M with 0 < N < M.
struct RationalGamma {
  int N = 1;
  int M = 4;

  double value() const { return static_cast<double>(N) / M; }
  bool operator==(const RationalGamma&) const = default;
};

enum class SfMode { rotating, static_axis };
enum class Direction { forward, inverse };

/// A resonant sinusoidal-field pulse that rotates one spin by `angle` about
/// x or y while (approximately) returning the other spin to its initial state.
///
/// Target spin 1: t h1z / 2pi = 2kMN^2, target amplitude h1z (angle/2pi) / (2kMN^2).
/// Target spin 2: t h1z / 2pi = 2kM^3,  target amplitude h1z (angle/2pi) / (2kM^3).
/// The other spin always sees gamma times the spin-1 field. A static-axis
/// pulse carries twice the rotating amplitude because only its co-rotating
/// half drives the spin.
struct PulseDesign {
  int target_spin = 1;
  double angle = 0.0;  // radians, [0, 4pi]
  Axis axis = Axis::y;
  Direction direction = Direction::forward;
  SfMode mode = SfMode::rotating;
  int k = 1;
  RationalGamma gamma;
  long long s = 0;           // 2kMN^2, the label of a pulse family
  double t_over_2pi = 0.0;   // pulse duration / 2pi
  double amplitude_spin1 = 0.0;  // field strength seen by spin 1 (unsigned)
  double amplitude_spin2 = 0.0;  // field strength seen by spin 2 (unsigned)
  double omega = 0.0;
  double phi_x = 0.0;
  double phi_y = 0.0;
  long long margin = 0;      // 2kNM(M - N)
};

struct DesignedPulse {
  PulseDesign design;
  EOParams eo;
};

/// Throws ConfigError when angle is outside [0, 4pi], k < 1, the target spin
/// is not 1 or 2, the axis is z, or gamma is not a proper fraction.
/// `delta` is the integrator step stored on the operation.
DesignedPulse design_pulse(int target_spin, double angle, Axis axis, Direction direction,
                           RationalGamma gamma, int k, SfMode mode,
                           const MachineConfig& machine = {}, double delta = 0.01);

enum class MarginVerdict { poor, marginal, good };

struct CommensurabilityMargin {
  long long value = 0;
  MarginVerdict verdict = MarginVerdict::poor;
};

/// 2kNM(M - N). Verdict thresholds: poor below 50, marginal below 500.
CommensurabilityMargin commensurability_margin(RationalGamma gamma, int k);
std::string_view to_string(MarginVerdict verdict);

/// Operator-norm distance from the identity of the spectator spin's
/// rotating-frame evolution exp(i t S.v), v = (0, h~_spectator, dh_z):
/// 2 |sin(t |v| / 4)|. Zero exactly when t |v| is a multiple of 4pi.
/// Rotating-mode designs only.
double spectator_residual(const PulseDesign& design, const MachineConfig& machine = {});

/// The 2x2 spectator evolution exp(i t S.v) in closed form.
Matrix2 spectator_rotation(const PulseDesign& design, const MachineConfig& machine = {});

/// (t1/2pi, t2/2pi) = (2kMN^2, 2kM^3) in units of 1/h1z.
std::pair<long long, long long> hypothetical_durations(RationalGamma gamma, int k);

struct Rational {
  long long num = 0;
  long long den = 1;
};

/// Accepts "p/q", integers and finite decimals ("0.25"). Anything else,
/// including symbolic constants, throws ConfigError.
Rational parse_rational(std::string_view text);

struct CommensurabilityCheck {
  /// Per frequency j >= 2: reduced ratio N_j / M_j = f_j / f_1 and the
  /// smallest k1 step satisfying k1 (M_j - N_j) = M_j n_j.
  std::vector<Rational> ratios;
  std::vector<long long> required_multiple;
  long long smallest_k1 = 1;
  bool commensurate = true;
};

/// Frequencies are taken relative to the first. Needs at least two positive
/// rational frequencies.
CommensurabilityCheck commensurability_check_n(const std::vector<Rational>& frequencies);

std::string_view to_string(SfMode mode);
std::string_view to_string(Direction direction);

}  // namespace nmrqc
