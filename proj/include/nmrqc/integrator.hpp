#pragma once

#include "nmrqc/hamiltonian.hpp"
#include "nmrqc/quantum_state.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace nmrqc {

enum class Method {
  /// Symmetric split into spin-1 transverse, spin-2 transverse and diagonal
  /// factors, fields sampled at each substep midpoint. Second order in delta.
  product_formula,
  /// Closed-form phases; only valid when every transverse field is zero.
  exact_diagonal,
  /// Dense 4x4 exponential of H(t_mid) per substep. Used as the oracle.
  dense_midpoint_oracle,
  /// exact_diagonal for diagonal operations, product_formula otherwise.
  automatic,
};

struct IntegratorConfig {
  /// delta / 2pi. When unset the operation's own time_step_delta is used.
  std::optional<double> delta;
  Method method = Method::automatic;
};

/// Round half away from zero to two decimals, the resolution used when
/// comparing against tabulated expectation values.
inline double round_to_hundredths(double x) { return std::round(x * 100.0) / 100.0; }

/// Substep schedule for a duration: `full_steps` of size `step` followed by an
/// optional shorter `remainder` (0 when the duration is a whole multiple).
struct StepSchedule {
  long long full_steps = 0;
  double step = 0.0;
  double remainder = 0.0;
};
StepSchedule make_schedule(double duration_over_2pi, double delta_over_2pi);

/// Propagator of one elementary operation, U(tau) with U(0) = 1.
/// `t_origin` shifts the sinusoidal-field clock: the field argument is
/// omega * (t_origin + t) + phi.
Matrix4 propagator(const EOParams& eo, const IntegratorConfig& cfg = {},
                   double t_origin = 0.0);

/// Solves the time-dependent Schroedinger equation over one operation.
StateVector evolve(const StateVector& state, const EOParams& eo,
                   const IntegratorConfig& cfg = {}, double t_origin = 0.0);

/// Dense midpoint-exponential oracle with step fine_delta (delta / 2pi).
Matrix4 reference_propagator(const EOParams& eo, double fine_delta,
                             double t_origin = 0.0);
StateVector evolve_reference(const StateVector& state, const EOParams& eo,
                             double fine_delta, double t_origin = 0.0);

struct ConvergenceRow {
  double delta = 0.0;
  double a = 0.0;  // <Q1>
  double b = 0.0;  // <Q2>
  /// Max amplitude difference against the reference state; unset for the
  /// row that serves as the reference.
  std::optional<double> deviation;
  StateVector state;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// Set when the two-decimal (a, b) differ between any two rows.
  bool two_digit_mismatch = false;
  /// Oracle step used for the deviations, if one was requested.
  std::optional<double> reference_delta;
};

/// Runs the sequence of operations once per delta. Diagonal operations are
/// applied in closed form; the others use the product formula at that delta.
/// Deviations are measured against the dense oracle at `reference_delta` when
/// given, else against the finest-delta row.
ConvergenceReport convergence_report(std::span<const EOParams> eos,
                                     const StateVector& input,
                                     std::span<const double> deltas,
                                     std::optional<double> reference_delta = {});

}  // namespace nmrqc
