#include "nmrqc/integrator.hpp"

#include "nmrqc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace nmrqc {

namespace {

// The substep loop runs in extended precision: over ~1e6 substeps the
// rounding of double arithmetic drifts the norm by ~1e-9.
using Wide = long double;
using WideComplex = std::complex<Wide>;
using WideMatrix = Eigen::Matrix<WideComplex, 4, 4>;
using WideVector = Eigen::Matrix<WideComplex, 4, 1>;

// exp(i (dt/2) (bx Sx + by Sy)) = exp(-i dt H_j) for H_j = -(bx Sx + by Sy).
struct SpinFactor {
  WideComplex diag{1.0L, 0.0L};
  WideComplex upper{0.0L, 0.0L};  // <0|U|1>
  WideComplex lower{0.0L, 0.0L};  // <1|U|0>
};

SpinFactor spin_factor(double bx, double by, double dt) {
  const Wide b = std::hypot(static_cast<Wide>(bx), static_cast<Wide>(by));
  if (b == 0.0L) return {};
  const Wide half_angle = 0.5L * b * dt;
  const Wide s = std::sin(half_angle) / b;
  return {WideComplex(std::cos(half_angle), 0.0L), WideComplex(s * by, s * bx),
          WideComplex(-s * by, s * bx)};
}

// Pairs of basis indices that differ only in the given qubit's bit.
constexpr int kPairs[2][2][2] = {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}};

template <typename Block>
void apply_spin(Block& m, int spin, const SpinFactor& f) {
  for (const auto& pair : kPairs[spin]) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const WideComplex lo = m(pair[0], c);
      const WideComplex hi = m(pair[1], c);
      m(pair[0], c) = f.diag * lo + f.upper * hi;
      m(pair[1], c) = f.lower * lo + f.diag * hi;
    }
  }
}

using Phases = std::array<WideComplex, 4>;

template <typename Block>
void apply_phases(Block& m, const Phases& phase) {
  for (int r = 0; r < 4; ++r) m.row(r) *= phase[r];
}

Phases diagonal_step(const std::array<double, 4>& energies, double dt) {
  Phases phase{};
  for (int k = 0; k < 4; ++k) phase[k] = std::polar(1.0L, -static_cast<Wide>(energies[k]) * dt);
  return phase;
}

// One symmetric product-formula substep starting at time t.
template <typename Block>
void product_step(Block& m, const EOParams& eo, const Phases& phases, double t_origin,
                  double t, double dt) {
  const double tm = t_origin + t + 0.5 * dt;
  const double fx = std::sin(eo.omega * tm + eo.phi_x);
  const double fy = std::sin(eo.omega * tm + eo.phi_y);
  SpinFactor half[2];
  for (int j = 0; j < 2; ++j) {
    const double bx = eo.static_field[j][0] + eo.sf_amplitude[j][0] * fx;
    const double by = eo.static_field[j][1] + eo.sf_amplitude[j][1] * fy;
    half[j] = spin_factor(bx, by, 0.5 * dt);
  }
  apply_spin(m, 0, half[0]);
  apply_spin(m, 1, half[1]);
  apply_phases(m, phases);
  apply_spin(m, 1, half[1]);
  apply_spin(m, 0, half[0]);
}

template <typename Block>
void run_schedule(Block& m, const EOParams& eo, const StepSchedule& schedule, double t_origin) {
  const auto energies = diagonal_energies(eo);
  const Phases full = diagonal_step(energies, schedule.step);
  for (long long n = 0; n < schedule.full_steps; ++n) {
    product_step(m, eo, full, t_origin, static_cast<double>(n) * schedule.step, schedule.step);
  }
  if (schedule.remainder > 0.0) {
    product_step(m, eo, diagonal_step(energies, schedule.remainder), t_origin,
                 static_cast<double>(schedule.full_steps) * schedule.step, schedule.remainder);
  }
}

Matrix4 dense_step(const EOParams& eo, double t_origin, double t, double dt) {
  EOParams shifted = eo;
  shifted.phi_x += eo.omega * t_origin;
  shifted.phi_y += eo.omega * t_origin;
  const Matrix4 h = hamiltonian_at(shifted, t + 0.5 * dt);
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(h);
  const Eigen::Vector4d& lambda = solver.eigenvalues();
  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k) phases[k] = std::polar(1.0, -lambda[k] * dt);
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix4 exact_diagonal_propagator(const EOParams& eo) {
  if (!eo.is_diagonal()) {
    throw MethodError("exact_diagonal requested for '" + eo.label +
                      "', which has nonzero transverse fields");
  }
  // Reduce E * tau / 2pi modulo 1 before forming the phase; tau/2pi reaches
  // ~1e6 for the Ising evolutions.
  const auto energies = diagonal_energies(eo);
  Matrix4 u = Matrix4::Zero();
  for (int k = 0; k < 4; ++k) {
    const double turns = std::fmod(energies[k] * eo.duration_over_2pi, 1.0);
    u(k, k) = std::polar(1.0, -kTwoPi * turns);
  }
  return u;
}

double resolve_delta(const EOParams& eo, const IntegratorConfig& cfg) {
  const double delta = cfg.delta.value_or(eo.time_step_delta);
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError("integrator step must be positive, got " + std::to_string(delta));
  }
  return delta;
}

void require_two_qubits(const StateVector& state) {
  if (state.n_qubits() != 2) {
    throw ConfigError("the spin Hamiltonian acts on two qubits, state has " +
                      std::to_string(state.n_qubits()));
  }
}

StateVector to_state(const Eigen::Vector4cd& v) {
  try {
    return StateVector(2, Eigen::VectorXcd(v));
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("evolution lost normalization: ") + e.what());
  }
}

}  // namespace

StepSchedule make_schedule(double duration_over_2pi, double delta_over_2pi) {
  if (!(delta_over_2pi > 0.0)) throw ConfigError("step must be positive");
  if (!(duration_over_2pi >= 0.0)) throw ConfigError("duration must be non-negative");
  StepSchedule s;
  if (duration_over_2pi == 0.0) return s;
  const double ratio = duration_over_2pi / delta_over_2pi;
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * nearest) {
    s.full_steps = static_cast<long long>(nearest);
    s.step = kTwoPi * duration_over_2pi / nearest;
    return s;
  }
  s.full_steps = static_cast<long long>(std::floor(ratio));
  s.step = kTwoPi * delta_over_2pi;
  s.remainder = kTwoPi * duration_over_2pi - static_cast<double>(s.full_steps) * s.step;
  return s;
}

Matrix4 propagator(const EOParams& eo, const IntegratorConfig& cfg, double t_origin) {
  Method method = cfg.method;
  if (method == Method::automatic) {
    method = eo.is_diagonal() ? Method::exact_diagonal : Method::product_formula;
  }
  if (method == Method::exact_diagonal) return exact_diagonal_propagator(eo);

  const double delta = resolve_delta(eo, cfg);
  if (method == Method::dense_midpoint_oracle) {
    return reference_propagator(eo, delta, t_origin);
  }

  WideMatrix u = WideMatrix::Identity();
  run_schedule(u, eo, make_schedule(eo.duration_over_2pi, delta), t_origin);
  return u.cast<Complex>();
}

StateVector evolve(const StateVector& state, const EOParams& eo,
                   const IntegratorConfig& cfg, double t_origin) {
  require_two_qubits(state);
  Method method = cfg.method;
  if (method == Method::automatic) {
    method = eo.is_diagonal() ? Method::exact_diagonal : Method::product_formula;
  }
  if (method != Method::product_formula) {
    IntegratorConfig resolved = cfg;
    resolved.method = method;
    return to_state(propagator(eo, resolved, t_origin) * state.amplitudes());
  }

  const double delta = resolve_delta(eo, cfg);
  WideVector v = state.amplitudes().cast<WideComplex>();
  run_schedule(v, eo, make_schedule(eo.duration_over_2pi, delta), t_origin);
  return to_state(v.cast<Complex>());
}

Matrix4 reference_propagator(const EOParams& eo, double fine_delta, double t_origin) {
  const StepSchedule schedule = make_schedule(eo.duration_over_2pi, fine_delta);
  if (!eo.has_sinusoidal_field()) {
    // H is constant, so one exponential over the whole interval is exact.
    if (eo.duration_over_2pi == 0.0) return Matrix4::Identity();
    return dense_step(eo, t_origin, 0.0, eo.duration());
  }
  Matrix4 u = Matrix4::Identity();
  for (long long n = 0; n < schedule.full_steps; ++n) {
    u = dense_step(eo, t_origin, static_cast<double>(n) * schedule.step, schedule.step) * u;
  }
  if (schedule.remainder > 0.0) {
    const double t = static_cast<double>(schedule.full_steps) * schedule.step;
    u = dense_step(eo, t_origin, t, schedule.remainder) * u;
  }
  return u;
}

StateVector evolve_reference(const StateVector& state, const EOParams& eo,
                             double fine_delta, double t_origin) {
  require_two_qubits(state);
  return to_state(reference_propagator(eo, fine_delta, t_origin) * state.amplitudes());
}

ConvergenceReport convergence_report(std::span<const EOParams> eos,
                                     const StateVector& input,
                                     std::span<const double> deltas,
                                     std::optional<double> reference_delta) {
  if (deltas.empty()) throw ConfigError("convergence report needs at least one delta");
  require_two_qubits(input);

  auto run = [&](double delta, bool oracle) {
    StateVector state = input;
    for (const EOParams& eo : eos) {
      if (eo.is_diagonal()) {
        state = evolve(state, eo, {std::nullopt, Method::exact_diagonal});
      } else if (oracle) {
        state = evolve_reference(state, eo, delta);
      } else {
        state = evolve(state, eo, {delta, Method::product_formula});
      }
    }
    return state;
  };

  ConvergenceReport report;
  report.reference_delta = reference_delta;
  for (double delta : deltas) {
    StateVector out = run(delta, false);
    report.rows.push_back({delta, expectation_qubit(out, 1).value,
                           expectation_qubit(out, 2).value, std::nullopt, out});
  }

  std::size_t finest = 0;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].delta < report.rows[finest].delta) finest = i;
  }
  if (reference_delta) {
    const StateVector ref = run(*reference_delta, true);
    for (auto& row : report.rows) row.deviation = row.state.max_deviation(ref);
  } else {
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      if (i != finest) {
        report.rows[i].deviation = report.rows[i].state.max_deviation(report.rows[finest].state);
      }
    }
  }

  const auto& first = report.rows.front();
  for (const auto& row : report.rows) {
    if (round_to_hundredths(row.a) != round_to_hundredths(first.a) ||
        round_to_hundredths(row.b) != round_to_hundredths(first.b)) {
      report.two_digit_mismatch = true;
    }
  }
  return report;
}

}  // namespace nmrqc
