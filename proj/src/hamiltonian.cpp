#include "nmrqc/hamiltonian.hpp"

#include "nmrqc/errors.hpp"

#include <cmath>
#include <sstream>

namespace nmrqc {

namespace spin {

Matrix2 op(Axis axis) {
  Matrix2 m;
  switch (axis) {
    case Axis::x:
      m << 0, 0.5, 0.5, 0;
      break;
    case Axis::y:
      m << 0, Complex(0, -0.5), Complex(0, 0.5), 0;
      break;
    case Axis::z:
      m << 0.5, 0, 0, -0.5;
      break;
  }
  return m;
}

Matrix4 on(int j, Axis axis) {
  return embed_single(op(axis), j, 2);
}

}  // namespace spin

namespace {

constexpr std::array<char, 3> kAxisName{'x', 'y', 'z'};

}  // namespace

bool EOParams::is_diagonal() const {
  for (const auto& h : static_field) {
    if (h[0] != 0.0 || h[1] != 0.0) return false;
  }
  return !has_sinusoidal_field();
}

bool EOParams::has_sinusoidal_field() const {
  for (const auto& h : sf_amplitude) {
    if (h[0] != 0.0 || h[1] != 0.0) return true;
  }
  return false;
}

std::array<double, 4> diagonal_energies(const EOParams& params) {
  std::array<double, 4> e{};
  const double h1 = params.static_field[0][2];
  const double h2 = params.static_field[1][2];
  for (int i = 0; i < 4; ++i) {
    const double s1 = (i & 1) ? -0.5 : 0.5;
    const double s2 = (i & 2) ? -0.5 : 0.5;
    e[i] = -params.J * s1 * s2 - h1 * s1 - h2 * s2;
  }
  return e;
}

Matrix4 hamiltonian_at(const EOParams& params, double t) {
  Matrix4 h = Matrix4::Zero();
  const auto diag = diagonal_energies(params);
  for (int i = 0; i < 4; ++i) h(i, i) = diag[i];

  const double fx = std::sin(params.omega * t + params.phi_x);
  const double fy = std::sin(params.omega * t + params.phi_y);
  for (int j = 0; j < 2; ++j) {
    const double bx = params.static_field[j][0] + params.sf_amplitude[j][0] * fx;
    const double by = params.static_field[j][1] + params.sf_amplitude[j][1] * fy;
    if (bx != 0.0) h -= bx * spin::on(j + 1, Axis::x);
    if (by != 0.0) h -= by * spin::on(j + 1, Axis::y);
  }
  return h;
}

MachineReport validate_machine(const EOParams& params, const MachineConfig& machine) {
  MachineReport report;
  auto fail = [&report](std::string message) {
    report.ok = false;
    report.violations.push_back(std::move(message));
  };
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  };

  const double g = machine.gamma;
  if (!(g > 0.0 && g < 1.0)) {
    std::ostringstream os;
    os << "gamma = " << g << " is outside (0, 1)";
    fail(os.str());
  }
  if (!close(machine.h2z, g * machine.h1z)) {
    std::ostringstream os;
    os << "machine h2z = " << machine.h2z << " != gamma * h1z = " << g * machine.h1z;
    fail(os.str());
  }
  for (int a = 0; a < 3; ++a) {
    const double h1 = params.static_field[0][a];
    const double h2 = params.static_field[1][a];
    if (!close(h2, g * h1)) {
      std::ostringstream os;
      os << params.label << ": h2" << kAxisName[a] << " = " << h2
         << " != gamma * h1" << kAxisName[a] << " = " << g * h1;
      fail(os.str());
    }
  }
  for (int a = 0; a < 2; ++a) {
    const double h1 = params.sf_amplitude[0][a];
    const double h2 = params.sf_amplitude[1][a];
    if (!close(h2, g * h1)) {
      std::ostringstream os;
      os << params.label << ": sf h2" << kAxisName[a] << " = " << h2
         << " != gamma * sf h1" << kAxisName[a] << " = " << g * h1;
      fail(os.str());
    }
  }
  if (!(params.duration_over_2pi >= 0.0)) {
    fail(params.label + ": negative duration");
  }
  if (!(params.time_step_delta > 0.0)) {
    fail(params.label + ": time step must be positive");
  }
  return report;
}

void enforce_machine(const EOParams& params, const MachineConfig& machine) {
  const MachineReport report = validate_machine(params, machine);
  if (report.ok) return;
  std::string message = "machine constraint violated";
  for (const auto& v : report.violations) message += "\n  " + v;
  throw ValidationError(message);
}

}  // namespace nmrqc
