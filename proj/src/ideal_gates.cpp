#include "nmrqc/ideal_gates.hpp"

#include "nmrqc/errors.hpp"

#include <cmath>

namespace nmrqc {

namespace {

double mod_two_turns(double turns) {
  double r = std::fmod(turns, 2.0);
  if (r < 0.0) r += 2.0;
  return r;
}

Matrix4 diagonal_evolution(const EOParams& eo) {
  const auto energies = diagonal_energies(eo);
  Matrix4 u = Matrix4::Zero();
  for (int k = 0; k < 4; ++k) {
    const double turns = std::fmod(energies[k] * eo.duration_over_2pi, 1.0);
    u(k, k) = std::polar(1.0, -kTwoPi * turns);
  }
  return u;
}

}  // namespace

std::string GateToken::name() const {
  switch (kind) {
    case GateKind::ising:
      return "I";
    case GateKind::ising_machine:
      return "Ip";
    case GateKind::conditional_phase:
      return "G";
    case GateKind::cnot:
      return "CNOT";
    case GateKind::rotation:
      break;
  }
  std::string s(1, axis == Axis::x ? 'X' : 'Y');
  s += std::to_string(spin);
  if (prime == Prime::single) s += "p";
  if (prime == Prime::double_) s += "pp";
  if (inverse) s += "bar";
  return s;
}

GateToken parse_gate(std::string_view name) {
  GateToken t;
  if (name == "I") return {GateKind::ising};
  if (name == "Ip") return {GateKind::ising_machine};
  if (name == "G") return {GateKind::conditional_phase};
  if (name == "CNOT") return {GateKind::cnot};

  std::string_view rest = name;
  auto fail = [name]() -> GateToken {
    throw ConfigError("unknown gate '" + std::string(name) + "'");
  };
  if (rest.size() < 2) return fail();
  if (rest[0] == 'X') {
    t.axis = Axis::x;
  } else if (rest[0] == 'Y') {
    t.axis = Axis::y;
  } else {
    return fail();
  }
  if (rest[1] != '1' && rest[1] != '2') return fail();
  t.spin = rest[1] - '0';
  rest.remove_prefix(2);
  if (rest.ends_with("bar")) {
    t.inverse = true;
    rest.remove_suffix(3);
  }
  if (rest == "p") {
    t.prime = Prime::single;
  } else if (rest == "pp") {
    t.prime = Prime::double_;
  } else if (!rest.empty()) {
    return fail();
  }
  // Only the primed rotations that appear in the CNOT and G constructions exist.
  if (t.prime == Prime::single && t.axis == Axis::y && t.spin == 2) return fail();
  if (t.prime == Prime::double_ && t.axis == Axis::y) return fail();
  return t;
}

double ising_duration_over_2pi(const MachineConfig& machine) {
  if (!(machine.J < 0.0)) {
    throw ConfigError("the Ising evolution needs J < 0");
  }
  return -1.0 / (2.0 * machine.J);
}

PrimedAngles derive_primed_angles(const MachineConfig& machine) {
  if (!(machine.h1z > 0.0)) throw ConfigError("h1z must be positive");
  const double tau = ising_duration_over_2pi(machine);
  const double h = -machine.J / 2.0;
  PrimedAngles a;
  a.x1p = -mod_two_turns(tau * (machine.h1z - h));
  a.x2p = -mod_two_turns(tau * (machine.h2z - h));
  // Y1 X1p Y1bar and X1bar Y1p X1 both conjugate the rotation onto +z, so the
  // y-rotation carries the same sign as the x-rotation.
  a.y1p = a.x1p;
  a.x1pp = -mod_two_turns(tau * machine.h1z);
  a.x2pp = -mod_two_turns(tau * machine.h2z);
  return a;
}

double rotation_turns(const GateToken& token, const MachineConfig& machine) {
  if (token.kind != GateKind::rotation) {
    throw ConfigError("'" + token.name() + "' is not a single-spin rotation");
  }
  double turns = 0.25;
  if (token.prime != Prime::none) {
    const PrimedAngles a = derive_primed_angles(machine);
    if (token.prime == Prime::double_) {
      turns = token.spin == 1 ? a.x1pp : a.x2pp;
    } else if (token.axis == Axis::y) {
      turns = a.y1p;
    } else {
      turns = token.spin == 1 ? a.x1p : a.x2p;
    }
  }
  return token.inverse ? -turns : turns;
}

Matrix4 rotation_matrix(int spin, Axis axis, double angle) {
  if (axis == Axis::z) throw ConfigError("rotation axis must be x or y");
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  Matrix2 m;
  if (axis == Axis::x) {
    m << c, Complex(0, s), Complex(0, s), c;
  } else {
    m << c, s, -s, c;
  }
  return embed_single(m, spin, 2);
}

Matrix4 phase_gate(const std::array<double, 4>& phases) {
  Matrix4 p = Matrix4::Zero();
  for (int k = 0; k < 4; ++k) p(k, k) = std::polar(1.0, phases[k]);
  return p;
}

IdealGate ideal_gate(const GateToken& token, const MachineConfig& machine) {
  switch (token.kind) {
    case GateKind::rotation:
      return {token.name(), rotation_matrix(token.spin, token.axis,
                                            kTwoPi * rotation_turns(token, machine))};
    case GateKind::ising:
    case GateKind::ising_machine:
      return {token.name(), diagonal_evolution(ideal_eo_params(token, machine))};
    case GateKind::conditional_phase:
      return {token.name(),
              phase_gate({-M_PI / 4, M_PI / 4, M_PI / 4, -M_PI / 4})};
    case GateKind::cnot: {
      Matrix4 m = Matrix4::Zero();
      m(0, 0) = m(1, 3) = m(2, 2) = m(3, 1) = 1.0;
      return {token.name(), std::polar(1.0, M_PI / 4) * m};
    }
  }
  throw ConfigError("unknown gate kind");
}

IdealGate ideal_gate(std::string_view name, const MachineConfig& machine) {
  return ideal_gate(parse_gate(name), machine);
}

Matrix4 compose(std::span<const std::string> written_order, const MachineConfig& machine) {
  if (written_order.empty()) throw ConfigError("cannot compose an empty sequence");
  Matrix4 m = Matrix4::Identity();
  for (const std::string& name : written_order) m = m * ideal_gate(name, machine).matrix;
  return m;
}

EOParams ideal_eo_params(const GateToken& token, const MachineConfig& machine) {
  EOParams eo;
  eo.label = token.name();
  eo.J = machine.J;
  eo.time_step_delta = 1.0;
  switch (token.kind) {
    case GateKind::rotation: {
      const int j = token.spin - 1;
      const int a = static_cast<int>(token.axis);
      if (token.prime == Prime::none) {
        eo.duration_over_2pi = 0.25;
        eo.static_field[j][a] = token.inverse ? -1.0 : 1.0;
      } else {
        eo.duration_over_2pi = 1.0;
        eo.static_field[j][a] = rotation_turns(token, machine);
      }
      return eo;
    }
    case GateKind::ising: {
      const double h = -machine.J / 2.0;
      eo.duration_over_2pi = ising_duration_over_2pi(machine);
      eo.static_field[0][2] = h;
      eo.static_field[1][2] = h;
      return eo;
    }
    case GateKind::ising_machine:
      eo.duration_over_2pi = ising_duration_over_2pi(machine);
      eo.static_field[0][2] = machine.h1z;
      eo.static_field[1][2] = machine.h2z;
      return eo;
    case GateKind::conditional_phase:
      // exp(i tau J S1z S2z) with tau J = -pi is G itself; no fields needed.
      eo.duration_over_2pi = ising_duration_over_2pi(machine);
      return eo;
    case GateKind::cnot:
      break;
  }
  throw ConfigError("CNOT is a sequence of operations, not a single one");
}

EOParams ideal_eo_params(std::string_view name, const MachineConfig& machine) {
  return ideal_eo_params(parse_gate(name), machine);
}

double phase_aligned_distance(const Matrix4& a, const Matrix4& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : 1.0;
  return (a - phase * b).cwiseAbs().maxCoeff();
}

double phase_aligned_distance(const StateVector& a, const StateVector& b) {
  const Complex overlap = b.amplitudes().dot(a.amplitudes());
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : 1.0;
  return (a.amplitudes() - phase * b.amplitudes()).cwiseAbs().maxCoeff();
}

}  // namespace nmrqc
