#include "nmrqc/pulse_designer.hpp"

#include "nmrqc/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

namespace nmrqc {

namespace {

void require_gamma(RationalGamma gamma) {
  if (!(gamma.N > 0 && gamma.N < gamma.M)) {
    throw ConfigError("gamma = N/M needs 0 < N < M, got " + std::to_string(gamma.N) +
                      "/" + std::to_string(gamma.M));
  }
}

void require_k(int k) {
  if (k < 1) throw ConfigError("k must be a positive integer, got " + std::to_string(k));
}

long long spin1_periods(RationalGamma g, int k) {
  return 2LL * k * g.M * g.N * g.N;
}

long long spin2_periods(RationalGamma g, int k) {
  return 2LL * k * g.M * g.M * g.M;
}

}  // namespace

DesignedPulse design_pulse(int target_spin, double angle, Axis axis, Direction direction,
                           RationalGamma gamma, int k, SfMode mode,
                           const MachineConfig& machine, double delta) {
  require_gamma(gamma);
  require_k(k);
  if (target_spin != 1 && target_spin != 2) {
    throw ConfigError("target spin must be 1 or 2");
  }
  if (axis == Axis::z) throw ConfigError("pulses rotate about x or y");
  if (!(angle >= 0.0 && angle <= 2.0 * kTwoPi)) {
    throw ConfigError("rotation angle must lie in [0, 4pi], got " + std::to_string(angle));
  }
  if (!(machine.gamma > 0.0)) throw ConfigError("machine gamma must be positive");

  PulseDesign d;
  d.target_spin = target_spin;
  d.angle = angle;
  d.axis = axis;
  d.direction = direction;
  d.mode = mode;
  d.k = k;
  d.gamma = gamma;
  d.s = spin1_periods(gamma, k);
  d.margin = commensurability_margin(gamma, k).value;

  const double turns = angle / kTwoPi;
  const long long periods = target_spin == 1 ? spin1_periods(gamma, k) : spin2_periods(gamma, k);
  d.t_over_2pi = static_cast<double>(periods) / machine.h1z;
  const double target = machine.h1z * turns / static_cast<double>(periods);
  if (target_spin == 1) {
    d.amplitude_spin1 = target;
    d.amplitude_spin2 = machine.gamma * target;
    d.omega = machine.h1z;
  } else {
    d.amplitude_spin2 = target;
    d.amplitude_spin1 = target / machine.gamma;
    d.omega = machine.h2z;
  }
  if (mode == SfMode::static_axis) {
    d.amplitude_spin1 *= 2.0;
    d.amplitude_spin2 *= 2.0;
  }

  EOParams eo;
  eo.label = std::string(1, axis == Axis::x ? 'X' : 'Y') + std::to_string(target_spin) +
             (direction == Direction::inverse ? "bar" : "") + " " + std::string(to_string(mode)) +
             " k=" + std::to_string(k);
  eo.duration_over_2pi = d.t_over_2pi;
  eo.J = machine.J;
  eo.static_field[0][2] = machine.h1z;
  eo.static_field[1][2] = machine.h2z;
  eo.omega = d.omega;
  eo.time_step_delta = delta;

  const double sign = direction == Direction::inverse ? -1.0 : 1.0;
  const double a1 = sign * d.amplitude_spin1;
  const double a2 = sign * d.amplitude_spin2;
  if (mode == SfMode::rotating) {
    // y: h~ (Sx sin wt + Sy cos wt); x: h~ (Sx cos wt - Sy sin wt).
    if (axis == Axis::y) {
      d.phi_x = 0.0;
      d.phi_y = M_PI / 2;
      eo.sf_amplitude = {{{a1, a1}, {a2, a2}}};
    } else {
      d.phi_x = -M_PI / 2;
      d.phi_y = 0.0;
      eo.sf_amplitude = {{{-a1, -a1}, {-a2, -a2}}};
    }
  } else {
    // A field along x drives a y rotation and vice versa.
    if (axis == Axis::y) {
      eo.sf_amplitude = {{{a1, 0.0}, {a2, 0.0}}};
    } else {
      eo.sf_amplitude = {{{0.0, -a1}, {0.0, -a2}}};
    }
  }
  eo.phi_x = d.phi_x;
  eo.phi_y = d.phi_y;
  return {d, eo};
}

CommensurabilityMargin commensurability_margin(RationalGamma gamma, int k) {
  require_gamma(gamma);
  require_k(k);
  CommensurabilityMargin m;
  m.value = 2LL * k * gamma.N * gamma.M * (gamma.M - gamma.N);
  m.verdict = m.value < 50 ? MarginVerdict::poor
              : m.value < 500 ? MarginVerdict::marginal
                              : MarginVerdict::good;
  return m;
}

std::string_view to_string(MarginVerdict verdict) {
  switch (verdict) {
    case MarginVerdict::poor:
      return "poor";
    case MarginVerdict::marginal:
      return "marginal";
    case MarginVerdict::good:
      return "good";
  }
  return "?";
}

namespace {

struct SpectatorField {
  double transverse;
  double detuning;  // h_spectator_z - h_target_z
};

SpectatorField spectator_field(const PulseDesign& d, const MachineConfig& machine) {
  if (d.mode != SfMode::rotating) {
    throw ConfigError("spectator residual is defined for rotating-field pulses");
  }
  if (d.target_spin == 1) return {d.amplitude_spin2, machine.h2z - machine.h1z};
  return {d.amplitude_spin1, machine.h1z - machine.h2z};
}

}  // namespace

double spectator_residual(const PulseDesign& design, const MachineConfig& machine) {
  const SpectatorField f = spectator_field(design, machine);
  const double v = std::hypot(f.transverse, f.detuning);
  const double t = kTwoPi * design.t_over_2pi;
  return 2.0 * std::abs(std::sin(t * v / 4.0));
}

Matrix2 spectator_rotation(const PulseDesign& design, const MachineConfig& machine) {
  const SpectatorField f = spectator_field(design, machine);
  const double v = std::hypot(f.transverse, f.detuning);
  const double t = kTwoPi * design.t_over_2pi;
  Matrix2 m = Matrix2::Identity() * std::cos(t * v / 2.0);
  if (v == 0.0) return m;
  Matrix2 n;
  n << f.detuning, Complex(0, -f.transverse), Complex(0, f.transverse), -f.detuning;
  m += Complex(0, std::sin(t * v / 2.0) / v) * n;
  return m;
}

std::pair<long long, long long> hypothetical_durations(RationalGamma gamma, int k) {
  require_gamma(gamma);
  require_k(k);
  return {spin1_periods(gamma, k), spin2_periods(gamma, k)};
}

Rational parse_rational(std::string_view text) {
  auto bad = [text]() -> Rational {
    throw ConfigError("'" + std::string(text) + "' is not a rational number");
  };
  auto parse_int = [](std::string_view s, long long& out) {
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
  };
  Rational r;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    if (!parse_int(text.substr(0, slash), r.num) || !parse_int(text.substr(slash + 1), r.den)) {
      return bad();
    }
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15) return bad();
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return bad();
    }
    long long w = 0;
    if (!whole.empty() && whole != "-" && !parse_int(whole, w)) return bad();
    long long f = 0;
    if (!parse_int(frac, f)) return bad();
    r.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) r.den *= 10;
    const bool negative = !whole.empty() && whole.front() == '-';
    r.num = std::abs(w) * r.den + f;
    if (negative) r.num = -r.num;
  } else if (!parse_int(text, r.num)) {
    return bad();
  }
  if (r.den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  if (r.den < 0) {
    r.den = -r.den;
    r.num = -r.num;
  }
  const long long g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

CommensurabilityCheck commensurability_check_n(const std::vector<Rational>& frequencies) {
  if (frequencies.size() < 2) {
    throw ConfigError("commensurability check needs at least two frequencies");
  }
  for (const Rational& f : frequencies) {
    if (f.den <= 0 || f.num <= 0) throw ConfigError("frequencies must be positive rationals");
  }
  CommensurabilityCheck check;
  const Rational& ref = frequencies.front();
  for (std::size_t j = 1; j < frequencies.size(); ++j) {
    // f_j / f_1 = (a/b) / (c/d) = ad / bc
    long long n = frequencies[j].num * ref.den;
    long long m = frequencies[j].den * ref.num;
    const long long g = std::gcd(n, m);
    n /= g;
    m /= g;
    check.ratios.push_back({n, m});
    const long long step = m / std::gcd(m, std::abs(m - n));
    check.required_multiple.push_back(step);
    check.smallest_k1 = std::lcm(check.smallest_k1, step);
  }
  return check;
}

std::string_view to_string(SfMode mode) {
  return mode == SfMode::rotating ? "rotating" : "static";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::forward ? "forward" : "inverse";
}

}  // namespace nmrqc
