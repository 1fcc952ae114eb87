#include "nmrqc/programs.hpp"

#include "nmrqc/errors.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace nmrqc {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

EOParams pulse_for(const GateToken& token, const GateImplStyle& style) {
  const double turns = rotation_turns(token, style.machine);
  const Direction dir = turns < 0.0 ? Direction::inverse : Direction::forward;
  const SfMode mode = style.kind == StyleKind::rotating_sf ? SfMode::rotating : SfMode::static_axis;
  EOParams eo = design_pulse(token.spin, kTwoPi * std::abs(turns), token.axis, dir, style.gamma,
                             style.k, mode, style.machine, style.delta)
                    .eo;
  eo.label = token.name();
  return eo;
}

// H_NMR with tau = -pi/J: the machine's own z fields plus the coupling.
EOParams machine_diagonal(const MachineConfig& machine, double duration_over_2pi,
                          std::string label) {
  EOParams eo;
  eo.label = std::move(label);
  eo.duration_over_2pi = duration_over_2pi;
  eo.J = machine.J;
  eo.static_field[0][2] = machine.h1z;
  eo.static_field[1][2] = machine.h2z;
  return eo;
}

void append(std::vector<EOParams>& out, const std::vector<EOParams>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

std::vector<EOParams> written_to_operations(const std::vector<std::string>& written,
                                            const GateImplStyle& style) {
  std::vector<EOParams> out;
  for (auto it = written.rbegin(); it != written.rend(); ++it) {
    append(out, gate_operations(*it, style));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("'" + std::string(s) + "' is not a number");
  }
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

GateImplStyle GateImplStyle::ideal_gates(const MachineConfig& machine) {
  GateImplStyle s;
  s.kind = StyleKind::ideal;
  s.machine = machine;
  return s;
}

GateImplStyle GateImplStyle::rotating(int k, const MachineConfig& machine) {
  GateImplStyle s;
  s.kind = StyleKind::rotating_sf;
  s.k = k;
  s.machine = machine;
  return s;
}

GateImplStyle GateImplStyle::static_axis(int k, const MachineConfig& machine) {
  GateImplStyle s = rotating(k, machine);
  s.kind = StyleKind::static_sf;
  return s;
}

long long GateImplStyle::s() const {
  return 2LL * k * gamma.M * gamma.N * gamma.N;
}

std::string GateImplStyle::describe() const {
  if (kind == StyleKind::ideal) return "ideal";
  return std::string(to_string(kind)) + " s=" + std::to_string(s());
}

std::string_view to_string(StyleKind kind) {
  switch (kind) {
    case StyleKind::ideal:
      return "ideal";
    case StyleKind::static_sf:
      return "static_sf";
    case StyleKind::rotating_sf:
      return "rotating_sf";
  }
  return "?";
}

StyleKind parse_style(std::string_view text) {
  const std::string t = lower(text);
  if (t == "ideal") return StyleKind::ideal;
  if (t == "static_sf" || t == "static") return StyleKind::static_sf;
  if (t == "rotating_sf" || t == "rotating") return StyleKind::rotating_sf;
  throw ConfigError("unknown style '" + std::string(text) + "'");
}

StateVector InputSpec::prepare() const {
  if (singlet) return prepare_singlet();
  return prepare_basis_state(2, {bits[0], bits[1]});
}

std::string InputSpec::label() const {
  if (singlet) return "singlet";
  return std::to_string(bits[0]) + std::to_string(bits[1]);
}

InputSpec parse_input(std::string_view text) {
  const std::string t = lower(trim(text));
  if (t == "singlet") return InputSpec::singlet_state();
  if (t.size() == 2 && (t[0] == '0' || t[0] == '1') && (t[1] == '0' || t[1] == '1')) {
    return InputSpec::basis(t[0] - '0', t[1] - '0');
  }
  throw ConfigError("unknown input '" + std::string(text) + "'");
}

std::string_view to_string(FinalRotationStyle style) {
  return style == FinalRotationStyle::program ? "program" : "exact";
}

FinalRotationStyle parse_final_rotation_style(std::string_view text) {
  if (text == "program") return FinalRotationStyle::program;
  if (text == "exact") return FinalRotationStyle::exact;
  throw ConfigError("final rotation style must be program or exact, got '" +
                    std::string(text) + "'");
}

CnotVariant parse_cnot_variant(std::string_view text) {
  if (text == "1") return CnotVariant::v1;
  if (text == "2") return CnotVariant::v2;
  if (text == "3") return CnotVariant::v3;
  if (text == "3alt" || text == "4") return CnotVariant::v3_alt;
  throw ConfigError("unknown CNOT variant '" + std::string(text) + "'");
}

std::string_view to_string(CnotVariant variant) {
  switch (variant) {
    case CnotVariant::v1:
      return "1";
    case CnotVariant::v2:
      return "2";
    case CnotVariant::v3:
      return "3";
    case CnotVariant::v3_alt:
      return "3alt";
  }
  return "?";
}

std::vector<std::string> cnot_written_order(CnotVariant variant) {
  switch (variant) {
    case CnotVariant::v1:
      return {"Y1", "X1p", "Y1bar", "X2p", "Y2bar", "Ip", "Y2"};
    case CnotVariant::v2:
      return {"Y1", "X1p", "X2p", "Y1bar", "Y2bar", "Ip", "Y2"};
    case CnotVariant::v3:
      return {"X1bar", "Y1p", "X2p", "X1", "Y2bar", "Ip", "Y2"};
    case CnotVariant::v3_alt:
      return {"X1bar", "Y1p", "X2p", "Y2bar", "X1", "Ip", "Y2"};
  }
  throw ConfigError("unknown CNOT variant");
}

std::vector<EOParams> gate_operations(std::string_view name, const GateImplStyle& style) {
  const GateToken token = parse_gate(name);
  const MachineConfig& m = style.machine;
  switch (token.kind) {
    case GateKind::rotation:
      if (style.kind == StyleKind::ideal) return {ideal_eo_params(token, m)};
      return {pulse_for(token, style)};
    case GateKind::ising:
    case GateKind::ising_machine:
      return {ideal_eo_params(token, m)};
    case GateKind::conditional_phase: {
      if (style.kind == StyleKind::ideal) return {ideal_eo_params(token, m)};
      std::vector<EOParams> out{machine_diagonal(m, ising_duration_over_2pi(m), "G.diag")};
      for (const char* g : {"Y1bar", "X1pp", "Y1", "Y2bar", "X2pp", "Y2"}) {
        append(out, gate_operations(g, style));
      }
      return out;
    }
    case GateKind::cnot:
      return written_to_operations(cnot_written_order(CnotVariant::v1), style);
  }
  throw ConfigError("unknown gate '" + std::string(name) + "'");
}

Program build_cnot(CnotVariant variant, const GateImplStyle& style, InputSpec input) {
  Program p;
  p.name = "CNOT" + std::string(to_string(variant)) + " " + style.describe();
  p.eos = written_to_operations(cnot_written_order(variant), style);
  p.input = input;
  if (!input.singlet) {
    const int b1 = input.bits[0];
    const int b2 = input.bits[1];
    p.expected = std::array<double, 2>{double(b1), double(b1 ^ b2)};
  }
  return p;
}

Program build_qa(QaKind which, InputSpec input, CnotVariant variant, const GateImplStyle& style,
                 FinalRotationStyle final_rotation) {
  if (which == QaKind::qa1 && input.singlet) {
    throw ConfigError("QA1 runs on a basis state");
  }
  if (which == QaKind::qa2 && !input.singlet) {
    throw ConfigError("QA2 runs on the singlet state");
  }
  const Program cnot = build_cnot(variant, style, input);
  Program p;
  p.input = input;
  for (int rep = 0; rep < 5; ++rep) append(p.eos, cnot.eos);
  if (which == QaKind::qa1) {
    p.name = "(CNOT" + std::string(to_string(variant)) + ")^5|" + input.label() + "> " +
             style.describe();
    p.expected = cnot.expected;
    return p;
  }
  p.name = "Y1 (CNOT" + std::string(to_string(variant)) + ")^5|singlet> " + style.describe();
  if (final_rotation == FinalRotationStyle::program) {
    append(p.eos, gate_operations("Y1", style));
  } else {
    MachineConfig exact = style.machine;
    exact.J = 0.0;
    EOParams y1 = ideal_eo_params("Y1", exact);
    y1.label = "Y1.exact";
    p.eos.push_back(y1);
  }
  p.expected = std::array<double, 2>{1.0, 1.0};
  return p;
}

Program build_qa_for_input(InputSpec input, CnotVariant variant, const GateImplStyle& style,
                           FinalRotationStyle final_rotation) {
  return build_qa(input.singlet ? QaKind::qa2 : QaKind::qa1, input, variant, style,
                  final_rotation);
}

Program build_grover(int item, const GateImplStyle& style) {
  if (item < 0 || item > 3) {
    throw ConfigError("Grover item must be 0..3, got " + std::to_string(item));
  }
  const bool bit1 = (item & 1) != 0;
  const bool bit2 = (item & 2) != 0;
  // Application order: uniform superposition, oracle, inversion about the
  // mean. The oracle block inverts the X on the *other* spin.
  const std::vector<std::string> seq = {
      "Y2bar", "X2bar", "X2bar", "Y1bar", "X1bar", "X1bar",
      "G",
      "Y2bar", bit1 ? "X2bar" : "X2", "Y1bar", bit2 ? "X1bar" : "X1",
      "G",
      "Y2bar", "X2", "Y1bar", "X1"};
  Program p;
  p.name = "Grover item " + std::to_string(item) + " " + style.describe();
  for (const std::string& g : seq) append(p.eos, gate_operations(g, style));
  p.input = InputSpec::basis(0, 0);
  p.expected = std::array<double, 2>{bit1 ? 1.0 : 0.0, bit2 ? 1.0 : 0.0};
  return p;
}

int perturb_durations(Program& program, std::string_view label, double offset) {
  int changed = 0;
  for (EOParams& eo : program.eos) {
    if (eo.label != label) continue;
    eo.duration_over_2pi += offset;
    if (eo.duration_over_2pi < 0.0) {
      throw ConfigError("perturbed duration of '" + eo.label + "' is negative");
    }
    ++changed;
  }
  return changed;
}

Matrix4 PropagatorCache::get(const EOParams& eo, const IntegratorConfig& cfg, double t_origin) {
  auto matches = [&](const Entry& e) {
    return e.t_origin == t_origin && e.delta == cfg.delta && e.method == cfg.method && e.eo == eo;
  };
  {
    std::lock_guard lock(mutex_);
    for (const Entry& e : entries_) {
      if (matches(e)) return e.u;
    }
  }
  const Matrix4 u = propagator(eo, cfg, t_origin);
  std::lock_guard lock(mutex_);
  for (const Entry& e : entries_) {
    if (matches(e)) return e.u;
  }
  entries_.push_back({eo, t_origin, cfg.delta, cfg.method, u});
  return u;
}

std::size_t PropagatorCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

Matrix4 program_unitary(const Program& program, const IntegratorConfig& cfg,
                        PropagatorCache* cache) {
  PropagatorCache local;
  PropagatorCache& c = cache ? *cache : local;
  Matrix4 u = Matrix4::Identity();
  double elapsed = 0.0;
  for (const EOParams& eo : program.eos) {
    const double origin = program.continuous_clock ? elapsed : 0.0;
    u = c.get(eo, cfg, origin) * u;
    elapsed += eo.duration();
  }
  return u;
}

RunResult run_program(const Program& program, const IntegratorConfig& cfg,
                      PropagatorCache* cache) {
  const Matrix4 u = program_unitary(program, cfg, cache);
  const StateVector in = program.input.prepare();
  StateVector out(2, Eigen::VectorXcd(u * in.amplitudes()));
  const double a = expectation_qubit(out, 1).value;
  const double b = expectation_qubit(out, 2).value;
  return {std::move(out), a, b};
}

double parse_angle(std::string_view text) {
  std::string t = lower(trim(text));
  if (t.empty()) throw ConfigError("empty angle");
  double sign = 1.0;
  if (t.front() == '-') {
    sign = -1.0;
    t.erase(0, 1);
  }
  std::string_view num = t;
  double den = 1.0;
  if (const auto slash = t.find('/'); slash != std::string::npos) {
    num = std::string_view(t).substr(0, slash);
    den = parse_number(std::string_view(t).substr(slash + 1));
    if (den == 0.0) throw ConfigError("zero denominator in angle '" + std::string(text) + "'");
  }
  double value = 1.0;
  std::size_t start = 0;
  while (start <= num.size()) {
    const std::size_t star = num.find('*', start);
    std::string_view factor =
        num.substr(start, star == std::string_view::npos ? std::string_view::npos : star - start);
    if (factor.ends_with("pi")) {
      factor.remove_suffix(2);
      value *= M_PI;
    }
    if (!factor.empty()) value *= parse_number(factor);
    if (star == std::string_view::npos) break;
    start = star + 1;
  }
  return sign * value / den;
}

Program parse_program(std::string_view text, const GateImplStyle& style) {
  Program p;
  p.name = "program " + style.describe();
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      if (w[0] == "gate" && w.size() == 2) {
        append(p.eos, gate_operations(w[1], style));
      } else if (w[0] == "pulse" && w.size() == 6) {
        const int spin = parse_int(w[1], "spin");
        const double angle = parse_angle(w[2]);
        const std::string axis = lower(w[3]);
        Axis ax;
        Direction dir = Direction::forward;
        if (axis == "x" || axis == "xbar") {
          ax = Axis::x;
        } else if (axis == "y" || axis == "ybar") {
          ax = Axis::y;
        } else {
          throw ConfigError("axis must be x, y, xbar or ybar");
        }
        if (axis.ends_with("bar")) dir = Direction::inverse;
        const std::string mode = lower(w[4]);
        SfMode m;
        if (mode == "rotating") {
          m = SfMode::rotating;
        } else if (mode == "static") {
          m = SfMode::static_axis;
        } else {
          throw ConfigError("mode must be rotating or static");
        }
        const int k = parse_int(w[5], "k");
        p.eos.push_back(
            design_pulse(spin, angle, ax, dir, style.gamma, k, m, style.machine, style.delta).eo);
      } else if (w[0] == "diagonal" && w.size() == 2) {
        const double tau = parse_number(w[1]);
        if (!(tau >= 0.0)) throw ConfigError("diagonal duration must be non-negative");
        p.eos.push_back(machine_diagonal(style.machine, tau, "diagonal"));
      } else if (w[0] == "input" && w.size() == 2) {
        p.input = parse_input(w[1]);
      } else {
        throw ConfigError("expected 'gate <name>', 'pulse <spin> <angle> <axis> <mode> <k>', "
                          "'diagonal <tau_over_2pi>' or 'input <state>'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return p;
}

}  // namespace nmrqc
