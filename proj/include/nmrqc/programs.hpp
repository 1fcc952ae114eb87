#pragma once

#include "nmrqc/hamiltonian.hpp"
#include "nmrqc/ideal_gates.hpp"
#include "nmrqc/integrator.hpp"
#include "nmrqc/pulse_designer.hpp"
#include "nmrqc/quantum_state.hpp"

#include <array>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmrqc {

enum class StyleKind { ideal, static_sf, rotating_sf };

/// How single-qubit gates become elementary operations. Ideal style uses
/// constant-field operations (integrated with delta/2pi = 1); the SF styles
/// use designed resonant pulses with pulse integer k.
struct GateImplStyle {
  StyleKind kind = StyleKind::ideal;
  int k = 1;
  RationalGamma gamma;
  MachineConfig machine;
  double delta = 0.01;  // integrator step for pulses

  static GateImplStyle ideal_gates(const MachineConfig& machine = {});
  static GateImplStyle rotating(int k, const MachineConfig& machine = {});
  static GateImplStyle static_axis(int k, const MachineConfig& machine = {});

  /// 2kMN^2, the table column label of an SF style.
  long long s() const;
  std::string describe() const;
};

std::string_view to_string(StyleKind kind);
StyleKind parse_style(std::string_view text);

/// Basis state |b1 b2> or the singlet (|01> - |10>)/sqrt(2).
struct InputSpec {
  bool singlet = false;
  std::array<int, 2> bits{0, 0};

  static InputSpec basis(int b1, int b2) { return {false, {b1, b2}}; }
  static InputSpec singlet_state() { return {true, {0, 0}}; }

  StateVector prepare() const;
  std::string label() const;  // "00", "10", ..., "singlet"
  bool operator==(const InputSpec&) const = default;
};

/// Accepts "00", "10", "01", "11" (qubit 1 first) and "singlet".
InputSpec parse_input(std::string_view text);

/// Trailing rotation of QA2: executed in the program's own style, or as the
/// exact rotation matrix.
enum class FinalRotationStyle { program, exact };
std::string_view to_string(FinalRotationStyle style);
FinalRotationStyle parse_final_rotation_style(std::string_view text);

/// A sequence of elementary operations in application order: eos[0] acts
/// first. Operator products are written the other way round, so a product
/// A B C becomes {C, B, A}.
struct Program {
  std::string name;
  std::vector<EOParams> eos;
  InputSpec input;
  /// Ideal (<Q1>, <Q2>); unset for programs read from text.
  std::optional<std::array<double, 2>> expected;
  /// When true the SF clock runs on across operations instead of restarting
  /// at the start of each one.
  bool continuous_clock = false;
};

/// CNOT realizations:
///   1: Y1 X1p Y1bar X2p Y2bar Ip Y2
///   2: Y1 X1p X2p Y1bar Y2bar Ip Y2
///   3: X1bar Y1p X2p X1 Y2bar Ip Y2
///   4: X1bar Y1p X2p Y2bar X1 Ip Y2   (alternative ordering of variant 3)
/// written as operator products. Ip is the machine's diagonal evolution with
/// tau = -pi/J in every style.
enum class CnotVariant { v1 = 1, v2 = 2, v3 = 3, v3_alt = 4 };
CnotVariant parse_cnot_variant(std::string_view text);
std::string_view to_string(CnotVariant variant);

/// Gate names in written (operator) order.
std::vector<std::string> cnot_written_order(CnotVariant variant);

/// The operation(s) that implement one named gate in a style, application
/// order. CNOT expands to variant 1; G expands to its conjugated form in the
/// SF styles.
std::vector<EOParams> gate_operations(std::string_view name, const GateImplStyle& style);

Program build_cnot(CnotVariant variant, const GateImplStyle& style,
                   InputSpec input = InputSpec::basis(0, 0));

enum class QaKind { qa1, qa2 };

/// QA1: five CNOTs on a basis state. QA2: five CNOTs on the singlet followed
/// by Y1. Throws ConfigError when the input does not match the kind.
Program build_qa(QaKind which, InputSpec input, CnotVariant variant,
                 const GateImplStyle& style,
                 FinalRotationStyle final_rotation = FinalRotationStyle::program);

/// Runs QA1 or QA2 depending on whether the input is a basis state.
Program build_qa_for_input(InputSpec input, CnotVariant variant, const GateImplStyle& style,
                           FinalRotationStyle final_rotation = FinalRotationStyle::program);

/// Grover search for item 0..3 starting from |00>; the item index is
/// b1 + 2 b2 of the state that should be found.
Program build_grover(int item, const GateImplStyle& style);

/// Adds `offset` (tau/2pi units) to every operation with the given label.
/// Returns the number of operations changed.
int perturb_durations(Program& program, std::string_view label, double offset);

/// Propagators keyed by (operation, clock origin). Thread-safe.
class PropagatorCache {
 public:
  Matrix4 get(const EOParams& eo, const IntegratorConfig& cfg, double t_origin);
  std::size_t size() const;

 private:
  struct Entry {
    EOParams eo;
    double t_origin;
    std::optional<double> delta;
    Method method;
    Matrix4 u;
  };
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
};

/// Product of every operation's propagator, last operation leftmost.
/// Identity for an empty program.
Matrix4 program_unitary(const Program& program, const IntegratorConfig& cfg = {},
                        PropagatorCache* cache = nullptr);

struct RunResult {
  StateVector output;
  double a = 0.0;
  double b = 0.0;
};

RunResult run_program(const Program& program, const IntegratorConfig& cfg = {},
                      PropagatorCache* cache = nullptr);

/// Text format, one operation per line in application order:
///   gate <name>                                  style-dependent expansion
///   pulse <spin> <angle> <axis> <mode> <k>       axis x|y|xbar|ybar, mode rotating|static
///   diagonal <tau_over_2pi>                      J and the machine z fields only
///   input <00|10|01|11|singlet>
/// Angles accept plain numbers and multiples of pi ("pi/2", "3pi/2",
/// "0.5*pi"). '#' starts a comment.
Program parse_program(std::string_view text, const GateImplStyle& style);

/// Parses an angle expression in radians.
double parse_angle(std::string_view text);

}  // namespace nmrqc
