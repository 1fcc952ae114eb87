#pragma once

#include "nmrqc/programs.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmrqc {

enum class ProgramFamily { qa, cnot, grover };
std::string_view to_string(ProgramFamily family);
ProgramFamily parse_family(std::string_view text);

/// One batch experiment. Columns are the entries of k_list, or, when
/// tau_offsets is non-empty, one column per offset at k_list.front() with the
/// offset added to every operation labelled perturb_label.
struct ExperimentSpec {
  std::string name = "experiment";
  MachineConfig machine;
  RationalGamma gamma;
  ProgramFamily family = ProgramFamily::qa;
  CnotVariant cnot_variant = CnotVariant::v1;
  StyleKind style = StyleKind::rotating_sf;
  std::vector<int> k_list{1};
  double delta = 0.01;
  /// Rows for the qa and cnot families; defaults to 00, 10, 01, 11, singlet.
  std::vector<InputSpec> inputs;
  /// Rows for the grover family; defaults to 0..3.
  std::vector<int> items;
  FinalRotationStyle final_rotation = FinalRotationStyle::program;
  std::string perturb_label = "Ip";
  std::vector<double> tau_offsets;
  /// Sets J = 0 inside every sinusoidal-field pulse.
  bool pulses_without_coupling = false;
  bool continuous_clock = false;
  std::string format = "markdown";
  bool concurrent = true;
};

/// Throws ConfigError naming the offending field.
void validate(const ExperimentSpec& spec);

ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec load_spec(const std::string& path);

void to_json(nlohmann::json& j, const EOParams& eo);
void from_json(const nlohmann::json& j, EOParams& eo);
void to_json(nlohmann::json& j, const MachineConfig& m);
void from_json(const nlohmann::json& j, MachineConfig& m);

using Cell = std::array<double, 2>;  // (a, b) = (<Q1>, <Q2>)

struct ResultRow {
  std::string operation;
  Cell ideal{0.0, 0.0};
  std::vector<Cell> cells;
};

struct ResultTable {
  std::string title;
  std::string row_header = "Operation";
  std::vector<std::string> columns;  // subscripts: "8", "16", ..., "256(1)"
  std::vector<ResultRow> rows;
};

/// Rows and programs of a spec, without running anything.
std::vector<Program> build_programs(const ExperimentSpec& spec, const GateImplStyle& style);

/// Deterministic: every cell is computed independently from the spec.
ResultTable run_experiment(const ExperimentSpec& spec);

/// Same as run_experiment with spec.tau_offsets replaced by `offsets`.
ResultTable perturb_duration_study(const ExperimentSpec& base, const std::vector<double>& offsets);

/// csv and json keep full precision; markdown shows two decimals, rounded
/// half away from zero. Throws ConfigError for other formats.
std::string emit_table(const ResultTable& table, std::string_view format);

/// Canned experiments: table5 ... table10, grover-static, table7-alt.
std::vector<std::string> canned_names();
ExperimentSpec canned_spec(std::string_view name);

struct ExcludedCell {
  int row = 0;
  int column = 0;
  std::string reason;
};

/// Two-decimal reference values for a canned experiment.
struct ReferenceTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<Cell> ideal;
  std::vector<std::vector<Cell>> cells;  // [row][column]
  std::vector<ExcludedCell> excluded;
  double tolerance = 0.01;
};

std::optional<ReferenceTable> reference_table(std::string_view name);

struct CellMismatch {
  int row = 0;
  int column = 0;
  Cell computed{};
  Cell reference{};
};

struct TableComparison {
  int compared = 0;
  int excluded = 0;
  double max_deviation = 0.0;
  std::vector<CellMismatch> mismatches;
  bool passed() const { return mismatches.empty(); }
};

/// Cell-by-cell |computed - reference| <= tolerance + 1e-9, skipping excluded
/// cells. Throws ConfigError when the shapes differ.
TableComparison compare_with_reference(const ResultTable& table, const ReferenceTable& ref);

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct VerifyOptions {
  /// Include the s = 256 columns and the perturbation table.
  bool include_long_runs = true;
};

/// Ideal baseline, step-size convergence, coupling-free pulses and the
/// reference-table comparisons.
VerifyReport verify_suite(const VerifyOptions& options = {});

std::string format_report(const VerifyReport& report);
std::string format_comparison(const ResultTable& table, const ReferenceTable& ref,
                              const TableComparison& cmp);

}  // namespace nmrqc
