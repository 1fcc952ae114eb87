#include "nmrqc/harness.hpp"

#include "nmrqc/errors.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

namespace nmrqc {

using nlohmann::json;

std::string_view to_string(ProgramFamily family) {
  switch (family) {
    case ProgramFamily::qa:
      return "qa";
    case ProgramFamily::cnot:
      return "cnot";
    case ProgramFamily::grover:
      return "grover";
  }
  return "?";
}

ProgramFamily parse_family(std::string_view text) {
  if (text == "qa") return ProgramFamily::qa;
  if (text == "cnot") return ProgramFamily::cnot;
  if (text == "grover") return ProgramFamily::grover;
  throw ConfigError("unknown program '" + std::string(text) + "' (qa, cnot, grover)");
}

void to_json(json& j, const MachineConfig& m) {
  j = json{{"J", m.J}, {"h1z", m.h1z}, {"h2z", m.h2z}, {"gamma", m.gamma}};
}

void from_json(const json& j, MachineConfig& m) {
  MachineConfig d;
  m.J = j.value("J", d.J);
  m.h1z = j.value("h1z", d.h1z);
  m.h2z = j.value("h2z", d.h2z);
  m.gamma = j.value("gamma", d.gamma);
}

void to_json(json& j, const EOParams& eo) {
  j = json{{"label", eo.label},
           {"tau_over_2pi", eo.duration_over_2pi},
           {"J", eo.J},
           {"h", eo.static_field},
           {"h_sf", eo.sf_amplitude},
           {"omega", eo.omega},
           {"phi_x", eo.phi_x},
           {"phi_y", eo.phi_y},
           {"delta_over_2pi", eo.time_step_delta}};
}

void from_json(const json& j, EOParams& eo) {
  EOParams d;
  eo.label = j.value("label", d.label);
  eo.duration_over_2pi = j.at("tau_over_2pi").get<double>();
  eo.J = j.value("J", d.J);
  eo.static_field = j.value("h", d.static_field);
  eo.sf_amplitude = j.value("h_sf", d.sf_amplitude);
  eo.omega = j.value("omega", d.omega);
  eo.phi_x = j.value("phi_x", d.phi_x);
  eo.phi_y = j.value("phi_y", d.phi_y);
  eo.time_step_delta = j.value("delta_over_2pi", d.time_step_delta);
}

void validate(const ExperimentSpec& spec) {
  if (spec.k_list.empty()) throw ConfigError("k_list must not be empty");
  for (int k : spec.k_list) {
    if (k < 1) throw ConfigError("k_list entries must be positive, got " + std::to_string(k));
  }
  if (!(spec.delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(spec.gamma.N > 0 && spec.gamma.N < spec.gamma.M)) {
    throw ConfigError("gamma must satisfy 0 < N < M");
  }
  if (std::abs(spec.gamma.value() - spec.machine.gamma) > 1e-12 * spec.machine.gamma &&
      spec.style != StyleKind::ideal) {
    throw ConfigError("gamma " + std::to_string(spec.gamma.N) + "/" +
                      std::to_string(spec.gamma.M) + " does not match machine gamma " +
                      std::to_string(spec.machine.gamma));
  }
  if (std::abs(spec.machine.h2z - spec.machine.gamma * spec.machine.h1z) >
      1e-9 * std::abs(spec.machine.h1z)) {
    throw ConfigError("machine h2z must equal gamma * h1z");
  }
  for (int item : spec.items) {
    if (item < 0 || item > 3) throw ConfigError("Grover items must be 0..3");
  }
  if (spec.family == ProgramFamily::cnot) {
    for (const InputSpec& in : spec.inputs) {
      if (in.singlet) throw ConfigError("the cnot family takes basis inputs only");
    }
  }
  if (spec.format != "markdown" && spec.format != "csv" && spec.format != "json") {
    throw ConfigError("format must be markdown, csv or json, got '" + spec.format + "'");
  }
}

ExperimentSpec spec_from_json(const json& j) {
  ExperimentSpec s;
  try {
    s.name = j.value("name", s.name);
    if (j.contains("machine")) s.machine = j.at("machine").get<MachineConfig>();
    if (j.contains("gamma")) {
      s.gamma.N = j.at("gamma").at("N").get<int>();
      s.gamma.M = j.at("gamma").at("M").get<int>();
    }
    if (j.contains("program")) s.family = parse_family(j.at("program").get<std::string>());
    if (j.contains("cnot_variant")) {
      const json& v = j.at("cnot_variant");
      s.cnot_variant =
          parse_cnot_variant(v.is_number() ? std::to_string(v.get<int>()) : v.get<std::string>());
    }
    if (j.contains("style")) s.style = parse_style(j.at("style").get<std::string>());
    if (j.contains("k_list")) s.k_list = j.at("k_list").get<std::vector<int>>();
    s.delta = j.value("delta", s.delta);
    if (j.contains("inputs")) {
      for (const auto& in : j.at("inputs")) s.inputs.push_back(parse_input(in.get<std::string>()));
    }
    if (j.contains("items")) s.items = j.at("items").get<std::vector<int>>();
    if (j.contains("final_rotation_style")) {
      s.final_rotation =
          parse_final_rotation_style(j.at("final_rotation_style").get<std::string>());
    }
    s.perturb_label = j.value("perturb_label", s.perturb_label);
    if (j.contains("tau_offsets")) s.tau_offsets = j.at("tau_offsets").get<std::vector<double>>();
    s.pulses_without_coupling = j.value("pulses_without_coupling", s.pulses_without_coupling);
    s.continuous_clock = j.value("continuous_clock", s.continuous_clock);
    s.format = j.value("format", s.format);
    s.concurrent = j.value("concurrent", s.concurrent);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  validate(s);
  return s;
}

json spec_to_json(const ExperimentSpec& s) {
  json j;
  j["name"] = s.name;
  j["machine"] = s.machine;
  j["gamma"] = {{"N", s.gamma.N}, {"M", s.gamma.M}};
  j["program"] = std::string(to_string(s.family));
  j["cnot_variant"] = std::string(to_string(s.cnot_variant));
  j["style"] = std::string(to_string(s.style));
  j["k_list"] = s.k_list;
  j["delta"] = s.delta;
  json inputs = json::array();
  for (const InputSpec& in : s.inputs) inputs.push_back(in.label());
  j["inputs"] = inputs;
  j["items"] = s.items;
  j["final_rotation_style"] = std::string(to_string(s.final_rotation));
  j["perturb_label"] = s.perturb_label;
  j["tau_offsets"] = s.tau_offsets;
  j["pulses_without_coupling"] = s.pulses_without_coupling;
  j["continuous_clock"] = s.continuous_clock;
  j["format"] = s.format;
  j["concurrent"] = s.concurrent;
  return j;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return spec_from_json(j);
}

namespace {

std::vector<InputSpec> default_inputs(ProgramFamily family) {
  std::vector<InputSpec> v = {InputSpec::basis(0, 0), InputSpec::basis(1, 0),
                              InputSpec::basis(0, 1), InputSpec::basis(1, 1)};
  if (family == ProgramFamily::qa) v.push_back(InputSpec::singlet_state());
  return v;
}

std::string row_label(const ExperimentSpec& spec, const Program& p, std::size_t index,
                      const std::vector<int>& items, const std::vector<InputSpec>& inputs) {
  const std::string v(to_string(spec.cnot_variant));
  switch (spec.family) {
    case ProgramFamily::grover:
      return std::to_string(items[index]);
    case ProgramFamily::cnot:
      return "CNOT" + v + "|" + p.input.label() + ">";
    case ProgramFamily::qa:
      break;
  }
  if (inputs[index].singlet) return "Y1(CNOT" + v + ")^5|singlet>";
  return "(CNOT" + v + ")^5|" + p.input.label() + ">";
}

struct ColumnPlan {
  std::string label;
  int k;
  double offset;
};

std::vector<ColumnPlan> plan_columns(const ExperimentSpec& spec) {
  std::vector<ColumnPlan> cols;
  auto s_of = [&](int k) { return 2LL * k * spec.gamma.M * spec.gamma.N * spec.gamma.N; };
  if (spec.tau_offsets.empty()) {
    for (int k : spec.k_list) cols.push_back({std::to_string(s_of(k)), k, 0.0});
  } else {
    const int k = spec.k_list.front();
    for (std::size_t i = 0; i < spec.tau_offsets.size(); ++i) {
      cols.push_back({std::to_string(s_of(k)) + "(" + std::to_string(i + 1) + ")", k,
                      spec.tau_offsets[i]});
    }
  }
  return cols;
}

GateImplStyle style_for(const ExperimentSpec& spec, StyleKind kind, int k) {
  GateImplStyle style;
  style.kind = kind;
  style.k = k;
  style.gamma = spec.gamma;
  style.machine = spec.machine;
  style.delta = spec.delta;
  return style;
}

std::vector<Cell> run_column(const ExperimentSpec& spec, const GateImplStyle& style,
                             double offset) {
  std::vector<Program> programs = build_programs(spec, style);
  PropagatorCache cache;
  std::vector<Cell> cells;
  for (Program& p : programs) {
    if (offset != 0.0) perturb_durations(p, spec.perturb_label, offset);
    const RunResult r = run_program(p, {}, &cache);
    cells.push_back({r.a, r.b});
  }
  return cells;
}

std::string fixed2(double x) {
  double r = round_to_hundredths(x);
  if (r == 0.0) r = 0.0;  // no "-0.00"
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << r;
  return os.str();
}

std::string full(double x) {
  std::ostringstream os;
  os << std::setprecision(15) << x;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_field(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::vector<Program> build_programs(const ExperimentSpec& spec, const GateImplStyle& style) {
  std::vector<Program> programs;
  if (spec.family == ProgramFamily::grover) {
    const std::vector<int> items = spec.items.empty() ? std::vector<int>{0, 1, 2, 3} : spec.items;
    for (int item : items) programs.push_back(build_grover(item, style));
  } else {
    const std::vector<InputSpec> inputs =
        spec.inputs.empty() ? default_inputs(spec.family) : spec.inputs;
    for (const InputSpec& in : inputs) {
      if (spec.family == ProgramFamily::cnot) {
        programs.push_back(build_cnot(spec.cnot_variant, style, in));
      } else {
        programs.push_back(build_qa_for_input(in, spec.cnot_variant, style, spec.final_rotation));
      }
    }
  }
  for (Program& p : programs) {
    p.continuous_clock = spec.continuous_clock;
    if (spec.pulses_without_coupling) {
      for (EOParams& eo : p.eos) {
        if (eo.has_sinusoidal_field()) eo.J = 0.0;
      }
    }
  }
  return programs;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  ResultTable table;
  table.title = spec.name;
  table.row_header = spec.family == ProgramFamily::grover ? "Item position" : "Operation";

  const std::vector<ColumnPlan> cols = plan_columns(spec);
  for (const ColumnPlan& c : cols) table.columns.push_back(c.label);

  const GateImplStyle ideal = style_for(spec, StyleKind::ideal, 1);
  const std::vector<Program> ideal_programs = build_programs(spec, ideal);
  const std::vector<int> items = spec.items.empty() ? std::vector<int>{0, 1, 2, 3} : spec.items;
  const std::vector<InputSpec> inputs =
      spec.inputs.empty() ? default_inputs(spec.family) : spec.inputs;
  const std::vector<Cell> ideal_cells = run_column(spec, ideal, 0.0);
  for (std::size_t i = 0; i < ideal_programs.size(); ++i) {
    table.rows.push_back({row_label(spec, ideal_programs[i], i, items, inputs), ideal_cells[i], {}});
  }

  std::vector<std::vector<Cell>> columns(cols.size());
  if (spec.concurrent && cols.size() > 1) {
    std::vector<std::future<std::vector<Cell>>> jobs;
    for (const ColumnPlan& c : cols) {
      jobs.push_back(std::async(std::launch::async, [&spec, c] {
        return run_column(spec, style_for(spec, spec.style, c.k), c.offset);
      }));
    }
    for (std::size_t c = 0; c < cols.size(); ++c) columns[c] = jobs[c].get();
  } else {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      columns[c] = run_column(spec, style_for(spec, spec.style, cols[c].k), cols[c].offset);
    }
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (const auto& col : columns) table.rows[r].cells.push_back(col[r]);
  }
  return table;
}

ResultTable perturb_duration_study(const ExperimentSpec& base, const std::vector<double>& offsets) {
  if (offsets.empty()) throw ConfigError("perturbation study needs at least one offset");
  ExperimentSpec spec = base;
  spec.tau_offsets = offsets;
  return run_experiment(spec);
}

std::string emit_table(const ResultTable& table, std::string_view format) {
  std::ostringstream os;
  if (format == "markdown") {
    os << "| " << table.row_header << " | a | b |";
    for (const auto& c : table.columns) os << " a_" << c << " | b_" << c << " |";
    os << "\n|---|---|---|";
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << "---|---|";
    os << "\n";
    for (const ResultRow& row : table.rows) {
      os << "| " << md_field(row.operation) << " | " << fixed2(row.ideal[0]) << " | "
         << fixed2(row.ideal[1]) << " |";
      for (const Cell& c : row.cells) os << " " << fixed2(c[0]) << " | " << fixed2(c[1]) << " |";
      os << "\n";
    }
    return os.str();
  }
  if (format == "csv") {
    os << csv_field(table.row_header) << ",a,b";
    for (const auto& c : table.columns) os << ",a_" << csv_field(c) << ",b_" << csv_field(c);
    os << "\n";
    for (const ResultRow& row : table.rows) {
      os << csv_field(row.operation) << "," << full(row.ideal[0]) << "," << full(row.ideal[1]);
      for (const Cell& c : row.cells) os << "," << full(c[0]) << "," << full(c[1]);
      os << "\n";
    }
    return os.str();
  }
  if (format == "json") {
    json j;
    j["title"] = table.title;
    j["row_header"] = table.row_header;
    j["columns"] = table.columns;
    json rows = json::array();
    for (const ResultRow& row : table.rows) {
      rows.push_back({{"operation", row.operation}, {"ideal", row.ideal}, {"cells", row.cells}});
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
  }
  throw ConfigError("unknown format '" + std::string(format) + "' (csv, markdown, json)");
}

std::vector<std::string> canned_names() {
  return {"table5", "table6", "table7", "table8", "table9", "table10", "grover-static",
          "table7-alt"};
}

ExperimentSpec canned_spec(std::string_view name) {
  ExperimentSpec s;
  s.name = std::string(name);
  s.k_list = {1, 2, 4, 8, 32};
  if (name == "table5") return s;
  if (name == "table6") {
    s.cnot_variant = CnotVariant::v2;
    return s;
  }
  if (name == "table7") {
    s.cnot_variant = CnotVariant::v3;
    return s;
  }
  if (name == "table7-alt") {
    s.cnot_variant = CnotVariant::v3_alt;
    return s;
  }
  if (name == "table8") {
    s.style = StyleKind::static_sf;
    return s;
  }
  if (name == "table9") {
    s.family = ProgramFamily::grover;
    return s;
  }
  if (name == "grover-static") {
    s.family = ProgramFamily::grover;
    s.style = StyleKind::static_sf;
    return s;
  }
  if (name == "table10") {
    s.k_list = {32};
    s.tau_offsets = {-0.2, -0.1, 0.0, 0.1, 0.2};
    return s;
  }
  std::string names;
  for (const auto& n : canned_names()) names += " " + n;
  throw ConfigError("unknown table '" + std::string(name) + "'; available:" + names);
}

TableComparison compare_with_reference(const ResultTable& table, const ReferenceTable& ref) {
  if (table.rows.size() != ref.rows.size() || table.columns.size() != ref.columns.size()) {
    throw ConfigError("table shape does not match reference '" + ref.name + "'");
  }
  TableComparison cmp;
  for (std::size_t r = 0; r < ref.rows.size(); ++r) {
    for (std::size_t c = 0; c < ref.columns.size(); ++c) {
      bool skip = false;
      for (const ExcludedCell& e : ref.excluded) {
        if (e.row == static_cast<int>(r) && e.column == static_cast<int>(c)) skip = true;
      }
      if (skip) {
        ++cmp.excluded;
        continue;
      }
      ++cmp.compared;
      const Cell& got = table.rows[r].cells[c];
      const Cell& want = ref.cells[r][c];
      const double dev = std::max(std::abs(got[0] - want[0]), std::abs(got[1] - want[1]));
      cmp.max_deviation = std::max(cmp.max_deviation, dev);
      if (dev > ref.tolerance + 1e-9) {
        cmp.mismatches.push_back({static_cast<int>(r), static_cast<int>(c), got, want});
      }
    }
  }
  return cmp;
}

std::string format_comparison(const ResultTable& table, const ReferenceTable& ref,
                              const TableComparison& cmp) {
  std::ostringstream os;
  os << ref.name << ": " << cmp.compared << " cells compared, " << cmp.excluded
     << " excluded, tolerance " << ref.tolerance << ", " << cmp.mismatches.size()
     << " outside\n";
  for (const CellMismatch& m : cmp.mismatches) {
    os << "  " << table.rows[m.row].operation << " a_" << ref.columns[m.column] << ",b_"
       << ref.columns[m.column] << ": computed (" << std::fixed << std::setprecision(3)
       << m.computed[0] << ", " << m.computed[1] << ") reference (" << std::setprecision(2)
       << m.reference[0] << ", " << m.reference[1] << ")\n";
    os.unsetf(std::ios::floatfield);
  }
  for (const ExcludedCell& e : ref.excluded) {
    os << "  excluded " << table.rows[e.row].operation << " a_" << ref.columns[e.column]
       << ": " << e.reason << "\n";
  }
  return os.str();
}

bool VerifyReport::passed() const {
  for (const CheckResult& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

namespace {

CheckResult ideal_baseline_check() {
  CheckResult check{"ideal baseline", 1e-4, true, ""};
  const GateImplStyle ideal = GateImplStyle::ideal_gates();
  std::vector<Program> programs;
  for (CnotVariant v : {CnotVariant::v1, CnotVariant::v2, CnotVariant::v3}) {
    for (int b1 : {0, 1}) {
      for (int b2 : {0, 1}) {
        programs.push_back(build_cnot(v, ideal, InputSpec::basis(b1, b2)));
        programs.push_back(build_qa(QaKind::qa1, InputSpec::basis(b1, b2), v, ideal));
      }
    }
    programs.push_back(build_qa(QaKind::qa2, InputSpec::singlet_state(), v, ideal));
  }
  for (int item = 0; item < 4; ++item) programs.push_back(build_grover(item, ideal));
  PropagatorCache cache;
  double worst = 0.0;
  for (const Program& p : programs) {
    const RunResult r = run_program(p, {}, &cache);
    const auto& e = *p.expected;
    const double dev = std::max(std::abs(r.a - e[0]), std::abs(r.b - e[1]));
    worst = std::max(worst, dev);
    if (dev > check.tolerance) {
      check.passed = false;
      check.detail += p.name + " off by " + full(dev) + "; ";
    }
  }
  check.detail += std::to_string(programs.size()) + " programs, worst deviation " + full(worst);
  return check;
}

Cell qa2_cell(const ExperimentSpec& spec) {
  ExperimentSpec s = spec;
  s.inputs = {InputSpec::singlet_state()};
  s.k_list = {1};
  s.concurrent = false;
  const ResultTable t = run_experiment(s);
  return t.rows.front().cells.front();
}

bool same_two_digits(const Cell& x, const Cell& y) {
  return round_to_hundredths(x[0]) == round_to_hundredths(y[0]) &&
         round_to_hundredths(x[1]) == round_to_hundredths(y[1]);
}

std::string cell_text(const Cell& c) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << "(" << c[0] << ", " << c[1] << ")";
  return os.str();
}

}  // namespace

VerifyReport verify_suite(const VerifyOptions& options) {
  VerifyReport report;
  report.checks.push_back(ideal_baseline_check());

  {
    ExperimentSpec coarse;
    ExperimentSpec fine;
    fine.delta = 0.001;
    const Cell a = qa2_cell(coarse);
    const Cell b = qa2_cell(fine);
    report.checks.push_back({"step 0.01 vs 0.001, QA2 s=8", 0.01, same_two_digits(a, b),
                             cell_text(a) + " vs " + cell_text(b)});
  }
  {
    ExperimentSpec with_j;
    ExperimentSpec without_j;
    without_j.pulses_without_coupling = true;
    const Cell a = qa2_cell(with_j);
    const Cell b = qa2_cell(without_j);
    report.checks.push_back({"J = 0 inside pulses, QA2 s=8", 0.01, same_two_digits(a, b),
                             cell_text(a) + " vs " + cell_text(b)});
  }

  for (const std::string name :
       {"table5", "table6", "table7", "table8", "table9", "grover-static", "table10"}) {
    ExperimentSpec spec = canned_spec(name);
    ReferenceTable ref = *reference_table(name);
    if (!options.include_long_runs) {
      if (name == "table10") continue;
      spec.k_list.pop_back();
      ref.columns.pop_back();
      for (auto& row : ref.cells) row.pop_back();
      std::erase_if(ref.excluded, [&](const ExcludedCell& e) {
        return e.column >= static_cast<int>(ref.columns.size());
      });
    }
    const ResultTable table = run_experiment(spec);
    const TableComparison cmp = compare_with_reference(table, ref);
    report.checks.push_back({name, ref.tolerance, cmp.passed(), format_comparison(table, ref, cmp)});
  }
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream os;
  for (const CheckResult& c : report.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << " (tolerance " << c.tolerance << ")\n";
    std::istringstream detail(c.detail);
    for (std::string line; std::getline(detail, line);) {
      if (!line.empty()) os << "     " << line << "\n";
    }
  }
  os << (report.passed() ? "all checks passed" : "some checks failed") << "\n";
  return os.str();
}

}  // namespace nmrqc
