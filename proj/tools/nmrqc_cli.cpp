// Command-line front end: experiments, canned tables, pulse design, sweeps
// and the self-check suite.

#include "nmrqc/errors.hpp"
#include "nmrqc/harness.hpp"
#include "nmrqc/pulse_designer.hpp"
#include "nmrqc/programs.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace nmrqc;

namespace {

struct OutputFlags {
  std::optional<double> delta;
  std::string format = "markdown";
  std::optional<std::string> final_rotation;
  std::vector<double> tau_offsets;
  std::string out;
};

void add_output_flags(CLI::App* cmd, OutputFlags& f) {
  cmd->add_option("--delta", f.delta, "integrator step delta/2pi for pulses");
  cmd->add_option("--format", f.format, "csv, markdown or json")
      ->check(CLI::IsMember({"csv", "markdown", "json"}));
  cmd->add_option("--final-rotation-style", f.final_rotation,
                  "trailing Y1 of QA2: program or exact")
      ->check(CLI::IsMember({"program", "exact"}));
  cmd->add_option("--tau-offset", f.tau_offsets,
                  "duration offsets (tau/2pi) added to every Ip, one column each")
      ->delimiter(',');
  cmd->add_option("--out", f.out, "write output to this file instead of stdout");
}

void apply_flags(ExperimentSpec& spec, const OutputFlags& f, bool format_given) {
  if (f.delta) spec.delta = *f.delta;
  if (format_given) spec.format = f.format;
  if (f.final_rotation) spec.final_rotation = parse_final_rotation_style(*f.final_rotation);
  if (!f.tau_offsets.empty()) spec.tau_offsets = f.tau_offsets;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::string phase_text(double phi) {
  if (phi == 0.0) return "0";
  if (std::abs(phi - M_PI / 2) < 1e-12) return "pi/2";
  if (std::abs(phi + M_PI / 2) < 1e-12) return "-pi/2";
  std::ostringstream os;
  os << phi;
  return os.str();
}

std::string design_table(const DesignedPulse& p) {
  const PulseDesign& d = p.design;
  const EOParams& eo = p.eo;
  std::ostringstream os;
  const std::string name = std::string(1, d.axis == Axis::x ? 'X' : 'Y') +
                           std::to_string(d.target_spin) +
                           (d.direction == Direction::inverse ? "bar" : "");
  auto num = [](double x) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(7) << (x == 0.0 ? 0.0 : x);
    return s.str();
  };
  auto dur = [](double x) {
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
  };
  std::ostringstream omega;
  omega << std::fixed << std::setprecision(2) << d.omega;
  if (d.mode == SfMode::rotating) {
    os << "| | tau/2pi | omega | h~1x | h~2x | phi_x | h~1y | h~2y | phi_y |\n"
       << "|---|---|---|---|---|---|---|---|---|\n"
       << "| " << name << " | " << dur(d.t_over_2pi) << " | " << omega.str() << " | "
       << num(eo.sf_amplitude[0][0]) << " | " << num(eo.sf_amplitude[1][0]) << " | "
       << phase_text(d.phi_x) << " | " << num(eo.sf_amplitude[0][1]) << " | "
       << num(eo.sf_amplitude[1][1]) << " | " << phase_text(d.phi_y) << " |\n";
  } else {
    os << "| | tau/2pi | omega | h~1x | h~2x | h~1y | h~2y |\n"
       << "|---|---|---|---|---|---|---|\n"
       << "| " << name << " | " << dur(d.t_over_2pi) << " | " << omega.str() << " | "
       << num(eo.sf_amplitude[0][0]) << " | " << num(eo.sf_amplitude[1][0]) << " | "
       << num(eo.sf_amplitude[0][1]) << " | " << num(eo.sf_amplitude[1][1]) << " |\n";
  }
  const CommensurabilityMargin m = commensurability_margin(d.gamma, d.k);
  os << "s = " << d.s << ", margin 2kNM(M-N) = " << m.value << " (" << to_string(m.verdict)
     << ")";
  if (d.mode == SfMode::rotating) {
    os << ", spectator residual " << std::scientific << std::setprecision(3)
       << spectator_residual(d);
  }
  os << "\n";
  return os.str();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError("'" + item + "' is not an integer");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-spin NMR quantum computer emulator"};
  app.require_subcommand(1);

  OutputFlags run_flags;
  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment described by a JSON config");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  add_output_flags(run, run_flags);

  OutputFlags table_flags;
  std::string table_name;
  bool compare = false;
  auto* tables = app.add_subcommand("tables", "run a canned experiment");
  tables->add_option("name", table_name, "table5 ... table10, grover-static, table7-alt")
      ->required();
  tables->add_flag("--compare", compare, "compare with the two-decimal reference values");
  add_output_flags(tables, table_flags);

  int design_spin = 1;
  std::string design_angle;
  std::string design_axis;
  std::string design_mode;
  int design_k = 1;
  int gamma_n = 1;
  int gamma_m = 4;
  auto* design = app.add_subcommand("design", "print the parameters of one pulse");
  design->add_option("spin", design_spin, "target spin (1 or 2)")->required();
  design->add_option("angle", design_angle, "rotation angle, e.g. pi/2 or 1.5708")->required();
  design->add_option("axis", design_axis, "x, y, xbar or ybar")
      ->required()
      ->check(CLI::IsMember({"x", "y", "xbar", "ybar"}));
  design->add_option("mode", design_mode, "rotating or static")
      ->required()
      ->check(CLI::IsMember({"rotating", "static"}));
  design->add_option("k", design_k, "pulse integer k >= 1")->required();
  design->add_option("--N", gamma_n, "numerator of gamma = N/M");
  design->add_option("--M", gamma_m, "denominator of gamma = N/M");

  OutputFlags sweep_flags;
  std::string k_list_text;
  std::string sweep_program = "qa";
  std::string sweep_variant = "1";
  std::string sweep_style = "rotating_sf";
  std::vector<std::string> sweep_inputs;
  std::vector<int> sweep_items;
  auto* sweep = app.add_subcommand("sweep", "run one program family over a list of k");
  sweep->add_option("--k-list", k_list_text, "comma separated k values")->required();
  sweep->add_option("--program", sweep_program, "qa, cnot or grover");
  sweep->add_option("--variant", sweep_variant, "CNOT variant: 1, 2, 3 or 3alt");
  sweep->add_option("--style", sweep_style, "ideal, static_sf or rotating_sf");
  sweep->add_option("--inputs", sweep_inputs, "00, 10, 01, 11, singlet")->delimiter(',');
  sweep->add_option("--items", sweep_items, "Grover items 0..3")->delimiter(',');
  add_output_flags(sweep, sweep_flags);

  bool quick = false;
  auto* verify = app.add_subcommand("verify", "run the self-check suite");
  verify->add_flag("--quick", quick, "skip the s=256 columns and the perturbation table");

  std::string exec_path;
  std::string exec_style = "rotating_sf";
  int exec_k = 1;
  std::optional<double> exec_delta;
  auto* exec = app.add_subcommand("exec", "run a program written in the text format");
  exec->add_option("program", exec_path, "program file")->required();
  exec->add_option("--style", exec_style, "style used to expand gate lines");
  exec->add_option("--k", exec_k, "pulse integer k for gate lines");
  exec->add_option("--delta", exec_delta, "integrator step delta/2pi for pulses");

  std::vector<std::string> freqs;
  auto* check_n = app.add_subcommand("check-n", "smallest common k1 for a set of frequencies");
  check_n->add_option("frequencies", freqs, "rational frequencies, e.g. 1 1/4 1/3")
      ->required()
      ->expected(2, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      ExperimentSpec spec = load_spec(config_path);
      apply_flags(spec, run_flags, run->count("--format") > 0);
      write_output(emit_table(run_experiment(spec), spec.format), run_flags.out);
      return 0;
    }
    if (*tables) {
      ExperimentSpec spec = canned_spec(table_name);
      apply_flags(spec, table_flags, true);
      const ResultTable table = run_experiment(spec);
      write_output(emit_table(table, spec.format), table_flags.out);
      if (compare) {
        const auto ref = reference_table(table_name == "table7-alt" ? "table7" : table_name);
        if (!ref) throw ConfigError("no reference values for " + table_name);
        const TableComparison cmp = compare_with_reference(table, *ref);
        std::cerr << format_comparison(table, *ref, cmp);
        return cmp.passed() ? 0 : 1;
      }
      return 0;
    }
    if (*design) {
      const Direction dir = design_axis.ends_with("bar") ? Direction::inverse : Direction::forward;
      const Axis axis = design_axis[0] == 'x' ? Axis::x : Axis::y;
      const SfMode mode = design_mode == "rotating" ? SfMode::rotating : SfMode::static_axis;
      MachineConfig machine;
      machine.gamma = static_cast<double>(gamma_n) / gamma_m;
      machine.h2z = machine.gamma * machine.h1z;
      const DesignedPulse p = design_pulse(design_spin, parse_angle(design_angle), axis, dir,
                                           {gamma_n, gamma_m}, design_k, mode, machine);
      std::cout << design_table(p);
      return 0;
    }
    if (*sweep) {
      ExperimentSpec spec;
      spec.name = "sweep";
      spec.k_list = parse_int_list(k_list_text);
      spec.family = parse_family(sweep_program);
      spec.cnot_variant = parse_cnot_variant(sweep_variant);
      spec.style = parse_style(sweep_style);
      for (const std::string& in : sweep_inputs) spec.inputs.push_back(parse_input(in));
      spec.items = sweep_items;
      apply_flags(spec, sweep_flags, true);
      write_output(emit_table(run_experiment(spec), spec.format), sweep_flags.out);
      return 0;
    }
    if (*verify) {
      const VerifyReport report = verify_suite({!quick});
      std::cout << format_report(report);
      return report.passed() ? 0 : 1;
    }
    if (*exec) {
      std::ifstream in(exec_path);
      if (!in) throw ConfigError("cannot open " + exec_path);
      std::stringstream text;
      text << in.rdbuf();
      GateImplStyle style;
      style.kind = parse_style(exec_style);
      style.k = exec_k;
      if (exec_delta) style.delta = *exec_delta;
      const Program program = parse_program(text.str(), style);
      const RunResult r = run_program(program);
      std::cout << std::setprecision(12) << "operations " << program.eos.size() << "\n"
                << "input " << program.input.label() << "\n"
                << "a " << r.a << "\n"
                << "b " << r.b << "\n";
      for (int i = 0; i < 4; ++i) {
        std::cout << "amplitude[" << i << "] " << r.output[i].real() << " "
                  << r.output[i].imag() << "\n";
      }
      return 0;
    }
    if (*check_n) {
      std::vector<Rational> values;
      for (const std::string& f : freqs) values.push_back(parse_rational(f));
      const CommensurabilityCheck c = commensurability_check_n(values);
      for (std::size_t i = 0; i < c.ratios.size(); ++i) {
        std::cout << "f" << i + 2 << "/f1 = " << c.ratios[i].num << "/" << c.ratios[i].den
                  << ": k1 multiple of " << c.required_multiple[i] << "\n";
      }
      std::cout << "smallest k1 = " << c.smallest_k1 << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
