#include "lqsn/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lqsn/file_formats.hpp"
#include "lqsn/state_space.hpp"

namespace lqsn {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

double param_diff(const OscillatorParams& a, const OscillatorParams& b) {
  if (a.n != b.n || a.m != b.m) return std::numeric_limits<double>::quiet_NaN();
  return std::max({max_abs(CMat(a.S - b.S)), max_abs(CMat(a.K - b.K)),
                   max_abs(RMat(a.R - b.R))});
}

double state_space_diff(const StateSpace& a, const StateSpace& b) {
  return std::max({max_abs(RMat(a.A - b.A)), max_abs(CMat(a.B - b.B)),
                   max_abs(CMat(a.C - b.C)), max_abs(CMat(a.D - b.D))});
}

Complex parse_complex_flag(const std::string& text, const std::string& name) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (...) {
    throw ParseError("--" + name + ": expected re or re,im, got '" + text + "'");
  }
}

struct Output {
  std::string format = "human";
  std::ostream& out;

  void print(const Report& report) const {
    out << (format == "json" ? report_json(report) : report_human(report));
  }
};

int finish(const Report& report, const Output& output) {
  output.print(report);
  return report.all_pass() ? kExitPass : kExitFail;
}

// -- synthesize --------------------------------------------------------------

int cmd_synthesize(const std::string& input, const std::string& plan_path,
                   const std::string& netlist_path, double gamma2,
                   bool prefer_sandwich, double tol, const Output& output) {
  const OscillatorParams g = to_oscillator(parse_system_spec(read_file(input), tol), tol);

  Report report;
  report.command = "synthesize";
  const SynthesisPlan plan = decompose(g);
  report.info.emplace_back("blocks", std::to_string(plan.blocks.size()));
  report.info.emplace_back("couplings", std::to_string(plan.couplings.size()));

  const OscillatorParams rebuilt = reassemble(plan);
  const double resid = param_diff(g, rebuilt);
  report.checks.push_back({"reassemble_residual", resid <= tol, resid, tol, ""});

  NetlistOptions options;
  options.gamma2 = gamma2;
  options.prefer_squeezer_sandwich = prefer_sandwich;
  options.tol = tol;
  const OpticalNetlist nl = build_netlist(plan, options);
  const auto problems = netlist_problems(nl);
  report.checks.push_back({"netlist_structure", problems.empty(),
                           double(problems.size()), 0.0,
                           problems.empty() ? "" : problems.front()});
  report.info.emplace_back("netlist_components", std::to_string(nl.components.size()));

  if (!plan_path.empty()) {
    write_file(plan_path, emit_plan(plan));
    report.info.emplace_back("plan_file", plan_path);
  }
  if (!netlist_path.empty()) {
    write_file(netlist_path, emit_netlist(nl));
    report.info.emplace_back("netlist_file", netlist_path);
  }
  return finish(report, output);
}

// -- validate ----------------------------------------------------------------

int cmd_validate(const std::string& input, double tol, const Output& output) {
  const ParsedSystem system = parse_system_spec_document(read_file(input));
  Report report;
  report.command = "validate";
  if (std::holds_alternative<OscillatorParams>(system)) {
    const auto validation =
        validate_oscillator(std::get<OscillatorParams>(system), tol);
    report.checks.push_back(
        {"oscillator_invariants", validation.valid(),
         double(validation.violations.size()), 0.0,
         validation.valid() ? "" : validation.violations.front().what});
    for (const auto& v : validation.violations)
      report.checks.push_back({v.what, false, v.residual, tol, ""});
  } else {
    const auto rr = check_physical_realizability(std::get<StateSpace>(system), tol);
    report.checks.push_back(
        {"d_unitarity", rr.d_unitarity_residual <= tol, rr.d_unitarity_residual, tol, ""});
    report.checks.push_back(
        {"ccr_residual", rr.ccr_residual <= tol, rr.ccr_residual, tol, ""});
    report.checks.push_back({"c_consistency", rr.c_consistency_residual <= tol,
                             rr.c_consistency_residual, tol, ""});
    report.checks.push_back(
        {"physically_realizable", rr.is_realizable, rr.is_realizable ? 0.0 : 1.0, 0.0, ""});
  }
  return finish(report, output);
}

// -- simulate ----------------------------------------------------------------

int cmd_simulate(const std::string& input, double t_final, double dt,
                 const std::string& probe_path,
                 const std::vector<std::string>& squeezed_flags,
                 const std::string& trajectory_path, double tol,
                 const Output& output) {
  const ParsedSystem system = parse_system_spec(read_file(input), tol);
  const StateSpace ss = std::holds_alternative<StateSpace>(system)
                            ? std::get<StateSpace>(system)
                            : to_state_space(std::get<OscillatorParams>(system));

  ItoTable table = ito_table_vacuum(ss.m);
  if (!squeezed_flags.empty()) {
    if (static_cast<int>(squeezed_flags.size()) != ss.m)
      throw ParseError("--squeezed must be given once per channel (m = " +
                       std::to_string(ss.m) + ")");
    std::vector<SqueezedChannel> channels;
    for (const auto& flag : squeezed_flags) {
      // n,c_re[,c_im]
      const auto first = flag.find(',');
      if (first == std::string::npos)
        throw ParseError("--squeezed: expected n,c_re[,c_im], got '" + flag + "'");
      SqueezedChannel ch;
      try {
        ch.n = std::stod(flag.substr(0, first));
        ch.c = parse_complex_flag(flag.substr(first + 1), "squeezed");
      } catch (const ParseError&) {
        throw;
      } catch (...) {
        throw ParseError("--squeezed: expected n,c_re[,c_im], got '" + flag + "'");
      }
      channels.push_back(ch);
    }
    table = ito_table_squeezed(channels);
  }

  RVec mean0 = RVec::Zero(2 * ss.n);
  RMat cov0 = RMat::Identity(2 * ss.n, 2 * ss.n);
  if (!probe_path.empty()) {
    const auto j = nlohmann::json::parse(read_file(probe_path), nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("probe file: expected a JSON object");
    if (j.contains("mean")) {
      const auto& vec = j["mean"];
      if (!vec.is_array() || static_cast<int>(vec.size()) != 2 * ss.n)
        throw ParseError("probe file: mean must have 2n entries");
      for (int i = 0; i < 2 * ss.n; ++i) mean0(i) = vec[i].get<double>();
    }
    if (j.contains("cov")) {
      const auto& mat = j["cov"];
      if (!mat.is_array() || static_cast<int>(mat.size()) != 2 * ss.n)
        throw ParseError("probe file: cov must be 2n x 2n");
      for (int i = 0; i < 2 * ss.n; ++i)
        for (int c = 0; c < 2 * ss.n; ++c) cov0(i, c) = mat[i][c].get<double>();
    }
  }

  Report report;
  report.command = "simulate";
  const auto means = mean_trajectory(ss, mean0, t_final, dt);
  auto covs = covariance_trajectory(ss, cov0, t_final, dt, table);

  bool finite = true;
  for (const auto& m : covs.second_moments) finite = finite && all_finite(m);
  for (const auto& v : means.means) finite = finite && v.allFinite();
  report.checks.push_back({"finite_trajectory", finite, finite ? 0.0 : 1.0, 0.0, ""});
  const double sym_res = symmetry_residual(covs.second_moments.back());
  report.checks.push_back({"second_moment_symmetry", sym_res <= 1e-10, sym_res, 1e-10, ""});

  std::ostringstream mean_str, cov_str;
  mean_str << means.means.back().transpose();
  cov_str << covs.second_moments.back();
  report.info.emplace_back("t_final", fmt(t_final));
  report.info.emplace_back("final_mean", mean_str.str());
  report.info.emplace_back("final_second_moment", cov_str.str());

  if (!trajectory_path.empty()) {
    covs.means = means.means;
    write_file(trajectory_path, emit_trajectory(covs));
    report.info.emplace_back("trajectory_file", trajectory_path);
  }
  return finish(report, output);
}

// -- roundtrip ---------------------------------------------------------------

int cmd_roundtrip(const std::string& input, double tol, const Output& output) {
  const ParsedSystem system = parse_system_spec(read_file(input), tol);
  const OscillatorParams g = to_oscillator(system, tol);

  Report report;
  report.command = "roundtrip";

  const StateSpace ss = to_state_space(g);
  const OscillatorParams g2 = from_state_space(ss, tol);
  const double skr_resid = param_diff(g, g2);
  report.checks.push_back({"skr_abcd_skr_residual", skr_resid <= tol, skr_resid, tol, ""});

  const StateSpace ss2 = to_state_space(g2);
  const double abcd_resid = state_space_diff(ss, ss2);
  report.checks.push_back(
      {"abcd_skr_abcd_residual", abcd_resid <= tol, abcd_resid, tol, ""});

  const double plan_resid = param_diff(g, reassemble(decompose(g)));
  report.checks.push_back(
      {"decompose_reassemble_residual", plan_resid <= tol, plan_resid, tol, ""});

  const auto rr = check_physical_realizability(ss, tol);
  report.checks.push_back(
      {"ccr_residual", rr.ccr_residual <= tol, rr.ccr_residual, tol, ""});
  return finish(report, output);
}

// -- adiabatic ---------------------------------------------------------------

int cmd_adiabatic(const AdiabaticModelParams& params, const std::vector<double>& ks,
                  double t_final, double dt, const Output& output) {
  Report report;
  report.command = "adiabatic";
  const auto errors = convergence_study(params, ks, t_final, dt);
  for (const auto& [k, err] : errors)
    report.info.emplace_back("error_k" + fmt(k), fmt(err));
  bool monotone = true;
  for (size_t i = 1; i < errors.size(); ++i)
    monotone = monotone && errors[i].second < errors[i - 1].second;
  report.checks.push_back({"error_monotone_decreasing", monotone,
                           monotone ? 0.0 : 1.0, 0.0, ""});
  if (errors.size() >= 2) {
    const double ratio = errors.back().second /
                         std::max(errors.front().second, 1e-300);
    report.info.emplace_back("error_ratio_last_over_first", fmt(ratio));
  }
  return finish(report, output);
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& check : checks)
    if (!check.pass) return false;
  return true;
}

std::string report_human(const Report& report) {
  std::ostringstream oss;
  oss << "== " << report.command << " ==\n";
  for (const auto& [key, value] : report.info)
    oss << "  " << key << ": " << value << "\n";
  for (const auto& check : report.checks) {
    oss << "  [" << (check.pass ? "PASS" : "FAIL") << "] " << check.name << "  value="
        << fmt(check.value) << " threshold=" << fmt(check.threshold);
    if (!check.note.empty()) oss << "  (" << check.note << ")";
    oss << "\n";
  }
  oss << (report.all_pass() ? "all checks passed\n" : "CHECKS FAILED\n");
  return oss.str();
}

std::string report_json(const Report& report) {
  nlohmann::json j;
  j["command"] = report.command;
  j["all_pass"] = report.all_pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& check : report.checks)
    j["checks"].push_back({{"name", check.name},
                           {"pass", check.pass},
                           {"value", check.value},
                           {"threshold", check.threshold},
                           {"note", check.note}});
  j["info"] = nlohmann::json::object();
  for (const auto& [key, value] : report.info) j["info"][key] = value;
  return j.dump(2) + "\n";
}

int run_command(const std::vector<std::string>& argv, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"linear quantum stochastic network synthesis toolkit"};
  app.require_subcommand(1);

  std::string input, plan_path, netlist_path, probe_path, trajectory_path;
  std::string format = "human";
  double tol = kDefaultTol;
  double gamma2 = 0.0;
  bool prefer_sandwich = false;
  double t_final = 10.0, dt = 1e-3;
  std::vector<std::string> squeezed_flags;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "report format: human or json")
        ->check(CLI::IsMember({"human", "json"}));
  };

  auto* synth = app.add_subcommand("synthesize",
                                   "decompose a system and emit plan + netlist");
  synth->add_option("--input", input, "system spec file")->required();
  synth->add_option("--plan", plan_path, "output synthesis plan file");
  synth->add_option("--netlist", netlist_path, "output netlist file");
  synth->add_option("--gamma2", gamma2, "scheme-1 auxiliary mirror coupling");
  synth->add_flag("--prefer-squeezer-sandwich", prefer_sandwich,
                  "use the squeezer sandwich coupling where applicable");
  synth->add_option("--tol", tol, "residual tolerance");
  add_format(synth);

  auto* validate = app.add_subcommand("validate", "check system invariants");
  validate->add_option("--input", input, "system spec file")->required();
  validate->add_option("--tol", tol, "residual tolerance");
  add_format(validate);

  auto* simulate = app.add_subcommand("simulate", "integrate moment dynamics");
  simulate->add_option("--input", input, "system spec file")->required();
  simulate->add_option("--t-final", t_final, "integration horizon");
  simulate->add_option("--dt", dt, "integration step");
  simulate->add_option("--probe", probe_path, "initial moments file (JSON mean/cov)");
  simulate->add_option("--squeezed", squeezed_flags,
                       "per-channel squeezed input n,c_re[,c_im]");
  simulate->add_option("--trajectory", trajectory_path, "trajectory output file");
  simulate->add_option("--tol", tol, "residual tolerance");
  add_format(simulate);

  auto* roundtrip = app.add_subcommand("roundtrip",
                                       "SKR<->ABCD and decompose<->reassemble residuals");
  roundtrip->add_option("--input", input, "system spec file")->required();
  roundtrip->add_option("--tol", tol, "residual tolerance");
  add_format(roundtrip);

  auto* adiabatic = app.add_subcommand("adiabatic",
                                       "pre-limit vs limit convergence study");
  AdiabaticModelParams params;
  std::string alpha_flag = "0", beta_flag = "0";
  std::vector<double> ks = {2, 4, 8, 16};
  double ad_t_final = 5.0, ad_dt = 1e-3;
  adiabatic->add_option("--gamma1", params.gamma1, "slow-mode mirror coupling");
  adiabatic->add_option("--gamma2", params.gamma2, "fast-mode mirror coupling")
      ->required();
  adiabatic->add_option("--delta1", params.delta1, "slow-mode detuning");
  adiabatic->add_option("--delta2", params.delta2, "fast-mode detuning");
  adiabatic->add_option("--alpha", alpha_flag, "crystal coupling re[,im]");
  adiabatic->add_option("--beta", beta_flag, "crystal coupling re[,im]");
  adiabatic->add_option("--ks", ks, "scale parameters, increasing")->delimiter(',');
  adiabatic->add_option("--t-final", ad_t_final, "integration horizon");
  adiabatic->add_option("--dt", ad_dt, "base integration step");
  add_format(adiabatic);

  std::vector<const char*> cargs;
  cargs.push_back("lqsn");
  for (const auto& a : argv) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInput;
  }

  Output output{format, out};
  try {
    if (synth->parsed())
      return cmd_synthesize(input, plan_path, netlist_path, gamma2, prefer_sandwich,
                            tol, output);
    if (validate->parsed()) return cmd_validate(input, tol, output);
    if (simulate->parsed())
      return cmd_simulate(input, t_final, dt, probe_path, squeezed_flags,
                          trajectory_path, tol, output);
    if (roundtrip->parsed()) return cmd_roundtrip(input, tol, output);
    if (adiabatic->parsed()) {
      params.alpha = parse_complex_flag(alpha_flag, "alpha");
      params.beta = parse_complex_flag(beta_flag, "beta");
      return cmd_adiabatic(params, ks, ad_t_final, ad_dt, output);
    }
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NotRealizableError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  err << "usage error: no subcommand\n";
  return kExitInput;
}

}  // namespace lqsn
