#include "lqsn/file_formats.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "lqsn/state_space.hpp"

namespace lqsn {

namespace {

using nlohmann::json;

constexpr const char* kFormatVersion = "1";

// ---------------------------------------------------------------------------
// Deterministic writer: sorted keys, %.17g float formatting.

std::string fmt_number(double v) {
  if (v == 0.0) return "0";  // normalize negative zero
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

std::string complex_pair(Complex z) {
  return "[" + fmt_number(z.real()) + ", " + fmt_number(z.imag()) + "]";
}

std::string real_matrix(const RMat& m, const std::string& indent) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    out += (i ? ",\n" + indent + " " : "\n" + indent + " ");
    out += "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += fmt_number(m(i, j));
    }
    out += "]";
  }
  out += "\n" + indent + "]";
  return out;
}

std::string complex_matrix(const CMat& m, const std::string& indent) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    out += (i ? ",\n" + indent + " " : "\n" + indent + " ");
    out += "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += complex_pair(m(i, j));
    }
    out += "]";
  }
  out += "\n" + indent + "]";
  return out;
}

// ---------------------------------------------------------------------------
// Parse helpers.

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("parse error at " + where + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing field '" + key + "'");
  return *it;
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "non-finite number");
  return v;
}

int int_at(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string string_at(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Complex complex_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a [re, im] pair");
  return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

RMat real_matrix_at(const json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    fail(where, "expected " + std::to_string(rows) + " rows");
  RMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail(where + " row " + std::to_string(i),
           "expected " + std::to_string(cols) + " columns");
    for (int c = 0; c < cols; ++c)
      m(i, c) = number_at(row[c], where + "[" + std::to_string(i) + "][" +
                                      std::to_string(c) + "]");
  }
  return m;
}

CMat complex_matrix_at(const json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    fail(where, "expected " + std::to_string(rows) + " rows");
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail(where + " row " + std::to_string(i),
           "expected " + std::to_string(cols) + " columns");
    for (int c = 0; c < cols; ++c)
      m(i, c) = complex_at(row[c], where + "[" + std::to_string(i) + "][" +
                                       std::to_string(c) + "]");
  }
  return m;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("parse error: ") + e.what());
  }
}

}  // namespace

ParsedSystem parse_system_spec_document(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) fail("document", "expected an object");
  const std::string version = string_at(field(j, "format_version", "document"),
                                        "format_version");
  if (version != kFormatVersion) fail("format_version", "unsupported version " + version);
  const std::string kind =
      string_at(field(j, "parameterization", "document"), "parameterization");
  const int n = int_at(field(j, "n", "document"), "n");
  const int m = int_at(field(j, "m", "document"), "m");
  if (n < 1) fail("n", "degrees of freedom must be >= 1");
  if (m < 1) fail("m", "channel count must be >= 1");

  if (kind == "SKR") {
    OscillatorParams g;
    g.n = n;
    g.m = m;
    g.S = complex_matrix_at(field(j, "S", "document"), m, m, "S");
    g.K = complex_matrix_at(field(j, "K", "document"), m, 2 * n, "K");
    g.R = real_matrix_at(field(j, "R", "document"), 2 * n, 2 * n, "R");
    return g;
  }
  if (kind == "ABCD") {
    StateSpace ss;
    ss.n = n;
    ss.m = m;
    ss.A = real_matrix_at(field(j, "A", "document"), 2 * n, 2 * n, "A");
    ss.B = complex_matrix_at(field(j, "B", "document"), 2 * n, 2 * m, "B");
    ss.C = complex_matrix_at(field(j, "C", "document"), m, 2 * n, "C");
    ss.D = complex_matrix_at(field(j, "D", "document"), m, m, "D");
    return ss;
  }
  fail("parameterization", "expected \"SKR\" or \"ABCD\"");
}

ParsedSystem parse_system_spec(const std::string& text, double tol) {
  ParsedSystem system = parse_system_spec_document(text);
  if (std::holds_alternative<OscillatorParams>(system)) {
    const auto& g = std::get<OscillatorParams>(system);
    if (auto report = validate_oscillator(g, tol); !report.valid()) {
      std::ostringstream oss;
      oss << "system spec violates oscillator invariants:";
      for (const auto& v : report.violations)
        oss << " " << v.what << " (residual " << v.residual << ");";
      throw ValidationError(oss.str());
    }
  } else {
    // Realizability-check ABCD inputs on load.
    (void)from_state_space(std::get<StateSpace>(system), tol);
  }
  return system;
}

OscillatorParams to_oscillator(const ParsedSystem& system, double tol) {
  if (std::holds_alternative<OscillatorParams>(system))
    return std::get<OscillatorParams>(system);
  return from_state_space(std::get<StateSpace>(system), tol);
}

std::string emit_system_spec(const OscillatorParams& g) {
  std::string out = "{\n";
  out += "  \"K\": " + complex_matrix(g.K, "  ") + ",\n";
  out += "  \"R\": " + real_matrix(g.R, "  ") + ",\n";
  out += "  \"S\": " + complex_matrix(g.S, "  ") + ",\n";
  out += "  \"format_version\": " + quote(kFormatVersion) + ",\n";
  out += "  \"m\": " + std::to_string(g.m) + ",\n";
  out += "  \"n\": " + std::to_string(g.n) + ",\n";
  out += "  \"parameterization\": \"SKR\"\n";
  out += "}\n";
  return out;
}

std::string emit_system_spec(const StateSpace& ss) {
  std::string out = "{\n";
  out += "  \"A\": " + real_matrix(ss.A, "  ") + ",\n";
  out += "  \"B\": " + complex_matrix(ss.B, "  ") + ",\n";
  out += "  \"C\": " + complex_matrix(ss.C, "  ") + ",\n";
  out += "  \"D\": " + complex_matrix(ss.D, "  ") + ",\n";
  out += "  \"format_version\": " + quote(kFormatVersion) + ",\n";
  out += "  \"m\": " + std::to_string(ss.m) + ",\n";
  out += "  \"n\": " + std::to_string(ss.n) + ",\n";
  out += "  \"parameterization\": \"ABCD\"\n";
  out += "}\n";
  return out;
}

std::string emit_netlist(const OpticalNetlist& nl) {
  std::vector<const NetlistComponent*> sorted;
  sorted.reserve(nl.components.size());
  for (const auto& c : nl.components) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](const NetlistComponent* a, const NetlistComponent* b) {
              return a->id < b->id;
            });

  std::string out = "{\n";
  out += "  \"annotations\": {\"pump_frequency\": \"2*omega_r\", "
         "\"rotating_frame\": \"omega_r\"},\n";
  out += "  \"channels\": " + std::to_string(nl.channels) + ",\n";
  out += "  \"components\": [";
  bool first = true;
  for (const auto* c : sorted) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    {\"id\": " + quote(c->id) + ", \"kind\": " + quote(c->kind);
    out += ", \"params\": {";
    bool pfirst = true;
    for (const auto& [key, v] : c->params) {
      if (!pfirst) out += ", ";
      pfirst = false;
      out += quote(key) + ": ";
      out += v.is_complex ? complex_pair(v.value()) : fmt_number(v.re);
    }
    out += "}, \"ports\": [";
    for (size_t i = 0; i < c->ports.size(); ++i) {
      if (i) out += ", ";
      out += quote(c->ports[i]);
    }
    out += "]";
    if (!c->annotations.empty()) {
      out += ", \"annotations\": {";
      bool afirst = true;
      for (const auto& [key, value] : c->annotations) {
        if (!afirst) out += ", ";
        afirst = false;
        out += quote(key) + ": " + quote(value);
      }
      out += "}";
    }
    out += "}";
  }
  out += first ? "],\n" : "\n  ],\n";
  out += "  \"connections\": [";
  first = true;
  for (const auto& conn : nl.connections) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    {\"from\": " + quote(conn.from) + ", \"to\": " + quote(conn.to) + "}";
  }
  out += first ? "],\n" : "\n  ],\n";
  out += "  \"format_version\": " + quote(kFormatVersion) + "\n";
  out += "}\n";
  return out;
}

OpticalNetlist parse_netlist(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) fail("document", "expected an object");
  const std::string version =
      string_at(field(j, "format_version", "document"), "format_version");
  if (version != kFormatVersion) fail("format_version", "unsupported version " + version);

  OpticalNetlist nl;
  nl.channels = int_at(field(j, "channels", "document"), "channels");
  if (nl.channels < 0) fail("channels", "must be >= 0");

  const json& comps = field(j, "components", "document");
  if (!comps.is_array()) fail("components", "expected an array");
  for (size_t i = 0; i < comps.size(); ++i) {
    const std::string where = "components[" + std::to_string(i) + "]";
    const json& cj = comps[i];
    if (!cj.is_object()) fail(where, "expected an object");
    NetlistComponent c;
    c.id = string_at(field(cj, "id", where), where + ".id");
    c.kind = string_at(field(cj, "kind", where), where + ".kind");
    const json& params = field(cj, "params", where);
    if (!params.is_object()) fail(where + ".params", "expected an object");
    for (auto it = params.begin(); it != params.end(); ++it) {
      const std::string pwhere = where + ".params." + it.key();
      if (it.value().is_array())
        c.params[it.key()] = ParamValue::cplx(complex_at(it.value(), pwhere));
      else
        c.params[it.key()] = ParamValue::real(number_at(it.value(), pwhere));
    }
    const json& ports = field(cj, "ports", where);
    if (!ports.is_array()) fail(where + ".ports", "expected an array");
    for (const auto& p : ports) c.ports.push_back(string_at(p, where + ".ports"));
    if (cj.contains("annotations")) {
      const json& ann = cj["annotations"];
      if (!ann.is_object()) fail(where + ".annotations", "expected an object");
      for (auto it = ann.begin(); it != ann.end(); ++it)
        c.annotations[it.key()] = string_at(it.value(), where + ".annotations");
    }
    nl.components.push_back(std::move(c));
  }

  const json& conns = field(j, "connections", "document");
  if (!conns.is_array()) fail("connections", "expected an array");
  for (size_t i = 0; i < conns.size(); ++i) {
    const std::string where = "connections[" + std::to_string(i) + "]";
    const json& cj = conns[i];
    if (!cj.is_object()) fail(where, "expected an object");
    nl.connections.push_back({string_at(field(cj, "from", where), where + ".from"),
                              string_at(field(cj, "to", where), where + ".to")});
  }

  if (auto problems = netlist_problems(nl); !problems.empty()) {
    std::ostringstream oss;
    oss << "netlist invariant violations:";
    for (const auto& p : problems) oss << " " << p << ";";
    throw ValidationError(oss.str());
  }
  return nl;
}

std::string emit_plan(const SynthesisPlan& plan) {
  std::string out = "{\n";
  out += "  \"blocks\": [";
  bool first = true;
  for (const auto& b : plan.blocks) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    {\"Ktilde\": " + complex_matrix(b.Ktilde, "     ") + ",\n";
    out += "     \"Rjj\": " + real_matrix(b.Rjj, "     ") + ",\n";
    out += "     \"S\": " + complex_matrix(b.S, "     ") + ",\n";
    out += "     \"index\": " + std::to_string(b.index) + "}";
  }
  out += first ? "],\n" : "\n  ],\n";
  out += "  \"couplings\": [";
  first = true;
  for (const auto& c : plan.couplings) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    {\"C\": " + real_matrix(c.c, "     ") + ",\n";
    out += "     \"j\": " + std::to_string(c.j) + ", \"k\": " + std::to_string(c.k) + "}";
  }
  out += first ? "],\n" : "\n  ],\n";
  out += "  \"format_version\": " + quote(kFormatVersion) + ",\n";
  out += "  \"m\": " + std::to_string(plan.m) + "\n";
  out += "}\n";
  return out;
}

SynthesisPlan parse_plan(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) fail("document", "expected an object");
  SynthesisPlan plan;
  plan.m = int_at(field(j, "m", "document"), "m");
  if (plan.m < 1) fail("m", "must be >= 1");
  const json& blocks = field(j, "blocks", "document");
  if (!blocks.is_array() || blocks.empty()) fail("blocks", "expected a nonempty array");
  for (size_t i = 0; i < blocks.size(); ++i) {
    const std::string where = "blocks[" + std::to_string(i) + "]";
    const json& bj = blocks[i];
    OneDofBlock b;
    b.index = int_at(field(bj, "index", where), where + ".index");
    b.S = complex_matrix_at(field(bj, "S", where), plan.m, plan.m, where + ".S");
    b.Ktilde =
        complex_matrix_at(field(bj, "Ktilde", where), plan.m, 2, where + ".Ktilde");
    b.Rjj = real_matrix_at(field(bj, "Rjj", where), 2, 2, where + ".Rjj");
    plan.blocks.push_back(std::move(b));
  }
  const json& couplings = field(j, "couplings", "document");
  if (!couplings.is_array()) fail("couplings", "expected an array");
  for (size_t i = 0; i < couplings.size(); ++i) {
    const std::string where = "couplings[" + std::to_string(i) + "]";
    const json& cj = couplings[i];
    DirectCoupling c;
    c.j = int_at(field(cj, "j", where), where + ".j");
    c.k = int_at(field(cj, "k", where), where + ".k");
    c.c = real_matrix_at(field(cj, "C", where), 2, 2, where + ".C");
    if (c.j < 0 || c.k <= c.j || c.k >= static_cast<int>(plan.blocks.size()))
      fail(where, "coupling indices must satisfy 0 <= j < k < blocks");
    plan.couplings.push_back(std::move(c));
  }
  return plan;
}

std::string emit_trajectory(const MomentTrajectory& traj) {
  std::string out = "{\n  \"times\": [";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    if (i) out += ", ";
    out += fmt_number(traj.times[i]);
  }
  out += "],\n  \"means\": [";
  for (size_t i = 0; i < traj.means.size(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (int r = 0; r < traj.means[i].size(); ++r) {
      if (r) out += ", ";
      out += fmt_number(traj.means[i](r));
    }
    out += "]";
  }
  out += "],\n  \"second_moments\": [";
  for (size_t i = 0; i < traj.second_moments.size(); ++i) {
    if (i) out += ", ";
    out += real_matrix(traj.second_moments[i], "    ");
  }
  out += "]\n}\n";
  return out;
}

}  // namespace lqsn
