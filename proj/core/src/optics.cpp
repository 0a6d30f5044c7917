#include "lqsn/optics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace lqsn {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi].
double norm_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

}  // namespace

ModeCoupling quadrature_to_mode(const CMat& k_row) {
  if (k_row.rows() != 1 || k_row.cols() != 2)
    throw DimensionError("quadrature_to_mode: K row must be 1 x 2");
  const Complex alpha = k_row(0, 0);
  const Complex beta = k_row(0, 1);
  return {alpha - kI * beta, alpha + kI * beta};
}

CMat mode_to_quadrature(const ModeCoupling& mc) {
  CMat row(1, 2);
  row(0, 0) = 0.5 * (mc.alpha_t + mc.beta_t);
  row(0, 1) = 0.5 * kI * (mc.alpha_t - mc.beta_t);
  return row;
}

DpaParams dpa_from_R(const RMat& r, double tol) {
  if (r.rows() != 2 || r.cols() != 2)
    throw DimensionError("dpa_from_R: R must be 2 x 2");
  if (symmetry_residual(r) > tol)
    throw ValidationError("dpa_from_R: R not symmetric (residual " +
                          std::to_string(symmetry_residual(r)) + ")");
  DpaParams p;
  p.delta = r(0, 0) + r(1, 1);
  p.epsilon = Complex(2.0 * r(0, 1), r(1, 1) - r(0, 0));
  return p;
}

RMat dpa_to_R(const DpaParams& p) {
  RMat r(2, 2);
  r(0, 0) = 0.5 * (p.delta - p.epsilon.imag());
  r(1, 1) = 0.5 * (p.delta + p.epsilon.imag());
  r(0, 1) = r(1, 0) = 0.5 * p.epsilon.real();
  return r;
}

CMat beam_splitter_matrix(const BeamSplitterParams& p) {
  CMat rot(2, 2);
  rot << std::cos(p.theta), std::sin(p.theta), -std::sin(p.theta), std::cos(p.theta);
  CMat in = CMat::Zero(2, 2);
  in(0, 0) = std::exp(kI * (p.phi / 2.0));
  in(1, 1) = std::exp(-kI * (p.phi / 2.0));
  CMat out = CMat::Zero(2, 2);
  out(0, 0) = std::exp(kI * (p.psi / 2.0));
  out(1, 1) = std::exp(-kI * (p.psi / 2.0));
  return std::exp(kI * (p.xi / 2.0)) * out * rot * in;
}

BeamSplitterParams beam_splitter_from_unitary(const CMat& u, double tol) {
  if (u.rows() != 2 || u.cols() != 2)
    throw DimensionError("beam_splitter_from_unitary: matrix must be 2 x 2");
  if (double res = unitarity_residual(u); res > tol)
    throw ValidationError("beam_splitter_from_unitary: not unitary (residual " +
                          std::to_string(res) + ")");
  BeamSplitterParams p;
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  p.xi = std::arg(det);
  const Complex a = u(0, 0) * std::exp(-kI * (p.xi / 2.0));
  const Complex b = u(0, 1) * std::exp(-kI * (p.xi / 2.0));
  p.theta = std::atan2(std::abs(b), std::abs(a));
  // Half-angle phases are 4pi-periodic in this parametrization, so the sums
  // and differences below are kept unwrapped.
  const double eps = 1e-14;
  if (std::abs(b) < eps) {
    p.phi = 0.0;
    p.psi = 2.0 * std::arg(a);
  } else if (std::abs(a) < eps) {
    p.psi = 0.0;
    p.phi = -2.0 * std::arg(b);
  } else {
    p.psi = std::arg(a) + std::arg(b);
    p.phi = std::arg(a) - std::arg(b);
  }
  return p;
}

Scheme1Params coupling_scheme1(const ModeCoupling& mc, double gamma2) {
  if (!(gamma2 > 0.0))
    throw ValidationError("coupling_scheme1: gamma2 must be positive");
  Scheme1Params p;
  p.gamma2 = gamma2;
  const double root = std::sqrt(gamma2);
  p.eps1 = mc.beta_t * root;
  p.eps2 = -std::conj(mc.alpha_t) * root;
  p.input_phase = kPi;
  if (std::abs(p.eps2) == 0.0) {
    p.bs_theta = 0.0;
    p.bs_phi = 0.0;
  } else if (std::abs(p.eps2.imag()) <= 1e-14 * std::abs(p.eps2)) {
    // Real eps2: Phi = 0 and Theta carries the sign.
    p.bs_phi = 0.0;
    p.bs_theta = p.eps2.real() / 2.0;
  } else {
    p.bs_theta = std::abs(p.eps2) / 2.0;
    p.bs_phi = norm_angle(-std::arg(p.eps2));
  }
  return p;
}

Scheme2Params coupling_scheme2(const ModeCoupling& mc, double tol) {
  const double alpha = mc.alpha_t.real();
  if (std::abs(mc.alpha_t.imag()) > tol)
    throw NotApplicableError("coupling_scheme2: alpha_t must be real");
  if (!(alpha > std::abs(mc.beta_t)))
    throw NotApplicableError("coupling_scheme2: requires alpha_t > |beta_t| >= 0");
  Scheme2Params p;
  p.gamma = alpha * alpha - std::norm(mc.beta_t);
  p.s = -std::acosh(alpha / std::sqrt(p.gamma));
  p.theta = std::abs(mc.beta_t) == 0.0 ? 0.0 : std::arg(mc.beta_t);
  return p;
}

DirectInteractionOptics direct_to_optics(const RMat& c_kl, int /*k*/, int /*l*/) {
  if (c_kl.rows() != 2 || c_kl.cols() != 2)
    throw DimensionError("direct_to_optics: coupling block must be 2 x 2");
  if (!all_finite(c_kl))
    throw ValidationError("direct_to_optics: non-finite coupling block");

  // Formal substitution q = a + a*, p = -i(a - a*) into x_k^T C x_l collects
  //   eps1 = C00 + C11 + i(C10 - C01)   on a_k† a_l   (+ conjugate pair)
  //   eps2 = C00 - C11 + i(C01 + C10)   on a_k† a_l†  (+ conjugate pair)
  DirectInteractionOptics out;
  out.eps1 = Complex(c_kl(0, 0) + c_kl(1, 1), c_kl(1, 0) - c_kl(0, 1));
  out.eps2 = Complex(c_kl(0, 0) - c_kl(1, 1), c_kl(0, 1) + c_kl(1, 0));

  out.bs.theta = std::abs(out.eps1);
  out.bs.phi = std::abs(out.eps1) == 0.0
                   ? 0.0
                   : norm_angle(-std::arg(out.eps1) + kPi / 2.0);
  out.bs.psi = -out.bs.phi;
  out.bs.xi = 0.0;
  out.tms.pump = -2.0 * kI * out.eps2;
  return out;
}

std::vector<PassiveMeshElement> passive_unitary_to_mesh(const CMat& s, double tol) {
  const int m = static_cast<int>(s.rows());
  if (s.cols() != m) throw DimensionError("passive_unitary_to_mesh: S must be square");
  if (double res = unitarity_residual(s); res > tol)
    throw ValidationError("passive_unitary_to_mesh: S not unitary (residual " +
                          std::to_string(res) + ")");

  CMat u = s;
  // Givens rotations applied from the left; recorded so that
  // S = G_1† G_2† ... G_K† D with D diagonal phases.
  std::vector<std::pair<int, CMat>> rotations;  // (upper row index, 2x2 block)
  for (int col = 0; col < m - 1; ++col) {
    for (int row = m - 1; row > col; --row) {
      const Complex x = u(row - 1, col);
      const Complex y = u(row, col);
      if (std::abs(y) < 1e-14) continue;
      const double rho = std::hypot(std::abs(x), std::abs(y));
      CMat g(2, 2);
      g << std::conj(x) / rho, std::conj(y) / rho, -y / rho, x / rho;
      u.middleRows(row - 1, 2) = g * u.middleRows(row - 1, 2);
      u(row, col) = 0.0;
      rotations.emplace_back(row - 1, std::move(g));
    }
  }

  std::vector<PassiveMeshElement> mesh;
  // Residual diagonal phases act first on the incoming fields.
  for (int i = 0; i < m; ++i) {
    const double phase = std::arg(u(i, i));
    if (std::abs(phase) < 1e-14) continue;
    PassiveMeshElement e;
    e.kind = PassiveMeshElement::Kind::PhaseShifter;
    e.port_a = i;
    e.ps.theta = phase;
    mesh.push_back(e);
  }
  for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) {
    PassiveMeshElement e;
    e.kind = PassiveMeshElement::Kind::BeamSplitter;
    e.port_a = it->first;
    e.port_b = it->first + 1;
    e.bs = beam_splitter_from_unitary(it->second.adjoint());
    mesh.push_back(e);
  }
  return mesh;
}

CMat mesh_matrix(const std::vector<PassiveMeshElement>& mesh, int m) {
  CMat total = CMat::Identity(m, m);
  for (const auto& e : mesh) {
    CMat factor = CMat::Identity(m, m);
    if (e.kind == PassiveMeshElement::Kind::PhaseShifter) {
      factor(e.port_a, e.port_a) = std::exp(kI * e.ps.theta);
    } else {
      const CMat b = beam_splitter_matrix(e.bs);
      factor(e.port_a, e.port_a) = b(0, 0);
      factor(e.port_a, e.port_b) = b(0, 1);
      factor(e.port_b, e.port_a) = b(1, 0);
      factor(e.port_b, e.port_b) = b(1, 1);
    }
    total = factor * total;
  }
  return total;
}

CMat quasiunitary_from_factors(const CMat& u1, const RVec& d, const CMat& u2) {
  const int m = static_cast<int>(u1.rows());
  CMat q = CMat::Zero(2 * m, 2 * m);
  const RVec ch = d.array().cosh();
  const RVec sh = d.array().sinh();
  CMat mid = CMat::Zero(2 * m, 2 * m);
  mid.topLeftCorner(m, m) = ch.asDiagonal();
  mid.bottomRightCorner(m, m) = ch.asDiagonal();
  mid.topRightCorner(m, m) = sh.asDiagonal();
  mid.bottomLeftCorner(m, m) = sh.asDiagonal();
  const CMat p1 = block_diag(u1, CMat(u1.conjugate()));
  const CMat p2 = block_diag(u2, CMat(u2.conjugate()));
  return p1 * mid * p2;
}

namespace {

/// Principal square root of a (numerically) unitary matrix via Schur form.
CMat unitary_sqrt(const CMat& u) {
  Eigen::ComplexSchur<CMat> schur(u);
  const CMat& q = schur.matrixU();
  CVec diag = schur.matrixT().diagonal();
  for (int i = 0; i < diag.size(); ++i) diag(i) = std::sqrt(diag(i));
  return q * diag.asDiagonal() * q.adjoint();
}

}  // namespace

QuasiUnitaryFactors quasiunitary_decompose(const CMat& q, double tol) {
  if (q.rows() != q.cols() || q.rows() % 2 != 0)
    throw DimensionError("quasiunitary_decompose: matrix must be 2m x 2m");
  const int m = static_cast<int>(q.rows()) / 2;

  const CMat q1 = q.topLeftCorner(m, m);
  const CMat q2 = q.topRightCorner(m, m);
  double structure_res =
      std::max(max_abs(CMat(q.bottomLeftCorner(m, m) - q2.conjugate())),
               max_abs(CMat(q.bottomRightCorner(m, m) - q1.conjugate())));
  CMat g = CMat::Zero(2 * m, 2 * m);
  g.topLeftCorner(m, m) = CMat::Identity(m, m);
  g.bottomRightCorner(m, m) = -CMat::Identity(m, m);
  const double quasi_res = max_abs(CMat(q * g * q.adjoint() - g));
  if (structure_res > tol || quasi_res > tol)
    throw ValidationError(
        "quasiunitary_decompose: not quasi-unitary (structure residual " +
        std::to_string(structure_res) + ", Q G Q† residual " +
        std::to_string(quasi_res) + ")");

  // Q2 Q2† = U sinh²D U†, Q1 Q1† = U cosh²D U†.
  Eigen::SelfAdjointEigenSolver<CMat> eig(q2 * q2.adjoint());
  RVec sig2 = eig.eigenvalues().cwiseMax(0.0);
  CMat u = eig.eigenvectors();
  // Descending squeeze magnitudes for a deterministic factor order.
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return sig2(a) > sig2(b); });
  RVec sig(m);
  CMat usort(m, m);
  for (int i = 0; i < m; ++i) {
    sig(i) = std::sqrt(sig2(order[i]));
    usort.col(i) = u.col(order[i]);
  }
  u = usort;
  RVec d(m), ch(m);
  for (int i = 0; i < m; ++i) {
    d(i) = std::asinh(sig(i));
    ch(i) = std::cosh(d(i));
  }

  CMat w = RVec(ch.cwiseInverse()).asDiagonal() * (u.adjoint() * q1);
  CMat x = u.adjoint() * q2 * w.transpose();

  // Within each group of equal cosh values, X is (squeeze) x (symmetric
  // unitary); split off a Takagi factor E with E E^T = X/s and absorb it into
  // the passive factors. For distinct values this reduces to a phase.
  const double group_tol = 1e-8;
  int start = 0;
  while (start < m) {
    int stop = start + 1;
    while (stop < m && std::abs(ch(stop) - ch(start)) < group_tol) ++stop;
    const int len = stop - start;
    if (sig(start) > 1e-10) {
      if (len == 1) {
        const double phase = std::arg(x(start, start));
        if (std::abs(phase) > 0.0) {
          const Complex h = std::exp(kI * (phase / 2.0));
          u.col(start) *= h;
          w.row(start) *= std::conj(h);
        }
      } else {
        const CMat block = x.block(start, start, len, len) / sig(start);
        const CMat sym = 0.5 * (block + block.transpose());
        const CMat e = unitary_sqrt(sym);
        u.middleCols(start, len) = u.middleCols(start, len) * e;
        w.middleRows(start, len) = e.adjoint() * w.middleRows(start, len);
      }
    }
    start = stop;
  }

  QuasiUnitaryFactors factors{u, d, w};
  const double rec = max_abs(CMat(quasiunitary_from_factors(u, d, w) - q));
  if (rec > std::max(tol, 1e-9))
    throw ValidationError("quasiunitary_decompose: reconstruction residual " +
                          std::to_string(rec));
  return factors;
}

CMat squeezer_transformation(double s, double theta) {
  CMat q(2, 2);
  q(0, 0) = std::cosh(s);
  q(0, 1) = std::exp(kI * theta) * std::sinh(s);
  q(1, 0) = std::exp(-kI * theta) * std::sinh(s);
  q(1, 1) = std::cosh(s);
  return q;
}

CMat squeezer_inverse(double s, double theta) {
  return squeezer_transformation(-s, theta);
}

SqueezedFieldParams squeezed_field_params(double s, double theta) {
  SqueezedFieldParams p;
  p.s = s;
  p.theta = theta;
  p.n = 0.5 * std::cosh(2.0 * s) - 0.5;
  p.c = 0.5 * std::exp(kI * theta) * std::sinh(2.0 * s);
  return p;
}

namespace {

struct NetlistBuilder {
  const SynthesisPlan& plan;
  const NetlistOptions& opt;
  OpticalNetlist nl;
  // Per-channel dangling output port, starting at the external inputs.
  std::vector<std::string> prev;

  NetlistBuilder(const SynthesisPlan& p, const NetlistOptions& o) : plan(p), opt(o) {
    nl.channels = p.m;
    for (int l = 0; l < p.m; ++l) prev.push_back("$input.ch" + std::to_string(l));
  }

  NetlistComponent& add(const std::string& id, const std::string& kind,
                        std::vector<std::string> ports) {
    NetlistComponent c;
    c.id = id;
    c.kind = kind;
    c.ports = std::move(ports);
    nl.components.push_back(std::move(c));
    return nl.components.back();
  }

  void wire(const std::string& from, const std::string& to) {
    nl.connections.push_back({from, to});
  }

  /// Splices a 1-in/1-out field component into channel l's chain.
  void splice(int l, const std::string& id) {
    wire(prev[l], id + ".in0");
    prev[l] = id + ".out0";
  }

  void front_end_mesh() {
    const CMat s1 = plan.blocks.front().S;
    const CMat eye = CMat::Identity(plan.m, plan.m);
    if (max_abs(CMat(s1 - eye)) <= opt.tol) return;
    const auto mesh = passive_unitary_to_mesh(s1, opt.tol);
    int seq = 0;
    for (const auto& e : mesh) {
      const std::string id = "mesh" + std::to_string(seq++) +
                             (e.kind == PassiveMeshElement::Kind::PhaseShifter ? "_ps" : "_bs");
      if (e.kind == PassiveMeshElement::Kind::PhaseShifter) {
        auto& c = add(id, "phase_shifter", {"in0", "out0"});
        c.params["theta"] = ParamValue::real(e.ps.theta);
        c.annotations["role"] = "scattering_mesh";
        splice(e.port_a, id);
      } else {
        auto& c = add(id, "beam_splitter", {"in0", "in1", "out0", "out1"});
        c.params["theta"] = ParamValue::real(e.bs.theta);
        c.params["phi"] = ParamValue::real(e.bs.phi);
        c.params["psi"] = ParamValue::real(e.bs.psi);
        c.params["xi"] = ParamValue::real(e.bs.xi);
        c.annotations["role"] = "scattering_mesh";
        wire(prev[e.port_a], id + ".in0");
        wire(prev[e.port_b], id + ".in1");
        prev[e.port_a] = id + ".out0";
        prev[e.port_b] = id + ".out1";
      }
    }
  }

  void block_cavity(const OneDofBlock& block) {
    const DpaParams dpa = dpa_from_R(block.Rjj, opt.tol);
    if (std::abs(dpa.delta) <= opt.tol && std::abs(dpa.epsilon) <= opt.tol) return;
    auto& c = add("b" + std::to_string(block.index) + "_dpa", "dpa", {"mode"});
    c.params["delta"] = ParamValue::real(dpa.delta);
    c.params["epsilon"] = ParamValue::cplx(dpa.epsilon);
    c.annotations["source_block"] = std::to_string(block.index);
    if (std::abs(dpa.epsilon) > opt.tol) c.annotations["pump_frequency"] = "2*omega_r";
  }

  void channel_coupling(const OneDofBlock& block, int l) {
    const std::string base =
        "b" + std::to_string(block.index) + "_ch" + std::to_string(l);
    const ModeCoupling mc = quadrature_to_mode(block.Ktilde.row(l));
    const double na = std::abs(mc.alpha_t), nb = std::abs(mc.beta_t);
    const std::string src = std::to_string(block.index);
    if (na <= opt.tol && nb <= opt.tol) return;

    if (nb <= opt.tol) {
      // L = alpha_t a: a partially transmitting mirror, with phase shifters
      // compensating a non-real alpha_t.
      const double phase = std::arg(mc.alpha_t);
      if (std::abs(phase) > opt.tol) {
        auto& pin = add(base + "_psin", "phase_shifter", {"in0", "out0"});
        pin.params["theta"] = ParamValue::real(-phase);
        pin.annotations["source_block"] = src;
        splice(l, base + "_psin");
      }
      auto& mir = add(base + "_mirror", "mirror", {"in0", "out0"});
      mir.params["kappa"] = ParamValue::real(na * na);
      mir.annotations["source_block"] = src;
      splice(l, base + "_mirror");
      if (std::abs(phase) > opt.tol) {
        auto& pout = add(base + "_psout", "phase_shifter", {"in0", "out0"});
        pout.params["theta"] = ParamValue::real(phase);
        pout.annotations["source_block"] = src;
        splice(l, base + "_psout");
      }
      return;
    }

    if (opt.prefer_squeezer_sandwich) {
      try {
        const Scheme2Params s2 = coupling_scheme2(mc, opt.tol);
        if (std::abs(s2.s) > opt.tol) {
          auto& sin_ = add(base + "_sqin", "squeezer", {"in0", "out0"});
          sin_.params["s"] = ParamValue::real(s2.s);
          sin_.params["theta"] = ParamValue::real(s2.theta);
          sin_.annotations["source_block"] = src;
          splice(l, base + "_sqin");
        }
        auto& mir = add(base + "_mirror", "mirror", {"in0", "out0"});
        mir.params["kappa"] = ParamValue::real(s2.gamma);
        mir.annotations["source_block"] = src;
        splice(l, base + "_mirror");
        if (std::abs(s2.s) > opt.tol) {
          auto& sout = add(base + "_sqout", "squeezer", {"in0", "out0"});
          sout.params["s"] = ParamValue::real(-s2.s);
          sout.params["theta"] = ParamValue::real(s2.theta);
          sout.annotations["source_block"] = src;
          splice(l, base + "_sqout");
        }
        return;
      } catch (const NotApplicableError&) {
        // fall through to scheme 1
      }
    }

    const double gamma2 = opt.gamma2 > 0.0
                              ? opt.gamma2
                              : 25.0 * std::max({na * na, nb * nb, 1.0});
    const Scheme1Params s1 = coupling_scheme1(mc, gamma2);
    auto& pin = add(base + "_psin", "phase_shifter", {"in0", "out0"});
    pin.params["theta"] = ParamValue::real(s1.input_phase);
    pin.annotations["source_block"] = src;
    splice(l, base + "_psin");
    auto& mir = add(base + "_mirror", "mirror", {"in0", "out0"});
    mir.params["kappa"] = ParamValue::real(s1.gamma2);
    mir.annotations["source_block"] = src;
    mir.annotations["role"] = "auxiliary_cavity_mirror";
    splice(l, base + "_mirror");
    if (std::abs(s1.eps1) > opt.tol) {
      auto& tms = add(base + "_tms", "two_mode_squeezer", {"mode_a", "mode_b"});
      tms.params["pump"] = ParamValue::cplx(s1.eps1);
      tms.annotations["source_block"] = src;
      tms.annotations["pump_frequency"] = "2*omega_r";
    }
    if (std::abs(s1.eps2) > opt.tol) {
      auto& bs = add(base + "_bs", "beam_splitter", {"mode_a", "mode_b"});
      bs.params["theta"] = ParamValue::real(s1.bs_theta);
      bs.params["phi"] = ParamValue::real(s1.bs_phi);
      bs.params["psi"] = ParamValue::real(-s1.bs_phi);
      bs.params["xi"] = ParamValue::real(0.0);
      bs.annotations["source_block"] = src;
    }
  }

  void coupling(const DirectCoupling& cp) {
    const std::string base = "c" + std::to_string(cp.j) + "_" + std::to_string(cp.k);
    const auto d = direct_to_optics(cp.c, cp.k, cp.j);
    const std::string tag = std::to_string(cp.j) + "," + std::to_string(cp.k);
    auto& bs = add(base + "_bs", "beam_splitter", {"mode_a", "mode_b"});
    bs.params["theta"] = ParamValue::real(d.bs.theta);
    bs.params["phi"] = ParamValue::real(d.bs.phi);
    bs.params["psi"] = ParamValue::real(d.bs.psi);
    bs.params["xi"] = ParamValue::real(d.bs.xi);
    bs.annotations["source_coupling"] = tag;
    if (std::abs(d.eps2) > opt.tol) {
      auto& tms = add(base + "_tms", "two_mode_squeezer", {"mode_a", "mode_b"});
      tms.params["pump"] = ParamValue::cplx(d.tms.pump);
      tms.annotations["source_coupling"] = tag;
      tms.annotations["pump_frequency"] = "2*omega_r";
    }
  }

  OpticalNetlist build() {
    front_end_mesh();
    for (const auto& block : plan.blocks) {
      block_cavity(block);
      for (int l = 0; l < plan.m; ++l) channel_coupling(block, l);
    }
    for (const auto& cp : plan.couplings) coupling(cp);
    for (int l = 0; l < plan.m; ++l)
      wire(prev[l], "$output.ch" + std::to_string(l));
    return std::move(nl);
  }
};

}  // namespace

OpticalNetlist build_netlist(const SynthesisPlan& plan, const NetlistOptions& options) {
  if (plan.blocks.empty()) throw DimensionError("build_netlist: empty plan");
  NetlistBuilder builder(plan, options);
  OpticalNetlist nl = builder.build();
  if (auto problems = netlist_problems(nl); !problems.empty()) {
    std::ostringstream oss;
    oss << "build_netlist: internal inconsistency:";
    for (const auto& p : problems) oss << " " << p << ";";
    throw Error(oss.str());
  }
  return nl;
}

std::vector<std::string> netlist_problems(const OpticalNetlist& nl) {
  std::vector<std::string> problems;
  static const std::set<std::string> kKinds = {
      "dpa",     "mirror",        "beam_splitter",       "two_mode_squeezer",
      "squeezer", "phase_shifter", "passive_mesh_element"};

  std::set<std::string> ids;
  std::set<std::string> ports;
  for (const auto& c : nl.components) {
    if (!ids.insert(c.id).second) problems.push_back("duplicate id " + c.id);
    if (!kKinds.count(c.kind)) problems.push_back("unknown kind " + c.kind);
    for (const auto& p : c.ports) ports.insert(c.id + "." + p);
    for (const auto& [key, v] : c.params)
      if (!std::isfinite(v.re) || !std::isfinite(v.im))
        problems.push_back("non-finite param " + key + " on " + c.id);
  }
  auto endpoint_ok = [&](const std::string& ep) {
    const auto dot = ep.find('.');
    if (dot == std::string::npos) return false;
    const std::string id = ep.substr(0, dot);
    const std::string port = ep.substr(dot + 1);
    if (id == "$input" || id == "$output") {
      if (port.rfind("ch", 0) != 0) return false;
      try {
        const int l = std::stoi(port.substr(2));
        return l >= 0 && l < nl.channels;
      } catch (...) {
        return false;
      }
    }
    return ports.count(ep) > 0;
  };
  for (const auto& conn : nl.connections) {
    if (!endpoint_ok(conn.from))
      problems.push_back("connection from unknown port " + conn.from);
    if (!endpoint_ok(conn.to))
      problems.push_back("connection to unknown port " + conn.to);
  }
  return problems;
}

}  // namespace lqsn
