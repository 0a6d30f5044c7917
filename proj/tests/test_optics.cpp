#include <doctest.h>

#include <array>
#include <random>

#include "lqsn/optics.hpp"
#include "lqsn/random_systems.hpp"
#include "support/worked_example.hpp"

using namespace lqsn;
using namespace testsupport;

namespace {

constexpr double kPi = 3.14159265358979323846;

const NetlistComponent* find_component(const OpticalNetlist& nl, const std::string& id) {
  for (const auto& c : nl.components)
    if (c.id == id) return &c;
  return nullptr;
}

bool has_connection(const OpticalNetlist& nl, const std::string& from,
                    const std::string& to) {
  for (const auto& conn : nl.connections)
    if (conn.from == from && conn.to == to) return true;
  return false;
}

/// Brute-force expansion of x_k^T C x_l into mode monomials under
/// q = a + a*, p = -i(a - a*). Returns coefficients of
/// (a_k a_l, a_k a_l*, a_k* a_l, a_k* a_l*). Independent of the library path.
std::array<Complex, 4> expand_bilinear(const RMat& c) {
  const Complex quad[2][2] = {{{1, 0}, {1, 0}}, {{0, -1}, {0, 1}}};  // q, p on (a, a*)
  std::array<Complex, 4> coeff{};
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
          coeff[size_t(2 * u + v)] += c(r, s) * quad[r][u] * quad[s][v];
  return coeff;  // index: u = 1 means a_k*, v = 1 means a_l*
}

}  // namespace

TEST_CASE("quadrature_to_mode matches the substitution identity") {
  CMat k1(1, 2);
  k1 << Complex(1.5, 0), Complex(0, 0.5);
  const auto mc1 = quadrature_to_mode(k1);
  CHECK(mc1.alpha_t == Complex(2, 0));
  CHECK(mc1.beta_t == Complex(1, 0));

  CMat k2(1, 2);
  k2 << Complex(1, 0), Complex(0, 1);
  const auto mc2 = quadrature_to_mode(k2);
  CHECK(mc2.alpha_t == Complex(2, 0));
  CHECK(mc2.beta_t == Complex(0, 0));

  CMat zero = CMat::Zero(1, 2);
  const auto mc0 = quadrature_to_mode(zero);
  CHECK(mc0.alpha_t == Complex(0, 0));
  CHECK(mc0.beta_t == Complex(0, 0));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    CMat row(1, 2);
    row << Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng));
    const auto mc = quadrature_to_mode(row);
    CHECK(max_abs(CMat(mode_to_quadrature(mc) - row)) < 1e-15);
    // alpha q + beta p = alpha_t a + beta_t a* coefficientwise.
    CHECK(std::abs(row(0, 0) - Complex(0, 1) * row(0, 1) - mc.alpha_t) < 1e-15);
    CHECK(std::abs(row(0, 0) + Complex(0, 1) * row(0, 1) - mc.beta_t) < 1e-15);
  }
}

TEST_CASE("dpa_from_R pins detuning and pump") {
  RMat r(2, 2);
  r << 1, -2, -2, 0.5;
  const auto p = dpa_from_R(r);
  CHECK(p.delta == doctest::Approx(1.5));
  CHECK(p.epsilon.real() == doctest::Approx(-4.0));
  CHECK(p.epsilon.imag() == doctest::Approx(-0.5));

  const auto p1 = dpa_from_R(worked_R1());
  CHECK(p1.delta == doctest::Approx(5.0));
  CHECK(p1.epsilon == Complex(1, 1));

  const auto p0 = dpa_from_R(RMat::Zero(2, 2));
  CHECK(p0.delta == 0.0);
  CHECK(p0.epsilon == Complex(0, 0));

  RMat asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(dpa_from_R(asym), ValidationError);
}

TEST_CASE("dpa map is a bijection on symmetric matrices") {
  for (double a = -2.0; a <= 2.0; a += 0.5)
    for (double b = -2.0; b <= 2.0; b += 0.5)
      for (double c = -2.0; c <= 2.0; c += 0.5) {
        RMat r(2, 2);
        r << a, c, c, b;
        const auto p = dpa_from_R(r);
        CHECK(max_abs(RMat(dpa_to_R(p) - r)) < 1e-12);
      }
}

TEST_CASE("coupling_scheme1 reproduces the auxiliary-cavity parameters") {
  const auto p = coupling_scheme1({Complex(2, 0), Complex(1, 0)}, 100.0);
  CHECK(p.eps1 == Complex(10, 0));
  CHECK(p.eps2 == Complex(-20, 0));
  CHECK(p.bs_theta == doctest::Approx(-10.0));
  CHECK(p.bs_phi == 0.0);
  CHECK(p.input_phase == doctest::Approx(kPi));

  const auto zero = coupling_scheme1({Complex(0, 0), Complex(0, 0)}, 1.0);
  CHECK(zero.eps1 == Complex(0, 0));
  CHECK(zero.eps2 == Complex(0, 0));

  const auto imag = coupling_scheme1({Complex(0, 1), Complex(0, 0)}, 4.0);
  CHECK(imag.eps1 == Complex(0, 0));
  CHECK(std::abs(imag.eps2 - Complex(0, 2)) < 1e-15);
  CHECK(imag.bs_theta == doctest::Approx(1.0));
  CHECK(imag.bs_phi == doctest::Approx(-kPi / 2));

  CHECK_THROWS_AS(coupling_scheme1({Complex(1, 0), Complex(0, 0)}, 0.0),
                  ValidationError);
}

TEST_CASE("coupling_scheme1 satisfies the coupling condition algebraically") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> gamma_dist(0.5, 200.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ModeCoupling mc{Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng))};
    const double gamma2 = gamma_dist(rng);
    const auto p = coupling_scheme1(mc, gamma2);
    const double root = std::sqrt(gamma2);
    CHECK(std::abs(-std::conj(p.eps2) / root - mc.alpha_t) < 1e-12);
    CHECK(std::abs(p.eps1 / root - mc.beta_t) < 1e-12);
    // The (Theta, Phi) factorization re-multiplies to eps2 = 2 Theta e^{-i Phi}.
    const Complex eps2_back =
        2.0 * p.bs_theta * std::exp(Complex(0, -1) * p.bs_phi);
    CHECK(std::abs(eps2_back - p.eps2) < 1e-10 * std::max(1.0, std::abs(p.eps2)));
  }
}

TEST_CASE("coupling_scheme2 squeezer sandwich parameters") {
  const auto p = coupling_scheme2({Complex(2, 0), Complex(1, 0)});
  CHECK(p.gamma == doctest::Approx(3.0));
  CHECK(p.s == doctest::Approx(-std::acosh(2.0 / std::sqrt(3.0))));
  CHECK(p.theta == 0.0);

  const auto mirror = coupling_scheme2({Complex(2, 0), Complex(0, 0)});
  CHECK(mirror.gamma == doctest::Approx(4.0));
  CHECK(mirror.s == 0.0);
  CHECK(mirror.theta == 0.0);

  CHECK_THROWS_AS(coupling_scheme2({Complex(1, 0), Complex(2, 0)}),
                  NotApplicableError);
  CHECK_THROWS_AS(coupling_scheme2({Complex(0, 2), Complex(1, 0)}),
                  NotApplicableError);
}

TEST_CASE("both coupling schemes target the same mode coefficients") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = 1.0 + uni(rng);
    const double beta_mag = alpha * 0.9 * uni(rng);
    const double beta_arg = 2.0 * kPi * uni(rng) - kPi;
    const ModeCoupling mc{Complex(alpha, 0),
                          std::polar(beta_mag, beta_arg)};
    const auto s1 = coupling_scheme1(mc, 50.0);
    const auto s2 = coupling_scheme2(mc);
    // Scheme 1 reconstruction.
    CHECK(std::abs(-std::conj(s1.eps2) / std::sqrt(50.0) - mc.alpha_t) < 1e-12);
    // Scheme 2 reconstruction: alpha_t = sqrt(gamma) cosh(s), |beta_t| via sinh.
    CHECK(std::sqrt(s2.gamma) * std::cosh(s2.s) == doctest::Approx(alpha));
    CHECK(std::sqrt(s2.gamma) * std::abs(std::sinh(s2.s)) ==
          doctest::Approx(beta_mag));
    if (beta_mag > 1e-12) CHECK(s2.theta == doctest::Approx(beta_arg));
  }
}

TEST_CASE("direct_to_optics matches the formal expansion oracle") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    RMat c(2, 2);
    c << gauss(rng), gauss(rng), gauss(rng), gauss(rng);
    const auto d = direct_to_optics(c, 1, 0);
    const auto coeff = expand_bilinear(c);
    CHECK(std::abs(coeff[2] - d.eps1) < 1e-13);  // a_k* a_l
    CHECK(std::abs(coeff[3] - d.eps2) < 1e-13);  // a_k* a_l*
    // Hermiticity: the conjugate monomials carry conjugate coefficients.
    CHECK(std::abs(coeff[1] - std::conj(d.eps1)) < 1e-13);
    CHECK(std::abs(coeff[0] - std::conj(d.eps2)) < 1e-13);
    // Parameter assignments.
    CHECK(d.bs.theta == doctest::Approx(std::abs(d.eps1)));
    CHECK(std::abs(d.tms.pump - Complex(0, -2) * d.eps2) < 1e-13);
    CHECK(d.bs.psi == doctest::Approx(-d.bs.phi));
    if (std::abs(d.eps1) > 1e-12) {
      const Complex eps1_back =
          Complex(0, 1) * d.bs.theta * std::exp(Complex(0, -1) * d.bs.phi);
      CHECK(std::abs(eps1_back - d.eps1) < 1e-12);
    }
  }
}

TEST_CASE("direct_to_optics on pinned couplings") {
  CHECK(direct_to_optics(RMat::Zero(2, 2), 1, 0).eps1 == Complex(0, 0));
  CHECK(direct_to_optics(RMat::Zero(2, 2), 1, 0).eps2 == Complex(0, 0));

  const auto qqpp = direct_to_optics(RMat::Identity(2, 2), 1, 0);
  CHECK(qqpp.eps1 == Complex(2, 0));
  CHECK(qqpp.eps2 == Complex(0, 0));

  // The worked interaction 1/2 x2^T [[0,-1],[3,0]] x1: the expansion oracle
  // fixes eps1 = 2i (beam splitter) and eps2 = i (two-mode squeezer). The
  // substitution is unambiguous, so these are the frozen values; the
  // acceptance suite separately records a conflicting legacy target.
  const auto worked = direct_to_optics(worked_coupling(), 1, 0);
  CHECK(std::abs(worked.eps1 - Complex(0, 2)) < 1e-15);
  CHECK(std::abs(worked.eps2 - Complex(0, 1)) < 1e-15);
  const auto oracle = expand_bilinear(worked_coupling());
  CHECK(std::abs(oracle[2] - Complex(0, 2)) < 1e-15);
  CHECK(std::abs(oracle[3] - Complex(0, 1)) < 1e-15);
  CHECK(worked.bs.theta == doctest::Approx(2.0));
  CHECK(std::abs(worked.tms.pump) == doctest::Approx(2.0));
}

TEST_CASE("beam splitter parameter recovery round trip") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const CMat u = random_unitary(rng, 2);
    const auto p = beam_splitter_from_unitary(u);
    CHECK(max_abs(CMat(beam_splitter_matrix(p) - u)) < 1e-12);
    CHECK(unitarity_residual(beam_splitter_matrix(p)) < 1e-13);
  }
}

TEST_CASE("passive mesh reconstructs the scattering matrix") {
  CHECK(passive_unitary_to_mesh(CMat::Identity(3, 3)).empty());

  CMat phase(1, 1);
  phase(0, 0) = std::polar(1.0, 0.7);
  const auto single = passive_unitary_to_mesh(phase);
  REQUIRE(single.size() == 1);
  CHECK(single[0].kind == PassiveMeshElement::Kind::PhaseShifter);
  CHECK(single[0].ps.theta == doctest::Approx(0.7));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + int(rng() % 4);
    const CMat s = random_unitary(rng, m);
    const auto mesh = passive_unitary_to_mesh(s);
    CHECK(max_abs(CMat(mesh_matrix(mesh, m) - s)) < 1e-9);
  }

  CMat bad = 2.0 * CMat::Identity(2, 2);
  CHECK_THROWS_AS(passive_unitary_to_mesh(bad), ValidationError);
}

TEST_CASE("squeezer transformation identities") {
  CHECK(max_abs(CMat(squeezer_transformation(0.0, 0.3) - CMat::Identity(2, 2))) == 0.0);

  const RMat g = (RMat(2, 2) << 1, 0, 0, -1).finished();
  std::mt19937_64 rng(19);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    const double s = gauss(rng);
    const double theta = gauss(rng);
    const CMat q = squeezer_transformation(s, theta);
    CHECK(max_abs(CMat(q * g.cast<Complex>() * q.adjoint() - g.cast<Complex>())) < 1e-12);
    CHECK(max_abs(CMat(q * squeezer_inverse(s, theta) - CMat::Identity(2, 2))) < 1e-12);
  }

  const double s_w = -std::acosh(2.0 / std::sqrt(3.0));
  const CMat q = squeezer_transformation(s_w, 0.0);
  CHECK(max_abs(CMat(q * squeezer_inverse(s_w, 0.0) - CMat::Identity(2, 2))) < 1e-12);
}

TEST_CASE("squeezed field parameters satisfy the vacuum-generability constraint") {
  const auto vac = squeezed_field_params(0.0, 0.0);
  CHECK(vac.n == 0.0);
  CHECK(vac.c == Complex(0, 0));

  const auto one = squeezed_field_params(1.0, 0.0);
  CHECK(one.n == doctest::Approx(0.5 * std::cosh(2.0) - 0.5));
  CHECK(one.c.real() == doctest::Approx(0.5 * std::sinh(2.0)));
  CHECK(std::abs(one.n * (one.n + 1.0) - std::norm(one.c)) < 1e-14);

  const auto rot = squeezed_field_params(0.5, kPi / 2);
  CHECK(std::arg(rot.c) == doctest::Approx(kPi / 2));
}

TEST_CASE("quasi-unitary decomposition") {
  // A bare squeezer: D carries |s| and the factors re-multiply exactly.
  const double s = -0.8;
  const CMat q1 = quasiunitary_from_factors(CMat::Identity(1, 1), RVec::Constant(1, s),
                                            CMat::Identity(1, 1));
  const auto f1 = quasiunitary_decompose(q1);
  CHECK(f1.squeeze(0) == doctest::Approx(std::abs(s)));
  CHECK(max_abs(CMat(quasiunitary_from_factors(f1.passive1, f1.squeeze, f1.passive2) -
                     q1)) < 1e-10);

  // Passive input: zero squeeze diagonal.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + int(rng() % 4);
    const CMat u = random_unitary(rng, m);
    const CMat q = block_diag(u, CMat(u.conjugate()));
    const auto f = quasiunitary_decompose(q);
    CHECK(f.squeeze.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(max_abs(CMat(quasiunitary_from_factors(f.passive1, f.squeeze, f.passive2) -
                       q)) < 1e-9);
  }

  // Random active networks reconstruct.
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + int(rng() % 4);
    const CMat q = random_quasiunitary(rng, m);
    const auto f = quasiunitary_decompose(q);
    CHECK(max_abs(CMat(quasiunitary_from_factors(f.passive1, f.squeeze, f.passive2) -
                       q)) < 1e-9);
  }

  CHECK_THROWS_AS(quasiunitary_decompose(2.0 * CMat::Identity(4, 4)), ValidationError);
}

TEST_CASE("build_netlist on the worked example") {
  const auto plan = decompose(worked_system());
  const auto nl = build_netlist(plan);
  CHECK(netlist_problems(nl).empty());
  CHECK(nl.channels == 1);

  const auto* dpa0 = find_component(nl, "b0_dpa");
  REQUIRE(dpa0 != nullptr);
  CHECK(dpa0->params.at("delta").re == doctest::Approx(5.0));
  CHECK(dpa0->params.at("epsilon").value() == Complex(1, 1));

  const auto* dpa1 = find_component(nl, "b1_dpa");
  REQUIRE(dpa1 != nullptr);
  CHECK(dpa1->params.at("delta").re == doctest::Approx(2.0));
  CHECK(std::abs(dpa1->params.at("epsilon").value()) < 1e-12);

  const auto* tms = find_component(nl, "b0_ch0_tms");
  REQUIRE(tms != nullptr);
  CHECK(tms->params.at("pump").value() == Complex(10, 0));

  const auto* bs = find_component(nl, "b0_ch0_bs");
  REQUIRE(bs != nullptr);
  CHECK(bs->params.at("theta").re == doctest::Approx(-10.0));
  CHECK(bs->params.at("phi").re == 0.0);

  const auto* aux = find_component(nl, "b0_ch0_mirror");
  REQUIRE(aux != nullptr);
  CHECK(aux->params.at("kappa").re == doctest::Approx(100.0));

  const auto* ps = find_component(nl, "b0_ch0_psin");
  REQUIRE(ps != nullptr);
  CHECK(ps->params.at("theta").re == doctest::Approx(kPi));

  const auto* mirror = find_component(nl, "b1_ch0_mirror");
  REQUIRE(mirror != nullptr);
  CHECK(mirror->params.at("kappa").re == doctest::Approx(4.0));

  // The direct interaction appears as exactly one BS plus one TMS.
  const auto* cbs = find_component(nl, "c0_1_bs");
  const auto* ctms = find_component(nl, "c0_1_tms");
  REQUIRE(cbs != nullptr);
  REQUIRE(ctms != nullptr);
  CHECK(cbs->annotations.at("source_coupling") == "0,1");

  // The output of block 0 feeds block 1.
  CHECK(has_connection(nl, "b0_ch0_mirror.out0", "b1_ch0_mirror.in0"));
  CHECK(has_connection(nl, "$input.ch0", "b0_ch0_psin.in0"));
  CHECK(has_connection(nl, "b1_ch0_mirror.out0", "$output.ch0"));
}

TEST_CASE("build_netlist trivial and scattering cases") {
  const auto empty_plan = decompose(OscillatorParams::vacuum(1, 1));
  const auto empty = build_netlist(empty_plan);
  CHECK(empty.components.empty());
  REQUIRE(empty.connections.size() == 1);
  CHECK(empty.connections[0].from == "$input.ch0");
  CHECK(empty.connections[0].to == "$output.ch0");

  OscillatorParams phased = OscillatorParams::vacuum(1, 1);
  phased.S(0, 0) = std::polar(1.0, 0.4);
  const auto nl = build_netlist(decompose(phased));
  REQUIRE(nl.components.size() == 1);
  CHECK(nl.components[0].kind == "phase_shifter");
  CHECK(nl.components[0].params.at("theta").re == doctest::Approx(0.4));
  CHECK(nl.components[0].annotations.at("role") == "scattering_mesh");
}

TEST_CASE("emitted components carry unitary or quasi-unitary transformations") {
  std::mt19937_64 rng(31);
  RandomOscillatorOptions options;
  const RMat g_metric = (RMat(2, 2) << 1, 0, 0, -1).finished();
  for (int trial = 0; trial < 30; ++trial) {
    options.n = 1 + int(rng() % 3);
    options.m = 1 + int(rng() % 2);
    options.random_scattering = true;
    NetlistOptions nopt;
    nopt.prefer_squeezer_sandwich = (trial % 2 == 1);
    const auto nl = build_netlist(decompose(random_oscillator(rng, options)), nopt);
    for (const auto& comp : nl.components) {
      if (comp.kind == "beam_splitter") {
        BeamSplitterParams p;
        p.theta = comp.params.at("theta").re;
        p.phi = comp.params.at("phi").re;
        p.psi = comp.params.at("psi").re;
        p.xi = comp.params.at("xi").re;
        CHECK(unitarity_residual(beam_splitter_matrix(p)) < 1e-10);
      } else if (comp.kind == "squeezer") {
        const CMat q = squeezer_transformation(comp.params.at("s").re,
                                               comp.params.at("theta").re);
        CHECK(max_abs(CMat(q * g_metric.cast<Complex>() * q.adjoint() -
                           g_metric.cast<Complex>())) < 1e-10);
      }
    }
  }
}

TEST_CASE("build_netlist squeezer sandwich option") {
  OscillatorParams g;
  g.n = 1;
  g.m = 1;
  g.S = CMat::Identity(1, 1);
  g.K = mode_to_quadrature({Complex(2, 0), Complex(1, 0)});
  g.R = RMat::Zero(2, 2);

  NetlistOptions options;
  options.prefer_squeezer_sandwich = true;
  const auto nl = build_netlist(decompose(g), options);
  const auto* sqin = find_component(nl, "b0_ch0_sqin");
  const auto* mirror = find_component(nl, "b0_ch0_mirror");
  const auto* sqout = find_component(nl, "b0_ch0_sqout");
  REQUIRE(sqin != nullptr);
  REQUIRE(mirror != nullptr);
  REQUIRE(sqout != nullptr);
  CHECK(mirror->params.at("kappa").re == doctest::Approx(3.0));
  CHECK(sqin->params.at("s").re == doctest::Approx(-std::acosh(2.0 / std::sqrt(3.0))));
  CHECK(sqout->params.at("s").re == doctest::Approx(std::acosh(2.0 / std::sqrt(3.0))));

  // Without the flag the same row uses the auxiliary-cavity gadget.
  const auto nl1 = build_netlist(decompose(g));
  CHECK(find_component(nl1, "b0_ch0_sqin") == nullptr);
  CHECK(find_component(nl1, "b0_ch0_tms") != nullptr);
  const auto* aux = find_component(nl1, "b0_ch0_mirror");
  REQUIRE(aux != nullptr);
  CHECK(aux->params.at("kappa").re == doctest::Approx(100.0));
}
