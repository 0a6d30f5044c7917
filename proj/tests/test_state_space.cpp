#include <doctest.h>

#include <random>

#include "lqsn/random_systems.hpp"
#include "lqsn/state_space.hpp"
#include "support/rational.hpp"
#include "support/worked_example.hpp"

using namespace lqsn;
using namespace testsupport;

namespace {

OscillatorParams cavity(double gamma) {
  OscillatorParams g;
  g.n = 1;
  g.m = 1;
  g.S = CMat::Identity(1, 1);
  g.K = CMat(1, 2);
  const double root = std::sqrt(gamma) / 2.0;
  g.K << Complex(root, 0), Complex(0, root);
  g.R = RMat::Zero(2, 2);
  return g;
}

double osc_diff(const OscillatorParams& a, const OscillatorParams& b) {
  return std::max({max_abs(CMat(a.S - b.S)), max_abs(CMat(a.K - b.K)),
                   max_abs(RMat(a.R - b.R))});
}

}  // namespace

TEST_CASE("to_state_space on the single-mirror cavity") {
  const auto ss = to_state_space(cavity(1.0));
  CHECK(max_abs(RMat(ss.A + 0.5 * RMat::Identity(2, 2))) < 1e-15);
  CHECK(max_abs(CMat(ss.C - cavity(1.0).K)) == 0.0);
  CHECK(ss.D(0, 0) == Complex(1, 0));

  CMat b_expected(2, 2);
  b_expected << Complex(-1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1);
  CHECK(max_abs(CMat(ss.B - b_expected)) < 1e-15);
}

TEST_CASE("to_state_space trivial and worked systems") {
  const auto idle = to_state_space(OscillatorParams::vacuum(1, 1));
  CHECK(max_abs(idle.A) == 0.0);
  CHECK(max_abs(idle.B) == 0.0);
  CHECK(max_abs(idle.C) == 0.0);
  CHECK(idle.D(0, 0) == Complex(1, 0));

  const auto ss = to_state_space(worked_system());
  CHECK(max_abs(RMat(ss.A - worked_A())) < 1e-14);
}

TEST_CASE("worked drift matrix against the exact-rational oracle") {
  // A = 2 Theta (R + Im{K† K}) over exact Gaussian rationals.
  GMat k = gmat(1, 4);
  k[0][0] = GaussRat(Rat(3, 2));
  k[0][1] = GaussRat(Rat(0), Rat(1, 2));
  k[0][2] = GaussRat(Rat(1));
  k[0][3] = GaussRat(Rat(0), Rat(1));
  const GMat kdk = mul(adjoint(k), k);

  GMat r = gmat(4, 4);
  r[0][0] = GaussRat(Rat(2));
  r[0][1] = r[1][0] = GaussRat(Rat(1, 2));
  r[1][1] = GaussRat(Rat(3));
  r[2][2] = r[3][3] = GaussRat(Rat(1));

  GMat theta = gmat(4, 4);
  theta[0][1] = GaussRat(Rat(1));
  theta[1][0] = GaussRat(Rat(-1));
  theta[2][3] = GaussRat(Rat(1));
  theta[3][2] = GaussRat(Rat(-1));

  // Im{M} = (M - M^#)/2i elementwise.
  const GMat im_kdk = half_over_i(sub(kdk, entry_conj(kdk)));
  const GMat a = scale(mul(theta, add(r, im_kdk)), GaussRat(Rat(2)));

  const RMat expected = worked_A();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(a[size_t(i)][size_t(j)].im == Rat(0));
      CHECK(a[size_t(i)][size_t(j)].re.value() == expected(i, j));
    }
}

TEST_CASE("from_state_space inverts to_state_space") {
  const auto g = cavity(1.0);
  const auto recovered = from_state_space(to_state_space(g));
  CHECK(osc_diff(recovered, g) < 1e-12);
  CHECK(recovered.K(0, 0).real() == doctest::Approx(0.5));
  CHECK(recovered.K(0, 0).imag() == doctest::Approx(0.0));

  const auto idle = from_state_space(to_state_space(OscillatorParams::vacuum(1, 1)));
  CHECK(osc_diff(idle, OscillatorParams::vacuum(1, 1)) == 0.0);

  StateSpace bad = to_state_space(cavity(1.0));
  bad.m = 2;
  bad.D = CMat::Zero(2, 2);
  bad.D(0, 0) = 1.0;
  bad.D(1, 1) = 2.0;
  bad.B = CMat::Zero(2, 4);
  bad.C = CMat::Zero(2, 2);
  CHECK_THROWS_AS(from_state_space(bad), NotRealizableError);
}

TEST_CASE("check_physical_realizability report values") {
  const auto ss = to_state_space(cavity(1.0));
  const auto report = check_physical_realizability(ss);
  CHECK(report.is_realizable);
  CHECK(report.ccr_residual <= 1e-14);
  CHECK(report.d_unitarity_residual <= 1e-15);
  REQUIRE(report.recovered.has_value());
  CHECK(osc_diff(*report.recovered, cavity(1.0)) < 1e-12);

  StateSpace bad;
  bad.n = 1;
  bad.m = 1;
  bad.A = RMat::Identity(2, 2);
  bad.B = CMat::Zero(2, 2);
  bad.C = CMat::Zero(1, 2);
  bad.D = CMat::Identity(1, 1);
  const auto bad_report = check_physical_realizability(bad);
  CHECK_FALSE(bad_report.is_realizable);
  // 2i(A Theta + Theta A^T) = 4i Theta: residual 4 in max-abs.
  CHECK(bad_report.ccr_residual == doctest::Approx(4.0));
}

TEST_CASE("every generated system is realizable") {
  std::mt19937_64 rng(31);
  RandomOscillatorOptions options;
  for (int trial = 0; trial < 500; ++trial) {
    options.n = 1 + int(rng() % 4);
    options.m = 1 + int(rng() % 3);
    options.random_scattering = (trial % 2 == 0);
    const auto g = random_oscillator(rng, options);
    const auto report = check_physical_realizability(to_state_space(g), 1e-10);
    CHECK(report.is_realizable);
  }
}

TEST_CASE("bijection between parameterizations on random systems") {
  std::mt19937_64 rng(37);
  RandomOscillatorOptions options;
  double worst_skr = 0.0, worst_abcd = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    options.n = 1 + int(rng() % 4);
    options.m = 1 + int(rng() % 3);
    options.random_scattering = true;
    const auto g = random_oscillator(rng, options);
    const auto ss = to_state_space(g);
    const auto g2 = from_state_space(ss);
    worst_skr = std::max(worst_skr, osc_diff(g, g2));
    const auto ss2 = to_state_space(g2);
    worst_abcd = std::max(
        worst_abcd, std::max({max_abs(RMat(ss.A - ss2.A)), max_abs(CMat(ss.B - ss2.B)),
                              max_abs(CMat(ss.C - ss2.C)), max_abs(CMat(ss.D - ss2.D))}));
  }
  CHECK(worst_skr < 1e-10);
  CHECK(worst_abcd < 1e-10);
}

TEST_CASE("recovered Hamiltonian structure") {
  std::mt19937_64 rng(41);
  RandomOscillatorOptions options;
  options.n = 3;
  options.m = 2;
  options.random_scattering = true;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_oscillator(rng, options);
    const RMat im_kdk = (g.K.adjoint() * g.K).imag();
    CHECK(max_abs(RMat(im_kdk + im_kdk.transpose())) < 1e-12);
    const auto recovered = from_state_space(to_state_space(g));
    CHECK(symmetry_residual(recovered.R) < 1e-12);
  }
}

TEST_CASE("perturbing the drift off the realizable manifold is flagged") {
  const auto ss = to_state_space(worked_system());
  StateSpace bumped = ss;
  bumped.A(0, 0) += 1e-3;
  const auto report = check_physical_realizability(bumped, 1e-9);
  CHECK_FALSE(report.is_realizable);
  CHECK(report.ccr_residual > 1e-4);
  CHECK_THROWS_AS(from_state_space(bumped, 1e-9), NotRealizableError);
}
