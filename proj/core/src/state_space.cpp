#include "lqsn/state_space.hpp"

#include <sstream>

namespace lqsn {

namespace {

constexpr Complex kI{0.0, 1.0};

/// J_f = [[0, I_m], [-I_m, 0]] in the (dA, dA^#) ordering: the commutator
/// table of the field increments, common to vacuum and squeezed inputs.
CMat field_commutator_table(int m) {
  CMat jf = CMat::Zero(2 * m, 2 * m);
  jf.topRightCorner(m, m) = CMat::Identity(m, m);
  jf.bottomLeftCorner(m, m) = -CMat::Identity(m, m);
  return jf;
}

/// K recovered from the first m columns of B: K† = (1/2i) Θ B1 S†.
CMat recover_coupling(const RMat& theta, const CMat& b, const CMat& s) {
  const int m = static_cast<int>(s.rows());
  const CMat b1 = b.leftCols(m);
  const CMat k_dag = (theta * b1 * s.adjoint()) / (2.0 * kI);
  return k_dag.adjoint();
}

}  // namespace

StateSpace to_state_space(const OscillatorParams& g) {
  if (auto report = validate_oscillator(g); !report.valid()) {
    std::ostringstream oss;
    oss << "to_state_space: invalid oscillator:";
    for (const auto& v : report.violations) oss << " " << v.what << ";";
    throw ValidationError(oss.str());
  }
  if (g.n < 1) throw DimensionError("to_state_space: n must be >= 1");

  const RMat theta = make_commutation_matrix(g.n);
  StateSpace ss;
  ss.n = g.n;
  ss.m = g.m;
  // Im{K†K} is the elementwise imaginary part of a Hermitian matrix: real
  // antisymmetric, so A is real with no residue to drop.
  const RMat im_kdk = (g.K.adjoint() * g.K).imag();
  ss.A = 2.0 * theta * (g.R + im_kdk);
  ss.B = CMat::Zero(2 * g.n, 2 * g.m);
  ss.B.leftCols(g.m) = 2.0 * kI * theta * (-(g.K.adjoint() * g.S));
  ss.B.rightCols(g.m) = 2.0 * kI * theta * (g.K.transpose() * g.S.conjugate());
  ss.C = g.S * g.K;
  ss.D = g.S;
  return ss;
}

OscillatorParams from_state_space(const StateSpace& ss, double tol) {
  if (ss.n < 1) throw DimensionError("from_state_space: n must be >= 1");
  if (ss.A.rows() != 2 * ss.n || ss.A.cols() != 2 * ss.n ||
      ss.B.rows() != 2 * ss.n || ss.B.cols() != 2 * ss.m ||
      ss.C.rows() != ss.m || ss.C.cols() != 2 * ss.n ||
      ss.D.rows() != ss.m || ss.D.cols() != ss.m)
    throw DimensionError("from_state_space: inconsistent matrix dimensions");

  const double d_res = unitarity_residual(ss.D);
  if (d_res > tol)
    throw NotRealizableError("from_state_space: D is not unitary (residual " +
                             std::to_string(d_res) + ")");

  const RMat theta = make_commutation_matrix(ss.n);
  OscillatorParams g;
  g.n = ss.n;
  g.m = ss.m;
  g.S = ss.D;
  g.K = recover_coupling(theta, ss.B, ss.D);

  // Consistency of the second B block and the output map.
  const CMat b2_expect = 2.0 * kI * theta * (g.K.transpose() * g.S.conjugate());
  const double b_res = max_abs(CMat(ss.B.rightCols(ss.m) - b2_expect));
  const double c_res = max_abs(CMat(ss.C - g.S * g.K));
  if (b_res > tol || c_res > tol)
    throw NotRealizableError(
        "from_state_space: B/C inconsistent with a generalized open oscillator "
        "(B residual " + std::to_string(b_res) + ", C residual " +
        std::to_string(c_res) + ")");

  // -1/2 ΘA = R + Im{K†K}; the symmetric part is R, the antisymmetric part
  // must reproduce Im{K†K}.
  const RMat half = -0.5 * (theta * ss.A);
  g.R = sym_part(half);
  const RMat im_kdk = (g.K.adjoint() * g.K).imag();
  const double r_res = max_abs(RMat(antisym_part(half) - im_kdk));
  if (r_res > tol)
    throw NotRealizableError(
        "from_state_space: drift antisymmetric part inconsistent with coupling "
        "(residual " + std::to_string(r_res) + ")");
  return g;
}

RealizabilityReport check_physical_realizability(const StateSpace& ss, double tol) {
  RealizabilityReport report;
  if (ss.n < 1) return report;

  const RMat theta = make_commutation_matrix(ss.n);
  report.d_unitarity_residual = unitarity_residual(ss.D);

  const CMat jf = field_commutator_table(ss.m);
  const CMat ccr = 2.0 * kI * (ss.A * theta + theta * ss.A.transpose()) +
                   ss.B * jf * ss.B.transpose();
  report.ccr_residual = max_abs(ccr);

  const CMat k = recover_coupling(theta, ss.B, ss.D);
  report.c_consistency_residual = max_abs(CMat(ss.C - ss.D * k));

  report.is_realizable = report.d_unitarity_residual <= tol &&
                         report.ccr_residual <= tol &&
                         report.c_consistency_residual <= tol;
  if (report.is_realizable) {
    OscillatorParams g;
    g.n = ss.n;
    g.m = ss.m;
    g.S = ss.D;
    g.K = k;
    g.R = sym_part(RMat(-0.5 * (theta * ss.A)));
    report.recovered = std::move(g);
  }
  return report;
}

}  // namespace lqsn
