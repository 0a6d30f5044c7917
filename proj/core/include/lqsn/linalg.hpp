#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace lqsn {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Shape or index inconsistency between operands.
struct DimensionError : Error {
  using Error::Error;
};
/// A definitional invariant (unitarity, symmetry, ...) is violated.
struct ValidationError : Error {
  using Error::Error;
};
/// A state-space model is not the dynamics of any generalized open oscillator.
struct NotRealizableError : Error {
  using Error::Error;
};
/// An operation's precondition does not hold for this input (caller may fall
/// back to an unconditional alternative).
struct NotApplicableError : Error {
  using Error::Error;
};
/// Malformed input document.
struct ParseError : Error {
  using Error::Error;
};

inline CMat dagger(const CMat& a) { return a.adjoint(); }

/// Elementwise conjugate, written A^# to distinguish it from the adjoint.
inline CMat entry_conj(const CMat& a) { return a.conjugate(); }

/// Largest absolute entry; the residual norm used in all reports.
inline double max_abs(const CMat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}
inline double max_abs(const RMat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline RMat sym_part(const RMat& a) { return 0.5 * (a + a.transpose()); }
inline RMat antisym_part(const RMat& a) { return 0.5 * (a - a.transpose()); }

inline double unitarity_residual(const CMat& s) {
  if (s.rows() != s.cols()) return std::abs(double(s.rows() - s.cols()));
  const CMat eye = CMat::Identity(s.rows(), s.cols());
  return std::max(max_abs(CMat(s.adjoint() * s - eye)),
                  max_abs(CMat(s * s.adjoint() - eye)));
}

inline double symmetry_residual(const RMat& r) {
  return max_abs(RMat(r - r.transpose()));
}

inline bool all_finite(const CMat& a) { return a.allFinite(); }
inline bool all_finite(const RMat& a) { return a.allFinite(); }

inline CMat block_diag(const CMat& a, const CMat& b) {
  CMat out = CMat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

inline RMat block_diag(const RMat& a, const RMat& b) {
  RMat out = RMat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// J = [[0,1],[-1,0]], the single-mode block of the commutation matrix.
inline RMat symplectic_j() {
  RMat j(2, 2);
  j << 0, 1, -1, 0;
  return j;
}

}  // namespace lqsn
