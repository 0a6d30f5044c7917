#pragma once

#include <optional>

#include "lqsn/oscillator.hpp"

namespace lqsn {

/// The quadruple of dx = A x dt + B (dA, dA^#)^T, dy = C x dt + D dA,
/// with the noise block ordering (dA, dA^#).
struct StateSpace {
  int n = 0;
  int m = 0;
  RMat A;  ///< 2n x 2n drift, units 1/time
  CMat B;  ///< 2n x 2m noise input
  CMat C;  ///< m x 2n output map
  CMat D;  ///< m x m feedthrough (= S for realizable systems)
};

/// A = 2Θ(R + Im{K†K}), B = 2iΘ[−K†S, KᵀS^#], C = SK, D = S.
StateSpace to_state_space(const OscillatorParams& g);

/// Inverts to_state_space. Throws NotRealizableError when D is not unitary or
/// the B/C/R consistency residuals exceed tol.
OscillatorParams from_state_space(const StateSpace& ss, double tol = kDefaultTol);

struct RealizabilityReport {
  bool is_realizable = false;
  double ccr_residual = 0.0;           ///< ‖2i(AΘ + ΘAᵀ) + B J_f Bᵀ‖
  double d_unitarity_residual = 0.0;   ///< ‖D†D − I‖
  double c_consistency_residual = 0.0; ///< ‖C − DK‖ with K recovered from B
  std::optional<OscillatorParams> recovered;
};

/// Report-style check: D unitary, CCR preservation, C = DK consistency.
RealizabilityReport check_physical_realizability(const StateSpace& ss,
                                                 double tol = kDefaultTol);

}  // namespace lqsn
