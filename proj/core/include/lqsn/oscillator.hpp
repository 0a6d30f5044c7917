#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lqsn/linalg.hpp"

namespace lqsn {

/// A generalized open oscillator G = (S, L, H) with L = K x and H = 1/2 x^T R x,
/// over the canonical vector x = (q_1, p_1, ..., q_n, p_n)^T with [q_j, p_k] = 2i δ_jk.
///
/// n = 0 is allowed and denotes a static network (S, 0, 0).
struct OscillatorParams {
  int n = 0;  ///< degrees of freedom
  int m = 0;  ///< field channels
  CMat S;     ///< m x m unitary scattering matrix
  CMat K;     ///< m x 2n coupling matrix
  RMat R;     ///< 2n x 2n real symmetric Hamiltonian matrix

  /// (S, 0, 0): a static network with no internal modes.
  static OscillatorParams static_network(const CMat& s);
  /// (I_m, 0, 0) with n internal modes, zero coupling and Hamiltonian.
  static OscillatorParams vacuum(int n, int m);
};

/// Θ = diag(J, ..., J) encoding [x, x^T] = 2iΘ.
RMat make_commutation_matrix(int n);

struct ValidationReport {
  struct Violation {
    std::string what;
    double residual = 0.0;
  };
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

ValidationReport validate_oscillator(const OscillatorParams& g, double tol = kDefaultTol);

/// Bilinear interaction x_k^T c x_j between oscillators j < k.
struct DirectCoupling {
  int j = 0;
  int k = 0;
  RMat c;  ///< 2 x 2 real
};

/// A reducible network: oscillators with equal channel counts, series wiring
/// G_{i+1} ◁ G_i, and direct couplings. The series list must either be empty
/// or the full consecutive chain.
struct NetworkSpec {
  std::vector<OscillatorParams> oscillators;
  std::vector<std::pair<int, int>> series;  ///< (source index, target index)
  std::vector<DirectCoupling> couplings;
};

/// G1 ⊞ G2: block-diagonal grouping of two independent oscillators.
OscillatorParams concatenate(const OscillatorParams& g1, const OscillatorParams& g2);

/// G2 ◁ G1: the output of g1 feeds the input of g2. The joint Hamiltonian
/// gains the feedback term H^f = (1/2i)(L2†S2L1 − L2ᵀS2^#L1^#).
OscillatorParams series(const OscillatorParams& g2, const OscillatorParams& g1);

/// Adds x_k^T c x_j interaction terms to R. `layout` lists the degrees of
/// freedom of each constituent oscillator inside g, in order.
OscillatorParams add_direct_interaction(const OscillatorParams& g,
                                        const std::vector<DirectCoupling>& couplings,
                                        const std::vector<int>& layout);

/// Folds a reducible network into a single generalized open oscillator.
OscillatorParams reduce_network(const NetworkSpec& spec);

}  // namespace lqsn
