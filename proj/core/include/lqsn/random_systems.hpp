#pragma once

#include <random>

#include "lqsn/oscillator.hpp"

namespace lqsn {

/// Haar-distributed m x m unitary (QR of a complex Gaussian matrix with
/// phase-fixed diagonal).
CMat random_unitary(std::mt19937_64& rng, int m);

struct RandomOscillatorOptions {
  int n = 1;
  int m = 1;
  double r_scale = 0.5;
  double k_scale = 0.5;
  bool random_scattering = false;  ///< S = I when false
  /// Draw R as a scaled Wishart matrix (positive definite) instead of a
  /// plain symmetrized Gaussian.
  bool positive_hamiltonian = false;
  /// When >= 0, redraw until max Re eig(A) is below this bound (keeps
  /// trajectory comparisons well-conditioned).
  double max_spectral_abscissa = -1.0;
};

OscillatorParams random_oscillator(std::mt19937_64& rng,
                                   const RandomOscillatorOptions& options);

/// Random quasi-unitary built as passive · squeeze · passive.
CMat random_quasiunitary(std::mt19937_64& rng, int m, double squeeze_scale = 1.0);

}  // namespace lqsn
