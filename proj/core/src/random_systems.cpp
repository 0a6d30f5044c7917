#include "lqsn/random_systems.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "lqsn/optics.hpp"
#include "lqsn/state_space.hpp"

namespace lqsn {

CMat random_unitary(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat z(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) z(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= std::abs(d) == 0.0 ? 1.0 : d / std::abs(d);
  }
  return q;
}

OscillatorParams random_oscillator(std::mt19937_64& rng,
                                   const RandomOscillatorOptions& options) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    OscillatorParams g;
    g.n = options.n;
    g.m = options.m;
    g.S = options.random_scattering ? random_unitary(rng, options.m)
                                    : CMat::Identity(options.m, options.m);
    g.K = CMat(options.m, 2 * options.n);
    for (int i = 0; i < g.K.rows(); ++i)
      for (int j = 0; j < g.K.cols(); ++j)
        g.K(i, j) = options.k_scale * Complex(gauss(rng), gauss(rng));
    RMat raw(2 * options.n, 2 * options.n);
    for (int i = 0; i < raw.rows(); ++i)
      for (int j = 0; j < raw.cols(); ++j) raw(i, j) = gauss(rng);
    g.R = options.positive_hamiltonian
              ? RMat(options.r_scale * (raw * raw.transpose()) /
                     std::sqrt(2.0 * options.n))
              : RMat(options.r_scale * sym_part(raw));

    if (options.max_spectral_abscissa < 0.0) return g;
    const StateSpace ss = to_state_space(g);
    const Eigen::EigenSolver<RMat> eig(ss.A);
    if (eig.eigenvalues().real().maxCoeff() <= options.max_spectral_abscissa)
      return g;
  }
  throw Error("random_oscillator: spectral abscissa bound not reached");
}

CMat random_quasiunitary(std::mt19937_64& rng, int m, double squeeze_scale) {
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  RVec d(m);
  for (int i = 0; i < m; ++i) d(i) = squeeze_scale * uni(rng);
  return quasiunitary_from_factors(random_unitary(rng, m), d, random_unitary(rng, m));
}

}  // namespace lqsn
