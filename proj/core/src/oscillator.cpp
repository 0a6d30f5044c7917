#include "lqsn/oscillator.hpp"

#include <numeric>

namespace lqsn {

OscillatorParams OscillatorParams::static_network(const CMat& s) {
  OscillatorParams g;
  g.n = 0;
  g.m = static_cast<int>(s.rows());
  g.S = s;
  g.K = CMat::Zero(g.m, 0);
  g.R = RMat::Zero(0, 0);
  return g;
}

OscillatorParams OscillatorParams::vacuum(int n, int m) {
  OscillatorParams g;
  g.n = n;
  g.m = m;
  g.S = CMat::Identity(m, m);
  g.K = CMat::Zero(m, 2 * n);
  g.R = RMat::Zero(2 * n, 2 * n);
  return g;
}

RMat make_commutation_matrix(int n) {
  if (n < 1) throw DimensionError("make_commutation_matrix: n must be >= 1");
  RMat theta = RMat::Zero(2 * n, 2 * n);
  const RMat j = symplectic_j();
  for (int i = 0; i < n; ++i) theta.block<2, 2>(2 * i, 2 * i) = j;
  return theta;
}

ValidationReport validate_oscillator(const OscillatorParams& g, double tol) {
  ValidationReport report;
  auto flag = [&](const std::string& what, double residual) {
    report.violations.push_back({what, residual});
  };

  if (g.n < 0 || g.m < 0) {
    flag("negative dimension", std::abs(double(std::min(g.n, g.m))));
    return report;
  }
  bool dims_ok = true;
  if (g.S.rows() != g.m || g.S.cols() != g.m) {
    flag("S is not m x m", 0.0);
    dims_ok = false;
  }
  if (g.K.rows() != g.m || g.K.cols() != 2 * g.n) {
    flag("K is not m x 2n", 0.0);
    dims_ok = false;
  }
  if (g.R.rows() != 2 * g.n || g.R.cols() != 2 * g.n) {
    flag("R is not 2n x 2n", 0.0);
    dims_ok = false;
  }
  if (!dims_ok) return report;

  if (!all_finite(g.S) || !all_finite(g.K) || !all_finite(g.R)) {
    flag("non-finite entries", 0.0);
    return report;
  }
  if (double res = unitarity_residual(g.S); res > tol) flag("S not unitary", res);
  if (double res = symmetry_residual(g.R); res > tol) flag("R not symmetric", res);
  return report;
}

OscillatorParams concatenate(const OscillatorParams& g1, const OscillatorParams& g2) {
  OscillatorParams out;
  out.n = g1.n + g2.n;
  out.m = g1.m + g2.m;
  out.S = block_diag(g1.S, g2.S);
  out.K = block_diag(g1.K, g2.K);
  out.R = block_diag(g1.R, g2.R);
  return out;
}

OscillatorParams series(const OscillatorParams& g2, const OscillatorParams& g1) {
  if (g1.m != g2.m)
    throw DimensionError("series: channel counts differ (" + std::to_string(g1.m) +
                         " vs " + std::to_string(g2.m) + ")");
  const int m = g1.m;
  OscillatorParams out;
  out.n = g1.n + g2.n;
  out.m = m;
  out.S = g2.S * g1.S;

  out.K = CMat::Zero(m, 2 * out.n);
  out.K.leftCols(2 * g1.n) = g2.S * g1.K;
  out.K.rightCols(2 * g2.n) = g2.K;

  // Cross Hamiltonian block: H^f = x2^T F x1 with
  // F = (1/2i)(K2† S2 K1 − K2ᵀ S2^# K1^#), the elementwise imaginary part of
  // K2† S2 K1 (the subtracted term is its elementwise conjugate).
  const CMat cross = g2.K.adjoint() * g2.S * g1.K;
  const RMat f = cross.imag();

  out.R = RMat::Zero(2 * out.n, 2 * out.n);
  out.R.topLeftCorner(2 * g1.n, 2 * g1.n) = g1.R;
  out.R.bottomRightCorner(2 * g2.n, 2 * g2.n) = g2.R;
  out.R.topRightCorner(2 * g1.n, 2 * g2.n) = f.transpose();
  out.R.bottomLeftCorner(2 * g2.n, 2 * g1.n) = f;
  return out;
}

OscillatorParams add_direct_interaction(const OscillatorParams& g,
                                        const std::vector<DirectCoupling>& couplings,
                                        const std::vector<int>& layout) {
  const int total = std::accumulate(layout.begin(), layout.end(), 0);
  if (total != g.n)
    throw DimensionError("add_direct_interaction: layout does not sum to n");

  std::vector<int> offset(layout.size(), 0);
  for (size_t i = 1; i < layout.size(); ++i)
    offset[i] = offset[i - 1] + 2 * layout[i - 1];

  OscillatorParams out = g;
  for (const auto& cp : couplings) {
    if (cp.j < 0 || cp.k < 0 || cp.j >= static_cast<int>(layout.size()) ||
        cp.k >= static_cast<int>(layout.size()) || cp.j == cp.k)
      throw DimensionError("add_direct_interaction: coupling index out of range");
    if (cp.c.rows() != 2 * layout[cp.k] || cp.c.cols() != 2 * layout[cp.j])
      throw DimensionError("add_direct_interaction: coupling block size mismatch");
    // 1/2 x^T R x gains x_k^T c x_j  =>  R_kj += c, R_jk += c^T.
    out.R.block(offset[cp.k], offset[cp.j], 2 * layout[cp.k], 2 * layout[cp.j]) += cp.c;
    out.R.block(offset[cp.j], offset[cp.k], 2 * layout[cp.j], 2 * layout[cp.k]) +=
        cp.c.transpose();
  }
  return out;
}

OscillatorParams reduce_network(const NetworkSpec& spec) {
  if (spec.oscillators.empty())
    throw DimensionError("reduce_network: no oscillators");
  const int l = static_cast<int>(spec.oscillators.size());
  for (const auto& g : spec.oscillators)
    if (g.m != spec.oscillators.front().m && !spec.series.empty())
      throw DimensionError("reduce_network: channel counts differ along the chain");

  bool chain;
  if (spec.series.empty()) {
    chain = false;
  } else if (static_cast<int>(spec.series.size()) == l - 1) {
    chain = true;
    for (int i = 0; i < l - 1; ++i)
      if (spec.series[i] != std::make_pair(i, i + 1))
        throw DimensionError(
            "reduce_network: series list must be the consecutive chain "
            "(G2<G1, ..., Gn<Gn-1) or empty");
  } else {
    throw DimensionError(
        "reduce_network: partial series chains are not supported");
  }

  OscillatorParams acc = spec.oscillators.front();
  for (int i = 1; i < l; ++i)
    acc = chain ? series(spec.oscillators[i], acc)
                : concatenate(acc, spec.oscillators[i]);

  std::vector<int> layout;
  layout.reserve(spec.oscillators.size());
  for (const auto& g : spec.oscillators) layout.push_back(g.n);
  return add_direct_interaction(acc, spec.couplings, layout);
}

}  // namespace lqsn
