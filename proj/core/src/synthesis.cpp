#include "lqsn/synthesis.hpp"

#include <sstream>

namespace lqsn {

std::vector<CMat> allocate_scattering(const CMat& s, int n, double tol) {
  if (n < 1) throw DimensionError("allocate_scattering: n must be >= 1");
  if (double res = unitarity_residual(s); res > tol)
    throw ValidationError("allocate_scattering: S not unitary (residual " +
                          std::to_string(res) + ")");
  std::vector<CMat> factors(n, CMat::Identity(s.rows(), s.cols()));
  factors[0] = s;
  return factors;
}

SynthesisPlan decompose(const OscillatorParams& g) {
  if (auto report = validate_oscillator(g); !report.valid()) {
    std::ostringstream oss;
    oss << "decompose: invalid oscillator:";
    for (const auto& v : report.violations) oss << " " << v.what << ";";
    throw ValidationError(oss.str());
  }
  if (g.n < 1) throw DimensionError("decompose: n must be >= 1");

  SynthesisPlan plan;
  plan.m = g.m;
  const auto scattering = allocate_scattering(g.S, g.n);

  // With the S_1 = S allocation, S_{n<-k+1} = I for every k, so K̃_k = K_k.
  for (int j = 0; j < g.n; ++j) {
    OneDofBlock block;
    block.index = j;
    block.S = scattering[j];
    block.Ktilde = g.K.middleCols(2 * j, 2);
    block.Rjj = g.R.block<2, 2>(2 * j, 2 * j);
    plan.blocks.push_back(std::move(block));
  }

  for (int j = 0; j < g.n - 1; ++j) {
    for (int k = j + 1; k < g.n; ++k) {
      // S_{k<-j+1} = I under this allocation. The subtracted feedback term
      // (1/2i)(K̃_k† K̃_j − K̃_kᵀ K̃_j^#) is the elementwise imaginary part of
      // K̃_k† K̃_j, real by construction.
      const RMat rjk = g.R.block<2, 2>(2 * j, 2 * k);
      const CMat cross = plan.blocks[k].Ktilde.adjoint() * plan.blocks[j].Ktilde;
      const RMat c = rjk.transpose() - cross.imag();
      if (max_abs(c) == 0.0) continue;
      plan.couplings.push_back({j, k, c});
    }
  }
  return plan;
}

OscillatorParams reassemble(const SynthesisPlan& plan) {
  if (plan.blocks.empty()) throw DimensionError("reassemble: empty plan");
  NetworkSpec spec;
  for (const auto& block : plan.blocks) {
    OscillatorParams g;
    g.n = 1;
    g.m = plan.m;
    g.S = block.S;
    g.K = block.Ktilde;
    g.R = block.Rjj;
    spec.oscillators.push_back(std::move(g));
  }
  for (int i = 0; i + 1 < static_cast<int>(plan.blocks.size()); ++i)
    spec.series.emplace_back(i, i + 1);
  spec.couplings = plan.couplings;
  return reduce_network(spec);
}

}  // namespace lqsn
