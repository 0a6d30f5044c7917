#pragma once

#include <vector>

#include "lqsn/oscillator.hpp"

namespace lqsn {

/// One cascade stage: G_j = (S_j, K̃_j x_j, 1/2 x_j^T R_jj x_j).
struct OneDofBlock {
  int index = 0;   ///< position in the chain, 0-based
  CMat S;          ///< m x m unitary
  CMat Ktilde;     ///< m x 2
  RMat Rjj;        ///< 2 x 2 real symmetric
};

/// The cascade-plus-couplings decomposition of an n-DoF oscillator:
/// n one-DoF blocks wired G_2 ◁ G_1, ..., G_n ◁ G_{n-1}, plus one 2x2
/// direct-coupling block per ordered pair j < k.
struct SynthesisPlan {
  int m = 0;
  std::vector<OneDofBlock> blocks;
  std::vector<DirectCoupling> couplings;
};

/// Splits S into per-block factors with S_n ... S_1 = S. Chooses S_1 = S and
/// S_j = I for j >= 2, so every partial product S_{k<-j+1} is the identity.
std::vector<CMat> allocate_scattering(const CMat& s, int n, double tol = kDefaultTol);

/// Decomposes G into a SynthesisPlan. The coupling block for pair (j,k) is
/// C_kj = R_jk^T − (1/2i)(K̃_k† S_{k<-j+1} K̃_j − K̃_kᵀ S_{k<-j+1}^# K̃_j^#).
SynthesisPlan decompose(const OscillatorParams& g);

/// Rebuilds the oscillator from a plan via reduce_network; the inverse of
/// decompose.
OscillatorParams reassemble(const SynthesisPlan& plan);

}  // namespace lqsn
