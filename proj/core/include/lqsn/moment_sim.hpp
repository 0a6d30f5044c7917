#pragma once

#include <utility>
#include <vector>

#include "lqsn/state_space.hpp"

namespace lqsn {

/// Second-order products of the field increments: F = E[v v^T]/dt for
/// v = (dA_1..dA_m, dA_1^#..dA_m^#)^T.
struct ItoTable {
  int m = 0;
  CMat F;  ///< 2m x 2m
};

struct SqueezedChannel {
  double n = 0.0;
  Complex c;
};

ItoTable ito_table_vacuum(int m);

/// Per-channel squeezed table; each (n, c) must satisfy n >= 0 and
/// n(n+1) = |c|^2 within 1e-9 (fields generated from the vacuum).
ItoTable ito_table_squeezed(const std::vector<SqueezedChannel>& channels);

struct MomentTrajectory {
  std::vector<double> times;
  std::vector<RVec> means;
  std::vector<RMat> second_moments;  ///< symmetrized <x x^T>
};

/// Integrates d<x>/dt = A<x> with the classic fourth-order one-step method.
MomentTrajectory mean_trajectory(const StateSpace& ss, const RVec& m0,
                                 double t_final, double dt);

/// Integrates dM/dt = AM + MA^T + sym(B F B^T).
MomentTrajectory covariance_trajectory(const StateSpace& ss, const RMat& m0,
                                       double t_final, double dt,
                                       const ItoTable& table);

/// The Appendix-A two-mode family: slow mode a (γ1, Δ1) and fast mode b
/// (γ2, Δ2) interacting via H_ab = α a*b + β a*b* + α* ab* + β* ab.
struct AdiabaticModelParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  Complex alpha;
  Complex beta;
};

/// Pre-limit oscillator G_k: L = (√γ1 a, k√γ2 b), H = Δ1 a*a + k²Δ2 b*b
/// + k H_ab. Two modes, two channels; mode a comes first.
OscillatorParams adiabatic_prelimit(const AdiabaticModelParams& p, double k);

/// The k → ∞ limit oscillator: one mode, two channels, with
/// S = diag(1, (i2Δ2+γ2)/(i2Δ2−γ2)) and L2 = i√γ2 (−iΔ2−γ2/2)^{-1}(α*a + βa*).
OscillatorParams adiabatic_limit(const AdiabaticModelParams& p);

/// For each k: slow-block covariance trajectory of the pre-limit model
/// (fast mode starting at vacuum) vs the limit model; the error is the max
/// over the time grid of the elementwise deviation.
std::vector<std::pair<double, double>> convergence_study(
    const AdiabaticModelParams& p, const std::vector<double>& ks, double t_final,
    double dt);

struct MomentProbe {
  RVec mean;
  RMat cov;
};

/// Maximal mean + covariance trajectory deviation over probes and times,
/// with vacuum inputs on both systems.
double compare_systems(const StateSpace& a, const StateSpace& b,
                       const std::vector<MomentProbe>& probes, double t_final,
                       double dt);

}  // namespace lqsn
