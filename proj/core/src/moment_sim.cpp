#include "lqsn/moment_sim.hpp"

#include <cmath>

#include "lqsn/optics.hpp"

namespace lqsn {

namespace {

constexpr Complex kI{0.0, 1.0};

long steps_for(double t_final, double dt) {
  if (!(dt > 0.0)) throw ValidationError("integration: dt must be positive");
  if (t_final < 0.0) throw ValidationError("integration: t_final must be >= 0");
  return std::max<long>(0, std::lround(t_final / dt));
}

/// Fixed-step classic RK4 on dM/dt = A M + M A^T + N.
class CovarianceStepper {
 public:
  CovarianceStepper(const RMat& a, const RMat& noise)
      : a_(a), n_(noise), k1_(a.rows(), a.cols()), k2_(a.rows(), a.cols()),
        k3_(a.rows(), a.cols()), k4_(a.rows(), a.cols()), tmp_(a.rows(), a.cols()) {}

  void step(RMat& m, double h) {
    deriv(m, k1_);
    tmp_ = m + (0.5 * h) * k1_;
    deriv(tmp_, k2_);
    tmp_ = m + (0.5 * h) * k2_;
    deriv(tmp_, k3_);
    tmp_ = m + h * k3_;
    deriv(tmp_, k4_);
    m += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  void deriv(const RMat& m, RMat& out) {
    out.noalias() = a_ * m;
    out.noalias() += m * a_.transpose();
    out += n_;
  }

  const RMat& a_;
  const RMat& n_;
  RMat k1_, k2_, k3_, k4_, tmp_;
};

class MeanStepper {
 public:
  explicit MeanStepper(const RMat& a)
      : a_(a), k1_(a.rows()), k2_(a.rows()), k3_(a.rows()), k4_(a.rows()),
        tmp_(a.rows()) {}

  void step(RVec& v, double h) {
    k1_.noalias() = a_ * v;
    tmp_ = v + (0.5 * h) * k1_;
    k2_.noalias() = a_ * tmp_;
    tmp_ = v + (0.5 * h) * k2_;
    k3_.noalias() = a_ * tmp_;
    tmp_ = v + h * k3_;
    k4_.noalias() = a_ * tmp_;
    v += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  const RMat& a_;
  RVec k1_, k2_, k3_, k4_, tmp_;
};

/// Noise drive sym(B F B^T); real for any physical table.
RMat noise_matrix(const StateSpace& ss, const ItoTable& table) {
  if (table.m != ss.m)
    throw DimensionError("covariance_trajectory: Ito table channel count mismatch");
  const CMat bfb = ss.B * table.F * ss.B.transpose();
  return (0.5 * (bfb + bfb.transpose())).real();
}

}  // namespace

ItoTable ito_table_vacuum(int m) {
  if (m < 0) throw DimensionError("ito_table_vacuum: m must be >= 0");
  ItoTable t;
  t.m = m;
  t.F = CMat::Zero(2 * m, 2 * m);
  t.F.topRightCorner(m, m) = CMat::Identity(m, m);
  return t;
}

ItoTable ito_table_squeezed(const std::vector<SqueezedChannel>& channels) {
  const int m = static_cast<int>(channels.size());
  ItoTable t;
  t.m = m;
  t.F = CMat::Zero(2 * m, 2 * m);
  for (int j = 0; j < m; ++j) {
    const auto& ch = channels[j];
    if (ch.n < 0.0)
      throw ValidationError("ito_table_squeezed: n must be >= 0");
    const double residual = std::abs(ch.n * (ch.n + 1.0) - std::norm(ch.c));
    if (residual > 1e-9)
      throw ValidationError(
          "ito_table_squeezed: n(n+1) = |c|^2 violated (residual " +
          std::to_string(residual) + ")");
    t.F(j, j) = ch.c;
    t.F(j, m + j) = ch.n + 1.0;
    t.F(m + j, j) = ch.n;
    t.F(m + j, m + j) = std::conj(ch.c);
  }
  return t;
}

MomentTrajectory mean_trajectory(const StateSpace& ss, const RVec& m0,
                                 double t_final, double dt) {
  if (m0.size() != 2 * ss.n)
    throw DimensionError("mean_trajectory: initial mean has wrong size");
  const long steps = steps_for(t_final, dt);
  MomentTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.means.reserve(steps + 1);
  RVec v = m0;
  MeanStepper stepper(ss.A);
  traj.times.push_back(0.0);
  traj.means.push_back(v);
  for (long i = 1; i <= steps; ++i) {
    stepper.step(v, dt);
    traj.times.push_back(i * dt);
    traj.means.push_back(v);
  }
  return traj;
}

MomentTrajectory covariance_trajectory(const StateSpace& ss, const RMat& m0,
                                       double t_final, double dt,
                                       const ItoTable& table) {
  if (m0.rows() != 2 * ss.n || m0.cols() != 2 * ss.n)
    throw DimensionError("covariance_trajectory: initial moment has wrong size");
  if (symmetry_residual(m0) > 1e-12)
    throw ValidationError("covariance_trajectory: initial moment not symmetric");
  const long steps = steps_for(t_final, dt);
  const RMat noise = noise_matrix(ss, table);

  MomentTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.second_moments.reserve(steps + 1);
  RMat m = m0;
  CovarianceStepper stepper(ss.A, noise);
  traj.times.push_back(0.0);
  traj.second_moments.push_back(m);
  for (long i = 1; i <= steps; ++i) {
    stepper.step(m, dt);
    traj.times.push_back(i * dt);
    traj.second_moments.push_back(sym_part(m));
  }
  return traj;
}

OscillatorParams adiabatic_prelimit(const AdiabaticModelParams& p, double k) {
  if (k < 1.0) throw ValidationError("adiabatic_prelimit: k must be >= 1");
  if (!(p.gamma1 >= 0.0) || !(p.gamma2 > 0.0))
    throw ValidationError("adiabatic_prelimit: gamma1 >= 0 and gamma2 > 0 required");

  OscillatorParams g;
  g.n = 2;
  g.m = 2;
  g.S = CMat::Identity(2, 2);
  g.K = CMat::Zero(2, 4);
  g.K.block(0, 0, 1, 2) = mode_to_quadrature({std::sqrt(p.gamma1), 0.0});
  g.K.block(1, 2, 1, 2) = mode_to_quadrature({k * std::sqrt(p.gamma2), 0.0});

  // H = Δ1 a*a + k²Δ2 b*b + k(α a*b + β a*b* + α* ab* + β* ab); the cross
  // term is x_a^T C x_b with C from the (eps1, eps2) = (kα, kβ) coefficients.
  const Complex e1 = k * p.alpha;
  const Complex e2 = k * p.beta;
  RMat c(2, 2);
  c << 0.5 * (e1 + e2).real(), -0.5 * (e1 - e2).imag(),
       0.5 * (e1 + e2).imag(),  0.5 * (e1 - e2).real();

  g.R = RMat::Zero(4, 4);
  g.R.block<2, 2>(0, 0) = 0.5 * p.delta1 * RMat::Identity(2, 2);
  g.R.block<2, 2>(2, 2) = 0.5 * k * k * p.delta2 * RMat::Identity(2, 2);
  g.R.block<2, 2>(0, 2) = c;
  g.R.block<2, 2>(2, 0) = c.transpose();
  return g;
}

OscillatorParams adiabatic_limit(const AdiabaticModelParams& p) {
  if (!(p.gamma2 > 0.0))
    throw ValidationError("adiabatic_limit: gamma2 must be positive");

  OscillatorParams g;
  g.n = 1;
  g.m = 2;
  g.S = CMat::Identity(2, 2);
  g.S(1, 1) = (2.0 * kI * p.delta2 + p.gamma2) / (2.0 * kI * p.delta2 - p.gamma2);

  const Complex zeta =
      kI * std::sqrt(p.gamma2) / (-kI * p.delta2 - 0.5 * p.gamma2);
  g.K = CMat::Zero(2, 2);
  g.K.row(0) = mode_to_quadrature({std::sqrt(p.gamma1), 0.0});
  g.K.row(1) = mode_to_quadrature({zeta * std::conj(p.alpha), zeta * p.beta});

  // H = Δ1 a*a − w (α a* + β* a)(α* a + β a*) normally ordered, scalar
  // remainder discarded: u a*a + v (a*)² + v* a² with
  // u = Δ1 − w(|α|² + |β|²), v = −w α β, w = Δ2/(Δ2² + (γ2/2)²).
  const double w = p.delta2 / (p.delta2 * p.delta2 + 0.25 * p.gamma2 * p.gamma2);
  const double u = p.delta1 - w * (std::norm(p.alpha) + std::norm(p.beta));
  const Complex v = -w * p.alpha * p.beta;
  g.R = RMat(2, 2);
  g.R << 0.5 * u + v.real(), v.imag(), v.imag(), 0.5 * u - v.real();
  return g;
}

std::vector<std::pair<double, double>> convergence_study(
    const AdiabaticModelParams& p, const std::vector<double>& ks, double t_final,
    double dt) {
  for (size_t i = 1; i < ks.size(); ++i)
    if (ks[i] <= ks[i - 1])
      throw ValidationError("convergence_study: ks must be increasing");

  // Slow-mode probe moments; fast mode starts at vacuum.
  RMat slow0(2, 2);
  slow0 << 3.0, 0.0, 0.0, 0.4;

  const StateSpace lim = to_state_space(adiabatic_limit(p));
  const MomentTrajectory ref =
      covariance_trajectory(lim, slow0, t_final, dt, ito_table_vacuum(2));

  std::vector<std::pair<double, double>> out;
  const long outer = steps_for(t_final, dt);
  for (double k : ks) {
    const StateSpace pre = to_state_space(adiabatic_prelimit(p, k));
    const long sub = std::max<long>(1, std::lround(std::ceil(k * k)));
    const double h = dt / double(sub);
    const RMat noise = noise_matrix(pre, ito_table_vacuum(2));
    RMat m = RMat::Identity(4, 4);
    m.topLeftCorner(2, 2) = slow0;
    CovarianceStepper stepper(pre.A, noise);

    double err = max_abs(RMat(m.topLeftCorner(2, 2) - ref.second_moments[0]));
    for (long i = 1; i <= outer; ++i) {
      for (long s = 0; s < sub; ++s) stepper.step(m, h);
      err = std::max(err, max_abs(RMat(sym_part(m).topLeftCorner(2, 2) -
                                       ref.second_moments[size_t(i)])));
    }
    out.emplace_back(k, err);
  }
  return out;
}

double compare_systems(const StateSpace& a, const StateSpace& b,
                       const std::vector<MomentProbe>& probes, double t_final,
                       double dt) {
  if (a.n != b.n || a.m != b.m)
    throw DimensionError("compare_systems: system dimensions differ");
  const ItoTable table = ito_table_vacuum(a.m);
  double dev = 0.0;
  for (const auto& probe : probes) {
    const auto mean_a = mean_trajectory(a, probe.mean, t_final, dt);
    const auto mean_b = mean_trajectory(b, probe.mean, t_final, dt);
    const auto cov_a = covariance_trajectory(a, probe.cov, t_final, dt, table);
    const auto cov_b = covariance_trajectory(b, probe.cov, t_final, dt, table);
    for (size_t i = 0; i < mean_a.times.size(); ++i) {
      const double dm = (mean_a.means[i] - mean_b.means[i]).cwiseAbs().maxCoeff();
      const double dc = max_abs(RMat(cov_a.second_moments[i] - cov_b.second_moments[i]));
      dev = std::max(dev, dm + dc);
    }
  }
  return dev;
}

}  // namespace lqsn
