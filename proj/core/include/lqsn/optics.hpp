#pragma once

#include <map>
#include <string>
#include <vector>

#include "lqsn/synthesis.hpp"

namespace lqsn {

/// Coefficients of L = α̃ a + β̃ a* for a single channel row.
struct ModeCoupling {
  Complex alpha_t;
  Complex beta_t;
};

/// Converts K_row = [α, β] of L = αq + βp to mode coefficients under
/// a = (q+ip)/2: α̃ = α − iβ, β̃ = α + iβ.
ModeCoupling quadrature_to_mode(const CMat& k_row);

/// Inverse of quadrature_to_mode: the K row realizing L = α̃ a + β̃ a*.
CMat mode_to_quadrature(const ModeCoupling& mc);

/// Detuning and effective pump intensity of a degenerate parametric
/// amplifier realizing a 2x2 Hamiltonian block.
struct DpaParams {
  double delta = 0.0;
  Complex epsilon;
};

/// Unique solution of 2R11 = Δ − Im ε, 2R22 = Δ + Im ε, 2R12 = Re ε.
DpaParams dpa_from_R(const RMat& r, double tol = kDefaultTol);

/// Forward map: the 2x2 Hamiltonian block realized by a DPA(Δ, ε).
RMat dpa_to_R(const DpaParams& p);

/// Beam splitter: B = e^{iΞ/2} diag(e^{iΨ/2}, e^{−iΨ/2})
/// [[cosΘ, sinΘ], [−sinΘ, cosΘ]] diag(e^{iΦ/2}, e^{−iΦ/2}).
struct BeamSplitterParams {
  double theta = 0.0;  ///< mixing angle
  double phi = 0.0;    ///< relative input phase
  double psi = 0.0;    ///< relative output phase
  double xi = 0.0;     ///< overall phase
};

CMat beam_splitter_matrix(const BeamSplitterParams& p);

/// Recovers (Θ, Φ, Ψ, Ξ) from an arbitrary 2x2 unitary, Θ ∈ [0, π/2].
BeamSplitterParams beam_splitter_from_unitary(const CMat& u, double tol = kDefaultTol);

struct TwoModeSqueezerParams {
  Complex pump;  ///< effective pump intensity
};

struct SqueezerParams {
  double s = 0.0;
  double theta = 0.0;
};

struct PhaseShifterParams {
  double theta = 0.0;
};

/// Auxiliary-cavity coupling gadget: two-mode squeezer + beam splitter +
/// heavily damped mirror, with a π input phase shifter.
struct Scheme1Params {
  double gamma2 = 0.0;
  Complex eps1;        ///< two-mode-squeezer pump, β̃ √γ₂
  Complex eps2;        ///< beam-splitter strength, −α̃* √γ₂
  double bs_theta = 0.0;
  double bs_phi = 0.0;
  double input_phase = 0.0;  ///< π
};

Scheme1Params coupling_scheme1(const ModeCoupling& mc, double gamma2);

/// Squeezer-sandwich gadget: plain mirror γ = α̃² − |β̃|² with squeezed
/// pre/post-processing. Requires α̃ real and α̃ > |β̃| ≥ 0.
struct Scheme2Params {
  double gamma = 0.0;
  double s = 0.0;
  double theta = 0.0;
};

Scheme2Params coupling_scheme2(const ModeCoupling& mc, double tol = kDefaultTol);

/// Beam-splitter and two-mode-squeezer parameters realizing the bilinear
/// interaction x_k^T c x_l between cavity modes k and l.
struct DirectInteractionOptics {
  Complex eps1;  ///< coefficient of a_k† a_l (beam-splitter part)
  Complex eps2;  ///< coefficient of a_k† a_l† (two-mode-squeezer part)
  BeamSplitterParams bs;
  TwoModeSqueezerParams tms;
};

DirectInteractionOptics direct_to_optics(const RMat& c_kl, int k, int l);

/// One element of a beam-splitter/phase-shifter mesh, acting on channel
/// pair (port_a, port_b) or single channel port_a.
struct PassiveMeshElement {
  enum class Kind { BeamSplitter, PhaseShifter };
  Kind kind = Kind::BeamSplitter;
  int port_a = 0;
  int port_b = 0;  ///< unused for phase shifters
  BeamSplitterParams bs;
  PhaseShifterParams ps;
};

/// Triangular elimination of S into 2x2 beam splitters plus final phase
/// shifters, returned in physical application order (first element acts
/// first on the incoming fields).
std::vector<PassiveMeshElement> passive_unitary_to_mesh(const CMat& s,
                                                        double tol = kDefaultTol);

/// Re-multiplies a mesh; reconstruction oracle for passive_unitary_to_mesh.
CMat mesh_matrix(const std::vector<PassiveMeshElement>& mesh, int m);

/// Q = P1 [[cosh D, sinh D], [sinh D, cosh D]] P2 with P_i = diag(U_i, U_i^#).
struct QuasiUnitaryFactors {
  CMat passive1;  ///< m x m unitary U1
  RVec squeeze;   ///< diagonal of D, nonnegative
  CMat passive2;  ///< m x m unitary U2
};

QuasiUnitaryFactors quasiunitary_decompose(const CMat& q, double tol = kDefaultTol);

/// Assembles the 2m x 2m quasi-unitary from its three factors.
CMat quasiunitary_from_factors(const CMat& u1, const RVec& d, const CMat& u2);

/// [[cosh s, e^{iθ} sinh s], [e^{−iθ} sinh s, cosh s]].
CMat squeezer_transformation(double s, double theta);
/// The inverse transformation, s → −s.
CMat squeezer_inverse(double s, double theta);

/// Squeezed-field parameters generated from the vacuum by a squeezer (s, θ):
/// n = cosh(2s)/2 − 1/2, c = e^{iθ} sinh(2s)/2, with n(n+1) = |c|².
struct SqueezedFieldParams {
  double n = 0.0;
  Complex c;
  double s = 0.0;
  double theta = 0.0;
};

SqueezedFieldParams squeezed_field_params(double s, double theta);

/// A netlist component parameter: real or complex scalar.
struct ParamValue {
  double re = 0.0;
  double im = 0.0;
  bool is_complex = false;

  static ParamValue real(double v) { return {v, 0.0, false}; }
  static ParamValue cplx(Complex v) { return {v.real(), v.imag(), true}; }
  Complex value() const { return {re, im}; }
};

struct NetlistComponent {
  std::string id;
  std::string kind;  ///< dpa | mirror | beam_splitter | two_mode_squeezer | squeezer | phase_shifter
  std::map<std::string, ParamValue> params;
  std::vector<std::string> ports;
  std::map<std::string, std::string> annotations;
};

struct NetlistConnection {
  std::string from;  ///< "id.port", or "$input.ch<l>"
  std::string to;    ///< "id.port", or "$output.ch<l>"
};

struct OpticalNetlist {
  int channels = 0;
  std::vector<NetlistComponent> components;
  std::vector<NetlistConnection> connections;
};

struct NetlistOptions {
  double gamma2 = 0.0;  ///< scheme-1 mirror coupling; 0 selects the default
                        ///< 25 · max(|α̃|², |β̃|², 1) per channel row
  bool prefer_squeezer_sandwich = false;
  double tol = kDefaultTol;
};

OpticalNetlist build_netlist(const SynthesisPlan& plan,
                             const NetlistOptions& options = {});

/// Checks id uniqueness and that every connection endpoint names an existing
/// port (or a $input/$output channel). Returns problem descriptions.
std::vector<std::string> netlist_problems(const OpticalNetlist& nl);

}  // namespace lqsn
