// Coherent evolutions: spin-exchange beats, the 4×4 adiabatic-passage
// propagator over the singlet/triplet double-well basis, the Landau–Zener
// closed form, gradient rotation, global microwave pulses, and the
// collective-dephasing channel.
//
// Sign conventions (fixed here, used everywhere):
//  - Exchange beat follows the quarter-period map
//    |↑↓⟩ → (|↑↓⟩ + i|↓↑⟩)/√2, i.e. (a,b) → (a cosθ + i b sinθ,
//    b cosθ + i a sinθ) with θ = π·j_ex·t. Aligned states acquire the
//    sector phase e^{iθ}.
//  - Gradient rotation puts e^{−iφ} on |↓↑⟩ with φ = 2π·δ·t_g, so the
//    quarter period φ = π/2 carries (|↑↓⟩+i|↓↑⟩)/√2 onto the triplet.
//    Aligned-state phases are set to zero (unobservable here).
#pragma once

#include <optional>

#include "spinex/qstate.hpp"

namespace spinex {

struct ExchangeParams {
  double j_ex_hz = 0.0;
  void check() const {
    if (j_ex_hz < 0.0) throw DomainError("ExchangeParams: j_ex_hz < 0");
  }
};

/// Linear bias sweep driving the ground-excited tunneling resonance.
/// Bias Δ is measured from the L_g ↔ R_e resonance.
struct ApRamp {
  double delta_start_hz = 0.0;
  double delta_end_hz = 0.0;
  double duration_s = 0.0;
  double j_eg_hz = 0.0;  // tunneling amplitude L_g → R_e
  double u_eg_hz = 0.0;  // ground-excited contact interaction

  void check() const {
    if (!(duration_s > 0.0)) throw DomainError("ApRamp: duration_s <= 0");
    if (!(j_eg_hz > 0.0)) throw DomainError("ApRamp: j_eg_hz <= 0");
  }
  bool is_forward() const { return delta_start_hz < delta_end_hz; }
  ApRamp reversed() const {
    ApRamp r = *this;
    std::swap(r.delta_start_hz, r.delta_end_hz);
    return r;
  }
  double sweep_rate_hz_per_s() const {
    return (delta_end_hz - delta_start_hz) / duration_s;
  }
};

struct GradientParams {
  double delta_hz = 0.0;  // differential ↑↔↓ transition shift between sites
};

struct PulseParams {
  double area_rad = 0.0;   // rotation angle
  double phase_rad = 0.0;  // rotation-axis azimuth in the equatorial plane
};

struct DephasingParams {
  double sigma_rad = 0.0;  // std dev of the collective random phase
  void check() const {
    if (sigma_rad < 0.0) throw DomainError("DephasingParams: sigma < 0");
  }
};

/// Amplitudes over {|S; L_g,R_g⟩, |S; R_e,R_g⟩, |T; L_g,R_g⟩, |T; R_e,R_g⟩}.
struct ApState {
  Vector4c amplitudes = Vector4c::Zero();

  /// Equal singlet/triplet superposition of the separated configuration,
  /// i.e. |↑_L, ↓_R⟩ expressed in this basis.
  static ApState initial_separated();
  /// Population transferred into the merged configuration {S;R, T;R}.
  double merged_population() const;
  /// Population remaining in the separated configuration {S;L, T;L}.
  double separated_population() const;
};

/// 4×4 exchange unitary exp-form described in the header comment.
Matrix4c exchange_unitary(const ExchangeParams& p, double t_s);

PureState exchange_evolve(const PureState& psi, const ExchangeParams& p,
                          double t_s);
DensityMatrix exchange_evolve_rho(const DensityMatrix& rho,
                                  const ExchangeParams& p, double t_s);

/// Block-diagonal double-well Hamiltonian in Hz:
/// singlet block [[Δ, −J_eg],[−J_eg, 0]], triplet block
/// [[Δ, −J_eg],[−J_eg, 2U_eg]].
Eigen::Matrix4d arp_hamiltonian(double delta_hz, const ApRamp& ramp);

/// Time-ordered propagation of the linear ramp. Per step, a 4th-order
/// commutator-free scheme applies two matrix exponentials of
/// arp_hamiltonian at effective biases; unitary to machine precision.
/// Throws unless 2π·‖H‖·dt < 0.1 throughout the ramp.
ApState arp_propagate(const ApState& psi0, const ApRamp& ramp, double dt_s);
/// Default step count: 4000 per ramp.
ApState arp_propagate(const ApState& psi0, const ApRamp& ramp);

/// Landau–Zener adiabatic transfer probability 1 − exp(−2πΓ) with
/// Γ = 2π·j_eg_hz² / sweep_rate_hz_per_s.
double lz_transfer_probability(double j_eg_hz, double sweep_rate_hz_per_s);

Matrix4c gradient_unitary(const GradientParams& g, double t_g_s);
DensityMatrix gradient_evolve(const DensityMatrix& rho,
                              const GradientParams& g, double t_g_s);

/// Single-atom rotation u = exp(−i(area/2)(cosφ σx + sinφ σy)).
Eigen::Matrix2cd pulse_unitary_single(const PulseParams& p);
/// Global pulse u⊗u applied identically to both atoms.
Matrix4c pulse_unitary(const PulseParams& p);
DensityMatrix microwave_pulse(const DensityMatrix& rho, const PulseParams& p);

/// Gaussian-averaged collective rotation: coherence between total-S^z
/// sectors differing by ΔS^z decays by exp(−(ΔS^z)²σ²/2); within-sector
/// elements are exactly unchanged. S^z per atom is ±1/2, so sector
/// charges are (+1, 0, 0, −1) over {↑↑, ↑↓, ↓↑, ↓↓}.
DensityMatrix collective_dephase(const DensityMatrix& rho,
                                 const DephasingParams& d);

}  // namespace spinex
