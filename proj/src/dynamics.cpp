#include "spinex/dynamics.hpp"

#include <cmath>
#include <numbers>

namespace spinex {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
}  // namespace

ApState ApState::initial_separated() {
  ApState s;
  s.amplitudes(0) = 1.0 / std::sqrt(2.0);
  s.amplitudes(2) = 1.0 / std::sqrt(2.0);
  return s;
}

double ApState::merged_population() const {
  return std::norm(amplitudes(1)) + std::norm(amplitudes(3));
}

double ApState::separated_population() const {
  return std::norm(amplitudes(0)) + std::norm(amplitudes(2));
}

Matrix4c exchange_unitary(const ExchangeParams& p, double t_s) {
  p.check();
  const double theta = kPi * p.j_ex_hz * t_s;
  const Complex c = std::cos(theta);
  const Complex is = kI * std::sin(theta);
  const Complex aligned = std::exp(kI * theta);
  Matrix4c u = Matrix4c::Zero();
  u(kUpUp, kUpUp) = aligned;
  u(kDnDn, kDnDn) = aligned;
  u(kUpDn, kUpDn) = c;
  u(kDnUp, kDnUp) = c;
  u(kUpDn, kDnUp) = is;
  u(kDnUp, kUpDn) = is;
  return u;
}

PureState exchange_evolve(const PureState& psi, const ExchangeParams& p,
                          double t_s) {
  return PureState(exchange_unitary(p, t_s) * psi.amplitudes());
}

DensityMatrix exchange_evolve_rho(const DensityMatrix& rho,
                                  const ExchangeParams& p, double t_s) {
  return rho.conjugated(exchange_unitary(p, t_s));
}

Eigen::Matrix4d arp_hamiltonian(double delta_hz, const ApRamp& ramp) {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 0) = delta_hz;
  h(0, 1) = -ramp.j_eg_hz;
  h(1, 0) = -ramp.j_eg_hz;
  h(2, 2) = delta_hz;
  h(2, 3) = -ramp.j_eg_hz;
  h(3, 2) = -ramp.j_eg_hz;
  h(3, 3) = 2.0 * ramp.u_eg_hz;
  return h;
}

namespace {

// ψ → exp(−i·2π·h_hz·t) ψ for real-symmetric h.
void apply_exponential(const Eigen::Matrix4d& h_hz, double t_s,
                       Vector4c& psi) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h_hz);
  const Eigen::Matrix4d& v = es.eigenvectors();
  Vector4c coords = v.transpose() * psi;
  for (int k = 0; k < 4; ++k) {
    coords(k) *= std::exp(-kI * (2.0 * kPi * es.eigenvalues()(k) * t_s));
  }
  psi = v * coords;
}

}  // namespace

ApState arp_propagate(const ApState& psi0, const ApRamp& ramp, double dt_s) {
  ramp.check();
  if (!(dt_s > 0.0)) throw DomainError("arp_propagate: dt <= 0");
  const double norm_bound = std::max(std::abs(ramp.delta_start_hz),
                                     std::abs(ramp.delta_end_hz)) +
                            ramp.j_eg_hz + 2.0 * std::abs(ramp.u_eg_hz);
  if (2.0 * kPi * norm_bound * dt_s >= 0.1) {
    throw DomainError("arp_propagate: step size violates 2π·‖H‖·dt < 0.1");
  }
  const int n_steps =
      std::max(1, static_cast<int>(std::ceil(ramp.duration_s / dt_s)));
  const double dt = ramp.duration_s / n_steps;
  const double rate = ramp.sweep_rate_hz_per_s();

  // 4th-order commutator-free scheme at the Gauss-Legendre nodes. Because
  // H is affine in Δ, each factor is the exponential of arp_hamiltonian
  // at an effective bias, applied for dt/2.
  const double root3 = std::sqrt(3.0);
  const double c1 = 0.5 - root3 / 6.0;
  const double c2 = 0.5 + root3 / 6.0;
  const double a1 = 0.25 + root3 / 6.0;
  const double a2 = 0.25 - root3 / 6.0;

  Vector4c psi = psi0.amplitudes;
  for (int s = 0; s < n_steps; ++s) {
    const double t0 = s * dt;
    const double d1 = ramp.delta_start_hz + rate * (t0 + c1 * dt);
    const double d2 = ramp.delta_start_hz + rate * (t0 + c2 * dt);
    apply_exponential(
        arp_hamiltonian(2.0 * (a1 * d1 + a2 * d2), ramp), 0.5 * dt, psi);
    apply_exponential(
        arp_hamiltonian(2.0 * (a2 * d1 + a1 * d2), ramp), 0.5 * dt, psi);
  }
  const double norm_err = std::abs(psi.squaredNorm() - 1.0);
  if (norm_err > 1e-10) {
    throw DomainError("arp_propagate: norm drifted beyond 1e-10");
  }
  ApState out;
  out.amplitudes = psi;
  return out;
}

ApState arp_propagate(const ApState& psi0, const ApRamp& ramp) {
  return arp_propagate(psi0, ramp, ramp.duration_s / 4000.0);
}

double lz_transfer_probability(double j_eg_hz, double sweep_rate_hz_per_s) {
  if (!(j_eg_hz > 0.0) || !(sweep_rate_hz_per_s > 0.0)) {
    throw DomainError("lz_transfer_probability: inputs must be positive");
  }
  const double gamma =
      2.0 * kPi * j_eg_hz * j_eg_hz / sweep_rate_hz_per_s;
  return 1.0 - std::exp(-2.0 * kPi * gamma);
}

Matrix4c gradient_unitary(const GradientParams& g, double t_g_s) {
  const double phi = 2.0 * kPi * g.delta_hz * t_g_s;
  Matrix4c u = Matrix4c::Identity();
  u(kDnUp, kDnUp) = std::exp(-kI * phi);
  return u;
}

DensityMatrix gradient_evolve(const DensityMatrix& rho,
                              const GradientParams& g, double t_g_s) {
  return rho.conjugated(gradient_unitary(g, t_g_s));
}

Eigen::Matrix2cd pulse_unitary_single(const PulseParams& p) {
  const double half = 0.5 * p.area_rad;
  const Complex off = -kI * std::sin(half);
  Eigen::Matrix2cd u;
  u(0, 0) = std::cos(half);
  u(1, 1) = std::cos(half);
  u(0, 1) = off * std::exp(-kI * p.phase_rad);
  u(1, 0) = off * std::exp(kI * p.phase_rad);
  return u;
}

Matrix4c pulse_unitary(const PulseParams& p) {
  const Eigen::Matrix2cd u = pulse_unitary_single(p);
  Matrix4c big;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      big.block<2, 2>(2 * i, 2 * j) = u(i, j) * u;
  return big;
}

DensityMatrix microwave_pulse(const DensityMatrix& rho,
                              const PulseParams& p) {
  return rho.conjugated(pulse_unitary(p));
}

DensityMatrix collective_dephase(const DensityMatrix& rho,
                                 const DephasingParams& d) {
  d.check();
  static constexpr double kCharge[4] = {1.0, 0.0, 0.0, -1.0};
  Matrix4c m = rho.entries();
  const double s2 = d.sigma_rad * d.sigma_rad;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double dq = kCharge[i] - kCharge[j];
      if (dq != 0.0) m(i, j) *= std::exp(-0.5 * dq * dq * s2);
    }
  }
  return DensityMatrix(m);
}

}  // namespace spinex
