// Trap mode frequencies, oscillator-wavefunction density overlaps, the
// contact interaction energy U_eg and the exchange frequency J_ex, from
// physical tweezer parameters. Two modes: closed-form harmonic
// approximation, and a 1D finite-difference Gaussian-well eigensolver
// combined as a separable 3D product.
//
// Units are SI throughout; energies are quoted as frequencies (Hz = E/h).
// Energy zero is the trap asymptote, so the potential minimum sits at
// −depth and "bound" means E < 0.
#pragma once

#include <array>
#include <vector>

#include "spinex/qstate.hpp"  // DomainError

namespace spinex {

/// Physical description of a single optical tweezer.
struct TweezerParams {
  double depth_hz = 0.0;      // trap depth as energy/h
  double waist_m = 0.0;       // Gaussian beam waist
  double wavelength_m = 0.0;  // trap light wavelength (sets Rayleigh range)
  double mass_kg = 0.0;       // atom mass
  double a_s_m = 0.0;         // s-wave scattering length

  /// Throws DomainError unless all fields are positive and the trap is
  /// deep enough to hold at least one bound state in harmonic estimate.
  void check() const;

  TweezerParams with_depth(double new_depth_hz) const {
    TweezerParams p = *this;
    p.depth_hz = new_depth_hz;
    return p;
  }
};

enum class Axis : int { X = 0, Y = 1, Z = 2 };

/// Harmonic expansion of the trap: angular frequencies and oscillator
/// lengths r0_i = sqrt(ħ/(m ω_i)), ordered (x, y, z) = (radial, radial,
/// axial).
struct HarmonicModes {
  std::array<double, 3> omega{};  // rad/s
  std::array<double, 3> r0{};     // m
};

HarmonicModes harmonic_modes(const TweezerParams& p);

/// Closed-form 1D harmonic-oscillator probability-density overlap
/// ∫ |ψ_n1(x)|² |ψ_n2(x)|² dx for n ∈ {0, 1}.  Units 1/m.
double overlap_1d(int n1, int n2, double r0_m);

/// Contact interaction energy between one ground- and one excited-band
/// atom, the motional excitation lying along `excited_axis`; harmonic
/// approximation. Returned in Hz.
double u_eg(const TweezerParams& p, Axis excited_axis = Axis::X);

/// Exchange frequency J_ex = 2 U_eg (excitation along x), Hz.
double j_ex(const TweezerParams& p);

/// Uniform-grid request for the 1D eigensolver.
struct GridSpec {
  double half_width_m = 0.0;  // grid spans [−half_width, +half_width]
  int n_points = 2048;
  /// Default span: ±4 waists.
  static GridSpec for_waist(double waist_m, int n_points = 2048) {
    return GridSpec{4.0 * waist_m, n_points};
  }
};

/// Bound-state spectrum of a 1D Gaussian well on a uniform grid.
/// energies in Hz (< 0), wavefunctions L²-normalized (units m^{−1/2}).
struct NumericSpectrum1D {
  std::vector<double> energies_hz;
  std::vector<std::vector<double>> wavefunctions;
  std::vector<double> grid_m;
  double dx_m = 0.0;

  int bound_count() const { return static_cast<int>(energies_hz.size()); }
  /// Sign changes of wavefunction n (Sturm node count).
  int node_count(int n) const;
};

/// Finite-difference (second-order central) diagonalization of
/// H = −ħ²/(2m) d²/dx² − h·depth·exp(−2x²/waist²).
/// Throws on no bound state, or when the lowest two bound states have not
/// decayed below 1e−8 (normalized grid amplitude) at the grid edges.
NumericSpectrum1D eigensolve_gaussian_1d(double depth_hz, double waist_m,
                                         double mass_kg,
                                         const GridSpec& grid);

/// Grid-quadrature density overlap ∫ψ_{n1}²ψ_{n2}² dx of two states of a
/// numeric spectrum. Units 1/m.
double overlap_numeric(const NumericSpectrum1D& s, int n1, int n2);

/// Same contract as u_eg but with grid-quadrature overlaps of the given
/// per-axis spectra (x is the excited axis). Requires ≥ 2 bound states on
/// x and ≥ 1 on y, z.
double u_eg_numeric(const TweezerParams& p, const NumericSpectrum1D& sx,
                    const NumericSpectrum1D& sy, const NumericSpectrum1D& sz);

/// Per-axis spectra for `p` using the 1D Gaussian surrogate: the radial
/// axes use the physical waist; the axial axis uses an effective waist
/// √2·z_R so the harmonic expansion reproduces the axial frequency.
struct AxisSpectra {
  NumericSpectrum1D x, y, z;
};
AxisSpectra solve_axis_spectra(const TweezerParams& p, int n_points = 2048);

/// u_eg_numeric convenience on solve_axis_spectra output.
double u_eg_numeric(const TweezerParams& p, int n_points = 2048);

}  // namespace spinex
