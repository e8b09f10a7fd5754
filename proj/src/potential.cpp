#include "spinex/potential.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spinex/constants.hpp"

namespace spinex {

namespace {
constexpr double kPi = std::numbers::pi;
}

void TweezerParams::check() const {
  if (!(depth_hz > 0.0) || !(waist_m > 0.0) || !(wavelength_m > 0.0) ||
      !(mass_kg > 0.0) || !(a_s_m > 0.0)) {
    throw DomainError("TweezerParams: all fields must be strictly positive");
  }
  const double u0 = kPlanck * depth_hz;
  const double omega_x = std::sqrt(4.0 * u0 / (mass_kg * waist_m * waist_m));
  if (kPlanck * depth_hz <= 0.5 * kHbar * omega_x) {
    throw DomainError("TweezerParams: trap too shallow for a bound state");
  }
}

HarmonicModes harmonic_modes(const TweezerParams& p) {
  p.check();
  const double u0 = kPlanck * p.depth_hz;
  const double omega_radial =
      std::sqrt(4.0 * u0 / (p.mass_kg * p.waist_m * p.waist_m));
  const double rayleigh = kPi * p.waist_m * p.waist_m / p.wavelength_m;
  const double omega_axial =
      std::sqrt(2.0 * u0 / (p.mass_kg * rayleigh * rayleigh));
  HarmonicModes m;
  m.omega = {omega_radial, omega_radial, omega_axial};
  for (int i = 0; i < 3; ++i) {
    m.r0[i] = std::sqrt(kHbar / (p.mass_kg * m.omega[i]));
  }
  return m;
}

double overlap_1d(int n1, int n2, double r0_m) {
  if (r0_m <= 0.0) throw DomainError("overlap_1d: r0 must be positive");
  if (n1 > n2) std::swap(n1, n2);
  const double base = 1.0 / (std::sqrt(2.0 * kPi) * r0_m);
  if (n1 == 0 && n2 == 0) return base;
  if (n1 == 0 && n2 == 1) return 0.5 * base;
  if (n1 == 1 && n2 == 1) return 0.75 * base;
  throw DomainError("overlap_1d: only mode indices 0 and 1 are supported");
}

double u_eg(const TweezerParams& p, Axis excited_axis) {
  p.check();
  const HarmonicModes m = harmonic_modes(p);
  const int ax = static_cast<int>(excited_axis);
  double density_overlap = 1.0;  // units m^-3
  for (int i = 0; i < 3; ++i) {
    density_overlap *= overlap_1d(0, i == ax ? 1 : 0, m.r0[i]);
  }
  const double energy =
      4.0 * kPi * kHbar * kHbar * p.a_s_m / p.mass_kg * density_overlap;
  return energy / kPlanck;
}

double j_ex(const TweezerParams& p) { return 2.0 * u_eg(p, Axis::X); }

int NumericSpectrum1D::node_count(int n) const {
  const auto& psi = wavefunctions.at(static_cast<size_t>(n));
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  const double floor = 1e-6 * peak;
  int nodes = 0;
  double last = 0.0;
  for (double v : psi) {
    if (std::abs(v) < floor) continue;
    if (last != 0.0 && v * last < 0.0) ++nodes;
    last = v;
  }
  return nodes;
}

namespace {

// LU of (T − σI) with partial pivoting for symmetric tridiagonal T
// (LAPACK dgttrf/dgtts2 scheme), used by inverse iteration below.
struct ShiftedTridiagonalLU {
  Eigen::VectorXd d, dl, du, du2;
  std::vector<bool> swapped;
  int n = 0;

  ShiftedTridiagonalLU(const Eigen::VectorXd& diag,
                       const Eigen::VectorXd& sub, double sigma) {
    n = static_cast<int>(diag.size());
    d = diag.array() - sigma;
    dl = sub;
    du = sub;
    du2 = Eigen::VectorXd::Zero(std::max(0, n - 2));
    swapped.assign(static_cast<size_t>(std::max(0, n - 1)), false);
    const double tiny = 1e-300;
    for (int i = 0; i < n - 1; ++i) {
      if (std::abs(d(i)) >= std::abs(dl(i))) {
        if (std::abs(d(i)) < tiny) d(i) = tiny;
        const double fact = dl(i) / d(i);
        dl(i) = fact;
        d(i + 1) -= fact * du(i);
      } else {
        const double fact = d(i) / dl(i);
        d(i) = dl(i);
        dl(i) = fact;
        const double temp = d(i + 1);
        d(i + 1) = du(i) - fact * temp;
        if (i < n - 2) {
          du2(i) = du(i + 1);
          du(i + 1) = -fact * du(i + 1);
        }
        du(i) = temp;
        swapped[static_cast<size_t>(i)] = true;
      }
    }
    if (std::abs(d(n - 1)) < tiny) d(n - 1) = tiny;
  }

  void solve_in_place(Eigen::VectorXd& b) const {
    for (int i = 0; i < n - 1; ++i) {
      if (swapped[static_cast<size_t>(i)]) std::swap(b(i), b(i + 1));
      b(i + 1) -= dl(i) * b(i);
    }
    b(n - 1) /= d(n - 1);
    if (n >= 2) b(n - 2) = (b(n - 2) - du(n - 2) * b(n - 1)) / d(n - 2);
    for (int i = n - 3; i >= 0; --i) {
      b(i) = (b(i) - du(i) * b(i + 1) - du2(i) * b(i + 2)) / d(i);
    }
  }
};

// Eigenvector of the tridiagonal operator at a known eigenvalue.
Eigen::VectorXd inverse_iteration(const Eigen::VectorXd& diag,
                                  const Eigen::VectorXd& sub, double lambda,
                                  const Eigen::VectorXd* orthogonal_to) {
  const int n = static_cast<int>(diag.size());
  const ShiftedTridiagonalLU lu(diag, sub, lambda);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(n));
  // Deterministic symmetry-breaking ripple so odd states are reachable.
  for (int i = 0; i < n; ++i) v(i) *= 1.0 + 0.3 * std::sin(2.7 * i);
  for (int it = 0; it < 4; ++it) {
    if (orthogonal_to) v -= orthogonal_to->dot(v) * (*orthogonal_to);
    lu.solve_in_place(v);
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DomainError("eigensolve_gaussian_1d: inverse iteration failed");
    }
    v /= norm;
  }
  if (orthogonal_to) {
    v -= orthogonal_to->dot(v) * (*orthogonal_to);
    v.normalize();
  }
  return v;
}

}  // namespace

NumericSpectrum1D eigensolve_gaussian_1d(double depth_hz, double waist_m,
                                         double mass_kg,
                                         const GridSpec& grid) {
  if (depth_hz <= 0.0 || waist_m <= 0.0 || mass_kg <= 0.0) {
    throw DomainError("eigensolve_gaussian_1d: parameters must be positive");
  }
  if (grid.n_points < 16 || grid.half_width_m <= 0.0) {
    throw DomainError("eigensolve_gaussian_1d: bad grid spec");
  }
  const int n = grid.n_points;
  const double dx = 2.0 * grid.half_width_m / (n - 1);
  const double kinetic = kHbar * kHbar / (2.0 * mass_kg * dx * dx) / kPlanck;

  Eigen::VectorXd diag(n), subdiag(n - 1), xs(n);
  for (int i = 0; i < n; ++i) {
    const double x = -grid.half_width_m + i * dx;
    xs(i) = x;
    const double v =
        -depth_hz * std::exp(-2.0 * x * x / (waist_m * waist_m));
    diag(i) = 2.0 * kinetic + v;
  }
  subdiag.setConstant(-kinetic);

  // Eigenvalues only (O(n²)); bound-state vectors follow by shifted
  // inverse iteration, which keeps large grids cheap.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw DomainError("eigensolve_gaussian_1d: eigensolver failed");
  }

  NumericSpectrum1D out;
  out.dx_m = dx;
  out.grid_m.assign(xs.data(), xs.data() + n);
  Eigen::VectorXd previous;
  for (int k = 0; k < n; ++k) {
    const double e = es.eigenvalues()(k);
    if (e >= 0.0) break;  // eigenvalues are ascending; bound states first
    Eigen::VectorXd v = inverse_iteration(
        diag, subdiag, e, out.energies_hz.empty() ? nullptr : &previous);
    previous = v;
    // Fix sign so ψ > 0 at the left tail, then L²-normalize on the grid.
    int first = 0;
    while (first < n - 1 && std::abs(v(first)) < 1e-14) ++first;
    if (v(first) < 0.0) v = -v;
    v /= std::sqrt(v.squaredNorm() * dx);
    out.energies_hz.push_back(e);
    out.wavefunctions.emplace_back(v.data(), v.data() + n);
  }
  if (out.energies_hz.empty()) {
    throw DomainError("eigensolve_gaussian_1d: no bound state found");
  }
  // Edge-decay check on the states actually consumed downstream.
  const int n_check = std::min(2, out.bound_count());
  for (int k = 0; k < n_check; ++k) {
    const auto& psi = out.wavefunctions[static_cast<size_t>(k)];
    const double edge =
        std::max(std::abs(psi.front()), std::abs(psi.back())) *
        std::sqrt(dx);  // back to normalized grid amplitude
    if (edge > 1e-8) {
      std::ostringstream os;
      os << "eigensolve_gaussian_1d: grid too small, state " << k
         << " edge amplitude " << edge;
      throw DomainError(os.str());
    }
  }
  return out;
}

double overlap_numeric(const NumericSpectrum1D& s, int n1, int n2) {
  if (n1 >= s.bound_count() || n2 >= s.bound_count() || n1 < 0 || n2 < 0) {
    throw DomainError("overlap_numeric: insufficient bound states");
  }
  const auto& a = s.wavefunctions[static_cast<size_t>(n1)];
  const auto& b = s.wavefunctions[static_cast<size_t>(n2)];
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    acc += a[i] * a[i] * b[i] * b[i];
  }
  return acc * s.dx_m;
}

double u_eg_numeric(const TweezerParams& p, const NumericSpectrum1D& sx,
                    const NumericSpectrum1D& sy,
                    const NumericSpectrum1D& sz) {
  p.check();
  if (sx.bound_count() < 2) {
    throw DomainError("u_eg_numeric: excited axis needs >= 2 bound states");
  }
  const double density_overlap = overlap_numeric(sx, 0, 1) *
                                 overlap_numeric(sy, 0, 0) *
                                 overlap_numeric(sz, 0, 0);
  const double energy =
      4.0 * kPi * kHbar * kHbar * p.a_s_m / p.mass_kg * density_overlap;
  return energy / kPlanck;
}

AxisSpectra solve_axis_spectra(const TweezerParams& p, int n_points) {
  p.check();
  const double rayleigh = kPi * p.waist_m * p.waist_m / p.wavelength_m;
  const double axial_waist = std::sqrt(2.0) * rayleigh;
  AxisSpectra s;
  s.x = eigensolve_gaussian_1d(p.depth_hz, p.waist_m, p.mass_kg,
                               GridSpec::for_waist(p.waist_m, n_points));
  s.y = s.x;
  s.z = eigensolve_gaussian_1d(p.depth_hz, axial_waist, p.mass_kg,
                               GridSpec::for_waist(axial_waist, n_points));
  return s;
}

double u_eg_numeric(const TweezerParams& p, int n_points) {
  const AxisSpectra s = solve_axis_spectra(p, n_points);
  return u_eg_numeric(p, s.x, s.y, s.z);
}

}  // namespace spinex
