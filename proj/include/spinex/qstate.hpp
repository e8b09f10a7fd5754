// Two-atom spin Hilbert-space types: pure states, density matrices,
// basis transforms and Bloch-vector extraction on the anti-aligned qubit.
//
// Basis convention (fixed everywhere): index 0..3 = {↑↑, ↑↓, ↓↑, ↓↓},
// first label = left tweezer (or motional slot e), second = right (or g).
//
// Bloch sphere of the {|↑↓⟩, |↓↑⟩} qubit: |↑↓⟩ is the north pole and the
// quarter-period exchange state (|↑↓⟩ + i|↓↑⟩)/√2 points along +y. Which of
// the two beat states a given experiment colors "gray" vs "orange" is not
// fixed by any measurement here; the convention is self-consistent only.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinex {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

/// Thrown when a domain invariant is violated (non-normalized state,
/// non-physical density matrix, degenerate subspace, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

enum class Spin : int { Up = 0, Down = 1 };

/// One of the four two-atom product basis states.
struct SpinBasisState {
  Spin left = Spin::Up;
  Spin right = Spin::Up;

  constexpr int index() const {
    return 2 * static_cast<int>(left) + static_cast<int>(right);
  }
  static constexpr SpinBasisState from_index(int i) {
    return SpinBasisState{static_cast<Spin>((i >> 1) & 1),
                          static_cast<Spin>(i & 1)};
  }
};

inline constexpr int kUpUp = 0;
inline constexpr int kUpDn = 1;
inline constexpr int kDnUp = 2;
inline constexpr int kDnDn = 3;

/// Normalized four-amplitude spin state. Construction validates the norm.
class PureState {
 public:
  static constexpr double kNormTol = 1e-12;

  explicit PureState(const Vector4c& amplitudes);

  static PureState basis(int index);
  static PureState basis(SpinBasisState s) { return basis(s.index()); }
  /// (|↑↓⟩ − |↓↑⟩)/√2
  static PureState singlet();
  /// (|↑↓⟩ + |↓↑⟩)/√2
  static PureState triplet();
  /// (|↑↓⟩ ± i|↓↑⟩)/√2, the quarter-period exchange states.
  static PureState psi_plus();
  static PureState psi_minus();

  const Vector4c& amplitudes() const { return amps_; }
  Complex amplitude(int i) const { return amps_(i); }

  /// |⟨this|other⟩|² — global-phase-free comparison for tests.
  double overlap2(const PureState& other) const;

 private:
  Vector4c amps_;
};

/// Report produced by validate(); magnitudes of each invariant violation.
struct ValidationReport {
  double hermiticity_violation = 0.0;  // max |ρ − ρ†|
  double trace_violation = 0.0;        // |tr ρ − 1|
  double min_eigenvalue = 0.0;         // most negative eigenvalue
  bool hermitian_ok = false;
  bool trace_ok = false;
  bool positive_ok = false;
  bool ok() const { return hermitian_ok && trace_ok && positive_ok; }
  std::string describe() const;
};

/// 4×4 Hermitian, unit-trace, positive-semidefinite matrix over the
/// two-atom spin basis. The universal state object of the simulator.
class DensityMatrix {
 public:
  static constexpr double kHermTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigTol = 1e-10;

  /// Validating constructor; throws DomainError on invariant violation.
  explicit DensityMatrix(const Matrix4c& entries);

  static DensityMatrix maximally_mixed();

  const Matrix4c& entries() const { return m_; }
  Complex entry(int i, int j) const { return m_(i, j); }
  /// Conjugation ρ → UρU† (assumes U unitary; result is re-validated).
  DensityMatrix conjugated(const Matrix4c& u) const;

 private:
  Matrix4c m_;
};

/// Non-throwing invariant check on an arbitrary candidate matrix.
ValidationReport validate(const Matrix4c& rho);
inline ValidationReport validate(const DensityMatrix& rho) {
  return validate(rho.entries());
}

/// ρ = |ψ⟩⟨ψ|
DensityMatrix density_from_pure(const PureState& psi);

/// Direction of the anti-aligned block qubit; azimuth = atan2(y, x).
struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double azimuth = 0.0;  // rad
};

/// Bloch vector of the {|↑↓⟩, |↓↑⟩} block, renormalized by the block
/// weight p = ρ₁₁ + ρ₂₂. Throws if p < 1e−9.
BlochVector bloch_vector(const DensityMatrix& rho);

/// Change of basis {↑↓, ↓↑} → {S, T} with |S⟩ = (|↑↓⟩−|↓↑⟩)/√2 and
/// |T⟩ = (|↑↓⟩+|↓↑⟩)/√2; slots ↑↑ and ↓↓ untouched. Output ordering is
/// {↑↑, S, T, ↓↓}. The inverse is singlet_triplet_inverse.
DensityMatrix singlet_triplet_transform(const DensityMatrix& rho);
DensityMatrix singlet_triplet_inverse(const DensityMatrix& rho);

/// Most general state with no coherence between total-S^z sectors:
/// diagonal populations plus a single complex coherence eps between
/// |↑↓⟩ and |↓↑⟩. Throws unless the result is a valid density matrix.
DensityMatrix sector_diagonal_state(double p_upup, double p_updn,
                                    double p_dnup, double p_dndn,
                                    Complex eps);

}  // namespace spinex
