#include "spinex/qstate.hpp"

#include <cmath>
#include <sstream>

namespace spinex {

namespace {
constexpr Complex kI{0.0, 1.0};
}

PureState::PureState(const Vector4c& amplitudes) : amps_(amplitudes) {
  const double norm2 = amps_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "PureState not normalized: sum |a|^2 = " << norm2;
    throw DomainError(os.str());
  }
}

PureState PureState::basis(int index) {
  if (index < 0 || index > 3) throw DomainError("basis index out of range");
  Vector4c a = Vector4c::Zero();
  a(index) = 1.0;
  return PureState(a);
}

PureState PureState::singlet() {
  Vector4c a = Vector4c::Zero();
  a(kUpDn) = 1.0 / std::sqrt(2.0);
  a(kDnUp) = -1.0 / std::sqrt(2.0);
  return PureState(a);
}

PureState PureState::triplet() {
  Vector4c a = Vector4c::Zero();
  a(kUpDn) = 1.0 / std::sqrt(2.0);
  a(kDnUp) = 1.0 / std::sqrt(2.0);
  return PureState(a);
}

PureState PureState::psi_plus() {
  Vector4c a = Vector4c::Zero();
  a(kUpDn) = 1.0 / std::sqrt(2.0);
  a(kDnUp) = kI / std::sqrt(2.0);
  return PureState(a);
}

PureState PureState::psi_minus() {
  Vector4c a = Vector4c::Zero();
  a(kUpDn) = 1.0 / std::sqrt(2.0);
  a(kDnUp) = -kI / std::sqrt(2.0);
  return PureState(a);
}

double PureState::overlap2(const PureState& other) const {
  return std::norm(amps_.dot(other.amps_));
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  if (ok()) {
    os << "ok";
    return os.str();
  }
  if (!hermitian_ok)
    os << "hermiticity violated by " << hermiticity_violation << "; ";
  if (!trace_ok) os << "trace violated by " << trace_violation << "; ";
  if (!positive_ok) os << "positivity violated, min eig " << min_eigenvalue;
  return os.str();
}

ValidationReport validate(const Matrix4c& rho) {
  ValidationReport r;
  r.hermiticity_violation = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  r.trace_violation = std::abs(rho.trace() - Complex{1.0, 0.0});
  // Eigenvalues of the Hermitian part; for an already-Hermitian input this
  // is exact, for a slightly non-Hermitian one it is the meaningful check.
  const Matrix4c herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(herm,
                                             Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.hermitian_ok = r.hermiticity_violation <= DensityMatrix::kHermTol;
  r.trace_ok = r.trace_violation <= DensityMatrix::kTraceTol;
  r.positive_ok = r.min_eigenvalue >= -DensityMatrix::kEigTol;
  return r;
}

DensityMatrix::DensityMatrix(const Matrix4c& entries) : m_(entries) {
  const ValidationReport r = validate(m_);
  if (!r.ok()) throw DomainError("invalid density matrix: " + r.describe());
  // Scrub numerical dust so downstream algebra stays exactly Hermitian.
  m_ = 0.5 * (m_ + m_.adjoint().eval());
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(0.25 * Matrix4c::Identity());
}

DensityMatrix DensityMatrix::conjugated(const Matrix4c& u) const {
  return DensityMatrix(u * m_ * u.adjoint());
}

DensityMatrix density_from_pure(const PureState& psi) {
  const Vector4c& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

BlochVector bloch_vector(const DensityMatrix& rho) {
  const double p = rho.entry(kUpDn, kUpDn).real() +
                   rho.entry(kDnUp, kDnUp).real();
  if (p < 1e-9) {
    throw DomainError(
        "anti-aligned subspace weight below 1e-9; Bloch vector undefined");
  }
  const Complex c = rho.entry(kUpDn, kDnUp);
  BlochVector b;
  b.x = 2.0 * c.real() / p;
  b.y = -2.0 * c.imag() / p;
  b.z = (rho.entry(kUpDn, kUpDn).real() - rho.entry(kDnUp, kDnUp).real()) / p;
  if (b.x * b.x + b.y * b.y > 0.0) b.azimuth = std::atan2(b.y, b.x);
  return b;
}

namespace {
// Rows: ⟨↑↑|, ⟨S|, ⟨T|, ⟨↓↓| in the product basis.
Matrix4c singlet_triplet_matrix() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix4c w = Matrix4c::Zero();
  w(0, 0) = 1.0;
  w(1, kUpDn) = s;
  w(1, kDnUp) = -s;
  w(2, kUpDn) = s;
  w(2, kDnUp) = s;
  w(3, 3) = 1.0;
  return w;
}
}  // namespace

DensityMatrix singlet_triplet_transform(const DensityMatrix& rho) {
  return rho.conjugated(singlet_triplet_matrix());
}

DensityMatrix singlet_triplet_inverse(const DensityMatrix& rho) {
  return rho.conjugated(singlet_triplet_matrix().adjoint());
}

DensityMatrix sector_diagonal_state(double p_upup, double p_updn,
                                    double p_dnup, double p_dndn,
                                    Complex eps) {
  Matrix4c m = Matrix4c::Zero();
  m(kUpUp, kUpUp) = p_upup;
  m(kUpDn, kUpDn) = p_updn;
  m(kDnUp, kDnUp) = p_dnup;
  m(kDnDn, kDnDn) = p_dndn;
  m(kUpDn, kDnUp) = eps;
  m(kDnUp, kUpDn) = std::conj(eps);
  return DensityMatrix(m);
}

}  // namespace spinex
