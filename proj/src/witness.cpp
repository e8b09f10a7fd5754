#include "spinex/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spinex/rng.hpp"

namespace spinex {

void CertificationInput::check() const {
  if (contrast < 0.0) throw DomainError("CertificationInput: contrast < 0");
  auto unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!unit(p_upup) || !unit(p_dndn)) {
    throw DomainError("CertificationInput: populations must lie in [0, 1]");
  }
  if (contrast_err < 0.0 || p_upup_err < 0.0 || p_dndn_err < 0.0 ||
      ap_success_f_err < 0.0) {
    throw DomainError("CertificationInput: negative standard error");
  }
  if (ap_success_f && (*ap_success_f <= 0.0 || *ap_success_f > 1.0)) {
    throw DomainError("CertificationInput: ap_success_f must be in (0, 1]");
  }
}

Coherence epsilon_coherence(const DensityMatrix& rho) {
  const Complex eps = rho.entry(kUpDn, kDnUp);
  return Coherence{std::abs(eps), std::arg(eps)};
}

double contrast_bound(double p_upup, double p_dndn) {
  if (p_upup < 0.0 || p_dndn < 0.0 || p_upup > 1.0 || p_dndn > 1.0) {
    throw DomainError("contrast_bound: populations must lie in [0, 1]");
  }
  return 4.0 * std::sqrt(p_upup * p_dndn);
}

FidelityWitness fidelity_from_contrast(double contrast, double p_upup,
                                       double p_dndn) {
  FidelityWitness w;
  w.fidelity = 0.5 + 0.25 * contrast - 0.5 * (p_upup + p_dndn);
  w.equivalent_contrast_threshold = 2.0 * (p_upup + p_dndn);
  w.witness_passed = w.fidelity > 0.5;
  return w;
}

SuccessFidelity f_succ_correction(double contrast, double f, double p_upup,
                                  double p_dndn) {
  if (!(f > 0.0) || f > 1.0) {
    throw DomainError("f_succ_correction: f must lie in (0, 1]");
  }
  const double corrected = contrast / f;
  if (corrected > 2.0 + 1e-12) {
    throw DomainError(
        "f_succ_correction: C/f > 2 is inconsistent (|eps| cannot exceed 1/2)");
  }
  const FidelityWitness w = fidelity_from_contrast(corrected, p_upup, p_dndn);
  SuccessFidelity out;
  out.f_succ = w.fidelity;
  out.witness_passed = w.fidelity > 0.5;
  out.actual_fidelity_threshold = 0.5 * f;
  return out;
}

double concurrence_lower(double contrast, double p_upup, double p_dndn) {
  return std::max(0.0,
                  0.5 * (contrast - contrast_bound(p_upup, p_dndn)));
}

double ppt_min_eigenvalue(const DensityMatrix& rho) {
  const Matrix4c& m = rho.entries();
  Matrix4c pt;
  // Transpose the right-atom indices: (ia, jb) → (ib, ja).
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 2; ++j)
        for (int b = 0; b < 2; ++b)
          pt(2 * i + a, 2 * j + b) = m(2 * i + b, 2 * j + a);
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CertificationResult certify(const CertificationInput& inp) {
  inp.check();
  CertificationResult r;
  r.c_bound = contrast_bound(inp.p_upup, inp.p_dndn);
  // First-order propagation; at a vanishing population the derivative is
  // singular and the bound error is reported as 0 (the resampling mode
  // remains meaningful there).
  if (inp.p_upup > 0.0 && inp.p_dndn > 0.0) {
    const double d_up = 2.0 * std::sqrt(inp.p_dndn / inp.p_upup);
    const double d_dn = 2.0 * std::sqrt(inp.p_upup / inp.p_dndn);
    r.c_bound_err = std::hypot(d_up * inp.p_upup_err, d_dn * inp.p_dndn_err);
  }
  r.entangled = inp.contrast > r.c_bound;
  const double var = inp.contrast_err * inp.contrast_err +
                     r.c_bound_err * r.c_bound_err;
  const double margin = inp.contrast - r.c_bound;
  r.sigma_separation =
      var > 0.0 ? margin / std::sqrt(var)
                : (margin == 0.0 ? 0.0
                                 : std::copysign(
                                       std::numeric_limits<double>::infinity(),
                                       margin));
  const FidelityWitness fw =
      fidelity_from_contrast(inp.contrast, inp.p_upup, inp.p_dndn);
  r.fidelity = fw.fidelity;
  r.fidelity_witness = fw.witness_passed;
  r.concurrence_lower =
      concurrence_lower(inp.contrast, inp.p_upup, inp.p_dndn);
  if (inp.ap_success_f) {
    const double f = *inp.ap_success_f;
    r.f_succ = f_succ_correction(inp.contrast, f, inp.p_upup, inp.p_dndn)
                   .f_succ;
    const double d_c = 0.25 / f;
    const double d_f = -0.25 * inp.contrast / (f * f);
    r.f_succ_err = std::sqrt(
        d_c * d_c * inp.contrast_err * inp.contrast_err +
        d_f * d_f * inp.ap_success_f_err * inp.ap_success_f_err +
        0.25 * inp.p_upup_err * inp.p_upup_err +
        0.25 * inp.p_dndn_err * inp.p_dndn_err);
  }
  return r;
}

MonteCarloCertification certify_montecarlo(const CertificationInput& inp,
                                           int n_samples,
                                           std::uint64_t seed) {
  inp.check();
  if (n_samples < 100) {
    throw DomainError("certify_montecarlo: need >= 100 samples");
  }
  Rng rng(splitmix64(seed));
  std::vector<double> margins;
  margins.reserve(static_cast<size_t>(n_samples));
  double mean = 0.0;
  int below = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double c = std::clamp(
        inp.contrast + inp.contrast_err * rng.gaussian(), 0.0, 2.0);
    const double a = std::clamp(
        inp.p_upup + inp.p_upup_err * rng.gaussian(), 0.0, 1.0);
    const double b = std::clamp(
        inp.p_dndn + inp.p_dndn_err * rng.gaussian(), 0.0, 1.0);
    const double margin = c - contrast_bound(a, b);
    margins.push_back(margin);
    mean += margin;
    if (margin <= 0.0) ++below;
  }
  std::sort(margins.begin(), margins.end());
  auto quantile = [&margins](double q) {
    const size_t idx = static_cast<size_t>(
        std::clamp(q * (margins.size() - 1), 0.0,
                   double(margins.size() - 1)));
    return margins[idx];
  };
  MonteCarloCertification mc;
  mc.p_not_entangled = double(below) / double(n_samples);
  mc.margin_mean = mean / double(n_samples);
  mc.margin_p2_5 = quantile(0.025);
  mc.margin_median = quantile(0.5);
  mc.margin_p97_5 = quantile(0.975);
  return mc;
}

}  // namespace spinex
