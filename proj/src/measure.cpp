#include "spinex/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spinex/rng.hpp"

namespace spinex {

namespace {
constexpr double kPi = std::numbers::pi;

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }
}  // namespace

void ErrorModel::check() const {
  if (!in_unit(p_upup) || !in_unit(p_dndn) || !in_unit(ground_fraction) ||
      !in_unit(ap_success_f) || !in_unit(survival)) {
    throw DomainError("ErrorModel: probabilities must lie in [0, 1]");
  }
  if (p_upup + p_dndn > 1.0) {
    throw DomainError("ErrorModel: p_upup + p_dndn > 1");
  }
}

double ErrorModel::predicted_exchange_contrast(bool post_selected) const {
  check();
  const double c = ap_success_f * ground_fraction * ground_fraction *
                   survival * survival;
  return post_selected ? c : c * (1.0 - p_upup - p_dndn);
}

double OutcomeDistribution::sum() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

void OutcomeDistribution::check() const {
  for (double v : p) {
    if (v < -1e-12) throw DomainError("OutcomeDistribution: negative weight");
  }
  if (std::abs(sum() - 1.0) > 1e-9) {
    throw DomainError("OutcomeDistribution: not normalized");
  }
}

OutcomeDistribution fold_loss_into_anti(const OutcomeDistribution& d) {
  OutcomeDistribution out = d;
  const double half = 0.5 * out[Outcome::Loss];
  out[Outcome::UpDn] += half;
  out[Outcome::DnUp] += half;
  out[Outcome::Loss] = 0.0;
  return out;
}

DensityMatrix ReadoutSequence::apply(const DensityMatrix& rho) const {
  DensityMatrix out = rho;
  if (gradient) out = gradient_evolve(out, *gradient, gradient_time_s);
  if (pulse) out = microwave_pulse(out, *pulse);
  return out;
}

DensityMatrix ReadoutSequence::apply_gradient_insensitive(
    const DensityMatrix& rho) const {
  DensityMatrix out = rho;
  if (pulse) out = microwave_pulse(out, *pulse);
  return out;
}

std::array<double, 4> spin_populations(const DensityMatrix& rho) {
  std::array<double, 4> p{};
  for (int i = 0; i < 4; ++i) p[i] = rho.entry(i, i).real();
  return p;
}

double parity(const DensityMatrix& rho) {
  const auto p = spin_populations(rho);
  return p[kUpUp] + p[kDnDn] - p[kUpDn] - p[kDnUp];
}

double parity_after_readout(const DensityMatrix& rho, const GradientParams& g,
                            double t_g_s, const PulseParams& pulse) {
  return parity(microwave_pulse(gradient_evolve(rho, g, t_g_s), pulse));
}

ErrorModelResult apply_error_model(const DensityMatrix& rho_success,
                                   const ReadoutSequence& readout,
                                   const ErrorModel& em) {
  em.check();
  const double s2 = em.survival * em.survival;
  const double g2f =
      em.ground_fraction * em.ground_fraction * em.ap_success_f;
  const double w_anti = 1.0 - em.p_upup - em.p_dndn;

  ErrorModelResult result;
  auto& w = result.weights;
  w.success = w_anti * g2f * s2;
  w.static_anti = w_anti * (1.0 - g2f) * s2;
  w.aligned_upup = em.p_upup * s2;
  w.aligned_dndn = em.p_dndn * s2;
  w.loss = 1.0 - s2;
  if (std::abs(w.sum() - 1.0) > 1e-12) {
    throw std::logic_error("apply_error_model: branch weights do not sum to 1");
  }

  auto add_branch = [&result](double weight, const DensityMatrix& rho) {
    if (weight == 0.0) return;
    const auto pops = spin_populations(rho);
    for (int i = 0; i < 4; ++i) result.distribution.p[i] += weight * pops[i];
  };
  add_branch(w.success, readout.apply(rho_success));
  add_branch(w.aligned_upup,
             readout.apply(density_from_pure(PureState::basis(kUpUp))));
  add_branch(w.aligned_dndn,
             readout.apply(density_from_pure(PureState::basis(kDnDn))));
  add_branch(w.static_anti, readout.apply_gradient_insensitive(
                                sector_diagonal_state(0, 0.5, 0.5, 0, 0)));
  result.distribution[Outcome::Loss] = w.loss;
  result.distribution.check();
  return result;
}

std::int64_t ShotRecord::total() const {
  std::int64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

ShotRecord sample_shots(const OutcomeDistribution& dist, std::int64_t n,
                        std::uint64_t seed) {
  dist.check();
  if (n < 0) throw DomainError("sample_shots: negative shot count");
  double cum[kOutcomeCount];
  double acc = 0.0;
  for (int i = 0; i < kOutcomeCount; ++i) {
    acc += std::max(0.0, dist.p[i]);
    cum[i] = acc;
  }
  cum[kOutcomeCount - 1] = std::max(cum[kOutcomeCount - 1], 1.0);

  ShotRecord rec;
  rec.seed = seed;
  Rng rng(splitmix64(seed));
  for (std::int64_t s = 0; s < n; ++s) {
    const double u = rng.uniform() * acc;
    int k = 0;
    while (k < kOutcomeCount - 1 && u >= cum[k]) ++k;
    ++rec.counts[k];
  }
  return rec;
}

PostselectResult postselect_antialigned(const ShotRecord& record) {
  PostselectResult out;
  out.record.seed = record.seed;
  out.record.counts[static_cast<int>(Outcome::UpDn)] =
      record[Outcome::UpDn];
  out.record.counts[static_cast<int>(Outcome::DnUp)] =
      record[Outcome::DnUp];
  const std::int64_t total = record.total();
  const std::int64_t kept = out.record.total();
  out.retained_fraction = total > 0 ? double(kept) / double(total) : 0.0;
  out.empty = kept == 0;
  return out;
}

ParityEstimate estimate_parity(const ShotRecord& record,
                               bool include_loss_as_even) {
  std::int64_t even = record[Outcome::UpUp] + record[Outcome::DnDn];
  const std::int64_t odd = record[Outcome::UpDn] + record[Outcome::DnUp];
  if (include_loss_as_even) even += record[Outcome::Loss];
  const std::int64_t n = even + odd;
  if (n == 0) throw DomainError("estimate_parity: no usable shots");
  ParityEstimate est;
  est.n_used = n;
  est.parity = double(even - odd) / double(n);
  est.standard_error =
      std::sqrt(std::max(0.0, 1.0 - est.parity * est.parity) / double(n));
  return est;
}

namespace {

struct SinusoidFit {
  double a = 0.0, b = 0.0, c = 0.0;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double chi2 = 0.0;           // weighted residual sum of squares
  double rss = 0.0;            // unweighted residual sum of squares
  bool weighted = false;
  int n = 0;
};

// Linear least squares of y = a cos(ωt) + b sin(ωt) + c.
SinusoidFit fit_sinusoid_linear(const std::vector<double>& t,
                                const std::vector<double>& y,
                                const std::vector<double>& sigma,
                                double freq_hz) {
  const int n = static_cast<int>(t.size());
  SinusoidFit fit;
  fit.n = n;
  fit.weighted = !sigma.empty() &&
                 std::all_of(sigma.begin(), sigma.end(),
                             [](double s) { return s > 0.0; });
  const double omega = 2.0 * kPi * freq_hz;
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd yy(n), wsqrt(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = std::cos(omega * t[i]);
    x(i, 1) = std::sin(omega * t[i]);
    x(i, 2) = 1.0;
    yy(i) = y[i];
    wsqrt(i) = fit.weighted ? 1.0 / sigma[i] : 1.0;
  }
  const Eigen::MatrixXd xw = wsqrt.asDiagonal() * x;
  const Eigen::VectorXd yw = wsqrt.asDiagonal() * yy;
  const Eigen::Matrix3d xtx = xw.transpose() * xw;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(xtx);
  if (!lu.isInvertible()) {
    throw DomainError("sinusoid fit: degenerate design matrix");
  }
  const Eigen::Vector3d beta = lu.solve(xw.transpose() * yw);
  fit.a = beta(0);
  fit.b = beta(1);
  fit.c = beta(2);
  const Eigen::VectorXd r = yy - x * beta;
  fit.rss = r.squaredNorm();
  fit.chi2 = (wsqrt.asDiagonal() * r).squaredNorm();
  Eigen::Matrix3d inv = lu.inverse();
  if (fit.weighted) {
    fit.cov = inv;  // provided standard errors propagate directly
  } else {
    const double dof = std::max(1, n - 3);
    fit.cov = inv * (fit.rss / dof);
  }
  return fit;
}

ContrastFit to_contrast_fit(const SinusoidFit& f) {
  ContrastFit out;
  const double amp2 = f.a * f.a + f.b * f.b;
  const double amp = std::sqrt(amp2);
  out.contrast = 2.0 * amp;
  out.phase_rad = std::atan2(-f.b, f.a);
  out.offset = f.c;
  out.offset_se = std::sqrt(std::max(0.0, f.cov(2, 2)));
  if (amp2 > 0.0) {
    const double var =
        (f.a * f.a * f.cov(0, 0) + f.b * f.b * f.cov(1, 1) +
         2.0 * f.a * f.b * f.cov(0, 1)) /
        amp2;
    out.contrast_se = 2.0 * std::sqrt(std::max(0.0, var));
  } else {
    out.contrast_se =
        2.0 * std::sqrt(std::max(f.cov(0, 0), f.cov(1, 1)));
  }
  out.residual_norm = std::sqrt(f.weighted ? f.chi2 : f.rss);
  return out;
}

}  // namespace

ContrastFit fit_known_frequency(const std::vector<double>& t_s,
                                const std::vector<double>& y,
                                const std::vector<double>& sigma,
                                double freq_hz) {
  if (t_s.size() != y.size() || t_s.size() < 4) {
    throw DomainError("fit_known_frequency: need >= 4 samples");
  }
  const bool weighted =
      !sigma.empty() && std::all_of(sigma.begin(), sigma.end(),
                                    [](double v) { return v > 0.0; });
  return to_contrast_fit(fit_sinusoid_linear(
      t_s, y, weighted ? sigma : std::vector<double>{}, freq_hz));
}

ContrastFit fit_parity_scan(const ParityScan& scan) {
  const int n = static_cast<int>(scan.points.size());
  if (n < 6) throw DomainError("fit_parity_scan: need at least 6 points");
  std::vector<double> t(n), y(n), s(n);
  double tmin = scan.points.front().t_g_s, tmax = tmin;
  for (int i = 0; i < n; ++i) {
    t[i] = scan.points[i].t_g_s;
    y[i] = scan.points[i].parity;
    s[i] = scan.points[i].standard_error;
    tmin = std::min(tmin, t[i]);
    tmax = std::max(tmax, t[i]);
  }
  if ((tmax - tmin) * std::abs(scan.delta_hz) < 1.0 - 1e-9) {
    throw DomainError("fit_parity_scan: scan must span >= 1 period");
  }
  return fit_known_frequency(t, y, s, scan.delta_hz);
}

FrequencyFit fit_frequency(const std::vector<double>& t_s,
                           const std::vector<double>& y,
                           const std::vector<double>& sigma, double f_min_hz,
                           double f_max_hz, int n_grid) {
  if (t_s.size() != y.size() || t_s.size() < 5) {
    throw DomainError("fit_frequency: need >= 5 samples");
  }
  if (!(f_max_hz > f_min_hz) || !(f_min_hz > 0.0)) {
    throw DomainError("fit_frequency: bad frequency bracket");
  }
  auto chi2_at = [&](double f) {
    return fit_sinusoid_linear(t_s, y, sigma, f).chi2;
  };
  double best_f = f_min_hz;
  double best_chi2 = chi2_at(best_f);
  const double step = (f_max_hz - f_min_hz) / (n_grid - 1);
  for (int i = 1; i < n_grid; ++i) {
    const double f = f_min_hz + i * step;
    const double c = chi2_at(f);
    if (c < best_chi2) {
      best_chi2 = c;
      best_f = f;
    }
  }
  // Ternary refinement inside the bracketing grid cells.
  double lo = std::max(f_min_hz, best_f - step);
  double hi = std::min(f_max_hz, best_f + step);
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (chi2_at(m1) < chi2_at(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  FrequencyFit out;
  out.frequency_hz = 0.5 * (lo + hi);
  SinusoidFit at_best = fit_sinusoid_linear(t_s, y, sigma, out.frequency_hz);
  out.at_best = to_contrast_fit(at_best);

  // Curvature of χ²(f) near the minimum gives the frequency error via the
  // Δχ² = 1 rule (residual-scaled when unweighted).
  const double h = std::max(step * 1e-3, out.frequency_hz * 1e-9);
  const double cm = chi2_at(out.frequency_hz - h);
  const double c0 = chi2_at(out.frequency_hz);
  const double cp = chi2_at(out.frequency_hz + h);
  const double curv = (cp - 2.0 * c0 + cm) / (h * h);
  if (curv > 0.0) {
    double scale = 1.0;
    if (at_best.weighted == false) {
      const double dof = std::max<std::size_t>(1, t_s.size() - 4);
      scale = at_best.rss / double(dof);
    }
    out.frequency_se_hz = std::sqrt(2.0 * scale / curv);
  }
  return out;
}

}  // namespace spinex
