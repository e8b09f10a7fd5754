#include "spinex/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "spinex/rng.hpp"

namespace spinex {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr Complex kImag{0.0, 1.0};
constexpr double kSqrtHalf = 0.70710678118654752440;

struct Resolved {
  double u_eg_hz = 0.0;
  double j_ex_hz = 0.0;
  ApRamp ramp;
};

Resolved resolve(const ExperimentConfig& cfg) {
  cfg.check();
  Resolved r;
  r.u_eg_hz = cfg.ramp_u_eg_auto ? u_eg(cfg.trap) : cfg.ramp.u_eg_hz;
  r.j_ex_hz = 2.0 * r.u_eg_hz;
  r.ramp = cfg.ramp;
  r.ramp.u_eg_hz = r.u_eg_hz;
  return r;
}

ApDiagnostics compute_ap_diagnostics(const Resolved& r) {
  ApDiagnostics d;
  const ApState fwd = arp_propagate(ApState::initial_separated(), r.ramp);
  d.forward_transfer = fwd.merged_population();
  const ApState back = arp_propagate(fwd, r.ramp.reversed());
  d.two_pass_return = back.separated_population();
  const Complex a_s = back.amplitudes(0);
  const Complex a_t = back.amplitudes(2);
  d.channel_phase_rad =
      (std::abs(a_s) > 0.0 && std::abs(a_t) > 0.0)
          ? std::arg(a_t / a_s)
          : 0.0;
  d.lz_transfer = lz_transfer_probability(
      r.ramp.j_eg_hz, std::abs(r.ramp.sweep_rate_hz_per_s()));
  return d;
}

/// Success-branch state after exchange hold t, reverse passage and the
/// collective-dephasing channel. The passage channel phase is absorbed
/// into the nominal time origin unless apply_ap_phase is set.
DensityMatrix success_state(const ExperimentConfig& cfg, const Resolved& r,
                            const ApDiagnostics& ap, double t_s,
                            double coherence_scale) {
  const ExchangeParams ex{r.j_ex_hz};
  Vector4c a =
      exchange_evolve(PureState::basis(kUpDn), ex, t_s).amplitudes();
  if (cfg.parity.apply_ap_phase) {
    Complex a_t = (a(kUpDn) + a(kDnUp)) * kSqrtHalf;
    const Complex a_s = (a(kUpDn) - a(kDnUp)) * kSqrtHalf;
    a_t *= std::exp(kImag * ap.channel_phase_rad);
    a(kUpDn) = (a_t + a_s) * kSqrtHalf;
    a(kDnUp) = (a_t - a_s) * kSqrtHalf;
  }
  const DensityMatrix pure = density_from_pure(PureState(a));
  const DensityMatrix scaled = sector_diagonal_state(
      0.0, pure.entry(kUpDn, kUpDn).real(), pure.entry(kDnUp, kDnUp).real(),
      0.0, coherence_scale * pure.entry(kUpDn, kDnUp));
  return collective_dephase(scaled, cfg.dephasing);
}

/// Contrast degradation seen by the loss-excluding parity estimator.
double parity_degradation(const ErrorModel& em) {
  return (1.0 - em.p_upup - em.p_dndn) * em.ground_fraction *
         em.ground_fraction * em.ap_success_f;
}

struct PopulationPoint {
  double p_updn = kNan, p_updn_se = kNan;
  double p_dnup = kNan, p_dnup_se = kNan;
  double retained = 0.0;
  bool ok = false;
};

/// Post-selected anti-aligned population estimate; loss folds in as a
/// static background (push-out readout model).
PopulationPoint population_point(const OutcomeDistribution& raw,
                                 std::int64_t shots, std::uint64_t seed) {
  const OutcomeDistribution dist = fold_loss_into_anti(raw);
  PopulationPoint pt;
  if (shots == 0) {
    const double kept = dist[Outcome::UpDn] + dist[Outcome::DnUp];
    if (kept <= 0.0) return pt;
    pt.p_updn = dist[Outcome::UpDn] / kept;
    pt.p_dnup = dist[Outcome::DnUp] / kept;
    pt.p_updn_se = pt.p_dnup_se = 0.0;
    pt.retained = kept;
    pt.ok = true;
    return pt;
  }
  const ShotRecord rec = sample_shots(dist, shots, seed);
  const PostselectResult post = postselect_antialigned(rec);
  pt.retained = post.retained_fraction;
  if (post.empty) return pt;
  const double n = static_cast<double>(post.record.total());
  pt.p_updn = static_cast<double>(post.record[Outcome::UpDn]) / n;
  pt.p_dnup = static_cast<double>(post.record[Outcome::DnUp]) / n;
  const double se = std::sqrt(
      std::max(0.0, pt.p_updn * (1.0 - pt.p_updn)) / n);
  pt.p_updn_se = pt.p_dnup_se = se;
  pt.ok = true;
  return pt;
}

struct ParityPoint {
  double parity = kNan;
  double se = kNan;
  double n_used = 0.0;
  bool ok = false;
};

ParityPoint parity_point(const OutcomeDistribution& dist, std::int64_t shots,
                         std::uint64_t seed, bool include_loss_as_even) {
  ParityPoint pt;
  if (shots == 0) {
    const double loss = dist[Outcome::Loss];
    double even = dist[Outcome::UpUp] + dist[Outcome::DnDn];
    double denom = 1.0 - loss;
    if (include_loss_as_even) {
      even += loss;
      denom = 1.0;
    }
    if (denom <= 0.0) return pt;
    const double odd = dist[Outcome::UpDn] + dist[Outcome::DnUp];
    pt.parity = (even - odd) / denom;
    pt.se = 0.0;
    pt.ok = true;
    return pt;
  }
  const ShotRecord rec = sample_shots(dist, shots, seed);
  try {
    const ParityEstimate est = estimate_parity(rec, include_loss_as_even);
    pt.parity = est.parity;
    pt.se = est.standard_error;
    pt.n_used = static_cast<double>(est.n_used);
    pt.ok = true;
  } catch (const DomainError&) {
    // all shots lost at this point; row stays flagged
  }
  return pt;
}

void collect_finite(const CurveOutput& table, const std::string& xcol,
                    const std::string& ycol, const std::string& secol,
                    std::vector<double>& t, std::vector<double>& y,
                    std::vector<double>& s) {
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double yi = table.at(i, ycol);
    if (!std::isfinite(yi)) continue;
    t.push_back(table.at(i, xcol));
    y.push_back(yi);
    s.push_back(table.at(i, secol));
  }
}

}  // namespace

double CurveOutput::at(std::size_t row, const std::string& column) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == column) return rows.at(row).at(c);
  }
  throw DomainError("CurveOutput: no column named " + column);
}

std::string to_csv(const CurveOutput& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_csv(const CurveOutput& table, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot open output file: " + path);
  f << to_csv(table);
}

JexReport compute_jex(const ExperimentConfig& cfg, bool with_numeric) {
  cfg.check();
  JexReport r;
  r.modes = harmonic_modes(cfg.trap);
  r.u_eg_hz = u_eg(cfg.trap);
  r.j_ex_hz = 2.0 * r.u_eg_hz;
  r.u_eg_numeric_hz = kNan;
  if (with_numeric) {
    try {
      r.u_eg_numeric_hz = u_eg_numeric(cfg.trap);
      r.numeric_ok = true;
    } catch (const DomainError&) {
      r.numeric_ok = false;
    }
  }
  return r;
}

ExchangeScanResult pipeline_exchange_scan(const ExperimentConfig& cfg) {
  const Resolved r = resolve(cfg);
  ExchangeScanResult out;
  out.j_ex_hz = r.j_ex_hz;
  out.u_eg_hz = r.u_eg_hz;
  out.ap = compute_ap_diagnostics(r);

  out.table.columns = {"t_s",           "p_updn", "p_updn_se",
                       "p_dnup",        "p_dnup_se", "retained_fraction",
                       "w_success",     "w_static",  "w_aligned",
                       "w_loss"};
  const ReadoutSequence readout{};  // population readout: no gradient/pulse
  for (std::size_t i = 0; i < cfg.exchange_times_s.size(); ++i) {
    const double t = cfg.exchange_times_s.values[i];
    const DensityMatrix rho = success_state(cfg, r, out.ap, t, 1.0);
    const ErrorModelResult em =
        apply_error_model(rho, readout, cfg.error_model);
    const PopulationPoint pt =
        population_point(em.distribution, cfg.sampling.shots_per_point,
                         derive_seed(cfg.sampling.seed, i));
    out.table.rows.push_back({t, pt.p_updn, pt.p_updn_se, pt.p_dnup,
                              pt.p_dnup_se, pt.retained, em.weights.success,
                              em.weights.static_anti, em.weights.aligned(),
                              em.weights.loss});
  }
  std::vector<double> t, y, s;
  collect_finite(out.table, "t_s", "p_updn", "p_updn_se", t, y, s);
  if (t.size() >= 6) {
    out.updn_fit = fit_known_frequency(t, y, s, r.j_ex_hz);
  }
  return out;
}

DepthSweepResult pipeline_depth_sweep(const ExperimentConfig& cfg,
                                      bool simulate_fit) {
  const Resolved base = resolve(cfg);
  (void)base;
  DepthSweepResult out;
  out.table.columns = {"depth_hz",        "j_ex_harmonic_hz",
                       "j_ex_numeric_hz", "numeric_ok",
                       "fitted_freq_hz",  "fitted_freq_se_hz"};
  const std::int64_t shots = cfg.sampling.shots_per_point;
  const int n_times =
      std::max<int>(8, static_cast<int>(cfg.exchange_times_s.size()));
  for (std::size_t i = 0; i < cfg.depths_hz.size(); ++i) {
    const double depth = cfg.depths_hz.values[i];
    const TweezerParams trap = cfg.trap.with_depth(depth);
    const double j_h = j_ex(trap);
    double j_n = kNan;
    double numeric_ok = 0.0;
    try {
      j_n = 2.0 * u_eg_numeric(trap);
      numeric_ok = 1.0;
    } catch (const DomainError&) {
      // shallow trap: flagged row, sweep continues
    }
    double f_fit = kNan, f_se = kNan;
    if (simulate_fit && shots > 0) {
      ExperimentConfig point_cfg = cfg;
      point_cfg.trap = trap;
      point_cfg.ramp_u_eg_auto = true;
      // Two beat periods at this depth's predicted frequency.
      point_cfg.exchange_times_s =
          ScanGrid::linspace(0.0, 2.0 / j_h, n_times);
      point_cfg.sampling.seed = derive_seed(cfg.sampling.seed, 1000 + i);
      const ExchangeScanResult scan = pipeline_exchange_scan(point_cfg);
      std::vector<double> t, y, s;
      collect_finite(scan.table, "t_s", "p_updn", "p_updn_se", t, y, s);
      if (t.size() >= 6) {
        const FrequencyFit ff =
            fit_frequency(t, y, s, 0.5 * j_h, 1.5 * j_h);
        f_fit = ff.frequency_hz;
        f_se = ff.frequency_se_hz;
      }
    }
    out.table.rows.push_back({depth, j_h, j_n, numeric_ok, f_fit, f_se});
  }
  return out;
}

namespace {

struct ParityPipelineCore {
  Resolved resolved;
  ApDiagnostics ap;
  double coherence_scale = 1.0;
  DensityMatrix rho_succ;

  ParityPipelineCore(const ExperimentConfig& cfg, double exchange_time_s)
      : resolved(resolve(cfg)),
        ap(compute_ap_diagnostics(resolved)),
        rho_succ(DensityMatrix::maximally_mixed()) {
    if (cfg.parity.target_contrast) {
      const double ideal =
          4.0 * epsilon_coherence(
                    success_state(cfg, resolved, ap, exchange_time_s, 1.0))
                    .magnitude;
      const double degraded = parity_degradation(cfg.error_model) * ideal;
      coherence_scale =
          degraded > 0.0
              ? std::clamp(*cfg.parity.target_contrast / degraded, 0.0, 1.0)
              : 1.0;
    }
    rho_succ =
        success_state(cfg, resolved, ap, exchange_time_s, coherence_scale);
  }
};

}  // namespace

ParityScanResult pipeline_parity_scan(const ExperimentConfig& cfg) {
  if (cfg.gradient.delta_hz == 0.0) {
    throw ConfigError("parity scan requires a nonzero gradient.delta_hz");
  }
  ParityScanResult out;
  const double quarter = cfg.parity.exchange_quarter_periods;
  // Exchange hold in quarter periods of the beat (odd ⇒ entangled).
  const Resolved r0 = resolve(cfg);
  out.exchange_time_s =
      r0.j_ex_hz > 0.0 ? quarter / (4.0 * r0.j_ex_hz) : 0.0;
  const ParityPipelineCore core(cfg, out.exchange_time_s);
  out.j_ex_hz = core.resolved.j_ex_hz;
  out.coherence_scale = core.coherence_scale;
  out.ap = core.ap;

  out.table.columns = {"t_g_s",   "parity",   "parity_se", "n_used",
                       "w_success", "w_static", "w_aligned", "w_loss"};
  ParityScan scan;
  scan.delta_hz = cfg.gradient.delta_hz;
  for (std::size_t i = 0; i < cfg.gradient_times_s.size(); ++i) {
    const double t_g = cfg.gradient_times_s.values[i];
    ReadoutSequence readout;
    readout.gradient = cfg.gradient;
    readout.gradient_time_s = t_g;
    readout.pulse = cfg.pulse;
    const ErrorModelResult em =
        apply_error_model(core.rho_succ, readout, cfg.error_model);
    const ParityPoint pt = parity_point(
        em.distribution, cfg.sampling.shots_per_point,
        derive_seed(cfg.sampling.seed, i), cfg.parity.include_loss_as_even);
    out.table.rows.push_back({t_g, pt.parity, pt.se, pt.n_used,
                              em.weights.success, em.weights.static_anti,
                              em.weights.aligned(), em.weights.loss});
    if (pt.ok) {
      scan.points.push_back({t_g, pt.parity, pt.se});
    }
  }
  out.fit = fit_parity_scan(scan);

  CertificationInput inp;
  inp.contrast = out.fit.contrast;
  inp.contrast_err = out.fit.contrast_se;
  inp.p_upup = cfg.error_model.p_upup;
  inp.p_upup_err = cfg.uncertainty.p_upup_err;
  inp.p_dndn = cfg.error_model.p_dndn;
  inp.p_dndn_err = cfg.uncertainty.p_dndn_err;
  inp.ap_success_f = cfg.error_model.ap_success_f;
  inp.ap_success_f_err = cfg.uncertainty.ap_success_f_err;
  out.certification = certify(inp);
  out.mc_certification =
      certify_montecarlo(inp, 100000, derive_seed(cfg.sampling.seed, 777));
  return out;
}

ParityVsExchangeResult pipeline_parity_vs_exchange(
    const ExperimentConfig& cfg) {
  if (cfg.gradient.delta_hz == 0.0) {
    throw ConfigError(
        "parity-vs-exchange requires a nonzero gradient.delta_hz");
  }
  ParityVsExchangeResult out;
  out.t_g_s = 1.0 / (4.0 * cfg.gradient.delta_hz);
  const Resolved r = resolve(cfg);
  out.j_ex_hz = r.j_ex_hz;
  out.ap = compute_ap_diagnostics(r);

  // The coherence calibration must match the parity-scan pipeline so the
  // extrema here equal its fitted C/2.
  double scale = 1.0;
  if (cfg.parity.target_contrast) {
    const double quarter = cfg.parity.exchange_quarter_periods;
    const double t_ent =
        r.j_ex_hz > 0.0 ? quarter / (4.0 * r.j_ex_hz) : 0.0;
    const double ideal =
        4.0 *
        epsilon_coherence(success_state(cfg, r, out.ap, t_ent, 1.0))
            .magnitude;
    const double degraded = parity_degradation(cfg.error_model) * ideal;
    scale = degraded > 0.0
                ? std::clamp(*cfg.parity.target_contrast / degraded, 0.0, 1.0)
                : 1.0;
  }

  out.table.columns = {"t_s",       "parity",   "parity_se", "n_used",
                       "w_success", "w_static", "w_aligned", "w_loss"};
  ReadoutSequence readout;
  readout.gradient = cfg.gradient;
  readout.gradient_time_s = out.t_g_s;
  readout.pulse = cfg.pulse;
  for (std::size_t i = 0; i < cfg.exchange_times_s.size(); ++i) {
    const double t = cfg.exchange_times_s.values[i];
    const DensityMatrix rho = success_state(cfg, r, out.ap, t, scale);
    const ErrorModelResult em =
        apply_error_model(rho, readout, cfg.error_model);
    const ParityPoint pt = parity_point(
        em.distribution, cfg.sampling.shots_per_point,
        derive_seed(cfg.sampling.seed, i), cfg.parity.include_loss_as_even);
    out.table.rows.push_back({t, pt.parity, pt.se, pt.n_used,
                              em.weights.success, em.weights.static_anti,
                              em.weights.aligned(), em.weights.loss});
  }
  std::vector<double> t, y, s;
  collect_finite(out.table, "t_s", "parity", "parity_se", t, y, s);
  if (t.size() >= 6 && r.j_ex_hz > 0.0) {
    out.frequency_fit =
        fit_frequency(t, y, s, 0.5 * r.j_ex_hz, 1.5 * r.j_ex_hz);
  }
  return out;
}

}  // namespace spinex
