// Batch pipelines: the full simulated protocol (state preparation →
// adiabatic passage → exchange → reverse passage → gradient/pulse readout
// with the error model) driven by an ExperimentConfig, emitting
// plot-ready tables. Deterministic given (config, seed); scan point i
// samples with seed base + i.
#pragma once

#include <string>
#include <vector>

#include "spinex/config.hpp"
#include "spinex/witness.hpp"

namespace spinex {

/// Plot-ready table; one row per grid point, fixed column order.
struct CurveOutput {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  double at(std::size_t row, const std::string& column) const;
};

/// CSV with a header row; floats at 17 significant digits.
std::string to_csv(const CurveOutput& table);
void write_csv(const CurveOutput& table, const std::string& path);

/// Propagated two-pass adiabatic-passage diagnostics for the configured
/// ramp. The channel phase is reported, not folded into scan states,
/// unless parity.apply_ap_phase is set.
struct ApDiagnostics {
  double forward_transfer = 0.0;   // merged population after the forward ramp
  double two_pass_return = 0.0;    // separated population after fwd + reverse
  double channel_phase_rad = 0.0;  // arg(a_T / a_S) after the double passage
  double lz_transfer = 0.0;        // closed-form oracle for one passage
};

struct ExchangeScanResult {
  CurveOutput table;
  double j_ex_hz = 0.0;
  double u_eg_hz = 0.0;
  ApDiagnostics ap;
  ContrastFit updn_fit;  // known-frequency fit of the ↑↓ curve
};

struct DepthSweepResult {
  CurveOutput table;
};

struct ParityScanResult {
  CurveOutput table;
  double j_ex_hz = 0.0;
  double exchange_time_s = 0.0;
  double coherence_scale = 1.0;
  ApDiagnostics ap;
  ContrastFit fit;
  CertificationResult certification;
  MonteCarloCertification mc_certification;
};

struct ParityVsExchangeResult {
  CurveOutput table;
  double j_ex_hz = 0.0;
  double t_g_s = 0.0;  // fixed quarter period of the gradient
  ApDiagnostics ap;
  FrequencyFit frequency_fit;
};

/// Exchange frequency and its ingredients for the configured trap.
struct JexReport {
  HarmonicModes modes;
  double u_eg_hz = 0.0;
  double j_ex_hz = 0.0;
  double u_eg_numeric_hz = 0.0;  // NaN when the numeric solve failed
  bool numeric_ok = false;
};
JexReport compute_jex(const ExperimentConfig& cfg, bool with_numeric = true);

/// Population curves P(↑↓) and P(↓↑) versus exchange time, post-selected
/// on anti-aligned outcomes (loss folds in as a static background; see
/// measure::fold_loss_into_anti).
ExchangeScanResult pipeline_exchange_scan(const ExperimentConfig& cfg);

/// J_ex versus depth in harmonic and numeric-1D modes, with an optional
/// sampled oscillation-frequency fit per depth (enabled when
/// shots_per_point > 0). Numeric failures flag the row instead of
/// aborting the sweep.
DepthSweepResult pipeline_depth_sweep(const ExperimentConfig& cfg,
                                      bool simulate_fit = true);

/// Parity versus gradient time at a fixed exchange hold, fitted at the
/// known δ, then certified against the configured populations.
ParityScanResult pipeline_parity_scan(const ExperimentConfig& cfg);

/// Parity versus exchange time at the fixed quarter-period gradient.
ParityVsExchangeResult pipeline_parity_vs_exchange(
    const ExperimentConfig& cfg);

}  // namespace spinex
