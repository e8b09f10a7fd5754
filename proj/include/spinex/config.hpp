// Experiment configuration: the single structured input consumed by every
// pipeline. JSON on disk; unknown keys are rejected, missing keys fall
// back to the shipped defaults.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinex/dynamics.hpp"
#include "spinex/measure.hpp"
#include "spinex/potential.hpp"

namespace spinex {

/// Thrown on malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ScanGrid {
  std::vector<double> values;

  bool empty() const { return values.empty(); }
  std::size_t size() const { return values.size(); }
  static ScanGrid linspace(double start, double stop, int count);
  static ScanGrid logspace(double start, double stop, int count);
};

struct SamplingConfig {
  std::int64_t shots_per_point = 300;  // 0 selects analytic expectation mode
  std::uint64_t seed = 20150901;
};

/// Standard errors attached to the error-model numbers, used only by the
/// certification stage.
struct ErrorModelUncertainty {
  double p_upup_err = 0.0;
  double p_dndn_err = 0.0;
  double ap_success_f_err = 0.0;
};

struct ParityConfig {
  /// When set, the success-branch coherence is scaled so the predicted
  /// fitted contrast equals this target (calibration to a measured value).
  std::optional<double> target_contrast;
  /// Exchange hold expressed in quarter periods; odd values produce the
  /// maximally entangled states, 0 gives the unentangled reference.
  int exchange_quarter_periods = 1;
  /// Fold the propagated adiabatic-passage channel phase into the state
  /// instead of absorbing it into the nominal time origin.
  bool apply_ap_phase = false;
  /// Parity estimator sensitivity mode (loss counted as even parity).
  bool include_loss_as_even = false;
};

struct ExperimentConfig {
  TweezerParams trap;
  ApRamp ramp;              // ramp.u_eg_hz is overwritten when auto
  bool ramp_u_eg_auto = true;  // derive U_eg from the trap (J_ex/2)
  GradientParams gradient;
  PulseParams pulse{1.5707963267948966, 0.0};
  ErrorModel error_model;
  ErrorModelUncertainty uncertainty;
  DephasingParams dephasing;
  SamplingConfig sampling;
  ScanGrid exchange_times_s;
  ScanGrid gradient_times_s;
  ScanGrid depths_hz;
  ParityConfig parity;

  void check() const;

  /// The shipped defaults: measured protocol constants of the two-atom
  /// tweezer experiment (91 kHz exchange-configuration depth, 710 nm
  /// waist, 165 Hz ground-excited tunneling, ±2.2 kHz bias window swept
  /// in 12 ms, measured prep/passage/survival infidelities).
  static ExperimentConfig paper_defaults();
  /// Same constants with the parity-data calibration (two-way passage
  /// success 0.69, target contrast 0.49).
  static ExperimentConfig paper_parity();

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  std::string to_json_text() const;
};

/// Input file for the certification front-end. Required keys: contrast,
/// contrast_err, p_upup, p_upup_err, p_dndn, p_dndn_err; optional:
/// ap_success_f, ap_success_f_err. A missing required key raises
/// ConfigError naming the field.
struct CertifyFile {
  double contrast = 0.0;
  double contrast_err = 0.0;
  double p_upup = 0.0;
  double p_upup_err = 0.0;
  double p_dndn = 0.0;
  double p_dndn_err = 0.0;
  std::optional<double> ap_success_f;
  double ap_success_f_err = 0.0;

  static CertifyFile from_json_text(const std::string& text);
  static CertifyFile from_json_file(const std::string& path);
};

}  // namespace spinex
