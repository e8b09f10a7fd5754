// Observable extraction (populations, parity), the experimental
// error-model channel, Monte Carlo shot sampling, post-selection, and
// parity-scan contrast fitting.
//
// Contrast convention: C is the peak-to-peak amplitude of the parity
// oscillation, so C = 4|ε| holds literally and C ∈ [0, 2].
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "spinex/dynamics.hpp"
#include "spinex/qstate.hpp"

namespace spinex {

/// Scalar infidelity parameters composing the predicted contrast budget.
struct ErrorModel {
  double p_upup = 0.0;          // aligned-prep probability ↑↑
  double p_dndn = 0.0;          // aligned-prep probability ↓↓
  double ground_fraction = 1.0; // per-atom 3D motional ground-state prob.
  double ap_success_f = 1.0;    // both atoms in different tweezers after
                                // the double passage
  double survival = 1.0;        // per-atom survival probability

  void check() const;
  static ErrorModel ideal() { return ErrorModel{}; }

  /// The multiplicative contrast budget f·g²·s², times the anti-aligned
  /// prep weight when not post-selected.
  double predicted_exchange_contrast(bool post_selected = true) const;
};

enum class Outcome : int { UpUp = 0, UpDn = 1, DnUp = 2, DnDn = 3, Loss = 4 };
inline constexpr int kOutcomeCount = 5;

/// Normalized probability vector over {upup, updn, dnup, dndn, loss}.
struct OutcomeDistribution {
  std::array<double, kOutcomeCount> p{};

  double operator[](Outcome o) const { return p[static_cast<int>(o)]; }
  double& operator[](Outcome o) { return p[static_cast<int>(o)]; }
  double sum() const;
  void check() const;
};

/// Push-out imaging cannot distinguish a lost atom from an ejected ↑ atom;
/// for population-curve readouts loss events therefore contaminate the
/// anti-aligned sample as a static background. This folds the loss weight
/// 50/50 into updn/dnup.
OutcomeDistribution fold_loss_into_anti(const OutcomeDistribution& d);

/// Weight ledger of the error-model branches; sums to 1.
struct BranchWeights {
  double success = 1.0;      // correct prep ∧ both ground ∧ AP success
  double static_anti = 0.0;  // motional-excited or AP-failure branch
  double aligned_upup = 0.0;
  double aligned_dndn = 0.0;
  double loss = 0.0;

  double aligned() const { return aligned_upup + aligned_dndn; }
  double sum() const {
    return success + static_anti + aligned_upup + aligned_dndn + loss;
  }
};

/// The transformations applied between state production and readout.
struct ReadoutSequence {
  std::optional<GradientParams> gradient;
  double gradient_time_s = 0.0;
  std::optional<PulseParams> pulse;

  DensityMatrix apply(const DensityMatrix& rho) const;
  /// Branch that is insensitive to the gradient (atoms co-trapped or
  /// motionally excited): pulse only.
  DensityMatrix apply_gradient_insensitive(const DensityMatrix& rho) const;
};

struct ErrorModelResult {
  OutcomeDistribution distribution;
  BranchWeights weights;
};

/// Mixes the ideal pipeline with the error branches:
///  (i)  success branch → readout applied to rho_success;
///  (ii) aligned-prep branches → readout applied to |↑↑⟩⟨↑↑|, |↓↓⟩⟨↓↓|;
///  (iii) motional-excited / AP-failure branch → gradient-insensitive
///        readout of the washed-out anti-aligned mixture (t_g-independent);
///  (iv) loss with probability 1 − survival² → loss outcome.
ErrorModelResult apply_error_model(const DensityMatrix& rho_success,
                                   const ReadoutSequence& readout,
                                   const ErrorModel& em);

std::array<double, 4> spin_populations(const DensityMatrix& rho);

/// Π = P↑↑ + P↓↓ − P↑↓ − P↓↑ = Tr(ρ·diag(1,−1,−1,1)).
double parity(const DensityMatrix& rho);

/// gradient_evolve → microwave_pulse → parity.
double parity_after_readout(const DensityMatrix& rho, const GradientParams& g,
                            double t_g_s, const PulseParams& pulse);

/// Multinomial outcome record; deterministic given the seed.
struct ShotRecord {
  std::array<std::int64_t, kOutcomeCount> counts{};
  std::uint64_t seed = 0;

  std::int64_t total() const;
  std::int64_t operator[](Outcome o) const {
    return counts[static_cast<int>(o)];
  }
};

ShotRecord sample_shots(const OutcomeDistribution& dist, std::int64_t n,
                        std::uint64_t seed);

struct PostselectResult {
  ShotRecord record;           // only updn/dnup outcomes kept
  double retained_fraction = 0.0;
  bool empty = false;          // flagged when nothing was retained
};

/// Keeps only anti-aligned outcomes; reports the retained fraction of all
/// shots (loss included in the denominator).
PostselectResult postselect_antialigned(const ShotRecord& record);

struct ParityEstimate {
  double parity = 0.0;
  double standard_error = 0.0;
  std::int64_t n_used = 0;
};

/// (N_even − N_odd)/N with binomial standard error √((1−Π²)/N). Loss
/// outcomes are excluded unless include_loss_as_even is set (sensitivity
/// mode; by default the estimate is reported over surviving shots only).
ParityEstimate estimate_parity(const ShotRecord& record,
                               bool include_loss_as_even = false);

/// One parity-scan curve: estimates vs gradient time at known δ.
struct ParityScan {
  struct Point {
    double t_g_s = 0.0;
    double parity = 0.0;
    double standard_error = 0.0;
  };
  std::vector<Point> points;
  double delta_hz = 0.0;
};

struct ContrastFit {
  double contrast = 0.0;      // peak-to-peak, = 2 × sinusoid amplitude
  double phase_rad = 0.0;     // Π = (C/2)·cos(2πδ t + φ₀) + offset
  double offset = 0.0;
  double residual_norm = 0.0;
  double contrast_se = 0.0;
  double offset_se = 0.0;
};

/// Weighted linear least squares of y = (C/2)cos(2πf t + φ₀) + c at a
/// known frequency. Points with non-positive standard errors switch the
/// fit to unweighted with residual-based errors.
ContrastFit fit_known_frequency(const std::vector<double>& t_s,
                                const std::vector<double>& y,
                                const std::vector<double>& sigma,
                                double freq_hz);

/// fit_known_frequency on a parity scan at its known δ. Requires ≥ 6
/// points spanning ≥ 1 period.
ContrastFit fit_parity_scan(const ParityScan& scan);

/// Same sinusoid model with the frequency also free: grid search over
/// [f_min, f_max] followed by parabolic refinement.
struct FrequencyFit {
  double frequency_hz = 0.0;
  double frequency_se_hz = 0.0;
  ContrastFit at_best;
};
FrequencyFit fit_frequency(const std::vector<double>& t_s,
                           const std::vector<double>& y,
                           const std::vector<double>& sigma, double f_min_hz,
                           double f_max_hz, int n_grid = 400);

}  // namespace spinex
