// Physical constants (SI, 2018 CODATA / exact SI definitions).
#pragma once

namespace spinex {

inline constexpr double kPlanck = 6.62607015e-34;        // J s (exact)
inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kBohrRadius = 5.29177210903e-11; // m

// 87Rb, the atom used throughout the shipped configurations.
inline constexpr double kRb87MassKg = 86.909180527 * kAtomicMassUnit;

}  // namespace spinex
