#pragma once

namespace qauth {

/// Numeric thresholds shared by the whole library. All are relative to a
/// Frobenius norm unless stated otherwise. Callers that need other values
/// construct their own instance and pass it explicitly.
struct Tolerances {
  /// Pass/fail decisions (singularity gates, attack residual checks).
  double decision = 1e-8;
  /// Internal sanity checks (unitarity, Hermiticity, unit trace).
  double sanity = 1e-10;
  /// Jacobi convergence: off-diagonal norm below this fraction of the input norm.
  double jacobi = 1e-13;
  /// Probabilities below this are treated as zero branches.
  double zero_probability = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace qauth
