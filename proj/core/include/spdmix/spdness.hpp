#pragma once

// Covariance and correlation from multivariate series, SPD-ness diagnostics,
// eigenvalue clamping, and the length-reduction transforms used in
// sequence-length sweeps.

#include <optional>

#include "spdmix/linalg.hpp"

namespace spdmix {

/// n variables (rows) by t time steps (columns); finite entries.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  /// Throws DimensionError on an empty matrix, LinalgError on non-finite data.
  explicit SeriesMatrix(Matrix values);

  Index n_vars() const noexcept { return values_.rows(); }
  Index n_steps() const noexcept { return values_.cols(); }
  const Matrix& values() const noexcept { return values_; }

 private:
  Matrix values_;
};

/// Eigenvalues counted as positive by spdness_report.
inline constexpr double kSpdnessThreshold = 1e-6;

/// Replacement value for non-positive eigenvalues in clamp_to_spd.
inline constexpr double kDefaultClampFloor = 1e-6;

struct SpdnessReport {
  Index n = 0;
  /// Series length, when known.
  std::optional<Index> t;
  Vector eigenvalues;
  Index positive_count = 0;
  double spdness_pct = 0.0;
  /// min(n, t - 1), or n when t is unknown.
  Index rank_bound = 0;
  bool is_spd = false;
};

/// Cov_ij = (1/t) sum_k (x_ik - mean_i)(x_jk - mean_j). Needs t >= 2 and no
/// constant row (DomainError naming the row).
SymmetricMatrix covariance(const SeriesMatrix& x);

/// Pearson correlation with exact unit diagonal and entries clipped to [-1, 1].
SymmetricMatrix correlation(const SeriesMatrix& x);

/// Replaces eigenvalues <= 0 by `floor`; eigenvalues in (0, floor) are kept.
/// "Zero" means within n * eps * max|mu| of zero, the resolution of the
/// eigensolver. Already-SPD input is returned unchanged.
SpdMatrix clamp_to_spd(const SymmetricMatrix& s, double floor = kDefaultClampFloor);

struct ClampResult {
  SpdMatrix matrix;
  Index clamped = 0;
};
/// clamp_to_spd() plus the number of replaced eigenvalues.
ClampResult clamp_to_spd_counted(const SymmetricMatrix& s, double floor = kDefaultClampFloor);

/// Eigenvalue census of `s` for a series of length `t`. Throws
/// InvariantViolation when more eigenvalues are positive than the rank bound
/// allows.
SpdnessReport spdness_report(const SymmetricMatrix& s, std::optional<Index> t = std::nullopt);

/// Averages consecutive blocks of n_steps / target_t columns. target_t must
/// divide n_steps.
SeriesMatrix downsample_by_averaging(const SeriesMatrix& x, Index target_t);

/// First target_t columns.
SeriesMatrix truncate(const SeriesMatrix& x, Index target_t);

}  // namespace spdmix
