#pragma once

// Geodesic interpolation between SPD matrices under five metrics, the
// log-Euclidean distance, and determinant (swelling) diagnostics.

#include <array>
#include <optional>
#include <string_view>

#include "spdmix/linalg.hpp"

namespace spdmix {

enum class MetricKind {
  kEuclidean,
  kCholesky,
  kBuresWasserstein,
  kAffineInvariant,
  kLogEuclidean,
};

inline constexpr std::array<MetricKind, 5> kAllMetrics = {
    MetricKind::kEuclidean, MetricKind::kCholesky, MetricKind::kBuresWasserstein,
    MetricKind::kAffineInvariant, MetricKind::kLogEuclidean};

std::string_view to_string(MetricKind m);
std::optional<MetricKind> parse_metric(std::string_view name);

/// Interpolation weight in [0, 1]; 0 selects the first endpoint.
class MixRatio {
 public:
  /// Throws DomainError outside [0, 1] (extrapolation is not supported).
  explicit MixRatio(double lambda);

  double value() const noexcept { return lambda_; }
  double complement() const noexcept { return 1.0 - lambda_; }

 private:
  double lambda_;
};

/// Intermediate eigenvalues below this count as a stability warning for the
/// metrics that need inverse square roots.
inline constexpr double kStabilityEigenvalueFloor = 1e-10;

struct GeodesicResult {
  SpdMatrix matrix;
  int stability_warnings = 0;
};

/// Point at ratio lambda on the geodesic from s_i to s_j.
SpdMatrix geodesic(const SpdMatrix& s_i, const SpdMatrix& s_j, MixRatio lambda,
                   MetricKind metric);

/// As geodesic(), additionally counting near-singular intermediates.
GeodesicResult geodesic_with_diagnostics(const SpdMatrix& s_i, const SpdMatrix& s_j,
                                         MixRatio lambda, MetricKind metric);

/// (S_i S_j)^{1/2} = S_i^{1/2} (S_i^{1/2} S_j S_i^{1/2})^{1/2} S_i^{-1/2}.
/// The result is not symmetric in general.
Matrix bures_cross_sqrt(const SpdMatrix& s_i, const SpdMatrix& s_j,
                        int* stability_warnings = nullptr);

/// ||log S_i - log S_j||_F
double log_euclidean_distance(const SpdMatrix& s_i, const SpdMatrix& s_j);

/// Determinants in log-space of both endpoints and of the interpolant.
struct SwellingReport {
  double log_det_i = 0.0;
  double log_det_j = 0.0;
  double log_det_mix = 0.0;
  /// log_det_mix above max(log_det_i, log_det_j) by more than 1e-9.
  bool exceeds_max = false;
  /// log_det_mix inside [min, max] widened by 1e-9 on both sides.
  bool within_bounds = true;
  int stability_warnings = 0;
};

/// Relative determinant slack used by swelling_check (absolute in log-space).
inline constexpr double kSwellingSlack = 1e-9;

SwellingReport swelling_check(const SpdMatrix& s_i, const SpdMatrix& s_j, MixRatio lambda,
                              MetricKind metric);

}  // namespace spdmix
