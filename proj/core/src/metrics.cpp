#include "spdmix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "spdmix/error.hpp"

namespace spdmix {
namespace {

void require_same_dim(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.dim() << " vs " << b.dim();
    throw DimensionError(os.str());
  }
}

int count_below_floor(const Vector& eigenvalues) {
  return static_cast<int>((eigenvalues.array() < kStabilityEigenvalueFloor).count());
}

// S^{1/2} and S^{-1/2} from one decomposition.
struct SquareRoots {
  Matrix half;
  Matrix inv_half;
  int warnings = 0;
};

SquareRoots square_roots(const SpdMatrix& s) {
  const EigenDecomposition eig = eig_sym(s.symmetric());
  if (!(eig.eigenvalues(0) > 0.0)) {
    throw LinalgError("square root of a matrix with non-positive eigenvalue");
  }
  const Vector root = eig.eigenvalues.array().sqrt().matrix();
  return {recompose(eig.orthogonal, root),
          recompose(eig.orthogonal, root.cwiseInverse()),
          count_below_floor(eig.eigenvalues)};
}

// Real power of a symmetric positive matrix with the warning count of its
// spectrum; the power is recomposed without re-validation.
Matrix spd_power(const SymmetricMatrix& m, double p, int& warnings) {
  const EigenDecomposition eig = eig_sym(m);
  if (!(eig.eigenvalues(0) > 0.0)) {
    std::ostringstream os;
    os << "intermediate matrix lost positive definiteness (eigenvalue "
       << eig.eigenvalues(0) << ")";
    throw LinalgError(os.str());
  }
  warnings += count_below_floor(eig.eigenvalues);
  return recompose(eig.orthogonal, eig.eigenvalues.array().pow(p).matrix());
}

GeodesicResult euclidean(const SpdMatrix& s_i, const SpdMatrix& s_j, MixRatio lambda) {
  const Matrix mix = lambda.complement() * s_i.matrix() + lambda.value() * s_j.matrix();
  return {SpdMatrix::from(symmetrize_unchecked(mix)), 0};
}

GeodesicResult cholesky_geodesic(const SpdMatrix& s_i, const SpdMatrix& s_j,
                                 MixRatio lambda) {
  const Matrix l = lambda.complement() * cholesky(s_i).lower +
                   lambda.value() * cholesky(s_j).lower;
  return {SpdMatrix::from(symmetrize_unchecked(l * l.transpose())), 0};
}

GeodesicResult bures_wasserstein(const SpdMatrix& s_i, const SpdMatrix& s_j,
                                 MixRatio lambda) {
  int warnings = 0;
  const Matrix cross = bures_cross_sqrt(s_i, s_j, &warnings);
  const double a = lambda.complement();
  const double b = lambda.value();
  // (S_j S_i)^{1/2} is the transpose of (S_i S_j)^{1/2}.
  const Matrix mix =
      a * a * s_i.matrix() + b * b * s_j.matrix() + a * b * (cross + cross.transpose());
  return {SpdMatrix::from(symmetrize_unchecked(mix)), warnings};
}

GeodesicResult affine_invariant(const SpdMatrix& s_i, const SpdMatrix& s_j,
                                MixRatio lambda) {
  SquareRoots roots = square_roots(s_i);
  int warnings = roots.warnings;
  const SymmetricMatrix inner =
      symmetrize_unchecked(roots.inv_half * s_j.matrix() * roots.inv_half);
  const Matrix inner_pow = spd_power(inner, lambda.value(), warnings);
  const Matrix mix = roots.half * inner_pow * roots.half;
  return {SpdMatrix::from(symmetrize_unchecked(mix)), warnings};
}

GeodesicResult log_euclidean(const SpdMatrix& s_i, const SpdMatrix& s_j, MixRatio lambda) {
  const Matrix tangent = lambda.complement() * matrix_log(s_i).matrix() +
                         lambda.value() * matrix_log(s_j).matrix();
  return {matrix_exp(symmetrize_unchecked(tangent)), 0};
}

}  // namespace

std::string_view to_string(MetricKind m) {
  switch (m) {
    case MetricKind::kEuclidean:
      return "euclidean";
    case MetricKind::kCholesky:
      return "cholesky";
    case MetricKind::kBuresWasserstein:
      return "bures-wasserstein";
    case MetricKind::kAffineInvariant:
      return "affine-invariant";
    case MetricKind::kLogEuclidean:
      return "log-euclidean";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  for (MetricKind m : kAllMetrics) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

MixRatio::MixRatio(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream os;
    os << "mix ratio " << lambda << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

GeodesicResult geodesic_with_diagnostics(const SpdMatrix& s_i, const SpdMatrix& s_j,
                                         MixRatio lambda, MetricKind metric) {
  require_same_dim(s_i, s_j);
  try {
    switch (metric) {
      case MetricKind::kEuclidean:
        return euclidean(s_i, s_j, lambda);
      case MetricKind::kCholesky:
        return cholesky_geodesic(s_i, s_j, lambda);
      case MetricKind::kBuresWasserstein:
        return bures_wasserstein(s_i, s_j, lambda);
      case MetricKind::kAffineInvariant:
        return affine_invariant(s_i, s_j, lambda);
      case MetricKind::kLogEuclidean:
        return log_euclidean(s_i, s_j, lambda);
    }
  } catch (const LinalgError& e) {
    throw LinalgError("[" + std::string(to_string(metric)) + "] " + e.what());
  }
  throw DomainError("unknown metric");
}

SpdMatrix geodesic(const SpdMatrix& s_i, const SpdMatrix& s_j, MixRatio lambda,
                   MetricKind metric) {
  return geodesic_with_diagnostics(s_i, s_j, lambda, metric).matrix;
}

Matrix bures_cross_sqrt(const SpdMatrix& s_i, const SpdMatrix& s_j,
                        int* stability_warnings) {
  require_same_dim(s_i, s_j);
  SquareRoots roots = square_roots(s_i);
  int warnings = roots.warnings;
  const SymmetricMatrix inner =
      symmetrize_unchecked(roots.half * s_j.matrix() * roots.half);
  const Matrix inner_sqrt = spd_power(inner, 0.5, warnings);
  if (stability_warnings != nullptr) *stability_warnings += warnings;
  return roots.half * inner_sqrt * roots.inv_half;
}

double log_euclidean_distance(const SpdMatrix& s_i, const SpdMatrix& s_j) {
  require_same_dim(s_i, s_j);
  return (matrix_log(s_i).matrix() - matrix_log(s_j).matrix()).norm();
}

SwellingReport swelling_check(const SpdMatrix& s_i, const SpdMatrix& s_j, MixRatio lambda,
                              MetricKind metric) {
  const GeodesicResult mixed = geodesic_with_diagnostics(s_i, s_j, lambda, metric);
  SwellingReport report;
  report.log_det_i = log_det(s_i);
  report.log_det_j = log_det(s_j);
  report.log_det_mix = log_det(mixed.matrix);
  report.stability_warnings = mixed.stability_warnings;
  const double lo = std::min(report.log_det_i, report.log_det_j);
  const double hi = std::max(report.log_det_i, report.log_det_j);
  report.exceeds_max = report.log_det_mix > hi + kSwellingSlack;
  report.within_bounds =
      report.log_det_mix >= lo - kSwellingSlack && report.log_det_mix <= hi + kSwellingSlack;
  return report;
}

}  // namespace spdmix
