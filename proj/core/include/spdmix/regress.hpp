#pragma once

// Gaussian-type kernels on the SPD manifold (heat kernel of the log-Euclidean
// metric) and in the ambient Euclidean space, kernel ridge regression, linear
// regression in log-coordinates, and the square-loss comparison harness for
// geodesic versus straight-line mixing.

#include <cstddef>
#include <string>
#include <vector>

#include "spdmix/dataset.hpp"
#include "spdmix/linalg.hpp"

namespace spdmix {

enum class KernelSpace { kRiemannian, kEuclidean };

struct KernelConfig {
  /// Bandwidth sigma.
  double sigma = 1.0;
  /// Ridge added to the peak-normalized Gram matrix.
  double ridge = 0.0;
  KernelSpace space = KernelSpace::kRiemannian;

  void validate() const;
};

/// exp(-d^2 / (2 sigma^2))
double gaussian_profile(double distance, double sigma);

/// log of (2 pi sigma^2)^{-n(n-1)/4} exp(-d(S_i, S)^2 / (2 sigma^2)), d the
/// log-Euclidean distance. Stays finite where the kernel itself underflows.
double log_heat_kernel(const SpdMatrix& s_i, const SpdMatrix& s_hat, double sigma);
double heat_kernel(const SpdMatrix& s_i, const SpdMatrix& s_hat, double sigma);

/// (2 pi sigma^2)^{-n/2} exp(-||S_i - S||_F^2 / (2 sigma^2))
double euclidean_kernel(const SymmetricMatrix& s_i, const SymmetricMatrix& s_hat,
                        double sigma);

/// Normalizing constant of the heat kernel in log-space.
double heat_kernel_log_normalizer(Index n, double sigma);

/// Kernel coordinates of a matrix: log S for the Riemannian space, S itself
/// for the Euclidean one. Distances between coordinates are Frobenius.
Matrix kernel_coordinates(const SymmetricMatrix& s, KernelSpace space);

/// Normalized kernel evaluations K(S_a, S_b) over a sample set.
Matrix gram_matrix(const std::vector<SymmetricMatrix>& samples, const KernelConfig& config);

/// Kernel ridge regressor m(S) = y^T (G + ridge I)^{-1} k_S with the
/// peak-normalized Gaussian profile (K(S, S) = 1). The heat-kernel normalizer
/// cancels in this expression when ridge = 0.
class KernelPredictor {
 public:
  double predict(const SymmetricMatrix& s) const;

  const Vector& weights() const noexcept { return weights_; }
  const KernelConfig& config() const noexcept { return config_; }
  /// Extra diagonal jitter that was needed to factor the Gram matrix.
  double jitter() const noexcept { return jitter_; }

 private:
  friend KernelPredictor fit_kernel_ridge(const LabeledDataset&, const KernelConfig&);

  KernelConfig config_;
  std::vector<Matrix> coords_;
  Vector weights_;
  double jitter_ = 0.0;
};

/// Factorizes G + ridge I by Cholesky, escalating jitter 0, 1e-10, 1e-8 before
/// failing. With ridge = 0 the training points must be pairwise distinct.
KernelPredictor fit_kernel_ridge(const LabeledDataset& train, const KernelConfig& config);

/// Two-sample kernel ridge prediction
///   (1/(1 - K_ij^2)) ((y_i - K_ij y_j) K_iS + (y_j - K_ij y_i) K_jS)
/// with peak-normalized kernel values. Requires 0 < K_ij < 1.
double predict_two_sample(double y_i, double y_j, double k_ij, double k_is, double k_js);

/// Upper triangle of a symmetric matrix, off-diagonal entries scaled by sqrt 2
/// so that the Euclidean inner product equals the Frobenius one.
Vector vech_isometric(const Matrix& symmetric);

/// Affine least-squares model on vech_isometric(log S); minimum-norm when
/// underdetermined.
class GeodesicRegression {
 public:
  double predict(const SymmetricMatrix& s) const;
  const Vector& coefficients() const noexcept { return coefficients_; }
  double intercept() const noexcept { return intercept_; }

 private:
  friend GeodesicRegression geodesic_regression_fit(const LabeledDataset&);

  Vector coefficients_;
  double intercept_ = 0.0;
};

GeodesicRegression geodesic_regression_fit(const LabeledDataset& train);

/// One lambda of the geodesic-versus-line comparison.
struct LossComparisonRow {
  double lambda = 0.0;
  double y_mix = 0.0;
  double pred_geodesic = 0.0;
  double pred_line = 0.0;
  double err_geodesic = 0.0;
  double err_line = 0.0;
  /// d(S_i, S~') and d(S_j, S~') for the straight-line point.
  double dist_i_line = 0.0;
  double dist_j_line = 0.0;
  /// err_geodesic > err_line + kLossComparisonSlack
  bool violation = false;
  /// 0 <= pred_line <= pred_geodesic <= y_mix, each within the slack.
  bool ordering_holds = true;
};

inline constexpr double kLossComparisonSlack = 1e-12;

struct LossComparisonReport {
  double distance = 0.0;
  double k_ij = 0.0;
  double y_i = 0.0;
  double y_j = 0.0;
  double sigma = 0.0;
  std::vector<LossComparisonRow> rows;

  std::size_t violations() const;
  std::size_t ordering_failures() const;
  /// Human-readable dump of one row with the pair context.
  std::string describe(std::size_t row) const;
};

/// For each lambda: mixes the label, predicts at the log-Euclidean geodesic
/// point and at the straight-line point with the two-sample heat-kernel
/// regressor fitted on (S_i, y_i), (S_j, y_j), and compares square losses.
/// Labels must be nonnegative and S_i != S_j.
LossComparisonReport compare_mixing_losses(const SpdMatrix& s_i, const SpdMatrix& s_j,
                                           double y_i, double y_j,
                                           const std::vector<double>& lambdas,
                                           const KernelConfig& config);

}  // namespace spdmix
