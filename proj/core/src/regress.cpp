#include "spdmix/regress.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "spdmix/error.hpp"
#include "spdmix/metrics.hpp"

namespace spdmix {
namespace {

constexpr double kDistinctTolerance = 1e-10;

void require_same_dim(Index a, Index b) {
  if (a != b) {
    std::ostringstream os;
    os << "dimension mismatch: " << a << " vs " << b;
    throw DimensionError(os.str());
  }
}

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    std::ostringstream os;
    os << "kernel bandwidth must be positive and finite, got " << sigma;
    throw DomainError(os.str());
  }
}

double log_euclidean_normalizer(Index n, double sigma) {
  return -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi * sigma * sigma);
}

}  // namespace

void KernelConfig::validate() const {
  require_sigma(sigma);
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    std::ostringstream os;
    os << "ridge must be nonnegative and finite, got " << ridge;
    throw DomainError(os.str());
  }
}

double gaussian_profile(double distance, double sigma) {
  return std::exp(-distance * distance / (2.0 * sigma * sigma));
}

double heat_kernel_log_normalizer(Index n, double sigma) {
  require_sigma(sigma);
  const double exponent = static_cast<double>(n) * static_cast<double>(n - 1) / 4.0;
  return -exponent * std::log(2.0 * std::numbers::pi * sigma * sigma);
}

double log_heat_kernel(const SpdMatrix& s_i, const SpdMatrix& s_hat, double sigma) {
  require_same_dim(s_i.dim(), s_hat.dim());
  require_sigma(sigma);
  const double d = log_euclidean_distance(s_i, s_hat);
  return heat_kernel_log_normalizer(s_i.dim(), sigma) - d * d / (2.0 * sigma * sigma);
}

double heat_kernel(const SpdMatrix& s_i, const SpdMatrix& s_hat, double sigma) {
  return std::exp(log_heat_kernel(s_i, s_hat, sigma));
}

double euclidean_kernel(const SymmetricMatrix& s_i, const SymmetricMatrix& s_hat,
                        double sigma) {
  require_same_dim(s_i.dim(), s_hat.dim());
  require_sigma(sigma);
  const double d = (s_i.matrix() - s_hat.matrix()).norm();
  return std::exp(log_euclidean_normalizer(s_i.dim(), sigma) - d * d / (2.0 * sigma * sigma));
}

Matrix kernel_coordinates(const SymmetricMatrix& s, KernelSpace space) {
  if (space == KernelSpace::kEuclidean) return s.matrix();
  return matrix_log(SpdMatrix::from(s)).matrix();
}

Matrix gram_matrix(const std::vector<SymmetricMatrix>& samples, const KernelConfig& config) {
  config.validate();
  const auto count = static_cast<Index>(samples.size());
  if (count == 0) return Matrix(0, 0);
  const Index n = samples.front().dim();
  std::vector<Matrix> coords;
  coords.reserve(samples.size());
  for (const SymmetricMatrix& s : samples) {
    require_same_dim(n, s.dim());
    coords.push_back(kernel_coordinates(s, config.space));
  }
  const double log_norm = config.space == KernelSpace::kRiemannian
                              ? heat_kernel_log_normalizer(n, config.sigma)
                              : log_euclidean_normalizer(n, config.sigma);
  const double inv_two_var = 1.0 / (2.0 * config.sigma * config.sigma);
  Matrix g(count, count);
  for (Index a = 0; a < count; ++a) {
    g(a, a) = std::exp(log_norm);
    for (Index b = a + 1; b < count; ++b) {
      const double d2 = (coords[a] - coords[b]).squaredNorm();
      g(a, b) = g(b, a) = std::exp(log_norm - d2 * inv_two_var);
    }
  }
  return g;
}

double KernelPredictor::predict(const SymmetricMatrix& s) const {
  if (!coords_.empty()) require_same_dim(coords_.front().rows(), s.dim());
  const Matrix c = kernel_coordinates(s, config_.space);
  double total = 0.0;
  for (std::size_t a = 0; a < coords_.size(); ++a) {
    const double d = (coords_[a] - c).norm();
    total += weights_(static_cast<Index>(a)) * gaussian_profile(d, config_.sigma);
  }
  return total;
}

KernelPredictor fit_kernel_ridge(const LabeledDataset& train, const KernelConfig& config) {
  config.validate();
  train.validate();
  if (train.empty()) throw DomainError("kernel ridge regression needs at least one sample");

  KernelPredictor predictor;
  predictor.config_ = config;
  predictor.coords_.reserve(train.size());
  for (const SymmetricMatrix& s : train.matrices) {
    predictor.coords_.push_back(kernel_coordinates(s, config.space));
  }

  const auto count = static_cast<Index>(train.size());
  Matrix g(count, count);
  for (Index a = 0; a < count; ++a) {
    g(a, a) = 1.0;
    for (Index b = a + 1; b < count; ++b) {
      const double d = (predictor.coords_[a] - predictor.coords_[b]).norm();
      if (config.ridge == 0.0 && d <= kDistinctTolerance) {
        std::ostringstream os;
        os << "training samples " << a << " and " << b
           << " coincide (distance " << d << "); use ridge > 0";
        throw LinalgError(os.str());
      }
      g(a, b) = g(b, a) = gaussian_profile(d, config.sigma);
    }
  }
  g.diagonal().array() += config.ridge;

  const Vector y = Eigen::Map<const Vector>(train.labels.data(), count);
  for (double jitter : {0.0, 1e-10, 1e-8}) {
    Matrix shifted = g;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    Vector w = llt.solve(y);
    if (!w.allFinite()) continue;
    predictor.weights_ = std::move(w);
    predictor.jitter_ = jitter;
    return predictor;
  }
  throw LinalgError("Gram matrix is numerically singular even with jitter 1e-8; use ridge > 0");
}

double predict_two_sample(double y_i, double y_j, double k_ij, double k_is, double k_js) {
  if (!(k_ij > 0.0) || !(k_ij < 1.0)) {
    std::ostringstream os;
    os << "two-sample kernel value " << k_ij << " outside (0, 1); samples coincide or are "
       << "too far apart for the bandwidth";
    throw DomainError(os.str());
  }
  if (!(k_is > 0.0) || !(k_js > 0.0)) {
    throw DomainError("kernel values must be positive");
  }
  return ((y_i - k_ij * y_j) * k_is + (y_j - k_ij * y_i) * k_js) / (1.0 - k_ij * k_ij);
}

Vector vech_isometric(const Matrix& symmetric) {
  const Index n = symmetric.rows();
  Vector v(n * (n + 1) / 2);
  Index k = 0;
  for (Index p = 0; p < n; ++p) {
    v(k++) = symmetric(p, p);
    for (Index q = p + 1; q < n; ++q) v(k++) = std::numbers::sqrt2 * symmetric(p, q);
  }
  return v;
}

double GeodesicRegression::predict(const SymmetricMatrix& s) const {
  const Vector x = vech_isometric(matrix_log(SpdMatrix::from(s)).matrix());
  require_same_dim(coefficients_.size(), x.size());
  return intercept_ + coefficients_.dot(x);
}

GeodesicRegression geodesic_regression_fit(const LabeledDataset& train) {
  train.validate();
  if (train.task != Task::kRegression) {
    throw DomainError("geodesic regression needs a regression dataset");
  }
  if (train.empty()) throw DomainError("geodesic regression needs at least one sample");
  const Index n = train.dim();
  const Index features = n * (n + 1) / 2;
  const auto count = static_cast<Index>(train.size());
  Matrix design(count, features + 1);
  for (Index a = 0; a < count; ++a) {
    design(a, 0) = 1.0;
    design.row(a).tail(features) =
        vech_isometric(matrix_log(SpdMatrix::from(train.matrices[a])).matrix()).transpose();
  }
  const Vector y = Eigen::Map<const Vector>(train.labels.data(), count);
  const Vector beta = design.completeOrthogonalDecomposition().solve(y);
  GeodesicRegression model;
  model.intercept_ = beta(0);
  model.coefficients_ = beta.tail(features);
  return model;
}

std::size_t LossComparisonReport::violations() const {
  std::size_t c = 0;
  for (const LossComparisonRow& r : rows) c += r.violation ? 1 : 0;
  return c;
}

std::size_t LossComparisonReport::ordering_failures() const {
  std::size_t c = 0;
  for (const LossComparisonRow& r : rows) c += r.ordering_holds ? 0 : 1;
  return c;
}

std::string LossComparisonReport::describe(std::size_t row) const {
  const LossComparisonRow& r = rows.at(row);
  std::ostringstream os;
  os.precision(17);
  os << "y_i=" << y_i << " y_j=" << y_j << " d=" << distance << " K_ij=" << k_ij
     << " sigma=" << sigma << " lambda=" << r.lambda << " y_mix=" << r.y_mix
     << " pred_geodesic=" << r.pred_geodesic << " pred_line=" << r.pred_line
     << " err_geodesic=" << r.err_geodesic << " err_line=" << r.err_line
     << " d_i_line=" << r.dist_i_line << " d_j_line=" << r.dist_j_line;
  return os.str();
}

LossComparisonReport compare_mixing_losses(const SpdMatrix& s_i, const SpdMatrix& s_j,
                                           double y_i, double y_j,
                                           const std::vector<double>& lambdas,
                                           const KernelConfig& config) {
  config.validate();
  require_same_dim(s_i.dim(), s_j.dim());
  if (!(y_i >= 0.0) || !(y_j >= 0.0) || !std::isfinite(y_i) || !std::isfinite(y_j)) {
    std::ostringstream os;
    os << "loss comparison needs nonnegative finite labels, got " << y_i << " and " << y_j;
    throw DomainError(os.str());
  }
  const Matrix log_i = matrix_log(s_i).matrix();
  const Matrix log_j = matrix_log(s_j).matrix();

  LossComparisonReport report;
  report.y_i = y_i;
  report.y_j = y_j;
  report.sigma = config.sigma;
  report.distance = (log_i - log_j).norm();
  if (report.distance <= kDistinctTolerance) {
    throw DomainError("loss comparison needs two distinct matrices");
  }
  report.k_ij = gaussian_profile(report.distance, config.sigma);

  auto predict_at = [&](const SpdMatrix& s, double& d_i, double& d_j) {
    const Matrix log_s = matrix_log(s).matrix();
    d_i = (log_s - log_i).norm();
    d_j = (log_s - log_j).norm();
    return predict_two_sample(y_i, y_j, report.k_ij, gaussian_profile(d_i, config.sigma),
                              gaussian_profile(d_j, config.sigma));
  };

  report.rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const MixRatio ratio(lambda);
    LossComparisonRow row;
    row.lambda = lambda;
    row.y_mix = ratio.complement() * y_i + ratio.value() * y_j;

    double d_i = 0.0;
    double d_j = 0.0;
    row.pred_geodesic =
        predict_at(geodesic(s_i, s_j, ratio, MetricKind::kLogEuclidean), d_i, d_j);
    row.pred_line = predict_at(geodesic(s_i, s_j, ratio, MetricKind::kEuclidean),
                               row.dist_i_line, row.dist_j_line);

    row.err_geodesic = (row.pred_geodesic - row.y_mix) * (row.pred_geodesic - row.y_mix);
    row.err_line = (row.pred_line - row.y_mix) * (row.pred_line - row.y_mix);
    row.violation = row.err_geodesic > row.err_line + kLossComparisonSlack;
    row.ordering_holds = row.pred_line >= -kLossComparisonSlack &&
                         row.pred_line <= row.pred_geodesic + kLossComparisonSlack &&
                         row.pred_geodesic <= row.y_mix + kLossComparisonSlack;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace spdmix
