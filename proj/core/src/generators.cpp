#include "spdmix/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "spdmix/error.hpp"

namespace spdmix {
namespace {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  }
  return m;
}

// Spectrum of order one for every n.
Matrix scaled_symmetric(Index n, Rng& rng) {
  return random_symmetric(n, rng) / std::sqrt(static_cast<double>(n));
}

}  // namespace

Matrix random_orthogonal(Index n, Rng& rng) {
  const Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Index c = 0; c < n; ++c) {
    if (r(c, c) < 0.0) q.col(c) *= -1.0;
  }
  return q;
}

Matrix random_symmetric(Index n, Rng& rng) {
  Matrix m(n, n);
  for (Index p = 0; p < n; ++p) {
    for (Index q = p; q < n; ++q) m(p, q) = m(q, p) = rng.normal();
  }
  return m;
}

SpdMatrix gen_random_spd(Index n, double condition, Rng& rng) {
  if (n < 1 || !(condition >= 1.0) || !std::isfinite(condition)) {
    std::ostringstream os;
    os << "gen_random_spd needs n >= 1 and condition >= 1, got n=" << n
       << " condition=" << condition;
    throw DomainError(os.str());
  }
  const double half_span = 0.5 * std::log(condition);
  Vector log_mu(n);
  for (Index k = 0; k < n; ++k) log_mu(k) = half_span * (2.0 * rng.uniform() - 1.0);
  if (n >= 2) {
    log_mu(0) = -half_span;
    log_mu(n - 1) = half_span;
  } else {
    log_mu(0) = 0.0;
  }
  const Matrix o = random_orthogonal(n, rng);
  return SpdMatrix::from_spectrum(o, log_mu.array().exp().matrix());
}

SeriesMatrix gen_synthetic_series(Index n, Index t, Index latent_rank, double noise,
                                  Rng& rng) {
  if (n < 1 || t < 1 || latent_rank < 1 || latent_rank > n || !(noise >= 0.0)) {
    std::ostringstream os;
    os << "gen_synthetic_series needs 1 <= latent_rank <= n, t >= 1, noise >= 0; got n=" << n
       << " t=" << t << " latent_rank=" << latent_rank << " noise=" << noise;
    throw DomainError(os.str());
  }
  const Matrix a = gaussian_matrix(n, latent_rank, rng);
  const Matrix z = gaussian_matrix(latent_rank, t, rng);
  Matrix x = a * z;
  if (noise > 0.0) x += noise * gaussian_matrix(n, t, rng);
  return SeriesMatrix(std::move(x));
}

LabeledDataset gen_labeled_dataset(Index n, std::size_t count, Task task,
                                   DatasetStructure structure, Rng& rng,
                                   const DatasetOptions& options) {
  if (n < 1 || count < 2) {
    std::ostringstream os;
    os << "gen_labeled_dataset needs n >= 1 and count >= 2, got n=" << n << " count=" << count;
    throw DomainError(os.str());
  }
  if (!(options.noise >= 0.0) || !(options.cluster_spread >= 0.0) || options.num_classes < 1) {
    throw DomainError("dataset options need noise >= 0, cluster_spread >= 0, num_classes >= 1");
  }
  const int classes = options.num_classes;
  std::vector<SymmetricMatrix> matrices;
  std::vector<double> labels;
  matrices.reserve(count);
  labels.reserve(count);

  if (structure == DatasetStructure::kLogLinear) {
    const Matrix base = scaled_symmetric(n, rng);
    const Matrix direction = scaled_symmetric(n, rng);
    for (std::size_t k = 0; k < count; ++k) {
      double y = 0.0;
      double position = 0.0;
      if (task == Task::kRegression) {
        y = rng.uniform();
        position = y;
      } else {
        const int c = static_cast<int>(k % static_cast<std::size_t>(classes));
        y = c;
        position = classes > 1 ? static_cast<double>(c) / (classes - 1) : 0.0;
      }
      Matrix log_s = base + position * direction;
      if (options.noise > 0.0) log_s += options.noise * scaled_symmetric(n, rng);
      matrices.push_back(matrix_exp(symmetrize_unchecked(log_s)).symmetric());
      labels.push_back(y);
    }
  } else {
    const Index df = 2 * n;
    std::vector<Matrix> center_logs;
    for (int c = 0; c < classes; ++c) {
      const Matrix w = gaussian_matrix(n, df, rng);
      const SpdMatrix center =
          SpdMatrix::from(symmetrize_unchecked(w * w.transpose() / static_cast<double>(df)));
      center_logs.push_back(matrix_log(center).matrix());
    }
    for (std::size_t k = 0; k < count; ++k) {
      const int c = static_cast<int>(k % static_cast<std::size_t>(classes));
      Matrix log_s = center_logs[c];
      if (options.cluster_spread > 0.0) {
        log_s += options.cluster_spread * scaled_symmetric(n, rng);
      }
      matrices.push_back(matrix_exp(symmetrize_unchecked(log_s)).symmetric());
      labels.push_back(c);
    }
  }
  return make_dataset(std::move(matrices), std::move(labels), task);
}

}  // namespace spdmix
