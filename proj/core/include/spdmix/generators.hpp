#pragma once

// Seeded synthetic data: random SPD matrices with a prescribed condition
// number, low-rank multivariate series, and labeled SPD datasets.

#include <cstddef>

#include "spdmix/dataset.hpp"
#include "spdmix/linalg.hpp"
#include "spdmix/random.hpp"
#include "spdmix/spdness.hpp"

namespace spdmix {

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, column signs
/// fixed by diag(R) > 0).
Matrix random_orthogonal(Index n, Rng& rng);

/// Symmetric matrix with i.i.d. N(0, 1) upper triangle, mirrored.
Matrix random_symmetric(Index n, Rng& rng);

/// O diag(mu) O^T with mu log-uniform in [condition^{-1/2}, condition^{1/2}]
/// and both ends attained, so the condition number equals `condition` up to
/// rounding. Throws DomainError for n < 1 or condition < 1.
SpdMatrix gen_random_spd(Index n, double condition, Rng& rng);

/// A Z + noise E with A (n x latent_rank), Z (latent_rank x t), E (n x t) all
/// standard Gaussian.
SeriesMatrix gen_synthetic_series(Index n, Index t, Index latent_rank, double noise, Rng& rng);

enum class DatasetStructure { kLogLinear, kClustered };

struct DatasetOptions {
  /// Scale of the symmetric perturbation added in log-space per sample.
  double noise = 0.0;
  int num_classes = 2;
  /// Log-space spread of clustered samples around their class center.
  double cluster_spread = 0.1;
};

/// kLogLinear: S = exp(B + y H + noise E) with fixed random symmetric B, H.
/// Regression labels are uniform on [0, 1]; classification uses y = c / (C-1).
/// kClustered: per-class Wishart centers W W^T / (2n), samples
/// exp(log center + cluster_spread E). Regression labels are the cluster index.
/// Classes are assigned round-robin so each is populated when count >= C.
LabeledDataset gen_labeled_dataset(Index n, std::size_t count, Task task,
                                   DatasetStructure structure, Rng& rng,
                                   const DatasetOptions& options = {});

}  // namespace spdmix
