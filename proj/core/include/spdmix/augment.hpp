#pragma once

// Mixup-family augmentation over labeled SPD datasets: Riemannian mixup along
// log-Euclidean geodesics (direct and eigencache paths), and the vanilla,
// edge-wise (D-Mixup), node/edge dropout, generator-based (G-Mixup) and
// label-aware (C-Mixup) baselines.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spdmix/dataset.hpp"
#include "spdmix/linalg.hpp"
#include "spdmix/metrics.hpp"
#include "spdmix/random.hpp"

namespace spdmix {

enum class Strategy { kRMixup, kVMixup, kDMixup, kDropNode, kDropEdge, kGMixup, kCMixup };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

struct MixConfig {
  Strategy strategy = Strategy::kRMixup;
  /// Beta(alpha, alpha) shape.
  double alpha = 1.0;
  /// Keep probability for DropNode / DropEdge.
  double keep_prob = 0.5;
  /// Label-kernel width for C-Mixup; unset means the label standard deviation.
  std::optional<double> cmix_bandwidth;
  std::uint64_t seed = 0;
  bool use_eigencache = true;

  /// Throws DomainError on alpha <= 0, keep_prob outside (0, 1) or a
  /// non-positive bandwidth.
  void validate() const;
};

/// Scalar (length 1) for regression, probability simplex for classification.
using Label = Vector;

struct Provenance {
  Strategy strategy = Strategy::kRMixup;
  std::size_t source_i = 0;
  std::optional<std::size_t> source_j;
  std::optional<double> lambda;
  /// e.g. "from_j=5/10" for D-Mixup or "kept=3/4" for DropNode.
  std::string mask_summary;
  /// True only when the strategy guarantees an SPD output and it was checked.
  bool spd_validated = false;
  int warnings = 0;
};

struct MixedSample {
  SymmetricMatrix matrix;
  Label label;
  Provenance provenance;
};

/// lambda ~ Beta(alpha, alpha) via the two-gamma construction.
MixRatio sample_beta(double alpha, Rng& rng);

/// (1 - lambda) y_i + lambda y_j
Label mix_labels(const Label& y_i, const Label& y_j, MixRatio lambda);

/// exp((1 - lambda) log S_i + lambda log S_j) with linearly mixed label.
/// Three eigendecompositions.
MixedSample r_mixup(const SpdMatrix& s_i, const SpdMatrix& s_j, const Label& y_i,
                    const Label& y_j, MixRatio lambda);

/// Per-sample precomputed eigendecompositions (O_i, log mu_i). Built once and
/// read-only afterwards.
class EigenCache {
 public:
  struct Entry {
    Matrix orthogonal;
    Vector log_eigenvalues;

    Index dim() const noexcept { return log_eigenvalues.size(); }
    /// O diag(log mu) O^T
    Matrix log_matrix() const;
  };

  /// One decomposition; throws LinalgError on a non-positive eigenvalue.
  static Entry make_entry(const SymmetricMatrix& s);

  /// Decomposes every matrix of the dataset.
  static EigenCache build(const LabeledDataset& dataset);

  const Entry& at(std::size_t i) const { return entries_.at(i); }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
};

/// R-Mixup from cached decompositions: a single eigendecomposition (for the
/// final exponential) per call. Throws DimensionError on mismatched entries.
MixedSample r_mixup_cached(const EigenCache::Entry& cache_i, const EigenCache::Entry& cache_j,
                           const Label& y_i, const Label& y_j, MixRatio lambda);

/// (1 - lambda) S_i + lambda S_j; not re-validated as SPD.
MixedSample v_mixup(const SymmetricMatrix& s_i, const SymmetricMatrix& s_j, const Label& y_i,
                    const Label& y_j, MixRatio lambda);

/// Symmetric 0/1 matrix.
class EdgeMask {
 public:
  /// Throws DomainError unless every entry is 0 or 1 and the matrix is symmetric.
  static EdgeMask from(const Matrix& m);
  static EdgeMask constant(Index n, bool value);
  /// Independent Bernoulli(p) on the strict upper triangle, mirrored. The
  /// diagonal is drawn too when include_diagonal, otherwise set to
  /// diagonal_value.
  static EdgeMask random(Index n, double p, Rng& rng, bool include_diagonal,
                         bool diagonal_value = true);

  Index dim() const noexcept { return m_.rows(); }
  bool operator()(Index p, Index q) const { return m_(p, q) != 0.0; }
  const Matrix& matrix() const noexcept { return m_; }
  /// Number of ones on the upper triangle (diagonal included).
  std::size_t upper_ones() const;

 private:
  explicit EdgeMask(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Edge-wise selection S~ = (1 - Mask) . S_i + Mask . S_j with
/// Mask ~ Bernoulli(lambda) on the upper triangle (diagonal included), mirrored.
MixedSample d_mixup(const SymmetricMatrix& s_i, const SymmetricMatrix& s_j, const Label& y_i,
                    const Label& y_j, MixRatio lambda, Rng& rng);
MixedSample d_mixup_with_mask(const SymmetricMatrix& s_i, const SymmetricMatrix& s_j,
                              const Label& y_i, const Label& y_j, MixRatio lambda,
                              const EdgeMask& take_from_j);

/// Zeroes rows and columns of nodes dropped with probability 1 - keep_prob.
MixedSample drop_node(const SymmetricMatrix& s, const Label& y, double keep_prob, Rng& rng);
MixedSample drop_node_with_mask(const SymmetricMatrix& s, const Label& y,
                                const std::vector<bool>& keep);

/// Keeps each off-diagonal edge with probability keep_prob; diagonal kept.
MixedSample drop_edge(const SymmetricMatrix& s, const Label& y, double keep_prob, Rng& rng);
MixedSample drop_edge_with_mask(const SymmetricMatrix& s, const Label& y, const EdgeMask& keep);

/// Per-edge Gaussian generators fitted on the upper triangle (diagonal
/// included).
struct EdgeGenerator {
  Task task = Task::kRegression;
  Index dim = 0;
  bool correlation_mode = false;
  /// Fit-time warnings (singleton classes).
  int warnings = 0;

  // Classification: one (mean, std) pair per class id.
  std::vector<Matrix> class_mean;
  std::vector<Matrix> class_std;
  std::vector<bool> class_fitted;

  // Regression: per-edge moments and edge-label correlation.
  Matrix mean;
  Matrix std;
  Matrix corr;
  double label_mean = 0.0;
  double label_std = 0.0;
};

EdgeGenerator g_mixup_fit(const LabeledDataset& dataset);

/// Classification: each edge ~ N(sum_c w_c mu_c, (sum_c w_c sigma_c)^2) with
/// w the mixed label. Regression: each edge from the conditional normal at the
/// mixed label. Diagonal forced to 1 in correlation mode.
MixedSample g_mixup_sample(const EdgeGenerator& gen, const Label& y_i, const Label& y_j,
                           MixRatio lambda, Rng& rng);

struct PairChoice {
  std::size_t partner = 0;
  /// Set when no valid partner existed and the anchor was returned.
  bool fallback = false;
};

/// Regression: partner j != anchor with probability proportional to
/// exp(-(y_i - y_j)^2 / (2 bandwidth^2)). Classification: uniform within the
/// anchor's class.
PairChoice c_mixup_pair(const LabeledDataset& dataset, std::size_t anchor, double bandwidth,
                        Rng& rng);

/// Population standard deviation of the labels, or 1 when it is zero.
double default_cmix_bandwidth(const LabeledDataset& dataset);

/// `count` augmented samples. Output k uses Rng::derive(config.seed, k), so the
/// result does not depend on `threads`.
std::vector<MixedSample> augment_batch(const LabeledDataset& dataset, const MixConfig& config,
                                       std::size_t count, unsigned threads = 1);

struct ProbeResult {
  double mean_dv = 0.0;
  double mean_dr = 0.0;
  double std_dv = 0.0;
  double std_dr = 0.0;
  std::size_t trials = 0;

  /// (mean_dv - mean_dr) / mean_dv
  double relative_gap() const { return mean_dv > 0.0 ? (mean_dv - mean_dr) / mean_dv : 0.0; }
};

/// Draws label-sorted triples y_1 < y_2 < y_3, reconstructs X_2 from X_1 and
/// X_3 at w = (y_2 - y_3) / (y_1 - y_3) linearly and along the log-Euclidean
/// geodesic, and accumulates entrywise L1 distances to X_2.
ProbeResult incorrect_label_probe(const LabeledDataset& dataset, std::size_t trials, Rng& rng);

/// Sum of absolute entries of a - b.
double entrywise_l1(const Matrix& a, const Matrix& b);

}  // namespace spdmix
