#include "spdmix/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "spdmix/error.hpp"

namespace spdmix {
namespace {

constexpr std::array<std::pair<Strategy, std::string_view>, 7> kStrategyNames = {{
    {Strategy::kRMixup, "rmixup"},
    {Strategy::kVMixup, "vmixup"},
    {Strategy::kDMixup, "dmixup"},
    {Strategy::kDropNode, "dropnode"},
    {Strategy::kDropEdge, "dropedge"},
    {Strategy::kGMixup, "gmixup"},
    {Strategy::kCMixup, "cmixup"},
}};

void require_same_dim(Index a, Index b) {
  if (a != b) {
    std::ostringstream os;
    os << "dimension mismatch: " << a << " vs " << b;
    throw DimensionError(os.str());
  }
}

void require_keep_prob(double keep_prob) {
  if (!(keep_prob > 0.0 && keep_prob < 1.0)) {
    std::ostringstream os;
    os << "keep probability " << keep_prob << " outside (0, 1)";
    throw DomainError(os.str());
  }
}

std::string fraction(std::size_t num, std::size_t den, const char* tag) {
  std::ostringstream os;
  os << tag << "=" << num << "/" << den;
  return os.str();
}

std::size_t class_of(double label) { return static_cast<std::size_t>(label); }

}  // namespace

std::string_view to_string(Strategy s) {
  for (const auto& [strategy, name] : kStrategyNames) {
    if (strategy == s) return name;
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (const auto& [strategy, n] : kStrategyNames) {
    if (n == name) return strategy;
  }
  return std::nullopt;
}

void MixConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("Beta shape alpha must be positive and finite");
  }
  require_keep_prob(keep_prob);
  if (cmix_bandwidth && !(*cmix_bandwidth > 0.0)) {
    throw DomainError("C-Mixup bandwidth must be positive");
  }
}

MixRatio sample_beta(double alpha, Rng& rng) {
  if (!(alpha > 0.0)) throw DomainError("Beta shape alpha must be positive");
  for (;;) {
    const double x = rng.gamma(alpha);
    const double y = rng.gamma(alpha);
    const double total = x + y;
    if (total > 0.0 && std::isfinite(total)) {
      return MixRatio(std::clamp(x / total, 0.0, 1.0));
    }
  }
}

Label mix_labels(const Label& y_i, const Label& y_j, MixRatio lambda) {
  if (y_i.size() != y_j.size()) {
    throw DimensionError("labels of different length cannot be mixed");
  }
  return lambda.complement() * y_i + lambda.value() * y_j;
}

MixedSample r_mixup(const SpdMatrix& s_i, const SpdMatrix& s_j, const Label& y_i,
                    const Label& y_j, MixRatio lambda) {
  MixedSample out{geodesic(s_i, s_j, lambda, MetricKind::kLogEuclidean).symmetric(),
                  mix_labels(y_i, y_j, lambda),
                  {}};
  out.provenance.strategy = Strategy::kRMixup;
  out.provenance.lambda = lambda.value();
  out.provenance.spd_validated = true;
  return out;
}

Matrix EigenCache::Entry::log_matrix() const {
  return recompose(orthogonal, log_eigenvalues);
}

EigenCache::Entry EigenCache::make_entry(const SymmetricMatrix& s) {
  EigenDecomposition eig = eig_sym(s);
  if (!(eig.eigenvalues(0) > 0.0)) {
    std::ostringstream os;
    os << "cannot cache logarithm: eigenvalue " << eig.eigenvalues(0)
       << " is not positive; clamp the matrix first";
    throw LinalgError(os.str());
  }
  return {std::move(eig.orthogonal), eig.eigenvalues.array().log().matrix()};
}

EigenCache EigenCache::build(const LabeledDataset& dataset) {
  EigenCache cache;
  cache.entries_.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    try {
      cache.entries_.push_back(make_entry(dataset.matrices[i]));
    } catch (const LinalgError& e) {
      std::ostringstream os;
      os << "sample " << i << ": " << e.what();
      throw LinalgError(os.str());
    }
  }
  return cache;
}

MixedSample r_mixup_cached(const EigenCache::Entry& cache_i, const EigenCache::Entry& cache_j,
                           const Label& y_i, const Label& y_j, MixRatio lambda) {
  if (cache_i.dim() != cache_j.dim() || cache_i.orthogonal.rows() != cache_i.dim() ||
      cache_j.orthogonal.rows() != cache_j.dim()) {
    std::ostringstream os;
    os << "stale eigencache: entry dimensions " << cache_i.dim() << " and "
       << cache_j.dim();
    throw DimensionError(os.str());
  }
  const Matrix tangent = lambda.complement() * cache_i.log_matrix() +
                         lambda.value() * cache_j.log_matrix();
  MixedSample out{matrix_exp(symmetrize_unchecked(tangent)).symmetric(),
                  mix_labels(y_i, y_j, lambda),
                  {}};
  out.provenance.strategy = Strategy::kRMixup;
  out.provenance.lambda = lambda.value();
  out.provenance.spd_validated = true;
  return out;
}

MixedSample v_mixup(const SymmetricMatrix& s_i, const SymmetricMatrix& s_j, const Label& y_i,
                    const Label& y_j, MixRatio lambda) {
  require_same_dim(s_i.dim(), s_j.dim());
  const Matrix mix = lambda.complement() * s_i.matrix() + lambda.value() * s_j.matrix();
  MixedSample out{symmetrize_unchecked(mix), mix_labels(y_i, y_j, lambda), {}};
  out.provenance.strategy = Strategy::kVMixup;
  out.provenance.lambda = lambda.value();
  return out;
}

EdgeMask EdgeMask::from(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("edge mask must be square");
  for (Index p = 0; p < m.rows(); ++p) {
    for (Index q = 0; q < m.cols(); ++q) {
      if (m(p, q) != 0.0 && m(p, q) != 1.0) {
        throw DomainError("edge mask entries must be 0 or 1");
      }
      if (m(p, q) != m(q, p)) throw DomainError("edge mask must be symmetric");
    }
  }
  return EdgeMask(m);
}

EdgeMask EdgeMask::constant(Index n, bool value) {
  return EdgeMask(Matrix::Constant(n, n, value ? 1.0 : 0.0));
}

EdgeMask EdgeMask::random(Index n, double p, Rng& rng, bool include_diagonal,
                          bool diagonal_value) {
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    m(r, r) = include_diagonal ? (rng.bernoulli(p) ? 1.0 : 0.0) : (diagonal_value ? 1.0 : 0.0);
    for (Index c = r + 1; c < n; ++c) {
      const double v = rng.bernoulli(p) ? 1.0 : 0.0;
      m(r, c) = v;
      m(c, r) = v;
    }
  }
  return EdgeMask(std::move(m));
}

std::size_t EdgeMask::upper_ones() const {
  std::size_t ones = 0;
  for (Index r = 0; r < m_.rows(); ++r) {
    for (Index c = r; c < m_.cols(); ++c) ones += m_(r, c) != 0.0 ? 1 : 0;
  }
  return ones;
}

MixedSample d_mixup(const SymmetricMatrix& s_i, const SymmetricMatrix& s_j, const Label& y_i,
                    const Label& y_j, MixRatio lambda, Rng& rng) {
  require_same_dim(s_i.dim(), s_j.dim());
  const EdgeMask mask = EdgeMask::random(s_i.dim(), lambda.value(), rng, true);
  return d_mixup_with_mask(s_i, s_j, y_i, y_j, lambda, mask);
}

MixedSample d_mixup_with_mask(const SymmetricMatrix& s_i, const SymmetricMatrix& s_j,
                              const Label& y_i, const Label& y_j, MixRatio lambda,
                              const EdgeMask& take_from_j) {
  require_same_dim(s_i.dim(), s_j.dim());
  require_same_dim(s_i.dim(), take_from_j.dim());
  const Matrix& mask = take_from_j.matrix();
  const Matrix mix = (1.0 - mask.array()) * s_i.matrix().array() +
                     mask.array() * s_j.matrix().array();
  // Mask and inputs are symmetric, so the elementwise blend is exactly symmetric.
  MixedSample out{SymmetricMatrix::from(mix), mix_labels(y_i, y_j, lambda), {}};
  const auto n = static_cast<std::size_t>(s_i.dim());
  out.provenance.strategy = Strategy::kDMixup;
  out.provenance.lambda = lambda.value();
  out.provenance.mask_summary = fraction(take_from_j.upper_ones(), n * (n + 1) / 2, "from_j");
  return out;
}

MixedSample drop_node(const SymmetricMatrix& s, const Label& y, double keep_prob, Rng& rng) {
  require_keep_prob(keep_prob);
  std::vector<bool> keep(static_cast<std::size_t>(s.dim()));
  for (std::size_t p = 0; p < keep.size(); ++p) keep[p] = rng.bernoulli(keep_prob);
  return drop_node_with_mask(s, y, keep);
}

MixedSample drop_node_with_mask(const SymmetricMatrix& s, const Label& y,
                                const std::vector<bool>& keep) {
  if (static_cast<Index>(keep.size()) != s.dim()) {
    throw DimensionError("node mask length differs from matrix dimension");
  }
  Matrix m = s.matrix();
  std::size_t kept = 0;
  for (Index p = 0; p < s.dim(); ++p) {
    if (keep[static_cast<std::size_t>(p)]) {
      ++kept;
      continue;
    }
    m.row(p).setZero();
    m.col(p).setZero();
  }
  MixedSample out{SymmetricMatrix::from(m), y, {}};
  out.provenance.strategy = Strategy::kDropNode;
  out.provenance.mask_summary = fraction(kept, keep.size(), "kept");
  return out;
}

MixedSample drop_edge(const SymmetricMatrix& s, const Label& y, double keep_prob, Rng& rng) {
  require_keep_prob(keep_prob);
  const EdgeMask keep = EdgeMask::random(s.dim(), keep_prob, rng, false, true);
  return drop_edge_with_mask(s, y, keep);
}

MixedSample drop_edge_with_mask(const SymmetricMatrix& s, const Label& y, const EdgeMask& keep) {
  require_same_dim(s.dim(), keep.dim());
  Matrix m = keep.matrix().array() * s.matrix().array();
  m.diagonal() = s.matrix().diagonal();
  std::size_t kept = 0;
  const auto n = static_cast<std::size_t>(s.dim());
  for (Index p = 0; p < s.dim(); ++p) {
    for (Index q = p + 1; q < s.dim(); ++q) kept += keep(p, q) ? 1 : 0;
  }
  MixedSample out{SymmetricMatrix::from(m), y, {}};
  out.provenance.strategy = Strategy::kDropEdge;
  out.provenance.mask_summary = fraction(kept, n * (n - 1) / 2, "kept_edges");
  return out;
}

EdgeGenerator g_mixup_fit(const LabeledDataset& dataset) {
  dataset.validate();
  if (dataset.empty()) throw DomainError("G-Mixup needs a nonempty dataset");
  const Index n = dataset.dim();
  EdgeGenerator gen;
  gen.task = dataset.task;
  gen.dim = n;
  gen.correlation_mode = dataset.is_correlation;

  if (dataset.task == Task::kClassification) {
    const auto classes = static_cast<std::size_t>(dataset.num_classes());
    gen.class_mean.assign(classes, Matrix::Zero(n, n));
    gen.class_std.assign(classes, Matrix::Zero(n, n));
    gen.class_fitted.assign(classes, false);
    std::vector<std::size_t> counts(classes, 0);
    for (std::size_t k = 0; k < dataset.size(); ++k) {
      const std::size_t c = class_of(dataset.labels[k]);
      gen.class_mean[c] += dataset.matrices[k].matrix();
      ++counts[c];
    }
    for (std::size_t c = 0; c < classes; ++c) {
      if (counts[c] == 0) continue;
      gen.class_fitted[c] = true;
      gen.class_mean[c] /= static_cast<double>(counts[c]);
    }
    for (std::size_t k = 0; k < dataset.size(); ++k) {
      const std::size_t c = class_of(dataset.labels[k]);
      gen.class_std[c].array() +=
          (dataset.matrices[k].matrix() - gen.class_mean[c]).array().square();
    }
    for (std::size_t c = 0; c < classes; ++c) {
      if (counts[c] >= 2) {
        gen.class_std[c] = (gen.class_std[c] / static_cast<double>(counts[c] - 1)).cwiseSqrt();
      } else {
        gen.class_std[c].setZero();
        if (counts[c] == 1) ++gen.warnings;
      }
    }
    return gen;
  }

  if (dataset.size() < 2) throw DomainError("G-Mixup regression needs at least two samples");
  const double count = static_cast<double>(dataset.size());
  gen.mean = Matrix::Zero(n, n);
  for (const auto& m : dataset.matrices) gen.mean += m.matrix();
  gen.mean /= count;
  for (double y : dataset.labels) gen.label_mean += y;
  gen.label_mean /= count;

  Matrix var = Matrix::Zero(n, n);
  Matrix cov = Matrix::Zero(n, n);
  double label_var = 0.0;
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    const Matrix centered = dataset.matrices[k].matrix() - gen.mean;
    const double dy = dataset.labels[k] - gen.label_mean;
    var.array() += centered.array().square();
    cov += dy * centered;
    label_var += dy * dy;
  }
  var /= count - 1.0;
  cov /= count - 1.0;
  label_var /= count - 1.0;
  gen.label_std = std::sqrt(label_var);
  if (!(gen.label_std > 0.0)) {
    throw DomainError("G-Mixup regression needs labels with positive variance");
  }
  gen.std = var.cwiseSqrt();
  gen.corr = Matrix::Zero(n, n);
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      if (gen.std(p, q) > 0.0) {
        gen.corr(p, q) = std::clamp(cov(p, q) / (gen.std(p, q) * gen.label_std), -1.0, 1.0);
      }
    }
  }
  return gen;
}

MixedSample g_mixup_sample(const EdgeGenerator& gen, const Label& y_i, const Label& y_j,
                           MixRatio lambda, Rng& rng) {
  const Index n = gen.dim;
  const Label mixed = mix_labels(y_i, y_j, lambda);
  Matrix mean;
  Matrix sd;
  if (gen.task == Task::kClassification) {
    if (static_cast<std::size_t>(mixed.size()) != gen.class_mean.size()) {
      throw DimensionError("label length differs from the generator's class count");
    }
    mean = Matrix::Zero(n, n);
    sd = Matrix::Zero(n, n);
    for (std::size_t c = 0; c < gen.class_mean.size(); ++c) {
      const double w = mixed(static_cast<Index>(c));
      if (w == 0.0) continue;
      if (!gen.class_fitted[c]) {
        std::ostringstream os;
        os << "G-Mixup generator has no fitted edges for class " << c;
        throw DomainError(os.str());
      }
      mean += w * gen.class_mean[c];
      sd += w * gen.class_std[c];
    }
  } else {
    if (mixed.size() != 1) throw DimensionError("regression labels must be scalar");
    if (gen.mean.rows() != n) throw DomainError("G-Mixup generator is not fitted");
    const double shift = (mixed(0) - gen.label_mean) / gen.label_std;
    mean = gen.mean.array() + gen.std.array() * gen.corr.array() * shift;
    sd = gen.std.array() * (1.0 - gen.corr.array().square()).max(0.0).sqrt();
  }

  Matrix out(n, n);
  for (Index p = 0; p < n; ++p) {
    for (Index q = p; q < n; ++q) {
      const double v = mean(p, q) + sd(p, q) * rng.normal();
      out(p, q) = v;
      out(q, p) = v;
    }
  }
  if (gen.correlation_mode) out.diagonal().setOnes();

  MixedSample sample{SymmetricMatrix::from(out), mixed, {}};
  sample.provenance.strategy = Strategy::kGMixup;
  sample.provenance.lambda = lambda.value();
  return sample;
}

double default_cmix_bandwidth(const LabeledDataset& dataset) {
  if (dataset.labels.empty()) return 1.0;
  double mean = 0.0;
  for (double y : dataset.labels) mean += y;
  mean /= static_cast<double>(dataset.labels.size());
  double var = 0.0;
  for (double y : dataset.labels) var += (y - mean) * (y - mean);
  var /= static_cast<double>(dataset.labels.size());
  return var > 0.0 ? std::sqrt(var) : 1.0;
}

PairChoice c_mixup_pair(const LabeledDataset& dataset, std::size_t anchor, double bandwidth,
                        Rng& rng) {
  if (dataset.size() < 2) throw DomainError("C-Mixup needs at least two samples");
  if (anchor >= dataset.size()) throw DomainError("C-Mixup anchor index out of range");
  if (!(bandwidth > 0.0)) throw DomainError("C-Mixup bandwidth must be positive");

  const double y_anchor = dataset.labels[anchor];
  if (dataset.task == Task::kClassification) {
    std::vector<std::size_t> same;
    for (std::size_t k = 0; k < dataset.size(); ++k) {
      if (k != anchor && dataset.labels[k] == y_anchor) same.push_back(k);
    }
    if (same.empty()) return {anchor, true};
    return {same[rng.index(same.size())], false};
  }

  std::vector<double> log_weight(dataset.size(), -std::numeric_limits<double>::infinity());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    if (k == anchor) continue;
    const double dy = dataset.labels[k] - y_anchor;
    log_weight[k] = -dy * dy / (2.0 * bandwidth * bandwidth);
    peak = std::max(peak, log_weight[k]);
  }
  std::vector<double> cumulative(dataset.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    if (k != anchor) total += std::exp(log_weight[k] - peak);
    cumulative[k] = total;
  }
  const double target = rng.uniform() * total;
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    if (k != anchor && target < cumulative[k]) return {k, false};
  }
  // Rounding left target at the very top; take the last candidate.
  for (std::size_t k = dataset.size(); k-- > 0;) {
    if (k != anchor) return {k, false};
  }
  return {anchor, true};
}

std::vector<MixedSample> augment_batch(const LabeledDataset& dataset, const MixConfig& config,
                                       std::size_t count, unsigned threads) {
  config.validate();
  dataset.validate();
  std::vector<MixedSample> out(count);
  if (count == 0) return out;

  const Strategy strategy = config.strategy;
  const bool pairwise = strategy != Strategy::kDropNode && strategy != Strategy::kDropEdge;
  if (dataset.empty()) throw DomainError("cannot augment an empty dataset");
  if (pairwise && dataset.size() < 2) {
    throw DomainError(std::string(to_string(strategy)) + " needs at least two samples");
  }

  // Shared read-only precompute.
  EigenCache cache;
  std::vector<SpdMatrix> spd;
  EdgeGenerator generator;
  double bandwidth = 0.0;
  if (strategy == Strategy::kRMixup) {
    try {
      if (config.use_eigencache) {
        cache = EigenCache::build(dataset);
      } else {
        spd.reserve(dataset.size());
        for (const auto& m : dataset.matrices) spd.push_back(SpdMatrix::from(m));
      }
    } catch (const LinalgError& e) {
      throw DomainError(std::string("R-Mixup needs SPD inputs: ") + e.what());
    }
  } else if (strategy == Strategy::kGMixup) {
    generator = g_mixup_fit(dataset);
  } else if (strategy == Strategy::kCMixup) {
    bandwidth = config.cmix_bandwidth.value_or(default_cmix_bandwidth(dataset));
  }

  const std::size_t n_samples = dataset.size();
  auto produce = [&](std::size_t k) {
    Rng rng = Rng::derive(config.seed, k);
    const std::size_t i = rng.index(n_samples);
    if (!pairwise) {
      MixedSample s = strategy == Strategy::kDropNode
                          ? drop_node(dataset.matrices[i], dataset.label_vector(i),
                                      config.keep_prob, rng)
                          : drop_edge(dataset.matrices[i], dataset.label_vector(i),
                                      config.keep_prob, rng);
      s.provenance.source_i = i;
      return s;
    }
    std::size_t j = 0;
    int warnings = 0;
    if (strategy == Strategy::kCMixup) {
      const PairChoice choice = c_mixup_pair(dataset, i, bandwidth, rng);
      j = choice.partner;
      warnings += choice.fallback ? 1 : 0;
    } else {
      j = rng.index(n_samples - 1);
      if (j >= i) ++j;
    }
    const MixRatio lambda = sample_beta(config.alpha, rng);
    const Label y_i = dataset.label_vector(i);
    const Label y_j = dataset.label_vector(j);
    MixedSample s;
    switch (strategy) {
      case Strategy::kRMixup:
        s = config.use_eigencache ? r_mixup_cached(cache.at(i), cache.at(j), y_i, y_j, lambda)
                                  : r_mixup(spd[i], spd[j], y_i, y_j, lambda);
        break;
      case Strategy::kVMixup:
      case Strategy::kCMixup:
        s = v_mixup(dataset.matrices[i], dataset.matrices[j], y_i, y_j, lambda);
        break;
      case Strategy::kDMixup:
        s = d_mixup(dataset.matrices[i], dataset.matrices[j], y_i, y_j, lambda, rng);
        break;
      case Strategy::kGMixup:
        s = g_mixup_sample(generator, y_i, y_j, lambda, rng);
        break;
      default:
        break;
    }
    s.provenance.strategy = strategy;
    s.provenance.source_i = i;
    s.provenance.source_j = j;
    s.provenance.warnings += warnings;
    return s;
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) out[k] = produce(k);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < count; k += workers) out[k] = produce(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double entrywise_l1(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().sum(); }

ProbeResult incorrect_label_probe(const LabeledDataset& dataset, std::size_t trials, Rng& rng) {
  dataset.validate();
  if (dataset.task != Task::kRegression) {
    throw DomainError("incorrect-label probe needs a regression dataset");
  }
  if (trials == 0) throw DomainError("incorrect-label probe needs at least one trial");
  const std::set<double> distinct(dataset.labels.begin(), dataset.labels.end());
  if (distinct.size() < 3) {
    throw DomainError("incorrect-label probe needs at least three distinct labels");
  }

  std::vector<double> dv(trials);
  std::vector<double> dr(trials);
  const std::size_t n = dataset.size();
  for (std::size_t t = 0; t < trials; ++t) {
    std::array<std::size_t, 3> idx{};
    for (;;) {
      idx = {rng.index(n), rng.index(n), rng.index(n)};
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return dataset.labels[a] < dataset.labels[b];
      });
      const double y1 = dataset.labels[idx[0]];
      const double y2 = dataset.labels[idx[1]];
      const double y3 = dataset.labels[idx[2]];
      if (y1 < y2 && y2 < y3) break;
    }
    const double y1 = dataset.labels[idx[0]];
    const double y2 = dataset.labels[idx[1]];
    const double y3 = dataset.labels[idx[2]];
    const double w = (y2 - y3) / (y1 - y3);
    const Matrix& x1 = dataset.matrices[idx[0]].matrix();
    const Matrix& x2 = dataset.matrices[idx[1]].matrix();
    const Matrix& x3 = dataset.matrices[idx[2]].matrix();

    const Matrix v_mix = w * x1 + (1.0 - w) * x3;
    const Matrix tangent = w * EigenCache::make_entry(dataset.matrices[idx[0]]).log_matrix() +
                           (1.0 - w) * EigenCache::make_entry(dataset.matrices[idx[2]]).log_matrix();
    const SpdMatrix r_mix = matrix_exp(symmetrize_unchecked(tangent));
    dv[t] = entrywise_l1(v_mix, x2);
    dr[t] = entrywise_l1(r_mix.matrix(), x2);
  }

  auto moments = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    return std::pair{mean, std::sqrt(var)};
  };
  ProbeResult result;
  result.trials = trials;
  std::tie(result.mean_dv, result.std_dv) = moments(dv);
  std::tie(result.mean_dr, result.std_dr) = moments(dr);
  return result;
}

}  // namespace spdmix
