#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spdmix/linalg.hpp"

namespace spdmix {

enum class Task { kRegression, kClassification };

/// Aligned matrices and labels. Classification labels are integral class ids
/// stored as doubles in [0, num_classes()).
struct LabeledDataset {
  std::vector<SymmetricMatrix> matrices;
  std::vector<double> labels;
  std::vector<std::uint64_t> ids;
  Task task = Task::kRegression;
  bool is_correlation = false;

  std::size_t size() const noexcept { return matrices.size(); }
  bool empty() const noexcept { return matrices.empty(); }
  /// Common dimension, 0 when empty.
  Index dim() const noexcept { return matrices.empty() ? 0 : matrices.front().dim(); }
  /// 1 + largest class id; 0 for regression or empty datasets.
  int num_classes() const;

  /// Label as a vector: one-hot of length num_classes() for classification,
  /// length-1 for regression.
  Vector label_vector(std::size_t i) const;

  /// Throws DimensionError or DomainError when the invariants do not hold.
  void validate() const;
};

/// Builds a dataset with ids 0..N-1 and validates it.
LabeledDataset make_dataset(std::vector<SymmetricMatrix> matrices, std::vector<double> labels,
                            Task task, bool is_correlation = false);

const char* to_string(Task task);

}  // namespace spdmix
