#include "spdmix/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spdmix/error.hpp"

namespace spdmix {

int LabeledDataset::num_classes() const {
  if (task != Task::kClassification || labels.empty()) return 0;
  return static_cast<int>(*std::max_element(labels.begin(), labels.end())) + 1;
}

Vector LabeledDataset::label_vector(std::size_t i) const {
  if (task == Task::kRegression) {
    return Vector::Constant(1, labels.at(i));
  }
  Vector v = Vector::Zero(num_classes());
  v(static_cast<Index>(labels.at(i))) = 1.0;
  return v;
}

void LabeledDataset::validate() const {
  if (matrices.size() != labels.size()) {
    std::ostringstream os;
    os << "dataset has " << matrices.size() << " matrices but " << labels.size()
       << " labels";
    throw DimensionError(os.str());
  }
  if (!ids.empty() && ids.size() != matrices.size()) {
    throw DimensionError("dataset ids and matrices differ in length");
  }
  for (const auto& m : matrices) {
    if (m.dim() != dim()) {
      std::ostringstream os;
      os << "dataset mixes dimensions " << dim() << " and " << m.dim();
      throw DimensionError(os.str());
    }
  }
  for (double y : labels) {
    if (!std::isfinite(y)) throw DomainError("dataset label is not finite");
    if (task == Task::kClassification && (y < 0.0 || y != std::floor(y))) {
      std::ostringstream os;
      os << "classification label " << y << " is not a class id";
      throw DomainError(os.str());
    }
  }
}

LabeledDataset make_dataset(std::vector<SymmetricMatrix> matrices, std::vector<double> labels,
                            Task task, bool is_correlation) {
  LabeledDataset ds;
  ds.matrices = std::move(matrices);
  ds.labels = std::move(labels);
  ds.task = task;
  ds.is_correlation = is_correlation;
  ds.ids.resize(ds.matrices.size());
  for (std::size_t i = 0; i < ds.ids.size(); ++i) ds.ids[i] = i;
  ds.validate();
  return ds;
}

const char* to_string(Task task) {
  return task == Task::kClassification ? "classification" : "regression";
}

}  // namespace spdmix
