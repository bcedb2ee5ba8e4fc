#include "dropsvm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dropsvm/errors.hpp"

namespace dropsvm {

SparseVector::SparseVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i].value))
      throw std::invalid_argument("sparse vector has a non-finite value at index " +
                                  std::to_string(entries_[i].index));
    if (i > 0 && entries_[i].index <= entries_[i - 1].index)
      throw std::invalid_argument("sparse vector indices must be strictly increasing");
  }
}

namespace {

void check_examples(std::size_t dim, const std::vector<SparseVector>& examples,
                    std::size_t n_labels) {
  if (examples.empty()) throw std::invalid_argument("dataset must contain at least one example");
  if (examples.size() != n_labels)
    throw std::invalid_argument("dataset has " + std::to_string(examples.size()) +
                                " examples but " + std::to_string(n_labels) + " labels");
  for (const auto& x : examples)
    if (x.extent() > dim)
      throw DimensionMismatch("example feature index " + std::to_string(x.extent() - 1) +
                              " outside dimension " + std::to_string(dim));
}

}  // namespace

Dataset::Dataset(std::size_t dim, std::vector<SparseVector> examples, std::vector<double> labels)
    : dim_(dim), examples_(std::move(examples)), labels_(std::move(labels)) {
  check_examples(dim_, examples_, labels_.size());
  for (double y : labels_)
    if (y != 1.0 && y != -1.0) throw std::invalid_argument("binary labels must be -1 or +1");
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  std::vector<SparseVector> xs;
  std::vector<double> ys;
  xs.reserve(rows.size());
  ys.reserve(rows.size());
  for (std::size_t r : rows) {
    xs.push_back(examples_.at(r));
    ys.push_back(labels_.at(r));
  }
  return Dataset(dim_, std::move(xs), std::move(ys));
}

MulticlassDataset::MulticlassDataset(std::size_t dim, std::vector<SparseVector> examples,
                                     std::vector<int> classes)
    : dim_(dim), examples_(std::move(examples)), classes_(std::move(classes)) {
  check_examples(dim_, examples_, classes_.size());
  for (int k : classes_) {
    if (k < 0) throw std::invalid_argument("class labels must be non-negative");
    num_classes_ = std::max(num_classes_, k + 1);
  }
}

Dataset MulticlassDataset::one_vs_rest(int positive) const {
  std::vector<double> ys(classes_.size());
  std::transform(classes_.begin(), classes_.end(), ys.begin(),
                 [positive](int k) { return k == positive ? 1.0 : -1.0; });
  return Dataset(dim_, examples_, std::move(ys));
}

MulticlassDataset MulticlassDataset::subset(const std::vector<std::size_t>& rows) const {
  std::vector<SparseVector> xs;
  std::vector<int> ks;
  for (std::size_t r : rows) {
    xs.push_back(examples_.at(r));
    ks.push_back(classes_.at(r));
  }
  return MulticlassDataset(dim_, std::move(xs), std::move(ks));
}

AugmentedView augment_with_offset(const Dataset& data) {
  if (data.dim() == 0) throw ConfigError("empty feature space");
  const auto offset = static_cast<FeatureIndex>(data.dim());
  std::vector<SparseVector> rows;
  rows.reserve(data.size());
  for (const auto& x : data.examples()) {
    std::vector<Entry> e(x.entries().begin(), x.entries().end());
    e.push_back({offset, 1.0});
    rows.emplace_back(std::move(e));
  }
  return AugmentedView(data, std::move(rows));
}

}  // namespace dropsvm
