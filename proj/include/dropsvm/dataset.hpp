#pragma once

#include <cstddef>
#include <vector>

#include "dropsvm/sparse.hpp"

namespace dropsvm {

/// Binary training corpus: N >= 1 sparse examples over D features with
/// labels in {-1, +1}.
class Dataset {
 public:
  Dataset(std::size_t dim, std::vector<SparseVector> examples, std::vector<double> labels);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return examples_.size(); }
  const std::vector<SparseVector>& examples() const noexcept { return examples_; }
  const std::vector<double>& labels() const noexcept { return labels_; }
  const SparseVector& example(std::size_t n) const { return examples_[n]; }
  double label(std::size_t n) const { return labels_[n]; }

  /// Rows picked by `rows`, in that order, over the same feature space.
  Dataset subset(const std::vector<std::size_t>& rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_;
  std::vector<SparseVector> examples_;
  std::vector<double> labels_;
};

/// Corpus with integer class labels 0..K-1, used by the one-vs-all wrapper.
class MulticlassDataset {
 public:
  MulticlassDataset(std::size_t dim, std::vector<SparseVector> examples, std::vector<int> classes);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return examples_.size(); }
  /// Number of classes: one past the largest label.
  int num_classes() const noexcept { return num_classes_; }
  const std::vector<SparseVector>& examples() const noexcept { return examples_; }
  const std::vector<int>& classes() const noexcept { return classes_; }

  /// Binary relabelling: `positive` -> +1, everything else -> -1.
  Dataset one_vs_rest(int positive) const;

  MulticlassDataset subset(const std::vector<std::size_t>& rows) const;

 private:
  std::size_t dim_;
  std::vector<SparseVector> examples_;
  std::vector<int> classes_;
  int num_classes_ = 0;
};

/// A dataset with a constant feature of value 1 appended at index D. The
/// constant feature carries the offset b: it is never corrupted and never
/// regularized. Only constructible from a plain Dataset, so augmenting twice
/// does not type-check.
class AugmentedView {
 public:
  const Dataset& base() const noexcept { return base_; }
  std::size_t dim() const noexcept { return base_.dim() + 1; }
  std::size_t offset_index() const noexcept { return base_.dim(); }
  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<SparseVector>& examples() const noexcept { return rows_; }
  const SparseVector& example(std::size_t n) const { return rows_[n]; }
  double label(std::size_t n) const { return base_.label(n); }

 private:
  friend AugmentedView augment_with_offset(const Dataset& data);
  AugmentedView(Dataset base, std::vector<SparseVector> rows)
      : base_(std::move(base)), rows_(std::move(rows)) {}

  Dataset base_;
  std::vector<SparseVector> rows_;
};

/// Appends the constant offset feature. Throws ConfigError for D = 0.
AugmentedView augment_with_offset(const Dataset& data);

}  // namespace dropsvm
