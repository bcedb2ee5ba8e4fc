#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dropsvm {

using FeatureIndex = std::uint32_t;

struct Entry {
  FeatureIndex index;
  double value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Sparse real vector stored as (index, value) pairs with strictly increasing
/// indices and finite values. The ambient dimension is owned by the container
/// (Dataset, ModelParams) rather than by the vector itself.
class SparseVector {
 public:
  SparseVector() = default;

  /// Validates ordering and finiteness; throws std::invalid_argument otherwise.
  explicit SparseVector(std::vector<Entry> entries);

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// One past the largest stored index, or 0 when empty.
  std::size_t extent() const noexcept {
    return entries_.empty() ? 0 : static_cast<std::size_t>(entries_.back().index) + 1;
  }

  double dot(std::span<const double> dense) const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value * dense[e.index];
    return s;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<Entry> entries_;
};

}  // namespace dropsvm
