#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dropsvm/noise.hpp"

namespace dropsvm {

/// Row-major and column-major views of the per-example corruption moments
/// (mean and diagonal variance) over a fixed column space of D + 1
/// coordinates, the last of which is the offset. Immutable once built; the
/// column-major copy lets parallel kernels give each thread exclusive output
/// coordinates.
class CorruptedDesign {
 public:
  /// `rows[n]` must only reference columns < cols. Rows may or may not carry
  /// the offset entry (cols - 1) depending on whether an offset is fitted.
  CorruptedDesign(std::span<const CorruptionMoments> rows, std::size_t cols);

  std::size_t rows() const noexcept { return uniform_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t offset_index() const noexcept { return cols_ - 1; }
  std::size_t nnz() const noexcept { return col_.size(); }

  // CSR
  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const FeatureIndex> col() const noexcept { return col_; }
  std::span<const double> mean() const noexcept { return mean_; }
  std::span<const double> var() const noexcept { return var_; }
  /// Additive variance of row n on columns < uniform_limit().
  double uniform(std::size_t n) const noexcept { return uniform_[n]; }
  std::span<const double> uniform() const noexcept { return uniform_; }
  std::size_t uniform_limit() const noexcept { return uniform_limit_; }

  // CSC
  std::span<const std::size_t> col_ptr() const noexcept { return col_ptr_; }
  std::span<const std::size_t> csc_row() const noexcept { return csc_row_; }
  std::span<const double> csc_mean() const noexcept { return csc_mean_; }
  std::span<const double> csc_var() const noexcept { return csc_var_; }

 private:
  std::size_t cols_;
  std::size_t uniform_limit_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<FeatureIndex> col_;
  std::vector<double> mean_, var_, uniform_;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::size_t> csc_row_;
  std::vector<double> csc_mean_, csc_var_;
};

}  // namespace dropsvm
