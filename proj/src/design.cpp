#include "dropsvm/design.hpp"

#include <limits>
#include <string>

#include "dropsvm/errors.hpp"

namespace dropsvm {

CorruptedDesign::CorruptedDesign(std::span<const CorruptionMoments> rows, std::size_t cols)
    : cols_(cols) {
  if (cols == 0) throw DimensionMismatch("design needs at least the offset column");
  uniform_limit_ = cols - 1;
  row_ptr_.reserve(rows.size() + 1);
  row_ptr_.push_back(0);
  uniform_.reserve(rows.size());
  std::vector<std::size_t> count(cols, 0);
  bool any_uniform = false;
  for (const auto& r : rows) {
    for (const auto& e : r.entries) {
      if (e.index >= cols)
        throw DimensionMismatch("moment index " + std::to_string(e.index) + " outside " +
                                std::to_string(cols) + " columns");
      col_.push_back(e.index);
      mean_.push_back(e.mean);
      var_.push_back(e.variance);
      ++count[e.index];
    }
    row_ptr_.push_back(col_.size());
    uniform_.push_back(r.uniform_variance);
    if (r.uniform_variance != 0.0) {
      // All rows with additive noise must agree on where it stops.
      if (any_uniform && r.uniform_limit != uniform_limit_)
        throw DimensionMismatch("rows disagree on the additive-noise coordinate range");
      uniform_limit_ = std::min(r.uniform_limit, cols - 1);
      any_uniform = true;
    }
  }

  col_ptr_.assign(cols + 1, 0);
  for (std::size_t j = 0; j < cols; ++j) col_ptr_[j + 1] = col_ptr_[j] + count[j];
  csc_row_.resize(col_.size());
  csc_mean_.resize(col_.size());
  csc_var_.resize(col_.size());
  std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t n = 0; n + 1 < row_ptr_.size(); ++n)
    for (std::size_t k = row_ptr_[n]; k < row_ptr_[n + 1]; ++k) {
      const std::size_t slot = fill[col_[k]]++;
      csc_row_[slot] = n;
      csc_mean_[slot] = mean_[k];
      csc_var_[slot] = var_[k];
    }
}

}  // namespace dropsvm
