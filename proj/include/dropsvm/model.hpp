#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dropsvm/sparse.hpp"

namespace dropsvm {

/// Linear model over D features. The coefficient vector has D + 1 entries;
/// the last one is the offset b.
class ModelParams {
 public:
  ModelParams() = default;
  /// All-zero model.
  explicit ModelParams(std::size_t dim) : dim_(dim), coef_(dim + 1, 0.0) {}
  /// Takes D + 1 coefficients, offset last. Rejects non-finite values.
  ModelParams(std::size_t dim, std::vector<double> coefficients);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> coefficients() const noexcept { return coef_; }
  std::span<double> coefficients() noexcept { return coef_; }
  std::span<const double> weights() const noexcept { return {coef_.data(), dim_}; }
  double offset() const noexcept { return coef_[dim_]; }

  /// w'x + b. Throws DimensionMismatch if x has indices >= dim().
  double decision_value(const SparseVector& x) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coef_{0.0};
};

/// sign(w'x + b) with a score of exactly 0 mapped to +1.
int predict(const ModelParams& model, const SparseVector& x);

}  // namespace dropsvm
