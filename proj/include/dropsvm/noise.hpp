#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dropsvm/sparse.hpp"

namespace dropsvm {

using Rng = std::mt19937_64;

enum class NoiseKind { None, Dropout, Gaussian, Laplace, Poisson };

/// An unbiased feature-wise corrupting distribution p(x~ | x).
class NoiseSpec {
 public:
  NoiseSpec() = default;

  static NoiseSpec none() { return {}; }
  /// Blankout: x~_d = 0 w.p. q, x_d / (1-q) otherwise. Requires q in [0, 1).
  static NoiseSpec dropout(double q);
  /// Additive N(0, sigma2) on every feature coordinate.
  static NoiseSpec gaussian(double sigma2);
  /// Additive Laplace(0, scale) on every feature coordinate; scale > 0.
  static NoiseSpec laplace(double scale);
  /// x~_d ~ Poisson(x_d); needs x >= 0.
  static NoiseSpec poisson() { return NoiseSpec(NoiseKind::Poisson, 0.0); }

  /// Builds a spec from a kind name ("none", "dropout", "gaussian",
  /// "laplace", "poisson") and its single level parameter.
  static NoiseSpec from_name(const std::string& kind, double level);

  NoiseKind kind() const noexcept { return kind_; }
  /// q, sigma2 or scale depending on kind; 0 for None/Poisson.
  double level() const noexcept { return level_; }
  std::string name() const;

  /// Additive noise touches absent (zero) coordinates too.
  bool is_additive() const noexcept {
    return kind_ == NoiseKind::Gaussian || kind_ == NoiseKind::Laplace;
  }

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;

 private:
  NoiseSpec(NoiseKind kind, double level) : kind_(kind), level_(level) {}

  NoiseKind kind_ = NoiseKind::None;
  double level_ = 0.0;
};

struct MomentEntry {
  FeatureIndex index;
  double mean;
  double variance;
};

/// Per-feature mean and (diagonal) variance of x~ under the corrupting
/// distribution. Variance at coordinate d is `entries[d].variance` (if stored)
/// plus `uniform_variance` when d < `uniform_limit`. The offset coordinate
/// always sits at or beyond `uniform_limit` and is stored with variance 0.
struct CorruptionMoments {
  std::vector<MomentEntry> entries;
  double uniform_variance = 0.0;
  std::size_t uniform_limit = 0;

  double mean_at(std::size_t d) const noexcept;
  double variance_at(std::size_t d) const noexcept;
};

/// Analytic moments of x~ given x over a D-dimensional feature space.
/// Throws DomainError for Poisson noise on negative values.
CorruptionMoments moments(const NoiseSpec& spec, const SparseVector& x, std::size_t dim);

/// One draw x~ ~ p(x~ | x). Additive kinds return a vector with all D
/// coordinates stored.
SparseVector sample(const NoiseSpec& spec, const SparseVector& x, std::size_t dim, Rng& rng);

/// Appends the constant offset feature at index `offset_index` with mean 1
/// and variance 0.
void append_offset(CorruptionMoments& m, std::size_t offset_index);

}  // namespace dropsvm
