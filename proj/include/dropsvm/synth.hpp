#pragma once

#include <cstddef>
#include <cstdint>

#include "dropsvm/dataset.hpp"

namespace dropsvm {

template <class Data>
struct Split {
  Data train;
  Data test;
};

/// Two isotropic Gaussian blobs at +-mu in D dimensions, dense features.
/// The mean direction is drawn from the seed; `separation` is ||2 mu|| in
/// units of the noise standard deviation, so classes overlap for modest
/// values.
Split<Dataset> make_blobs(std::size_t n_train, std::size_t n_test, std::size_t dim,
                          std::uint64_t seed, double separation = 3.0);

/// K Gaussian blobs with centers on scaled coordinate axes.
Split<MulticlassDataset> make_multiclass_blobs(std::size_t n_train, std::size_t n_test,
                                               std::size_t dim, int classes, std::uint64_t seed,
                                               double separation = 6.0);

struct RedundantSparseConfig {
  /// Number of latent signals; each is copied across `copies` coordinates.
  std::size_t signals = 10;
  std::size_t copies = 20;
  /// Extra coordinates carrying pure noise.
  std::size_t noise_features = 50;
  /// Probability that a copy coordinate is present in an example.
  double presence = 0.25;
  /// Probability that a noise coordinate is present.
  double noise_presence = 0.05;
  /// Per-copy class lift is drawn from U(min_lift, max_lift); a copy with
  /// lift 1 never fires for the opposite class.
  double min_lift = 0.2;
  double max_lift = 0.8;
  /// Fraction of examples whose label is flipped.
  double label_noise = 0.05;

  std::size_t dim() const noexcept { return signals * copies + noise_features; }
};

/// Sparse nonnegative data in which every informative latent signal is
/// spread redundantly over many coordinates, so a classifier that spreads
/// its weight survives random deletion of features.
Split<Dataset> make_redundant_sparse(std::size_t n_train, std::size_t n_test, std::uint64_t seed,
                                     const RedundantSparseConfig& cfg = {});

}  // namespace dropsvm
