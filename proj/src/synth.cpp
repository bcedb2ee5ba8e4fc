#include "dropsvm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dropsvm/errors.hpp"
#include "dropsvm/noise.hpp"

namespace dropsvm {

namespace {

// Independent engines for the hidden "world" and each sample split.
Rng stream(std::uint64_t seed, std::uint32_t which) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    which, 0x5eedu};
  return Rng(seq);
}

void check_sizes(std::size_t n_train, std::size_t n_test, std::size_t dim) {
  if (n_train == 0 || n_test == 0) throw ConfigError("synthetic split sizes must be >= 1");
  if (dim == 0) throw ConfigError("synthetic dimension must be >= 1");
}

SparseVector dense_row(const std::vector<double>& v) {
  std::vector<Entry> e;
  e.reserve(v.size());
  for (std::size_t d = 0; d < v.size(); ++d)
    if (v[d] != 0.0) e.push_back({static_cast<FeatureIndex>(d), v[d]});
  return SparseVector(std::move(e));
}

}  // namespace

Split<Dataset> make_blobs(std::size_t n_train, std::size_t n_test, std::size_t dim,
                          std::uint64_t seed, double separation) {
  check_sizes(n_train, n_test, dim);
  Rng world = stream(seed, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> mu(dim);
  double norm = 0.0;
  for (double& m : mu) {
    m = gauss(world);
    norm += m * m;
  }
  norm = std::sqrt(norm);
  for (double& m : mu) m *= 0.5 * separation / norm;

  auto draw = [&](std::size_t n, Rng rng) {
    std::bernoulli_distribution coin(0.5);
    std::vector<SparseVector> xs;
    std::vector<double> ys;
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < n; ++i) {
      const double y = coin(rng) ? 1.0 : -1.0;
      for (std::size_t d = 0; d < dim; ++d) v[d] = y * mu[d] + gauss(rng);
      xs.push_back(dense_row(v));
      ys.push_back(y);
    }
    return Dataset(dim, std::move(xs), std::move(ys));
  };
  return {draw(n_train, stream(seed, 1)), draw(n_test, stream(seed, 2))};
}

Split<MulticlassDataset> make_multiclass_blobs(std::size_t n_train, std::size_t n_test,
                                               std::size_t dim, int classes, std::uint64_t seed,
                                               double separation) {
  check_sizes(n_train, n_test, dim);
  if (classes < 2 || static_cast<std::size_t>(classes) > dim)
    throw ConfigError("multiclass blobs need 2 <= classes <= dimension");
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&](std::size_t n, Rng rng) {
    std::uniform_int_distribution<int> pick(0, classes - 1);
    std::vector<SparseVector> xs;
    std::vector<int> ks;
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < n; ++i) {
      // Cycle through classes first so every class is represented.
      const int k = i < static_cast<std::size_t>(classes) ? static_cast<int>(i) : pick(rng);
      for (std::size_t d = 0; d < dim; ++d)
        v[d] = gauss(rng) + (d == static_cast<std::size_t>(k) ? separation : 0.0);
      xs.push_back(dense_row(v));
      ks.push_back(k);
    }
    return MulticlassDataset(dim, std::move(xs), std::move(ks));
  };
  return {draw(n_train, stream(seed, 1)), draw(n_test, stream(seed, 2))};
}

Split<Dataset> make_redundant_sparse(std::size_t n_train, std::size_t n_test, std::uint64_t seed,
                                     const RedundantSparseConfig& cfg) {
  check_sizes(n_train, n_test, cfg.dim());
  if (cfg.signals == 0 || cfg.copies == 0) throw ConfigError("need at least one signal and copy");
  if (!(cfg.presence > 0.0 && cfg.presence <= 1.0) ||
      !(cfg.noise_presence >= 0.0 && cfg.noise_presence <= 1.0) ||
      !(cfg.label_noise >= 0.0 && cfg.label_noise < 0.5) ||
      !(cfg.min_lift >= 0.0 && cfg.min_lift <= cfg.max_lift && cfg.max_lift <= 1.0))
    throw ConfigError("redundant-sparse probabilities out of range");

  // Hidden world: each signal has a polarity and a per-copy strength.
  Rng world = stream(seed, 0);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> strength(cfg.min_lift, cfg.max_lift);
  std::vector<double> polarity(cfg.signals);
  std::vector<double> lift(cfg.signals * cfg.copies);
  for (std::size_t k = 0; k < cfg.signals; ++k) {
    polarity[k] = (k % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t j = 0; j < cfg.copies; ++j) lift[k * cfg.copies + j] = strength(world);
  }

  auto draw = [&](std::size_t n, Rng rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::bernoulli_distribution flip(cfg.label_noise);
    std::vector<SparseVector> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = coin(rng) ? 1.0 : -1.0;
      std::vector<Entry> e;
      for (std::size_t k = 0; k < cfg.signals; ++k)
        for (std::size_t j = 0; j < cfg.copies; ++j) {
          const std::size_t d = k * cfg.copies + j;
          const double p = cfg.presence * (1.0 + polarity[k] * y * lift[d]);
          if (unif(rng) < std::min(1.0, p)) e.push_back({static_cast<FeatureIndex>(d), 1.0});
        }
      for (std::size_t j = 0; j < cfg.noise_features; ++j)
        if (unif(rng) < cfg.noise_presence)
          e.push_back({static_cast<FeatureIndex>(cfg.signals * cfg.copies + j), 1.0});
      xs.emplace_back(std::move(e));
      ys.push_back(flip(rng) ? -y : y);
    }
    return Dataset(cfg.dim(), std::move(xs), std::move(ys));
  };
  return {draw(n_train, stream(seed, 1)), draw(n_test, stream(seed, 2))};
}

}  // namespace dropsvm
