#pragma once

#include <functional>
#include <vector>

#include "dropsvm/dataset.hpp"
#include "dropsvm/model.hpp"

namespace dropsvm {

/// One-vs-all: one binary model per class, prediction by largest decision value.
struct OvaModel {
  std::vector<int> classes;
  std::vector<ModelParams> models;

  std::vector<double> decision_values(const SparseVector& x) const;
  /// argmax_k of w_k'x + b_k; ties go to the lowest class index.
  int predict(const SparseVector& x) const;
};

/// Trains the binary problem for class `k` (k -> +1, rest -> -1). Receiving k
/// lets callers vary hyperparameters per class.
using BinaryTrainer = std::function<ModelParams(const Dataset& binary, int k)>;

/// Trains the K binary problems independently (in parallel). Throws
/// ConfigError when K < 2 or some class in 0..K-1 has no examples.
OvaModel train_one_vs_all(const MulticlassDataset& data, const BinaryTrainer& trainer);

}  // namespace dropsvm
