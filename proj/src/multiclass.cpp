#include "dropsvm/multiclass.hpp"

#include <exception>

#include "dropsvm/errors.hpp"

namespace dropsvm {

std::vector<double> OvaModel::decision_values(const SparseVector& x) const {
  std::vector<double> v;
  v.reserve(models.size());
  for (const auto& m : models) v.push_back(m.decision_value(x));
  return v;
}

int OvaModel::predict(const SparseVector& x) const {
  const auto v = decision_values(x);
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > v[best]) best = k;
  return classes.at(best);
}

OvaModel train_one_vs_all(const MulticlassDataset& data, const BinaryTrainer& trainer) {
  const int k_classes = data.num_classes();
  if (k_classes < 2) throw ConfigError("one-vs-all needs at least two classes");
  std::vector<std::size_t> counts(static_cast<std::size_t>(k_classes), 0);
  for (int k : data.classes()) ++counts[static_cast<std::size_t>(k)];
  for (int k = 0; k < k_classes; ++k)
    if (counts[static_cast<std::size_t>(k)] == 0)
      throw ConfigError("class " + std::to_string(k) + " has no training examples");

  OvaModel out;
  out.models.resize(static_cast<std::size_t>(k_classes));
  for (int k = 0; k < k_classes; ++k) out.classes.push_back(k);

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k_classes));
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < k_classes; ++k) {
    try {
      out.models[static_cast<std::size_t>(k)] = trainer(data.one_vs_rest(k), k);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace dropsvm
