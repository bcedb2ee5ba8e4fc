#include "dropsvm/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dropsvm/errors.hpp"

namespace dropsvm {

ModelParams::ModelParams(std::size_t dim, std::vector<double> coefficients)
    : dim_(dim), coef_(std::move(coefficients)) {
  if (coef_.size() != dim_ + 1)
    throw DimensionMismatch("model of dimension " + std::to_string(dim_) + " needs " +
                            std::to_string(dim_ + 1) + " coefficients, got " +
                            std::to_string(coef_.size()));
  for (double v : coef_)
    if (!std::isfinite(v)) throw NumericalError("model coefficient is not finite");
}

double ModelParams::decision_value(const SparseVector& x) const {
  if (x.extent() > dim_)
    throw DimensionMismatch("feature index " + std::to_string(x.extent() - 1) +
                            " beyond model dimension " + std::to_string(dim_));
  return x.dot(coef_) + coef_[dim_];
}

int predict(const ModelParams& model, const SparseVector& x) {
  return model.decision_value(x) >= 0.0 ? 1 : -1;
}

}  // namespace dropsvm
