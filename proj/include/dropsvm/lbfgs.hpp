#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dropsvm {

/// f(x), writing grad f(x) into the second argument.
using ObjectiveFn = std::function<double(std::span<const double>, std::span<double>)>;

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 1000;
  /// Stop when ||grad||_inf <= grad_tol * (1 + |f|).
  double grad_tol = 1e-8;
  // Strong Wolfe constants.
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search = 40;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_inf_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Limited-memory BFGS with a strong-Wolfe bracketing/zoom line search.
/// Accepted steps never increase f. Throws NumericalError if f or its
/// gradient becomes non-finite at an evaluated point.
LbfgsResult minimize_lbfgs(const ObjectiveFn& f, std::vector<double> x0, const LbfgsOptions& opt);

}  // namespace dropsvm
