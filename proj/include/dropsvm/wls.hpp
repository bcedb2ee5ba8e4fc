#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "dropsvm/design.hpp"
#include "dropsvm/model.hpp"

namespace dropsvm {

/// Expected re-weighted least squares:
///   ridge * ||w_{-offset}||^2 + sum_n a_n E[(w'x~_n - t_n)^2]
/// with E[(w'x~ - t)^2] = (w'mu - t)^2 + sum_d V_d w_d^2.
struct WlsProblem {
  std::shared_ptr<const CorruptedDesign> design;
  std::vector<double> weights;  // a_n > 0
  std::vector<double> targets;  // t_n
  double ridge = 1.0;

  /// Model dimension D (design columns minus the offset).
  std::size_t dim() const noexcept { return design->cols() - 1; }
  void validate() const;
};

struct ValueGradient {
  double value = 0.0;
  std::vector<double> gradient;
};

ValueGradient wls_objective_and_gradient(const WlsProblem& p, const ModelParams& w);

/// Factorizes the normal equations. Columns with an all-zero diagonal (no
/// data, no ridge, e.g. an unfitted offset) are pinned to 0. On
/// factorization failure a diagonal jitter is escalated from 1e-10 to 1e-6
/// (scaled by the mean diagonal); NumericalError if that still fails.
ModelParams solve_closed_form(const WlsProblem& p);

struct QuasiNewtonResult {
  ModelParams model;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

QuasiNewtonResult solve_quasi_newton(const WlsProblem& p, const ModelParams& w0, int iters,
                                     double grad_tol);

enum class SolverKind { Auto, Dense, QuasiNewton };

struct SolverOptions {
  SolverKind kind = SolverKind::Auto;
  /// Auto picks the dense solve while D + 1 <= dense_threshold.
  std::size_t dense_threshold = 2000;
  int qn_max_iters = 1000;
  double qn_grad_tol = 1e-9;
};

/// M-step dispatch; `warm` is the quasi-Newton starting point.
ModelParams solve_wls(const WlsProblem& p, const ModelParams& warm, const SolverOptions& opt);

}  // namespace dropsvm
