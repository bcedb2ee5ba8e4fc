#include "dropsvm/wls.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>

#include "dropsvm/errors.hpp"
#include "dropsvm/kernels.hpp"
#include "dropsvm/lbfgs.hpp"

namespace dropsvm {

void WlsProblem::validate() const {
  if (!design) throw std::invalid_argument("WLS problem has no design");
  if (weights.size() != design->rows() || targets.size() != design->rows())
    throw DimensionMismatch("WLS weights/targets must have one entry per example");
  for (std::size_t n = 0; n < weights.size(); ++n) {
    if (!(weights[n] > 0.0) || !std::isfinite(weights[n]))
      throw std::invalid_argument("WLS weights must be positive and finite");
    if (!std::isfinite(targets[n])) throw std::invalid_argument("WLS targets must be finite");
  }
  if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
}

namespace {

void check_model(const WlsProblem& p, const ModelParams& w) {
  if (w.dim() != p.dim())
    throw DimensionMismatch("model dimension " + std::to_string(w.dim()) +
                            " does not match problem dimension " + std::to_string(p.dim()));
}

}  // namespace

ValueGradient wls_objective_and_gradient(const WlsProblem& p, const ModelParams& w) {
  p.validate();
  check_model(p, w);
  ValueGradient out;
  out.gradient.resize(p.design->cols());
  out.value = kernels::wls_value_gradient(*p.design, p.weights, p.targets, p.ridge,
                                          w.coefficients(), out.gradient);
  return out;
}

ModelParams solve_closed_form(const WlsProblem& p) {
  p.validate();
  const auto ne = kernels::normal_equations(*p.design, p.weights, p.targets, p.ridge);
  const Eigen::Index cols = ne.gram.rows();

  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < cols; ++i)
    if (ne.gram(i, i) != 0.0) active.push_back(i);
  const auto m = static_cast<Eigen::Index>(active.size());
  std::vector<double> coef(static_cast<std::size_t>(cols), 0.0);
  if (m == 0) return ModelParams(p.dim(), std::move(coef));

  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd b(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    b[r] = ne.rhs[active[r]];
    for (Eigen::Index c = 0; c < m; ++c) a(r, c) = ne.gram(active[r], active[c]);
  }
  const double diag_scale = std::max(1.0, a.diagonal().mean());
  const double tolerance = 1e-8 * (1.0 + b.norm());

  for (double jitter : {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += jitter * diag_scale;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    Eigen::VectorXd x = llt.solve(b);
    Eigen::VectorXd r = b - a * x;
    for (int refine = 0; refine < 5 && r.norm() > tolerance; ++refine) {
      x += llt.solve(r);
      r = b - a * x;
    }
    if (!x.allFinite() || r.norm() > tolerance) continue;
    for (Eigen::Index k = 0; k < m; ++k) coef[static_cast<std::size_t>(active[k])] = x[k];
    return ModelParams(p.dim(), std::move(coef));
  }
  throw NumericalError("normal equations are singular even with 1e-6 diagonal jitter");
}

QuasiNewtonResult solve_quasi_newton(const WlsProblem& p, const ModelParams& w0, int iters,
                                     double grad_tol) {
  p.validate();
  check_model(p, w0);
  const CorruptedDesign& d = *p.design;
  ObjectiveFn f = [&](std::span<const double> w, std::span<double> g) {
    return kernels::wls_value_gradient(d, p.weights, p.targets, p.ridge, w, g);
  };
  LbfgsOptions opt;
  opt.max_iterations = iters;
  opt.grad_tol = grad_tol;
  const auto c = w0.coefficients();
  auto res = minimize_lbfgs(f, std::vector<double>(c.begin(), c.end()), opt);
  return {ModelParams(p.dim(), std::move(res.x)), res.value, res.iterations, res.converged};
}

ModelParams solve_wls(const WlsProblem& p, const ModelParams& warm, const SolverOptions& opt) {
  const bool dense = opt.kind == SolverKind::Dense ||
                     (opt.kind == SolverKind::Auto && p.design->cols() <= opt.dense_threshold);
  if (dense) return solve_closed_form(p);
  return solve_quasi_newton(p, warm, opt.qn_max_iters, opt.qn_grad_tol).model;
}

}  // namespace dropsvm
