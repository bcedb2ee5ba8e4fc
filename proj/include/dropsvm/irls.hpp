#pragma once

// Shared IRLS skeleton. A loss enters only through a rule object that says
// how to form the per-example moments, the re-weight gamma_n, the
// re-weighted label and the least-squares weight, and how to evaluate the
// collapsed objective:
//
//            gamma_n                      label            weight a_n
//   hinge    1 / (c sqrt(E[zeta^2]))     (ell + 1/(c g)) y  c^2 g / 2
//   logistic (c / 2z) tanh(z / 2)         c y / (2 g)        g / 2
//
// Everything else, including the M-step solver, is common.

#include <chrono>
#include <cmath>
#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dropsvm/augmentation.hpp"
#include "dropsvm/errors.hpp"
#include "dropsvm/kernels.hpp"
#include "dropsvm/trainers.hpp"
#include "dropsvm/wls.hpp"

namespace dropsvm {

template <class Rule>
concept IrlsRule = requires(const Rule& r, double v, const ExampleMoments& m, const ModelParams& w,
                            std::span<const ExampleMoments> ms, std::span<const double> xs) {
  { r.moments(v, v, v) } -> std::same_as<ExampleMoments>;
  { r.gamma(m) } -> std::same_as<double>;
  { r.target(v, v) } -> std::same_as<double>;
  { r.weight(v) } -> std::same_as<double>;
  { r.objective(w, ms, xs, xs) } -> std::same_as<double>;
};

struct HingeRule {
  double c = 1.0;
  double ell = 1.0;
  double floor = 1e-12;

  ExampleMoments moments(double linear, double noise, double y) const {
    return hinge_moments_from(linear, noise, y, ell);
  }
  double gamma(const ExampleMoments& m) const { return gamma_hinge(m.second, c, floor); }
  double target(double g, double y) const { return (ell + 1.0 / (c * g)) * y; }
  double weight(double g) const { return 0.5 * c * c * g; }
  double objective(const ModelParams& w, std::span<const ExampleMoments> m,
                   std::span<const double> /*labels*/, std::span<const double> lw) const {
    return collapsed_hinge_objective(w, m, c, lw);
  }
};

struct LogisticRule {
  double c = 1.0;
  double floor = 1e-12;

  ExampleMoments moments(double linear, double noise, double /*y*/) const {
    return logistic_moments_from(linear, noise);
  }
  double gamma(const ExampleMoments& m) const { return gamma_logistic(m.second, c, floor); }
  double target(double g, double y) const { return c * y / (2.0 * g); }
  double weight(double g) const { return 0.5 * g; }
  double objective(const ModelParams& w, std::span<const ExampleMoments> m,
                   std::span<const double> labels, std::span<const double> lw) const {
    return collapsed_logistic_objective(w, m, labels, c, lw);
  }
};

static_assert(IrlsRule<HingeRule>);
static_assert(IrlsRule<LogisticRule>);

/// Alternates the closed-form E-step with an expected weighted least-squares
/// M-step, starting from w = 0, until the collapsed objective changes by
/// less than `s.tol` (relative) or `s.max_iters` M-steps have run. With
/// `frozen_gamma` set every gamma_n is fixed at that value.
///
/// Throws InvariantViolation if the collapsed objective increases by more
/// than 1e-9 * max(1, |J|) between iterates (never checked with frozen gammas).
template <IrlsRule Rule>
TrainReport run_irls(const TrainingSet& ts, const Rule& rule, const IrlsSettings& s,
                     std::optional<double> frozen_gamma = std::nullopt) {
  const auto start = std::chrono::steady_clock::now();
  const CorruptedDesign& design = *ts.design;
  const std::size_t n_rows = design.rows();

  TrainReport report;
  report.model = ModelParams(ts.dim);
  IRLSState& state = report.state;
  state.gammas.assign(n_rows, 0.0);
  state.reweighted_labels.assign(n_rows, 0.0);

  std::vector<ExampleMoments> moments(n_rows);
  WlsProblem problem{ts.design, std::vector<double>(n_rows), std::vector<double>(n_rows), 1.0};

  for (int it = 0;; ++it) {
    const auto rm = kernels::row_moments(design, report.model.coefficients());
    const auto n_signed = static_cast<std::ptrdiff_t>(n_rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < n_signed; ++n)
      moments[n] = rule.moments(rm.linear[n], rm.noise[n], ts.labels[n]);

    const double objective = rule.objective(report.model, moments, ts.labels, ts.loss_weights);
    if (!std::isfinite(objective)) throw NumericalError("IRLS objective is not finite");

    if (!state.objective_trace.empty()) {
      const double prev = state.objective_trace.back();
      if (!frozen_gamma && objective > prev + 1e-9 * std::max(1.0, std::abs(prev)))
        throw InvariantViolation("collapsed objective increased from " + std::to_string(prev) +
                                 " to " + std::to_string(objective) + " at iteration " +
                                 std::to_string(it));
      state.objective_trace.push_back(objective);
      if (std::abs(prev - objective) <= s.tol * std::max(std::abs(prev), 1e-300)) {
        report.converged = true;
        break;
      }
    } else {
      state.objective_trace.push_back(objective);
    }
    if (it >= s.max_iters) break;

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < n_signed; ++n) {
      const double g = frozen_gamma ? *frozen_gamma : rule.gamma(moments[n]);
      state.gammas[n] = g;
      state.reweighted_labels[n] = rule.target(g, ts.labels[n]);
      problem.weights[n] = ts.loss_weights[n] * rule.weight(g);
      problem.targets[n] = state.reweighted_labels[n];
    }

    ModelParams next = solve_wls(problem, report.model, s.solver);
    if (!frozen_gamma) {
      // The M-step must not increase the surrogate; roundoff in a dense
      // solve near the fixed point can.
      const double before = wls_objective_and_gradient(problem, report.model).value;
      const double after = wls_objective_and_gradient(problem, next).value;
      if (after > before) next = report.model;
    }
    report.model = std::move(next);
    state.iteration = it + 1;
  }

  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dropsvm
