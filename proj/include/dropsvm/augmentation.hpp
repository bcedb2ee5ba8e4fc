#pragma once

// E-step mathematics for the data-augmented hinge and logistic losses.
//
// Hinge: zeta_n = ell - y_n w'x~_n. The augmentation variable has posterior
// GIG(1/2, 1, c^2 E[zeta^2]) and the M-step only needs gamma = E[1/lambda].
// Logistic: omega_n = w'x~_n with a Polya-Gamma PG(c, sqrt(E[omega^2]))
// posterior; the M-step needs gamma = E[lambda].
//
// The monitored objectives are the variational bounds evaluated at the
// optimal q(lambda), which have closed forms:
//   hinge:    ||w||^2 + c sum_n (E[zeta_n] + sqrt(E[zeta_n^2]))
//   logistic: ||w||^2 + c sum_n (log 2 + log cosh(z_n / 2) - y_n E[omega_n] / 2)
// with z_n = sqrt(E[omega_n^2]). Both reduce to the exact regularized
// hinge/logistic objectives when there is no corruption.

#include <span>

#include "dropsvm/model.hpp"
#include "dropsvm/noise.hpp"
#include "dropsvm/wls.hpp"

namespace dropsvm {

/// First and second moment of zeta_n (hinge) or omega_n (logistic) under p(x~|x).
struct ExampleMoments {
  double first = 0.0;
  double second = 0.0;
};

/// Settings shared by both IRLS trainers.
struct IrlsSettings {
  int max_iters = 200;
  /// Relative change of the collapsed objective that counts as converged.
  double tol = 1e-6;
  /// Lower bound on second moments before taking square roots.
  double floor = 1e-12;
  bool fit_offset = true;
  SolverOptions solver;

  void validate() const;
};

struct HingeConfig : IrlsSettings {
  double c = 1.0;
  /// Margin cost: the hinge is max(0, ell - y f(x)).
  double ell = 1.0;

  void validate() const;
};

struct LogisticConfig : IrlsSettings {
  double c = 1.0;

  void validate() const;
};

/// Moments from the precomputed scalars w'E[x~] and sum_d V_d w_d^2.
inline ExampleMoments hinge_moments_from(double linear, double noise, double y, double ell) noexcept {
  const double first = ell - y * linear;
  return {first, first * first + noise};
}

inline ExampleMoments logistic_moments_from(double linear, double noise) noexcept {
  return {linear, linear * linear + noise};
}

/// E[zeta] = ell - y w'mu and E[zeta^2] = w'(mu mu' + V)w - 2 ell y w'mu + ell^2.
/// Throws DimensionMismatch when `mom` references coordinates beyond w.
ExampleMoments hinge_moments(std::span<const double> w, const CorruptionMoments& mom, double y,
                             double ell);

/// E[omega] = w'mu and E[omega^2] = w'(mu mu' + V)w.
ExampleMoments logistic_moments(std::span<const double> w, const CorruptionMoments& mom);

/// E[1/lambda] under GIG(1/2, 1, c^2 s): 1 / (c sqrt(max(s, floor))).
double gamma_hinge(double second, double c, double floor = 1e-12) noexcept;

/// E[lambda] under PG(c, z), z = sqrt(s): (c / 2z) tanh(z / 2), with the
/// z -> 0 limit c / 4 for s below `floor`.
double gamma_logistic(double second, double c, double floor = 1e-12) noexcept;

/// log(cosh(t)) without overflow for large |t|.
double log_cosh(double t) noexcept;

/// ||w||^2 excluding the offset coordinate.
double regularizer(const ModelParams& model) noexcept;

// Objectives below take optional per-example loss weights (empty = all 1).

double collapsed_hinge_objective(const ModelParams& model, std::span<const ExampleMoments> moments,
                                 double c, std::span<const double> loss_weights = {});

double collapsed_logistic_objective(const ModelParams& model,
                                    std::span<const ExampleMoments> moments,
                                    std::span<const double> labels, double c,
                                    std::span<const double> loss_weights = {});

/// ||w||^2 + sum_n [c E[zeta] + (c^2/2) gamma E[zeta^2] + 1/(2 gamma)]; upper
/// bounds the collapsed hinge objective with equality at gamma = gamma_hinge.
/// Throws std::invalid_argument on a non-positive gamma.
double surrogate_hinge_objective(const ModelParams& model, std::span<const ExampleMoments> moments,
                                 std::span<const double> gammas, double c,
                                 std::span<const double> loss_weights = {});

/// Logistic counterpart: ||w||^2 + sum_n [c log 2 - (c/2) y E[omega]
/// + gamma E[omega^2] / 2 - h(gamma)], where h is the concave conjugate of
/// t -> c log cosh(sqrt(t)/2). Requires 0 < gamma <= c/4.
double surrogate_logistic_objective(const ModelParams& model,
                                    std::span<const ExampleMoments> moments,
                                    std::span<const double> labels, std::span<const double> gammas,
                                    double c, std::span<const double> loss_weights = {});

}  // namespace dropsvm
