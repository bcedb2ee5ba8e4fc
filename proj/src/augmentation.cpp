#include "dropsvm/augmentation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dropsvm/errors.hpp"
#include "dropsvm/kernels.hpp"

namespace dropsvm {

void IrlsSettings::validate() const {
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be > 0");
  if (!(floor > 0.0)) throw ConfigError("second-moment floor must be > 0");
}

void HingeConfig::validate() const {
  IrlsSettings::validate();
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("c must be > 0");
  // ell = 0 is admitted for the quadratic-loss reduction.
  if (!(ell >= 0.0) || !std::isfinite(ell)) throw ConfigError("ell must be >= 0");
}

void LogisticConfig::validate() const {
  IrlsSettings::validate();
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("c must be > 0");
}

namespace {

std::pair<double, double> linear_and_noise(std::span<const double> w, const CorruptionMoments& mom) {
  double lin = 0.0, noise = 0.0;
  for (const auto& e : mom.entries) {
    if (e.index >= w.size())
      throw DimensionMismatch("moment index " + std::to_string(e.index) +
                              " beyond weight vector of size " + std::to_string(w.size()));
    lin += e.mean * w[e.index];
    noise += e.variance * w[e.index] * w[e.index];
  }
  if (mom.uniform_variance != 0.0) {
    const std::size_t limit = std::min(mom.uniform_limit, w.size());
    double wsq = 0.0;
    for (std::size_t d = 0; d < limit; ++d) wsq += w[d] * w[d];
    noise += mom.uniform_variance * wsq;
  }
  return {lin, noise};
}

double loss_weight(std::span<const double> lw, std::size_t n) { return lw.empty() ? 1.0 : lw[n]; }

void check_lengths(std::size_t n, std::span<const double> other, const char* what) {
  if (!other.empty() && other.size() != n)
    throw DimensionMismatch(std::string(what) + " must have one entry per example");
}

// Concave conjugate of t -> c log cosh(sqrt(t)/2) at slope gamma/2:
// h(gamma) = min_t [gamma t / 2 - c log cosh(sqrt(t) / 2)].
double logistic_conjugate(double gamma, double c) {
  if (gamma >= 0.25 * c) return 0.0;
  // gamma_logistic(z^2) is decreasing in z and bounded by c / (2z).
  double lo = 0.0, hi = c / (2.0 * gamma);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_logistic(mid * mid, c) > gamma)
      lo = mid;
    else
      hi = mid;
  }
  const double z = 0.5 * (lo + hi);
  return 0.5 * gamma * z * z - c * log_cosh(0.5 * z);
}

}  // namespace

ExampleMoments hinge_moments(std::span<const double> w, const CorruptionMoments& mom, double y,
                             double ell) {
  const auto [lin, noise] = linear_and_noise(w, mom);
  return hinge_moments_from(lin, noise, y, ell);
}

ExampleMoments logistic_moments(std::span<const double> w, const CorruptionMoments& mom) {
  const auto [lin, noise] = linear_and_noise(w, mom);
  return logistic_moments_from(lin, noise);
}

double gamma_hinge(double second, double c, double floor) noexcept {
  return 1.0 / (c * std::sqrt(std::max(second, floor)));
}

double gamma_logistic(double second, double c, double floor) noexcept {
  if (second < floor) return 0.25 * c;
  const double z = std::sqrt(second);
  return c * std::tanh(0.5 * z) / (2.0 * z);
}

double log_cosh(double t) noexcept {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double regularizer(const ModelParams& model) noexcept {
  double s = 0.0;
  for (double v : model.weights()) s += v * v;
  return s;
}

double collapsed_hinge_objective(const ModelParams& model, std::span<const ExampleMoments> moments,
                                 double c, std::span<const double> loss_weights) {
  check_lengths(moments.size(), loss_weights, "loss weights");
  std::vector<double> terms(moments.size());
  for (std::size_t n = 0; n < moments.size(); ++n)
    terms[n] = loss_weight(loss_weights, n) * (moments[n].first + std::sqrt(moments[n].second));
  return regularizer(model) + c * kernels::ordered_sum(terms);
}

double collapsed_logistic_objective(const ModelParams& model,
                                    std::span<const ExampleMoments> moments,
                                    std::span<const double> labels, double c,
                                    std::span<const double> loss_weights) {
  check_lengths(moments.size(), loss_weights, "loss weights");
  if (labels.size() != moments.size()) throw DimensionMismatch("one label per example required");
  std::vector<double> terms(moments.size());
  for (std::size_t n = 0; n < moments.size(); ++n) {
    const double z = std::sqrt(moments[n].second);
    terms[n] = loss_weight(loss_weights, n) *
               (std::numbers::ln2 + log_cosh(0.5 * z) - 0.5 * labels[n] * moments[n].first);
  }
  return regularizer(model) + c * kernels::ordered_sum(terms);
}

double surrogate_hinge_objective(const ModelParams& model, std::span<const ExampleMoments> moments,
                                 std::span<const double> gammas, double c,
                                 std::span<const double> loss_weights) {
  check_lengths(moments.size(), loss_weights, "loss weights");
  if (gammas.size() != moments.size()) throw DimensionMismatch("one gamma per example required");
  std::vector<double> terms(moments.size());
  for (std::size_t n = 0; n < moments.size(); ++n) {
    const double g = gammas[n];
    if (!(g > 0.0)) throw std::invalid_argument("re-weights must be positive");
    terms[n] = loss_weight(loss_weights, n) *
               (c * moments[n].first + 0.5 * c * c * g * moments[n].second + 0.5 / g);
  }
  return regularizer(model) + kernels::ordered_sum(terms);
}

double surrogate_logistic_objective(const ModelParams& model,
                                    std::span<const ExampleMoments> moments,
                                    std::span<const double> labels, std::span<const double> gammas,
                                    double c, std::span<const double> loss_weights) {
  check_lengths(moments.size(), loss_weights, "loss weights");
  if (gammas.size() != moments.size() || labels.size() != moments.size())
    throw DimensionMismatch("one gamma and label per example required");
  std::vector<double> terms(moments.size());
  for (std::size_t n = 0; n < moments.size(); ++n) {
    const double g = gammas[n];
    if (!(g > 0.0)) throw std::invalid_argument("re-weights must be positive");
    terms[n] = loss_weight(loss_weights, n) *
               (c * std::numbers::ln2 - 0.5 * c * labels[n] * moments[n].first +
                0.5 * g * moments[n].second - logistic_conjugate(g, c));
  }
  return regularizer(model) + kernels::ordered_sum(terms);
}

}  // namespace dropsvm
