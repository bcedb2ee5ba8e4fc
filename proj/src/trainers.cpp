#include "dropsvm/trainers.hpp"

#include <chrono>

#include "dropsvm/errors.hpp"
#include "dropsvm/irls.hpp"
#include "dropsvm/wls.hpp"

namespace dropsvm {

TrainingSet make_training_set(const Dataset& data, const NoiseSpec& noise, bool fit_offset,
                              std::vector<double> loss_weights) {
  if (loss_weights.empty()) loss_weights.assign(data.size(), 1.0);
  if (loss_weights.size() != data.size())
    throw DimensionMismatch("loss weights must have one entry per example");
  std::vector<CorruptionMoments> rows;
  rows.reserve(data.size());
  for (const auto& x : data.examples()) {
    rows.push_back(moments(noise, x, data.dim()));
    if (fit_offset) append_offset(rows.back(), data.dim());
  }
  TrainingSet ts;
  ts.design = std::make_shared<const CorruptedDesign>(rows, data.dim() + 1);
  ts.labels = data.labels();
  ts.loss_weights = std::move(loss_weights);
  ts.dim = data.dim();
  return ts;
}

TrainReport train_dropout_svm(const Dataset& data, const NoiseSpec& noise, const HingeConfig& cfg) {
  cfg.validate();
  const auto ts = make_training_set(data, noise, cfg.fit_offset);
  return run_irls(ts, HingeRule{cfg.c, cfg.ell, cfg.floor}, cfg);
}

TrainReport train_dropout_logistic(const Dataset& data, const NoiseSpec& noise,
                                   const LogisticConfig& cfg) {
  cfg.validate();
  const auto ts = make_training_set(data, noise, cfg.fit_offset);
  return run_irls(ts, LogisticRule{cfg.c, cfg.floor}, cfg);
}

TrainReport train_frozen_gamma_hinge(const Dataset& data, const NoiseSpec& noise,
                                     const HingeConfig& cfg, double gamma) {
  cfg.validate();
  if (!(gamma > 0.0)) throw ConfigError("frozen gamma must be > 0");
  const auto ts = make_training_set(data, noise, cfg.fit_offset);
  return run_irls(ts, HingeRule{cfg.c, cfg.ell, cfg.floor}, cfg, gamma);
}

TrainReport train_frozen_gamma_logistic(const Dataset& data, const NoiseSpec& noise,
                                        const LogisticConfig& cfg, double gamma) {
  cfg.validate();
  if (!(gamma > 0.0)) throw ConfigError("frozen gamma must be > 0");
  const auto ts = make_training_set(data, noise, cfg.fit_offset);
  return run_irls(ts, LogisticRule{cfg.c, cfg.floor}, cfg, gamma);
}

TrainReport train_mcf_quadratic(const Dataset& data, const NoiseSpec& noise,
                                const QuadraticConfig& cfg) {
  if (!(cfg.c > 0.0)) throw ConfigError("c must be > 0");
  const auto start = std::chrono::steady_clock::now();
  const auto ts = make_training_set(data, noise, cfg.fit_offset);
  const bool hinge = cfg.form == QuadraticForm::Hinge;
  // Hinge form: gamma = 1/c, ell = 0 -> a_n = c/2. Logistic form: gamma = c/2 -> a_n = c/4.
  const double weight = hinge ? 0.5 * cfg.c : 0.25 * cfg.c;
  WlsProblem problem{ts.design, std::vector<double>(data.size(), weight), data.labels(), 1.0};

  TrainReport report;
  const ModelParams zero(data.dim());
  report.state.objective_trace.push_back(wls_objective_and_gradient(problem, zero).value);
  report.model = solve_wls(problem, zero, cfg.solver);
  report.state.objective_trace.push_back(wls_objective_and_gradient(problem, report.model).value);
  report.state.gammas.assign(data.size(), hinge ? 1.0 / cfg.c : 0.5 * cfg.c);
  report.state.reweighted_labels = data.labels();
  report.state.iteration = 1;
  report.converged = true;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

TrainReport train_explicit_corruption(const Dataset& data, const NoiseSpec& noise, int copies,
                                      const HingeConfig& cfg, Rng& rng) {
  if (copies < 1) throw ConfigError("number of corrupted copies must be >= 1");
  cfg.validate();
  std::vector<SparseVector> xs;
  std::vector<double> ys;
  xs.reserve(data.size() * static_cast<std::size_t>(copies));
  ys.reserve(xs.capacity());
  for (std::size_t n = 0; n < data.size(); ++n)
    for (int m = 0; m < copies; ++m) {
      xs.push_back(sample(noise, data.example(n), data.dim(), rng));
      ys.push_back(data.label(n));
    }
  const Dataset corrupted(data.dim(), std::move(xs), std::move(ys));
  std::vector<double> lw(corrupted.size(), 1.0 / copies);
  const auto ts = make_training_set(corrupted, NoiseSpec::none(), cfg.fit_offset, std::move(lw));
  return run_irls(ts, HingeRule{cfg.c, cfg.ell, cfg.floor}, cfg);
}

std::vector<std::string> trainer_names() {
  return {"dropout-svm", "dropout-logistic", "mcf-quadratic", "explicit"};
}

}  // namespace dropsvm
