#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dropsvm/augmentation.hpp"
#include "dropsvm/dataset.hpp"
#include "dropsvm/design.hpp"
#include "dropsvm/model.hpp"
#include "dropsvm/noise.hpp"

namespace dropsvm {

/// Per-example state of the last IRLS E-step plus the objective history.
struct IRLSState {
  std::vector<double> gammas;
  std::vector<double> reweighted_labels;
  int iteration = 0;
  /// Collapsed objective at w_0, w_1, ... (one entry per visited iterate).
  std::vector<double> objective_trace;
};

struct TrainReport {
  ModelParams model;
  IRLSState state;
  bool converged = false;
  double wall_time = 0.0;
};

/// Corruption moments of a dataset laid out for the kernels, plus labels and
/// per-example loss weights.
struct TrainingSet {
  std::shared_ptr<const CorruptedDesign> design;
  std::vector<double> labels;
  std::vector<double> loss_weights;
  std::size_t dim = 0;
};

/// Computes moments for every example; the offset column carries mean 1 and
/// variance 0 when `fit_offset`. Empty `loss_weights` means all ones.
TrainingSet make_training_set(const Dataset& data, const NoiseSpec& noise, bool fit_offset,
                              std::vector<double> loss_weights = {});

/// Dropout SVM: IRLS on the expected hinge loss, starting from w = 0.
TrainReport train_dropout_svm(const Dataset& data, const NoiseSpec& noise, const HingeConfig& cfg);

/// Dropout logistic regression: IRLS with Polya-Gamma re-weights, w = 0 start.
TrainReport train_dropout_logistic(const Dataset& data, const NoiseSpec& noise,
                                   const LogisticConfig& cfg);

/// Hinge IRLS with every gamma_n frozen at `gamma` (one M-step by default
/// through cfg.max_iters). The monotonicity check is off in this mode.
TrainReport train_frozen_gamma_hinge(const Dataset& data, const NoiseSpec& noise,
                                     const HingeConfig& cfg, double gamma);
TrainReport train_frozen_gamma_logistic(const Dataset& data, const NoiseSpec& noise,
                                        const LogisticConfig& cfg, double gamma);

enum class QuadraticForm { Hinge, Logistic };

struct QuadraticConfig {
  double c = 1.0;
  QuadraticForm form = QuadraticForm::Hinge;
  bool fit_offset = true;
  SolverOptions solver;
};

/// Expected quadratic loss on +-1 targets, solved in one shot:
///   hinge form:    ||w||^2 + (c/2) sum_n E[(w'x~_n - y_n)^2]
///   logistic form: ||w||^2 + (c/4) sum_n E[(w'x~_n - y_n)^2]
TrainReport train_mcf_quadratic(const Dataset& data, const NoiseSpec& noise,
                                const QuadraticConfig& cfg);

/// Draws `copies` corrupted versions of every example, weights each by
/// 1/copies and trains the uncorrupted hinge IRLS on the enlarged set.
TrainReport train_explicit_corruption(const Dataset& data, const NoiseSpec& noise, int copies,
                                      const HingeConfig& cfg, Rng& rng);

std::vector<std::string> trainer_names();

}  // namespace dropsvm
