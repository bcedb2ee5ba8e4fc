#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dropsvm/dataset.hpp"
#include "dropsvm/model.hpp"
#include "dropsvm/multiclass.hpp"

namespace dropsvm {

struct EvalResult {
  double error_rate = 0.0;
  std::size_t n_test = 0;
  std::size_t n_errors = 0;
  /// Misclassified count per true class (multiclass evaluation only).
  std::optional<std::map<int, std::size_t>> per_class_errors;
};

/// Throws std::invalid_argument on an empty test set and DimensionMismatch
/// when a test vector has features beyond the model dimension.
EvalResult evaluate(const ModelParams& model, const Dataset& test);
EvalResult evaluate(const OvaModel& model, const MulticlassDataset& test);

/// Zeroes every stored feature value independently with probability
/// `fraction`. Labels are untouched. Reproducible bit-for-bit per seed.
Dataset delete_features(const Dataset& test, double fraction, std::uint64_t seed);
MulticlassDataset delete_features(const MulticlassDataset& test, double fraction,
                                  std::uint64_t seed);

struct DeletionSchedule {
  std::vector<double> fractions;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GridSpec {
  std::vector<double> c_grid{1.0};
  /// Noise-level grid (dropout q, Gaussian sigma2, ...).
  std::vector<double> q_grid{0.0};
  int folds = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Fits a binary model at hyperparameters (c, q).
using GridTrainer = std::function<ModelParams(const Dataset& train, double c, double q)>;

struct CvCell {
  double c = 0.0;
  double q = 0.0;
  std::vector<double> fold_errors;
  double mean_error = 0.0;
};

struct CvResult {
  double best_c = 0.0;
  double best_q = 0.0;
  double best_error = 0.0;
  std::vector<CvCell> table;  // q-major, then c, in grid order
};

/// Stratified k-fold assignment: fold id per example.
std::vector<int> stratified_folds(const Dataset& data, int folds, std::uint64_t seed);

/// Mean stratified k-fold error per grid point; the best point has minimal
/// mean error with ties broken toward smaller q, then smaller c. Throws
/// ConfigError when folds > N or a fold lacks one of the classes.
CvResult cross_validate(const GridTrainer& trainer, const Dataset& data, const GridSpec& grid);

struct NamedTrainer {
  std::string name;
  GridTrainer fit;
  /// Replaces GridSpec::q_grid for this trainer (e.g. {0} for a plain SVM).
  std::optional<std::vector<double>> q_grid;
};

struct NightmareRow {
  std::string trainer;
  double fraction = 0.0;
  double c = 0.0;
  double q = 0.0;
  double validation_error = 0.0;
  EvalResult result;
};

/// Fraction of the training set held out for model selection.
inline constexpr double kNightmareValidationShare = 0.2;

/// Test-time feature deletion protocol. For each fraction, every trainer's
/// (c, q) is chosen on a stratified 20% validation split whose features are
/// deleted at that fraction, the model is refit on all training data and
/// evaluated on the test set deleted at the same fraction. Rows are ordered
/// fraction-major, then trainer.
std::vector<NightmareRow> nightmare_curve(const std::vector<NamedTrainer>& trainers,
                                          const Dataset& train, const Dataset& test,
                                          const DeletionSchedule& sched, const GridSpec& grid);

}  // namespace dropsvm
