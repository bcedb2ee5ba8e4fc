#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "dropsvm/errors.hpp"
#include "dropsvm/eval.hpp"
#include "dropsvm/multiclass.hpp"
#include "dropsvm/synth.hpp"
#include "dropsvm/trainers.hpp"
#include "oracles.hpp"

using namespace dropsvm;

namespace {

HingeConfig hinge(double c, double ell = 1.0) {
  HingeConfig cfg;
  cfg.c = c;
  cfg.ell = ell;
  return cfg;
}

LogisticConfig logistic(double c) {
  LogisticConfig cfg;
  cfg.c = c;
  return cfg;
}

NoiseSpec random_noise(std::mt19937_64& rng, bool nonnegative) {
  std::uniform_int_distribution<int> kind(0, nonnegative ? 4 : 3);
  std::uniform_real_distribution<double> level(0.05, 0.9);
  switch (kind(rng)) {
    case 0: return NoiseSpec::none();
    case 1: return NoiseSpec::dropout(level(rng));
    case 2: return NoiseSpec::gaussian(level(rng));
    case 3: return NoiseSpec::laplace(level(rng));
    default: return NoiseSpec::poisson();
  }
}

void expect_non_increasing(const std::vector<double>& trace, const std::string& what) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    EXPECT_LE(trace[i], trace[i - 1] + 1e-9 * std::max(1.0, std::abs(trace[i - 1])))
        << what << " at iterate " << i;
}

Dataset flip(const Dataset& d) {
  std::vector<double> y = d.labels();
  for (auto& v : y) v = -v;
  return Dataset(d.dim(), d.examples(), y);
}

}  // namespace

TEST(DropoutSvm, FirstIterateExample) {
  Dataset d(1, {SparseVector({{0, 1.0}})}, {1.0});
  auto cfg = hinge(1.0);
  cfg.fit_offset = false;
  cfg.max_iters = 1;
  auto r = train_dropout_svm(d, NoiseSpec::none(), cfg);
  EXPECT_NEAR(r.model.coefficients()[0], 2.0 / 3.0, 1e-14);
  EXPECT_EQ(r.model.offset(), 0.0);
  EXPECT_EQ(r.state.gammas[0], 1.0);
  EXPECT_EQ(r.state.reweighted_labels[0], 2.0);
}

TEST(DropoutLogistic, FirstEStepUsesSmallZLimit) {
  auto d = oracle::random_dataset(3, 20, 4, 0.5);
  auto cfg = logistic(2.0);
  cfg.max_iters = 1;
  auto r = train_dropout_logistic(d, NoiseSpec::dropout(0.3), cfg);
  for (double g : r.state.gammas) EXPECT_EQ(g, 0.5);
}

TEST(Trainers, MonotoneOnRandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> rows(5, 80), dims(1, 25);
  std::uniform_real_distribution<double> cs(0.05, 20.0), ells(0.2, 2.0), dens(0.1, 1.0);
  for (int t = 0; t < 50; ++t) {
    const bool nonneg = t % 3 == 0;
    auto data = oracle::random_dataset(5000 + t, rows(rng), dims(rng), dens(rng), nonneg);
    auto noise = random_noise(rng, nonneg);
    auto h = hinge(cs(rng), ells(rng));
    auto l = logistic(cs(rng));
    TrainReport rh, rl;
    ASSERT_NO_THROW(rh = train_dropout_svm(data, noise, h)) << t;
    ASSERT_NO_THROW(rl = train_dropout_logistic(data, noise, l)) << t;
    expect_non_increasing(rh.state.objective_trace, "hinge " + std::to_string(t));
    expect_non_increasing(rl.state.objective_trace, "logistic " + std::to_string(t));
  }
}

TEST(Trainers, ZeroNoiseTraceIsExactObjective) {
  auto data = oracle::random_dataset(77, 60, 8, 0.6);
  for (int k = 1; k <= 6; ++k) {
    auto h = hinge(0.8);
    h.max_iters = k;
    auto rh = train_dropout_svm(data, NoiseSpec::none(), h);
    double exact = oracle::svm_objective(data, rh.model.coefficients(), 0.8, 1.0);
    EXPECT_NEAR(rh.state.objective_trace.back(), exact, 1e-12 * exact * 60);
    auto l = logistic(0.8);
    l.max_iters = k;
    auto rl = train_dropout_logistic(data, NoiseSpec::dropout(0.0), l);
    double exact_l = oracle::logistic_objective(data, rl.model.coefficients(), 0.8);
    EXPECT_NEAR(rl.state.objective_trace.back(), exact_l, 1e-12 * exact_l * 60);
  }
}

TEST(Trainers, ZeroNoiseMatchesReferenceSolvers) {
  auto split = make_blobs(120, 10, 6, 9);
  const double c = 0.5;
  auto rh = train_dropout_svm(split.train, NoiseSpec::none(), hinge(c));
  auto opt = oracle::svm_primal_optimum(split.train, c, 1.0);
  double j_star = oracle::svm_objective(split.train, opt, c, 1.0);
  EXPECT_NEAR(rh.state.objective_trace.back(), j_star, 1e-3 * j_star);

  auto rl = train_dropout_logistic(split.train, NoiseSpec::none(), logistic(c));
  auto ref = oracle::logistic_gradient_descent(split.train, c, 200000);
  double l_star = oracle::logistic_objective(split.train, ref, c);
  EXPECT_NEAR(rl.state.objective_trace.back(), l_star, 1e-4 * l_star);
}

TEST(Trainers, FrozenGammaReducesToQuadratic) {
  for (int t = 0; t < 10; ++t) {
    auto data = oracle::random_dataset(40 + t, 50, 10, 0.4);
    const double c = 0.3 + t;
    auto noise = NoiseSpec::dropout(0.1 * t);

    auto h = hinge(c, 0.0);
    h.max_iters = 1;
    auto frozen = train_frozen_gamma_hinge(data, noise, h, 1.0 / c);
    auto quad = train_mcf_quadratic(data, noise, {c, QuadraticForm::Hinge, true, {}});
    for (std::size_t j = 0; j <= data.dim(); ++j)
      EXPECT_NEAR(frozen.model.coefficients()[j], quad.model.coefficients()[j], 1e-10);
    for (double y : frozen.state.reweighted_labels) EXPECT_NEAR(std::abs(y), 1.0, 1e-15);

    auto l = logistic(c);
    l.max_iters = 1;
    auto frozen_l = train_frozen_gamma_logistic(data, noise, l, c / 2);
    auto quad_l = train_mcf_quadratic(data, noise, {c, QuadraticForm::Logistic, true, {}});
    for (std::size_t j = 0; j <= data.dim(); ++j)
      EXPECT_NEAR(frozen_l.model.coefficients()[j], quad_l.model.coefficients()[j], 1e-10);
  }
}

TEST(McfQuadratic, ZeroNoiseIsRidgeRegression) {
  auto data = oracle::random_dataset(5, 40, 6, 0.7);
  const double c = 2.0;
  const std::size_t d = data.dim();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.size()), d + 1);
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t n = 0; n < data.size(); ++n) {
    for (const auto& e : data.example(n).entries()) x(n, e.index) = e.value;
    x(n, d) = 1.0;
    y[n] = data.label(n);
  }
  Eigen::MatrixXd reg = Eigen::MatrixXd::Identity(d + 1, d + 1);
  reg(d, d) = 0.0;
  // ||w||^2 + (c/2) ||Xw - y||^2
  Eigen::VectorXd w = (reg + 0.5 * c * x.transpose() * x).ldlt().solve(0.5 * c * x.transpose() * y);
  auto r = train_mcf_quadratic(data, NoiseSpec::none(), {c, QuadraticForm::Hinge, true, {}});
  for (std::size_t j = 0; j <= d; ++j) EXPECT_NEAR(r.model.coefficients()[j], w[j], 1e-10);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.state.objective_trace.back(), r.state.objective_trace.front());
}

TEST(Trainers, PermutationInvariance) {
  auto data = oracle::random_dataset(88, 70, 12, 0.4);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(1);
  std::shuffle(order.begin(), order.end(), rng);
  auto shuffled = data.subset(order);
  auto noise = NoiseSpec::dropout(0.3);
  auto a = train_dropout_svm(data, noise, hinge(1.0));
  auto b = train_dropout_svm(shuffled, noise, hinge(1.0));
  auto c = train_dropout_logistic(data, noise, logistic(1.0));
  auto e = train_dropout_logistic(shuffled, noise, logistic(1.0));
  for (std::size_t j = 0; j <= data.dim(); ++j) {
    EXPECT_NEAR(a.model.coefficients()[j], b.model.coefficients()[j], 1e-8);
    EXPECT_NEAR(c.model.coefficients()[j], e.model.coefficients()[j], 1e-8);
  }
}

TEST(Trainers, LabelFlipAntisymmetry) {
  auto data = oracle::random_dataset(91, 50, 7, 0.5);
  auto noise = NoiseSpec::dropout(0.4);
  auto a = train_dropout_logistic(data, noise, logistic(1.5));
  auto b = train_dropout_logistic(flip(data), noise, logistic(1.5));
  auto c = train_dropout_svm(data, noise, hinge(1.5));
  auto e = train_dropout_svm(flip(data), noise, hinge(1.5));
  for (std::size_t j = 0; j <= data.dim(); ++j) {
    EXPECT_NEAR(a.model.coefficients()[j], -b.model.coefficients()[j], 1e-10);
    EXPECT_NEAR(c.model.coefficients()[j], -e.model.coefficients()[j], 1e-10);
  }
}

TEST(Trainers, ContinuityAsDropoutVanishes) {
  auto data = oracle::random_dataset(92, 60, 8, 0.5);
  auto base = train_dropout_svm(data, NoiseSpec::none(), hinge(1.0));
  double prev = std::numeric_limits<double>::infinity();
  for (double q : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    auto r = train_dropout_svm(data, NoiseSpec::dropout(q), hinge(1.0));
    double dist = 0;
    for (std::size_t j = 0; j <= data.dim(); ++j)
      dist += std::pow(r.model.coefficients()[j] - base.model.coefficients()[j], 2);
    dist = std::sqrt(dist);
    EXPECT_LT(dist, prev + 1e-6);
    prev = dist;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Trainers, ConfigValidation) {
  auto data = oracle::random_dataset(1, 10, 3, 0.5);
  EXPECT_THROW(train_dropout_svm(data, NoiseSpec::none(), hinge(0.0)), ConfigError);
  EXPECT_THROW(train_dropout_svm(data, NoiseSpec::none(), hinge(1.0, -1.0)), ConfigError);
  EXPECT_THROW(train_dropout_logistic(data, NoiseSpec::none(), logistic(-2.0)), ConfigError);
  Rng rng(1);
  EXPECT_THROW(train_explicit_corruption(data, NoiseSpec::none(), 0, hinge(1.0), rng), ConfigError);
  auto neg = oracle::random_dataset(1, 10, 3, 0.9);
  EXPECT_THROW(train_dropout_svm(neg, NoiseSpec::poisson(), hinge(1.0)), DomainError);
}

TEST(ExplicitCorruption, SingleCleanCopyEqualsZeroNoiseSvm) {
  auto data = oracle::random_dataset(31, 40, 6, 0.5);
  Rng rng(3);
  auto a = train_explicit_corruption(data, NoiseSpec::none(), 1, hinge(1.0), rng);
  auto b = train_dropout_svm(data, NoiseSpec::dropout(0.0), hinge(1.0));
  for (std::size_t j = 0; j <= data.dim(); ++j)
    EXPECT_NEAR(a.model.coefficients()[j], b.model.coefficients()[j], 1e-12);
}

TEST(ExplicitCorruption, ManyCopiesApproachExpectedObjective) {
  auto data = oracle::random_dataset(32, 40, 8, 0.5);
  const double q = 0.5, c = 1.0;
  Rng rng(4);
  auto r = train_explicit_corruption(data, NoiseSpec::dropout(q), 256, hinge(c), rng);
  auto w = r.model.coefficients();
  double implicit = 0;
  for (std::size_t j = 0; j < data.dim(); ++j) implicit += w[j] * w[j];
  for (std::size_t n = 0; n < data.size(); ++n)
    implicit += 2 * c * oracle::expected_hinge_enumerated(w, w[data.dim()], data.example(n), data.label(n), q, 1.0);
  EXPECT_NEAR(r.state.objective_trace.back(), implicit, 0.05 * implicit);
}

TEST(ExplicitCorruption, SeedDeterminism) {
  auto data = oracle::random_dataset(33, 30, 5, 0.5);
  Rng a(8), b(8);
  auto ra = train_explicit_corruption(data, NoiseSpec::dropout(0.3), 4, hinge(1.0), a);
  auto rb = train_explicit_corruption(data, NoiseSpec::dropout(0.3), 4, hinge(1.0), b);
  EXPECT_EQ(ra.model, rb.model);
}

TEST(OneVsAll, BinaryAgreement) {
  auto split = make_blobs(150, 100, 5, 12);
  std::vector<int> classes;
  for (double y : split.train.labels()) classes.push_back(y > 0 ? 1 : 0);
  MulticlassDataset mc(split.train.dim(), split.train.examples(), classes);
  auto fit = [](const Dataset& d, int) {
    return train_dropout_svm(d, NoiseSpec::dropout(0.2), hinge(1.0)).model;
  };
  auto ova = train_one_vs_all(mc, fit);
  auto binary = fit(split.train, 1);
  for (const auto& x : split.test.examples())
    EXPECT_EQ(ova.predict(x) == 1 ? 1 : -1, predict(binary, x));
}

TEST(OneVsAll, TiesGoToLowestClass) {
  OvaModel m{{0, 1, 2}, {ModelParams(2), ModelParams(2), ModelParams(2)}};
  EXPECT_EQ(m.predict(SparseVector({{0, 1.0}})), 0);
}

TEST(OneVsAll, ThreeBlobs) {
  auto split = make_multiclass_blobs(300, 300, 5, 3, 2);
  auto ova = train_one_vs_all(split.train, [](const Dataset& d, int) {
    return train_dropout_svm(d, NoiseSpec::none(), hinge(1.0)).model;
  });
  auto r = evaluate(ova, split.train);
  EXPECT_LT(r.error_rate, 0.05);
  ASSERT_TRUE(r.per_class_errors.has_value());
}

TEST(OneVsAll, MissingClassRejected) {
  MulticlassDataset mc(2, {SparseVector({{0, 1.0}}), SparseVector({{1, 1.0}})}, {0, 2});
  auto fit = [](const Dataset& d, int) { return ModelParams(d.dim()); };
  EXPECT_THROW(train_one_vs_all(mc, fit), ConfigError);
  MulticlassDataset one(2, {SparseVector({{0, 1.0}})}, {0});
  EXPECT_THROW(train_one_vs_all(one, fit), ConfigError);
}
