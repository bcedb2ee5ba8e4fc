#include <gtest/gtest.h>

#include <atomic>

#include "dropsvm/errors.hpp"
#include "dropsvm/eval.hpp"
#include "dropsvm/synth.hpp"
#include "dropsvm/trainers.hpp"
#include "oracles.hpp"

using namespace dropsvm;

namespace {

Dataset four_points() {
  return Dataset(1,
                 {SparseVector({{0, 1.0}}), SparseVector({{0, 2.0}}), SparseVector({{0, -1.0}}),
                  SparseVector({{0, 0.5}})},
                 {1.0, 1.0, -1.0, -1.0});
}

ModelParams svm(const Dataset& d, double c, double q) {
  HingeConfig cfg;
  cfg.c = c;
  return train_dropout_svm(d, NoiseSpec::dropout(q), cfg).model;
}

}  // namespace

TEST(Evaluate, Examples) {
  auto d = four_points();
  // sign(x): the last point (0.5, label -1) is the only error.
  auto r = evaluate(ModelParams(1, {1.0, 0.0}), d);
  EXPECT_EQ(r.n_errors, 1u);
  EXPECT_DOUBLE_EQ(r.error_rate, 0.25);
  // sign(x - 0.75) separates the set.
  EXPECT_EQ(evaluate(ModelParams(1, {1.0, -0.75}), d).error_rate, 0.0);
  // Constant prediction on balanced labels.
  EXPECT_EQ(evaluate(ModelParams(1, {0.0, 1.0}), d).error_rate, 0.5);
}

TEST(Evaluate, ErrorCountIsInteger) {
  auto split = make_blobs(50, 37, 4, 1);
  auto m = svm(split.train, 1.0, 0.0);
  auto r = evaluate(m, split.test);
  EXPECT_EQ(r.n_test, 37u);
  EXPECT_DOUBLE_EQ(r.error_rate * r.n_test, static_cast<double>(r.n_errors));
}

TEST(Evaluate, Errors) {
  EXPECT_THROW(evaluate(ModelParams(1), Dataset(3, {SparseVector({{2, 1.0}})}, {1.0})),
               DimensionMismatch);
}

TEST(DeleteFeatures, Extremes) {
  auto split = make_redundant_sparse(30, 10, 5);
  EXPECT_EQ(delete_features(split.train, 0.0, 1), split.train);
  auto all = delete_features(split.train, 1.0, 1);
  for (const auto& x : all.examples()) EXPECT_TRUE(x.empty());
  EXPECT_EQ(all.labels(), split.train.labels());
  EXPECT_THROW(delete_features(split.train, 1.5, 1), ConfigError);
}

TEST(DeleteFeatures, DeterministicAndProportional) {
  auto split = make_redundant_sparse(400, 10, 6);
  auto a = delete_features(split.train, 0.5, 42);
  EXPECT_EQ(a, delete_features(split.train, 0.5, 42));
  EXPECT_NE(a, delete_features(split.train, 0.5, 43));
  std::size_t before = 0, after = 0;
  for (const auto& x : split.train.examples()) before += x.nnz();
  for (const auto& x : a.examples()) after += x.nnz();
  double kept = static_cast<double>(after) / static_cast<double>(before);
  EXPECT_NEAR(kept, 0.5, 4 * std::sqrt(0.25 / before));
}

TEST(DeletionSchedule, Validation) {
  EXPECT_THROW((DeletionSchedule{{0.5, 0.1}, 0}.validate()), ConfigError);
  EXPECT_THROW((DeletionSchedule{{}, 0}.validate()), ConfigError);
  EXPECT_NO_THROW((DeletionSchedule{{0.0, 1.0}, 0}.validate()));
}

TEST(StratifiedFolds, BalancedPerClass) {
  auto split = make_blobs(103, 1, 3, 7);
  auto f = stratified_folds(split.train, 5, 3);
  std::map<int, std::pair<int, int>> counts;
  for (std::size_t n = 0; n < f.size(); ++n)
    (split.train.label(n) > 0 ? counts[f[n]].first : counts[f[n]].second)++;
  EXPECT_EQ(counts.size(), 5u);
  int pmin = 1 << 30, pmax = 0;
  for (auto& [k, c] : counts) {
    pmin = std::min(pmin, c.first + c.second);
    pmax = std::max(pmax, c.first + c.second);
  }
  EXPECT_LE(pmax - pmin, 1);
  EXPECT_EQ(f, stratified_folds(split.train, 5, 3));
}

TEST(CrossValidate, SinglePoint) {
  auto split = make_blobs(60, 1, 3, 8);
  GridSpec g{{0.5}, {0.1}, 3, 1};
  auto r = cross_validate(svm, split.train, g);
  ASSERT_EQ(r.table.size(), 1u);
  EXPECT_EQ(r.best_c, 0.5);
  EXPECT_EQ(r.best_q, 0.1);
  EXPECT_EQ(r.best_error, r.table[0].mean_error);
  EXPECT_EQ(r.table[0].fold_errors.size(), 3u);
}

TEST(CrossValidate, LeaveOneOutAccounting) {
  auto split = make_blobs(10, 1, 3, 9);
  std::atomic<int> calls{0};
  GridTrainer t = [&](const Dataset& d, double c, double q) {
    ++calls;
    EXPECT_EQ(d.size(), 9u);
    return svm(d, c, q);
  };
  auto r = cross_validate(t, split.train, GridSpec{{1.0}, {0.0, 0.5}, 10, 0});
  EXPECT_EQ(calls.load(), 20);
  for (const auto& cell : r.table)
    for (double e : cell.fold_errors) EXPECT_TRUE(e == 0.0 || e == 1.0);
}

TEST(CrossValidate, TiesPreferSmallerQThenC) {
  auto split = make_blobs(40, 1, 3, 10);
  GridTrainer constant = [](const Dataset& d, double, double) { return ModelParams(d.dim()); };
  auto r = cross_validate(constant, split.train, GridSpec{{4.0, 0.5, 2.0}, {0.5, 0.25}, 4, 0});
  EXPECT_EQ(r.best_q, 0.25);
  EXPECT_EQ(r.best_c, 0.5);
  EXPECT_EQ(r.table.size(), 6u);
  EXPECT_EQ(r.table[0].q, 0.5);
  EXPECT_EQ(r.table[0].c, 4.0);
}

TEST(CrossValidate, StratificationErrors) {
  Dataset one_positive(1, {SparseVector({{0, 1.0}}), SparseVector({{0, 2.0}}), SparseVector({{0, -1.0}})},
                       {1.0, -1.0, -1.0});
  EXPECT_THROW(cross_validate(svm, one_positive, GridSpec{{1.0}, {0.0}, 2, 0}), ConfigError);
  auto split = make_blobs(6, 1, 2, 3);
  EXPECT_THROW(cross_validate(svm, split.train, GridSpec{{1.0}, {0.0}, 7, 0}), ConfigError);
  EXPECT_THROW(cross_validate(svm, split.train, GridSpec{{}, {0.0}, 2, 0}), ConfigError);
}

// Few examples, many redundant features: blankout noise generalizes better,
// confirmed on a large independent test set before checking CV picks it.
TEST(CrossValidate, SelectsDropoutWhenItHelps) {
  RedundantSparseConfig cfg;
  auto split = make_redundant_sparse(60, 4000, 21, cfg);
  double e0 = evaluate(svm(split.train, 1.0, 0.0), split.test).error_rate;
  double e5 = evaluate(svm(split.train, 1.0, 0.5), split.test).error_rate;
  ASSERT_LT(e5, e0);
  auto r = cross_validate(svm, split.train, GridSpec{{1.0}, {0.0, 0.5}, 5, 4});
  EXPECT_EQ(r.best_q, 0.5);
}

TEST(Nightmare, RowLayoutAndReuse) {
  auto split = make_redundant_sparse(100, 100, 3);
  std::atomic<int> fits{0};
  GridTrainer counted = [&](const Dataset& d, double c, double q) {
    ++fits;
    return svm(d, c, q);
  };
  std::vector<NamedTrainer> ts{{"dropout-svm", counted, std::nullopt},
                               {"svm", counted, std::vector<double>{0.0}}};
  auto rows = nightmare_curve(ts, split.train, split.test, DeletionSchedule{{0.0, 0.5}, 9},
                              GridSpec{{1.0}, {0.0, 0.5}, 5, 0});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].trainer, "dropout-svm");
  EXPECT_EQ(rows[1].trainer, "svm");
  EXPECT_EQ(rows[2].fraction, 0.5);
  EXPECT_EQ(rows[1].q, 0.0);
  EXPECT_EQ(rows[3].q, 0.0);
  // 3 grid fits on the fit part plus at most one refit per distinct choice.
  EXPECT_LE(fits.load(), 3 + 3);
  EXPECT_GE(fits.load(), 3 + 2);
  auto again = nightmare_curve(ts, split.train, split.test, DeletionSchedule{{0.0, 0.5}, 9},
                               GridSpec{{1.0}, {0.0, 0.5}, 5, 0});
  for (std::size_t i = 0; i < rows.size(); ++i)
    EXPECT_EQ(rows[i].result.n_errors, again[i].result.n_errors);
}

TEST(RedundantSparse, ShapeAndValidation) {
  auto split = make_redundant_sparse(50, 20, 9);
  EXPECT_EQ(split.train.size(), 50u);
  EXPECT_EQ(split.test.size(), 20u);
  EXPECT_EQ(split.train.dim(), 10u * 20u + 50u);
  EXPECT_EQ(split.train, make_redundant_sparse(50, 20, 9).train);
  RedundantSparseConfig bad;
  bad.min_lift = 0.9;
  bad.max_lift = 0.5;
  EXPECT_THROW(make_redundant_sparse(10, 10, 1, bad), ConfigError);
  bad.min_lift = 0.0;
  bad.max_lift = 1.5;
  EXPECT_THROW(make_redundant_sparse(10, 10, 1, bad), ConfigError);
}
