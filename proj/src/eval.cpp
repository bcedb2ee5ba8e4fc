#include "dropsvm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

#include "dropsvm/errors.hpp"
#include "dropsvm/noise.hpp"

namespace dropsvm {

namespace {

void check_fraction(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("deletion fraction must be in [0,1]");
}

std::vector<SparseVector> delete_entries(const std::vector<SparseVector>& xs, double fraction,
                                         std::uint64_t seed) {
  check_fraction(fraction);
  Rng rng(seed);
  std::bernoulli_distribution drop(fraction);
  std::vector<SparseVector> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    std::vector<Entry> kept;
    kept.reserve(x.nnz());
    for (const auto& e : x.entries())
      if (!drop(rng)) kept.push_back(e);
    out.emplace_back(std::move(kept));
  }
  return out;
}

// Runs fn(i) for i in [0, n) in parallel; rethrows the first failure.
template <class Fn>
void parallel_tasks(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t{out[0]} << 32) | out[1];
}

struct GridPoint {
  double c, q;
};

std::vector<GridPoint> grid_points(const std::vector<double>& c_grid,
                                   const std::vector<double>& q_grid) {
  std::vector<GridPoint> pts;
  for (double q : q_grid)
    for (double c : c_grid) pts.push_back({c, q});
  return pts;
}

// Index of the smallest error; ties toward smaller q, then smaller c.
std::size_t select_best(const std::vector<GridPoint>& pts, const std::vector<double>& errors) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const auto key = std::make_tuple(errors[i], pts[i].q, pts[i].c);
    const auto best_key = std::make_tuple(errors[best], pts[best].q, pts[best].c);
    if (key < best_key) best = i;
  }
  return best;
}

}  // namespace

EvalResult evaluate(const ModelParams& model, const Dataset& test) {
  if (test.size() == 0) throw std::invalid_argument("empty test set");
  EvalResult r;
  r.n_test = test.size();
  for (std::size_t n = 0; n < test.size(); ++n)
    if (predict(model, test.example(n)) != static_cast<int>(test.label(n))) ++r.n_errors;
  r.error_rate = static_cast<double>(r.n_errors) / static_cast<double>(r.n_test);
  return r;
}

EvalResult evaluate(const OvaModel& model, const MulticlassDataset& test) {
  if (test.size() == 0) throw std::invalid_argument("empty test set");
  EvalResult r;
  r.n_test = test.size();
  std::map<int, std::size_t> per_class;
  for (std::size_t n = 0; n < test.size(); ++n) {
    const int truth = test.classes()[n];
    per_class.try_emplace(truth, 0);
    if (model.predict(test.examples()[n]) != truth) {
      ++r.n_errors;
      ++per_class[truth];
    }
  }
  r.error_rate = static_cast<double>(r.n_errors) / static_cast<double>(r.n_test);
  r.per_class_errors = std::move(per_class);
  return r;
}

Dataset delete_features(const Dataset& test, double fraction, std::uint64_t seed) {
  return Dataset(test.dim(), delete_entries(test.examples(), fraction, seed), test.labels());
}

MulticlassDataset delete_features(const MulticlassDataset& test, double fraction,
                                  std::uint64_t seed) {
  return MulticlassDataset(test.dim(), delete_entries(test.examples(), fraction, seed),
                           test.classes());
}

void DeletionSchedule::validate() const {
  if (fractions.empty()) throw ConfigError("deletion schedule is empty");
  for (double f : fractions) check_fraction(f);
  if (!std::is_sorted(fractions.begin(), fractions.end()))
    throw ConfigError("deletion fractions must be sorted");
}

void GridSpec::validate() const {
  if (c_grid.empty() || q_grid.empty()) throw ConfigError("hyperparameter grids must be nonempty");
  for (double c : c_grid)
    if (!(c > 0.0)) throw ConfigError("c grid values must be > 0");
  for (double q : q_grid)
    if (!(q >= 0.0) || !std::isfinite(q)) throw ConfigError("noise levels must be >= 0");
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
}

std::vector<int> stratified_folds(const Dataset& data, int folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (static_cast<std::size_t>(folds) > data.size())
    throw ConfigError("more folds (" + std::to_string(folds) + ") than examples (" +
                      std::to_string(data.size()) + ")");
  Rng rng(seed);
  std::vector<int> fold(data.size(), 0);
  int next = 0;
  for (double cls : {-1.0, 1.0}) {
    std::vector<std::size_t> idx;
    for (std::size_t n = 0; n < data.size(); ++n)
      if (data.label(n) == cls) idx.push_back(n);
    if (idx.size() < 2)
      throw ConfigError("stratified folds need at least two examples of each class");
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t n : idx) fold[n] = next++ % folds;
  }
  return fold;
}

CvResult cross_validate(const GridTrainer& trainer, const Dataset& data, const GridSpec& grid) {
  grid.validate();
  const auto fold = stratified_folds(data, grid.folds, grid.seed);
  const auto k = static_cast<std::size_t>(grid.folds);

  std::vector<Dataset> fit_parts, held_parts;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> fit, held;
    for (std::size_t n = 0; n < data.size(); ++n)
      (static_cast<std::size_t>(fold[n]) == f ? held : fit).push_back(n);
    const auto positives = std::count_if(fit.begin(), fit.end(),
                                         [&](std::size_t n) { return data.label(n) > 0; });
    if (positives == 0 || positives == static_cast<std::ptrdiff_t>(fit.size()))
      throw ConfigError("fold " + std::to_string(f) + " training part lacks one class");
    fit_parts.push_back(data.subset(fit));
    held_parts.push_back(data.subset(held));
  }

  const auto pts = grid_points(grid.c_grid, grid.q_grid);
  std::vector<double> errors(pts.size() * k);
  parallel_tasks(errors.size(), [&](std::size_t t) {
    const auto& p = pts[t / k];
    const auto model = trainer(fit_parts[t % k], p.c, p.q);
    errors[t] = evaluate(model, held_parts[t % k]).error_rate;
  });

  CvResult res;
  std::vector<double> means;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CvCell cell{pts[i].c, pts[i].q, {errors.begin() + i * k, errors.begin() + (i + 1) * k}, 0.0};
    cell.mean_error = std::accumulate(cell.fold_errors.begin(), cell.fold_errors.end(), 0.0) /
                      static_cast<double>(k);
    means.push_back(cell.mean_error);
    res.table.push_back(std::move(cell));
  }
  const std::size_t best = select_best(pts, means);
  res.best_c = pts[best].c;
  res.best_q = pts[best].q;
  res.best_error = means[best];
  return res;
}

std::vector<NightmareRow> nightmare_curve(const std::vector<NamedTrainer>& trainers,
                                          const Dataset& train, const Dataset& test,
                                          const DeletionSchedule& sched, const GridSpec& grid) {
  sched.validate();
  grid.validate();
  if (trainers.empty()) throw ConfigError("no trainers given");

  // Fold 0 of a stratified 5-way split is the 20% validation part.
  const auto fold = stratified_folds(train, 5, mix_seed(sched.seed, 0, 0));
  std::vector<std::size_t> fit_rows, val_rows;
  for (std::size_t n = 0; n < train.size(); ++n) (fold[n] == 0 ? val_rows : fit_rows).push_back(n);
  const Dataset fit = train.subset(fit_rows);
  const Dataset val = train.subset(val_rows);

  // Models on the fit part do not depend on the deletion level.
  std::vector<std::vector<GridPoint>> pts(trainers.size());
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t t = 0; t < trainers.size(); ++t) {
    pts[t] = grid_points(grid.c_grid, trainers[t].q_grid.value_or(grid.q_grid));
    for (std::size_t i = 0; i < pts[t].size(); ++i) tasks.emplace_back(t, i);
  }
  std::vector<std::vector<ModelParams>> fitted(trainers.size());
  for (std::size_t t = 0; t < trainers.size(); ++t) fitted[t].resize(pts[t].size());
  parallel_tasks(tasks.size(), [&](std::size_t j) {
    const auto [t, i] = tasks[j];
    fitted[t][i] = trainers[t].fit(fit, pts[t][i].c, pts[t][i].q);
  });

  std::map<std::tuple<std::size_t, double, double>, ModelParams> refit;
  std::vector<NightmareRow> rows;
  for (std::size_t fi = 0; fi < sched.fractions.size(); ++fi) {
    const double f = sched.fractions[fi];
    const Dataset val_del = delete_features(val, f, mix_seed(sched.seed, 1, fi));
    const Dataset test_del = delete_features(test, f, mix_seed(sched.seed, 2, fi));

    std::vector<std::size_t> chosen(trainers.size());
    std::vector<double> val_err(trainers.size());
    for (std::size_t t = 0; t < trainers.size(); ++t) {
      std::vector<double> errs;
      for (const auto& m : fitted[t]) errs.push_back(evaluate(m, val_del).error_rate);
      chosen[t] = select_best(pts[t], errs);
      val_err[t] = errs[chosen[t]];
    }

    std::vector<std::size_t> missing;
    for (std::size_t t = 0; t < trainers.size(); ++t) {
      const auto& p = pts[t][chosen[t]];
      if (!refit.contains({t, p.c, p.q})) {
        refit.emplace(std::make_tuple(t, p.c, p.q), ModelParams{});
        missing.push_back(t);
      }
    }
    parallel_tasks(missing.size(), [&](std::size_t j) {
      const std::size_t t = missing[j];
      const auto& p = pts[t][chosen[t]];
      auto model = trainers[t].fit(train, p.c, p.q);
#pragma omp critical(dropsvm_refit)
      refit[{t, p.c, p.q}] = std::move(model);
    });

    for (std::size_t t = 0; t < trainers.size(); ++t) {
      const auto& p = pts[t][chosen[t]];
      NightmareRow row;
      row.trainer = trainers[t].name;
      row.fraction = f;
      row.c = p.c;
      row.q = p.q;
      row.validation_error = val_err[t];
      row.result = evaluate(refit.at({t, p.c, p.q}), test_del);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace dropsvm
