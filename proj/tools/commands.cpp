#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "dropsvm/errors.hpp"
#include "dropsvm/eval.hpp"
#include "dropsvm/kernels.hpp"
#include "dropsvm/model_io.hpp"
#include "dropsvm/multiclass.hpp"
#include "dropsvm/svmlight.hpp"
#include "dropsvm/synth.hpp"
#include "dropsvm/trainers.hpp"

namespace dropsvm::cli {

namespace {

const char* const kEvalHeader = "trainer,noise,q,c,ell,deletion,error,n_test,seed";

struct RunConfig {
  std::string data, test, model, out, log, plot_data, protocol;
  std::vector<std::string> trainers;
  std::string noise = "dropout";
  std::string form = "hinge";
  std::string kind = "blobs";
  double q = 0.0;
  double c = 1.0;
  double ell = 1.0;
  std::vector<int> copies;
  std::vector<double> deletion;
  std::vector<double> grid_c, grid_q;
  int folds = 5;
  std::uint64_t seed = 0;
  int threads = 0;
  int max_iters = 200;
  double tol = 1e-6;
  bool multiclass = false;
  bool max_abs_scale = false;
  std::size_t n = 200, n_test = 200, dim = 10;
};

// Everything needed to fit one binary model.
struct FitSpec {
  std::string trainer;
  NoiseSpec noise;
  double c = 1.0;
  double ell = 1.0;
  int copies = 1;
  std::uint64_t seed = 0;
  QuadraticForm form = QuadraticForm::Hinge;
  int max_iters = 200;
  double tol = 1e-6;
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t v[2];
  seq.generate(v, v + 2);
  return (std::uint64_t{v[0]} << 32) | v[1];
}

void check_trainer(const std::string& name, bool allow_plain_svm) {
  auto names = trainer_names();
  if (allow_plain_svm) names.push_back("svm");
  if (std::find(names.begin(), names.end(), name) != names.end()) return;
  std::string list;
  for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown trainer '" + name + "' (expected one of " + list + ")");
}

QuadraticForm parse_form(const std::string& form) {
  if (form == "hinge") return QuadraticForm::Hinge;
  if (form == "logistic") return QuadraticForm::Logistic;
  throw ConfigError("unknown quadratic form '" + form + "' (expected hinge or logistic)");
}

TrainReport fit_binary(const Dataset& data, const FitSpec& s) {
  if (s.trainer == "dropout-svm" || s.trainer == "svm") {
    HingeConfig cfg;
    cfg.c = s.c;
    cfg.ell = s.ell;
    cfg.max_iters = s.max_iters;
    cfg.tol = s.tol;
    return train_dropout_svm(data, s.trainer == "svm" ? NoiseSpec::none() : s.noise, cfg);
  }
  if (s.trainer == "dropout-logistic") {
    LogisticConfig cfg;
    cfg.c = s.c;
    cfg.max_iters = s.max_iters;
    cfg.tol = s.tol;
    return train_dropout_logistic(data, s.noise, cfg);
  }
  if (s.trainer == "mcf-quadratic") {
    QuadraticConfig cfg;
    cfg.c = s.c;
    cfg.form = s.form;
    return train_mcf_quadratic(data, s.noise, cfg);
  }
  if (s.trainer == "explicit") {
    HingeConfig cfg;
    cfg.c = s.c;
    cfg.ell = s.ell;
    cfg.max_iters = s.max_iters;
    cfg.tol = s.tol;
    Rng rng(s.seed);
    return train_explicit_corruption(data, s.noise, s.copies, cfg, rng);
  }
  check_trainer(s.trainer, true);
  throw ConfigError("unsupported trainer " + s.trainer);
}

// Coefficients learned on x_d / scale_d, re-expressed for raw features.
ModelParams unscale(const ModelParams& m, const std::vector<double>& scale) {
  std::vector<double> coef(m.coefficients().begin(), m.coefficients().end());
  for (std::size_t d = 0; d < scale.size(); ++d) coef[d] /= scale[d];
  return ModelParams(m.dim(), std::move(coef));
}

std::string fmt(double v) { return format_double(v); }

// Appends rows to a CSV file, writing the header only when the file is new
// or empty and refusing to mix schemas. An empty path means stdout.
class CsvSink {
 public:
  CsvSink(const std::string& path, std::string header, std::ostream& fallback)
      : header_(std::move(header)) {
    if (path.empty()) {
      stream_ = &fallback;
      *stream_ << header_ << '\n';
      return;
    }
    bool fresh = true;
    {
      std::ifstream in(path);
      std::string first;
      if (in && std::getline(in, first)) {
        fresh = false;
        if (first != header_)
          throw ConfigError("existing CSV " + path + " has a different header: " + first);
      }
    }
    file_.open(path, std::ios::app);
    if (!file_) throw std::runtime_error("cannot write " + path);
    stream_ = &file_;
    if (fresh) *stream_ << header_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) *stream_ << (i ? "," : "") << cells[i];
    *stream_ << '\n';
    if (!*stream_) throw std::runtime_error("failed writing CSV output");
  }

 private:
  std::string header_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::vector<std::string> eval_cells(const std::string& trainer, const NoiseSpec& noise, double c,
                                    double ell, double deletion, const EvalResult& r,
                                    std::uint64_t seed) {
  return {trainer,       noise.name(),          fmt(noise.level()), fmt(c),
          fmt(ell),      fmt(deletion),         fmt(r.error_rate),  std::to_string(r.n_test),
          std::to_string(seed)};
}

// gnuplot data: one block per series, separated by two blank lines.
void write_plot_data(const std::string& path, const std::string& x_label,
                     const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  bool first = true;
  for (const auto& [name, points] : series) {
    if (!first) out << "\n\n";
    first = false;
    out << "# " << name << "\n# " << x_label << " error\n";
    for (const auto& [x, y] : points) out << fmt(x) << ' ' << fmt(y) << '\n';
  }
}

void write_trace(std::ostream& out, const std::vector<double>& trace, std::optional<int> cls) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (cls) out << *cls << ',';
    out << i << ',' << fmt(trace[i]) << '\n';
  }
}

FitSpec fit_spec(const RunConfig& rc, const std::string& trainer, const NoiseSpec& noise, double c) {
  FitSpec s;
  s.trainer = trainer;
  s.noise = noise;
  s.c = c;
  s.ell = rc.ell;
  s.copies = rc.copies.empty() ? 16 : rc.copies.front();
  s.seed = rc.seed;
  s.form = parse_form(rc.form);
  s.max_iters = rc.max_iters;
  s.tol = rc.tol;
  return s;
}

int cmd_train(const RunConfig& rc, std::ostream& out) {
  if (rc.trainers.size() != 1) throw ConfigError("train takes exactly one --trainer");
  const std::string trainer = rc.trainers.front();
  check_trainer(trainer, false);
  if (rc.copies.size() > 1) throw ConfigError("train takes a single --M");
  const NoiseSpec noise = NoiseSpec::from_name(rc.noise, rc.q);
  FitSpec spec = fit_spec(rc, trainer, noise, rc.c);
  if (spec.copies < 1) throw ConfigError("--M must be >= 1");
  const std::string log_path = rc.log.empty() ? rc.out + ".log" : rc.log;

  ModelFile file;
  file.trainer = trainer;
  file.noise = noise;
  file.c = rc.c;
  file.ell = rc.ell;
  std::ostringstream log;

  auto fit_scaled = [&](const Dataset& d) {
    if (!rc.max_abs_scale) return fit_binary(d, spec);
    const auto scale = max_abs_per_feature(d.examples(), d.dim());
    auto report = fit_binary(scale_features(d, scale), spec);
    report.model = unscale(report.model, scale);
    return report;
  };

  if (rc.multiclass) {
    const auto data = read_svmlight_multiclass_file(rc.data);
    std::vector<std::vector<double>> traces(static_cast<std::size_t>(data.num_classes()));
    auto ova = train_one_vs_all(data, [&](const Dataset& d, int k) {
      auto report = fit_scaled(d);
      traces[static_cast<std::size_t>(k)] = report.state.objective_trace;
      return report.model;
    });
    log << "class,iteration,objective\n";
    for (std::size_t k = 0; k < traces.size(); ++k) write_trace(log, traces[k], static_cast<int>(k));
    out << "trained " << trainer << " one-vs-all over " << traces.size() << " classes\n";
    file.model = std::move(ova);
  } else {
    const auto data = read_svmlight_file(rc.data);
    auto report = fit_scaled(data);
    log << "iteration,objective\n";
    write_trace(log, report.state.objective_trace, std::nullopt);
    out << "trained " << trainer << ": " << report.state.iteration << " iterations, objective "
        << fmt(report.state.objective_trace.back()) << ", "
        << (report.converged ? "converged" : "not converged") << '\n';
    file.model = std::move(report.model);
  }
  save_model(rc.out, file);
  std::ofstream log_file(log_path);
  if (!log_file) throw std::runtime_error("cannot write " + log_path);
  log_file << log.str();
  return kOk;
}

int cmd_eval(const RunConfig& rc, std::ostream& out) {
  if (rc.deletion.size() > 1) throw ConfigError("eval takes a single --deletion");
  const double deletion = rc.deletion.empty() ? 0.0 : rc.deletion.front();
  const ModelFile file = load_model(rc.model);
  EvalResult r;
  if (const auto* ova = std::get_if<OvaModel>(&file.model)) {
    auto test = read_svmlight_multiclass_file(rc.test);
    if (deletion > 0.0) test = delete_features(test, deletion, rc.seed);
    if (test.dim() > file.dim())
      throw DimensionMismatch("test data has " + std::to_string(test.dim()) +
                              " features, model has " + std::to_string(file.dim()));
    r = evaluate(*ova, test);
  } else {
    auto test = read_svmlight_file(rc.test);
    if (deletion > 0.0) test = delete_features(test, deletion, rc.seed);
    if (test.dim() > file.dim())
      throw DimensionMismatch("test data has " + std::to_string(test.dim()) +
                              " features, model has " + std::to_string(file.dim()));
    r = evaluate(std::get<ModelParams>(file.model), test);
  }
  out << "error " << fmt(r.error_rate) << " (" << r.n_errors << "/" << r.n_test << ")\n";
  if (r.per_class_errors)
    for (const auto& [k, e] : *r.per_class_errors) out << "class " << k << " errors " << e << '\n';
  if (!rc.out.empty()) {
    CsvSink csv(rc.out, kEvalHeader, out);
    csv.row(eval_cells(file.trainer, file.noise, file.c, file.ell, deletion, r, rc.seed));
  }
  return kOk;
}

GridTrainer grid_trainer(const RunConfig& rc, const std::string& trainer) {
  return [&rc, trainer](const Dataset& d, double c, double q) {
    return fit_binary(d, fit_spec(rc, trainer, NoiseSpec::from_name(rc.noise, q), c)).model;
  };
}

std::vector<double> default_levels() {
  return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

int experiment_binary_sweep(const RunConfig& rc, const Dataset& train, const Dataset& test,
                            std::ostream& out) {
  const auto trainers = rc.trainers.empty()
                            ? std::vector<std::string>{"dropout-svm", "dropout-logistic", "mcf-quadratic"}
                            : rc.trainers;
  const auto levels = rc.grid_q.empty() ? default_levels() : rc.grid_q;
  const auto cs = rc.grid_c.empty() ? std::vector<double>{rc.c} : rc.grid_c;
  for (const auto& t : trainers) check_trainer(t, true);
  CsvSink csv(rc.out, kEvalHeader, out);
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> series;
  for (const auto& t : trainers) {
    series.push_back({t, {}});
    for (double q : levels) {
      double c = cs.front();
      if (cs.size() > 1) {
        GridSpec grid{cs, {q}, rc.folds, rc.seed};
        c = cross_validate(grid_trainer(rc, t), train, grid).best_c;
      }
      const auto noise = NoiseSpec::from_name(rc.noise, q);
      const auto model = fit_binary(train, fit_spec(rc, t, noise, c)).model;
      const auto r = evaluate(model, test);
      csv.row(eval_cells(t, noise, c, rc.ell, 0.0, r, rc.seed));
      series.back().second.push_back({q, r.error_rate});
    }
  }
  write_plot_data(rc.plot_data, "q", series);
  return kOk;
}

int experiment_explicit(const RunConfig& rc, const Dataset& train, const Dataset& test,
                        std::ostream& out) {
  const auto copies = rc.copies.empty() ? std::vector<int>{1, 4, 16, 64, 256} : rc.copies;
  for (int m : copies)
    if (m < 1) throw ConfigError("--M values must be >= 1");
  const auto levels = rc.grid_q.empty() ? std::vector<double>{rc.q} : rc.grid_q;
  const auto cs = rc.grid_c.empty() ? std::vector<double>{rc.c} : rc.grid_c;
  double c = cs.front(), q = levels.front();
  if (cs.size() > 1 || levels.size() > 1) {
    auto best = cross_validate(grid_trainer(rc, "dropout-svm"), train,
                               GridSpec{cs, levels, rc.folds, rc.seed});
    c = best.best_c;
    q = best.best_q;
  }
  const auto noise = NoiseSpec::from_name(rc.noise, q);
  CsvSink csv(rc.out, std::string(kEvalHeader) + ",M", out);
  std::vector<std::pair<double, double>> points;
  for (int m : copies) {
    FitSpec s = fit_spec(rc, "explicit", noise, c);
    s.copies = m;
    s.seed = mix(rc.seed, static_cast<std::uint64_t>(m));
    const auto r = evaluate(fit_binary(train, s).model, test);
    auto cells = eval_cells("explicit", noise, c, rc.ell, 0.0, r, rc.seed);
    cells.push_back(std::to_string(m));
    csv.row(cells);
    points.push_back({static_cast<double>(m), r.error_rate});
  }
  const auto ref = evaluate(fit_binary(train, fit_spec(rc, "dropout-svm", noise, c)).model, test);
  auto cells = eval_cells("dropout-svm", noise, c, rc.ell, 0.0, ref, rc.seed);
  cells.push_back("");
  csv.row(cells);
  std::vector<std::pair<double, double>> ref_line;
  for (int m : copies) ref_line.push_back({static_cast<double>(m), ref.error_rate});
  write_plot_data(rc.plot_data, "M", {{"explicit", points}, {"dropout-svm", ref_line}});
  return kOk;
}

int experiment_nightmare(const RunConfig& rc, const Dataset& train, const Dataset& test,
                         std::ostream& out) {
  const auto trainers =
      rc.trainers.empty()
          ? std::vector<std::string>{"svm", "dropout-svm", "dropout-logistic", "mcf-quadratic"}
          : rc.trainers;
  std::vector<NamedTrainer> named;
  for (const auto& t : trainers) {
    check_trainer(t, true);
    named.push_back({t, grid_trainer(rc, t),
                     t == "svm" ? std::optional<std::vector<double>>{{0.0}} : std::nullopt});
  }
  DeletionSchedule sched{rc.deletion.empty() ? default_levels() : rc.deletion, rc.seed};
  GridSpec grid{rc.grid_c.empty() ? std::vector<double>{rc.c} : rc.grid_c,
                rc.grid_q.empty() ? default_levels() : rc.grid_q, rc.folds, rc.seed};
  const auto rows = nightmare_curve(named, train, test, sched, grid);
  CsvSink csv(rc.out, kEvalHeader, out);
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> series;
  for (const auto& t : trainers) series.push_back({t, {}});
  for (const auto& row : rows) {
    const auto noise =
        row.trainer == "svm" ? NoiseSpec::none() : NoiseSpec::from_name(rc.noise, row.q);
    csv.row(eval_cells(row.trainer, noise, row.c, rc.ell, row.fraction, row.result, rc.seed));
    for (auto& [name, pts] : series)
      if (name == row.trainer) pts.push_back({row.fraction, row.result.error_rate});
  }
  write_plot_data(rc.plot_data, "deletion", series);
  return kOk;
}

int cmd_experiment(const RunConfig& rc, std::ostream& out) {
  const auto train = read_svmlight_file(rc.data);
  const auto test = read_svmlight_file(rc.test, train.dim());
  if (test.dim() > train.dim())
    throw DimensionMismatch("test data has more features than training data");
  if (rc.protocol == "binary-sweep") return experiment_binary_sweep(rc, train, test, out);
  if (rc.protocol == "explicit-vs-implicit") return experiment_explicit(rc, train, test, out);
  if (rc.protocol == "nightmare") return experiment_nightmare(rc, train, test, out);
  throw ConfigError("unknown protocol '" + rc.protocol +
                    "' (expected binary-sweep, explicit-vs-implicit or nightmare)");
}

void write_file(const std::string& path, const Dataset& data) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_svmlight(f, data);
  if (!f) throw std::runtime_error("failed writing " + path);
}

int cmd_synth(const RunConfig& rc, std::ostream& out) {
  if (rc.n < 2 || rc.n_test < 1) throw ConfigError("synthetic sets need --n >= 2 and --n-test >= 1");
  Split<Dataset> split = [&] {
    if (rc.kind == "blobs") {
      if (rc.dim < 1) throw ConfigError("--dim must be >= 1");
      return make_blobs(rc.n, rc.n_test, rc.dim, rc.seed);
    }
    if (rc.kind == "redundant-sparse") return make_redundant_sparse(rc.n, rc.n_test, rc.seed);
    throw ConfigError("unknown synthetic kind '" + rc.kind + "' (expected blobs or redundant-sparse)");
  }();
  const std::string train_path = rc.out + ".train.svm", test_path = rc.out + ".test.svm";
  write_file(train_path, split.train);
  write_file(test_path, split.test);
  out << "wrote " << train_path << " and " << test_path << " (" << split.train.dim()
      << " features)\n";
  return kOk;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty())
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> merge_config(std::vector<std::string> args,
                                      const std::map<std::string, std::string>& config) {
  if (args.empty()) return args;
  std::set<std::string> given;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
  std::vector<std::string> extra;
  for (const auto& [k, v] : config)
    if (!given.contains(k)) extra.push_back("--" + k + "=" + v);
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Dropout training of linear SVMs and logistic regression", "dropsvm"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand("train", "Train a model on an svmlight file");
  auto* eval = app.add_subcommand("eval", "Evaluate a model file on an svmlight test set");
  auto* experiment = app.add_subcommand("experiment", "Run an experiment protocol and emit CSV");
  auto* synth = app.add_subcommand("synth", "Write synthetic train/test svmlight files");

  auto threads = [&](CLI::App* s) {
    s->add_option("--threads", rc.threads, "Worker threads (default: all cores)")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--seed", rc.seed, "Random seed");
  };
  auto training = [&](CLI::App* s) {
    s->add_option("--noise", rc.noise, "none, dropout, gaussian, laplace or poisson");
    s->add_option("--c", rc.c, "Loss weight c");
    s->add_option("--ell", rc.ell, "Hinge margin cost");
    s->add_option("--M", rc.copies, "Corrupted copies per example (explicit)")->delimiter(',');
    s->add_option("--max-iters", rc.max_iters, "IRLS iteration limit");
    s->add_option("--tol", rc.tol, "Relative objective change for convergence");
    s->add_option("--form", rc.form, "mcf-quadratic variant: hinge or logistic");
    s->add_option("--trainer", rc.trainers, "dropout-svm, dropout-logistic, mcf-quadratic, explicit")
        ->delimiter(',');
  };

  train->add_option("--data", rc.data, "Training file")->required();
  train->add_option("--q", rc.q, "Noise level (dropout q, Gaussian variance, Laplace scale)");
  train->add_option("--out", rc.out, "Model file to write")->required();
  train->add_option("--log", rc.log, "Objective trace CSV (default: <out>.log)");
  train->add_flag("--multiclass", rc.multiclass, "Integer labels, one-vs-all training");
  train->add_flag("--max-abs-scale", rc.max_abs_scale, "Scale features by their max |x| while training");
  training(train);
  threads(train);

  eval->add_option("--model", rc.model, "Model file")->required();
  eval->add_option("--test", rc.test, "Test file")->required();
  eval->add_option("--deletion", rc.deletion, "Fraction of test features to delete");
  eval->add_option("--out", rc.out, "CSV file to append the result row to");
  threads(eval);

  experiment->add_option("--protocol", rc.protocol, "binary-sweep, explicit-vs-implicit or nightmare")
      ->required();
  experiment->add_option("--data", rc.data, "Training file")->required();
  experiment->add_option("--test", rc.test, "Test file")->required();
  experiment->add_option("--q", rc.q, "Noise level when --grid-q is not given");
  experiment->add_option("--deletion", rc.deletion, "Deletion fractions")->delimiter(',');
  experiment->add_option("--grid-c", rc.grid_c, "c values to cross-validate")->delimiter(',');
  experiment->add_option("--grid-q", rc.grid_q, "Noise levels to cross-validate")->delimiter(',');
  experiment->add_option("--folds", rc.folds, "Cross-validation folds");
  experiment->add_option("--out", rc.out, "CSV output (default: stdout)");
  experiment->add_option("--plot-data", rc.plot_data, "gnuplot data file");
  training(experiment);
  threads(experiment);

  synth->add_option("--kind", rc.kind, "blobs or redundant-sparse");
  synth->add_option("--n", rc.n, "Training examples");
  synth->add_option("--n-test", rc.n_test, "Test examples");
  synth->add_option("--dim", rc.dim, "Features (blobs)");
  synth->add_option("--out", rc.out, "Output prefix: <out>.train.svm, <out>.test.svm")->required();
  threads(synth);

  try {
    std::vector<std::string> args;
    std::optional<std::string> config;
    for (std::size_t i = 0; i < raw_args.size(); ++i) {
      const auto& a = raw_args[i];
      if (a == "--config") {
        if (i + 1 >= raw_args.size()) throw ConfigError("--config needs a path");
        config = raw_args[++i];
      } else if (a.rfind("--config=", 0) == 0) {
        config = a.substr(9);
      } else {
        args.push_back(a);
      }
    }
    if (config) args = merge_config(std::move(args), read_config_file(*config));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kConfigError;
    }

    if (rc.threads > 0) kernels::set_threads(rc.threads);
    if (rc.trainers.empty() && train->parsed()) rc.trainers = {"dropout-svm"};
    if (train->parsed()) return cmd_train(rc, out);
    if (eval->parsed()) return cmd_eval(rc, out);
    if (experiment->parsed()) return cmd_experiment(rc, out);
    return cmd_synth(rc, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace dropsvm::cli
