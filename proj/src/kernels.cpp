#include "dropsvm/kernels.hpp"

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dropsvm/errors.hpp"

namespace dropsvm::kernels {

namespace {

using Index = std::ptrdiff_t;

void check_sizes(const CorruptedDesign& d, std::span<const double> weights,
                 std::span<const double> targets) {
  if (weights.size() != d.rows() || targets.size() != d.rows())
    throw DimensionMismatch("weights/targets must have one entry per example");
}

void check_w(const CorruptedDesign& d, std::span<const double> w) {
  if (w.size() != d.cols()) throw DimensionMismatch("coefficient vector does not match design");
}

double limited_sq_norm(std::span<const double> w, std::size_t limit) {
  double s = 0.0;
  for (std::size_t d = 0; d < limit; ++d) s += w[d] * w[d];
  return s;
}

// sum_n a_n u_n: the additive-noise contribution to every diagonal entry.
double uniform_mass(const CorruptedDesign& d, std::span<const double> weights) {
  double s = 0.0;
  for (std::size_t n = 0; n < d.rows(); ++n) s += weights[n] * d.uniform(n);
  return s;
}

void finish_diagonal(const CorruptedDesign& d, double ridge, double umass, Eigen::MatrixXd& g) {
  for (std::size_t i = 0; i < d.uniform_limit(); ++i) g(Index(i), Index(i)) += umass;
  for (std::size_t i = 0; i < d.cols(); ++i)
    if (i != d.offset_index()) g(Index(i), Index(i)) += ridge;
}

double regularization(const CorruptedDesign& d, double ridge, std::span<const double> w) {
  return ridge * limited_sq_norm(w, d.offset_index());
}

}  // namespace

double ordered_sum(std::span<const double> terms) noexcept {
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) noexcept {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

RowMoments row_moments(const CorruptedDesign& d, std::span<const double> w) {
  check_w(d, w);
  const auto rp = d.row_ptr();
  const auto col = d.col();
  const auto mean = d.mean();
  const auto var = d.var();
  const double wsq = limited_sq_norm(w, d.uniform_limit());
  RowMoments out{std::vector<double>(d.rows()), std::vector<double>(d.rows())};
  const auto rows = static_cast<Index>(d.rows());
#pragma omp parallel for schedule(static)
  for (Index n = 0; n < rows; ++n) {
    double lin = 0.0, noise = 0.0;
    for (std::size_t k = rp[n]; k < rp[n + 1]; ++k) {
      const double wk = w[col[k]];
      lin += mean[k] * wk;
      noise += var[k] * wk * wk;
    }
    out.linear[n] = lin;
    out.noise[n] = noise + d.uniform(n) * wsq;
  }
  return out;
}

NormalEquations normal_equations(const CorruptedDesign& d, std::span<const double> weights,
                                 std::span<const double> targets, double ridge) {
  check_sizes(d, weights, targets);
  const auto cols = static_cast<Index>(d.cols());
  NormalEquations ne{Eigen::MatrixXd::Zero(cols, cols), Eigen::VectorXd::Zero(cols)};
  const auto rp = d.row_ptr();
  const auto col = d.col();
  const auto mean = d.mean();
  const auto cp = d.col_ptr();
  const auto crow = d.csc_row();
  const auto cmean = d.csc_mean();
  const auto cvar = d.csc_var();

  // Column i of the Gram matrix and rhs_i belong to one thread; examples
  // touching i are visited in ascending order.
#pragma omp parallel for schedule(dynamic, 8)
  for (Index i = 0; i < cols; ++i) {
    double* gcol = ne.gram.col(i).data();
    double rhs = 0.0;
    for (std::size_t k = cp[i]; k < cp[i + 1]; ++k) {
      const std::size_t n = crow[k];
      const double a = weights[n];
      const double am = a * cmean[k];
      for (std::size_t kk = rp[n]; kk < rp[n + 1]; ++kk) gcol[col[kk]] += am * mean[kk];
      gcol[i] += a * cvar[k];
      rhs += am * targets[n];
    }
    ne.rhs[i] = rhs;
  }
  finish_diagonal(d, ridge, uniform_mass(d, weights), ne.gram);
  return ne;
}

double wls_value_gradient(const CorruptedDesign& d, std::span<const double> weights,
                          std::span<const double> targets, double ridge, std::span<const double> w,
                          std::span<double> grad) {
  check_sizes(d, weights, targets);
  check_w(d, w);
  if (grad.size() != d.cols()) throw DimensionMismatch("gradient buffer does not match design");
  const auto rm = row_moments(d, w);
  const auto rows = static_cast<Index>(d.rows());
  std::vector<double> residual(d.rows()), terms(d.rows());
#pragma omp parallel for schedule(static)
  for (Index n = 0; n < rows; ++n) {
    residual[n] = rm.linear[n] - targets[n];
    terms[n] = weights[n] * (residual[n] * residual[n] + rm.noise[n]);
  }
  const double value = regularization(d, ridge, w) + ordered_sum(terms);

  const double umass = uniform_mass(d, weights);
  const auto cp = d.col_ptr();
  const auto crow = d.csc_row();
  const auto cmean = d.csc_mean();
  const auto cvar = d.csc_var();
  const auto cols = static_cast<Index>(d.cols());
  const auto off = static_cast<Index>(d.offset_index());
  const auto ulim = static_cast<Index>(d.uniform_limit());
#pragma omp parallel for schedule(dynamic, 64)
  for (Index i = 0; i < cols; ++i) {
    double g = 0.0;
    for (std::size_t k = cp[i]; k < cp[i + 1]; ++k) {
      const std::size_t n = crow[k];
      g += 2.0 * weights[n] * (residual[n] * cmean[k] + cvar[k] * w[i]);
    }
    if (i < ulim) g += 2.0 * umass * w[i];
    if (i != off) g += 2.0 * ridge * w[i];
    grad[i] = g;
  }
  return value;
}

namespace serial {

RowMoments row_moments(const CorruptedDesign& d, std::span<const double> w) {
  check_w(d, w);
  const double wsq = limited_sq_norm(w, d.uniform_limit());
  RowMoments out{std::vector<double>(d.rows()), std::vector<double>(d.rows())};
  for (std::size_t n = 0; n < d.rows(); ++n) {
    double lin = 0.0, noise = 0.0;
    for (std::size_t k = d.row_ptr()[n]; k < d.row_ptr()[n + 1]; ++k) {
      const double wk = w[d.col()[k]];
      lin += d.mean()[k] * wk;
      noise += d.var()[k] * wk * wk;
    }
    out.linear[n] = lin;
    out.noise[n] = noise + d.uniform(n) * wsq;
  }
  return out;
}

NormalEquations normal_equations(const CorruptedDesign& d, std::span<const double> weights,
                                 std::span<const double> targets, double ridge) {
  check_sizes(d, weights, targets);
  const auto cols = static_cast<Index>(d.cols());
  NormalEquations ne{Eigen::MatrixXd::Zero(cols, cols), Eigen::VectorXd::Zero(cols)};
  for (std::size_t n = 0; n < d.rows(); ++n) {
    const double a = weights[n];
    for (std::size_t k = d.row_ptr()[n]; k < d.row_ptr()[n + 1]; ++k) {
      const Index i = d.col()[k];
      const double am = a * d.mean()[k];
      for (std::size_t kk = d.row_ptr()[n]; kk < d.row_ptr()[n + 1]; ++kk)
        ne.gram(d.col()[kk], i) += am * d.mean()[kk];
      ne.gram(i, i) += a * d.var()[k];
      ne.rhs[i] += am * targets[n];
    }
  }
  finish_diagonal(d, ridge, uniform_mass(d, weights), ne.gram);
  return ne;
}

double wls_value_gradient(const CorruptedDesign& d, std::span<const double> weights,
                          std::span<const double> targets, double ridge, std::span<const double> w,
                          std::span<double> grad) {
  check_sizes(d, weights, targets);
  check_w(d, w);
  if (grad.size() != d.cols()) throw DimensionMismatch("gradient buffer does not match design");
  const auto rm = row_moments(d, w);
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t n = 0; n < d.rows(); ++n) {
    const double r = rm.linear[n] - targets[n];
    loss += weights[n] * (r * r + rm.noise[n]);
    for (std::size_t k = d.row_ptr()[n]; k < d.row_ptr()[n + 1]; ++k) {
      const std::size_t i = d.col()[k];
      grad[i] += 2.0 * weights[n] * (r * d.mean()[k] + d.var()[k] * w[i]);
    }
  }
  const double umass = uniform_mass(d, weights);
  for (std::size_t i = 0; i < d.cols(); ++i) {
    if (i < d.uniform_limit()) grad[i] += 2.0 * umass * w[i];
    if (i != d.offset_index()) grad[i] += 2.0 * ridge * w[i];
  }
  return regularization(d, ridge, w) + loss;
}

}  // namespace serial

}  // namespace dropsvm::kernels
