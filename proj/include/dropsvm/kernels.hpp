#pragma once

// Data-parallel inner loops of the IRLS trainers. Every kernel exists twice:
// the OpenMP version in `dropsvm::kernels` and a plain serial reference in
// `dropsvm::kernels::serial` that tests and benchmarks compare against.
//
// Results never depend on the thread count: per-example terms are summed in
// example order, and matrix/gradient entries are owned by a single thread
// that walks its column's examples in ascending order.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dropsvm/design.hpp"

namespace dropsvm::kernels {

/// linear[n] = w' E[x~_n], noise[n] = sum_d V_nd w_d^2.
struct RowMoments {
  std::vector<double> linear;
  std::vector<double> noise;
};

/// Dense system (ridge*I' + sum_n a_n (mu_n mu_n' + V_n)) w = sum_n a_n t_n mu_n,
/// where I' is the identity with a zero at the offset coordinate.
struct NormalEquations {
  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;
};

RowMoments row_moments(const CorruptedDesign& design, std::span<const double> w);

NormalEquations normal_equations(const CorruptedDesign& design, std::span<const double> weights,
                                 std::span<const double> targets, double ridge);

/// Value of ridge*||w_{-offset}||^2 + sum_n a_n E[(w'x~_n - t_n)^2]; writes the
/// gradient into `grad` (size cols()).
double wls_value_gradient(const CorruptedDesign& design, std::span<const double> weights,
                          std::span<const double> targets, double ridge, std::span<const double> w,
                          std::span<double> grad);

/// Left-to-right sum; the reduction used for every objective total.
double ordered_sum(std::span<const double> terms) noexcept;

/// Threads OpenMP will use for the next parallel region (1 without OpenMP).
int max_threads() noexcept;
void set_threads(int n) noexcept;

namespace serial {

RowMoments row_moments(const CorruptedDesign& design, std::span<const double> w);

NormalEquations normal_equations(const CorruptedDesign& design, std::span<const double> weights,
                                 std::span<const double> targets, double ridge);

double wls_value_gradient(const CorruptedDesign& design, std::span<const double> weights,
                          std::span<const double> targets, double ridge, std::span<const double> w,
                          std::span<double> grad);

}  // namespace serial

}  // namespace dropsvm::kernels
