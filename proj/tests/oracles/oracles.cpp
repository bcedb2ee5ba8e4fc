#include "oracles.hpp"

#include <algorithm>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace dropsvm::oracle {

namespace {

std::vector<double> dense_row(const SparseVector& x, std::size_t dim) {
  std::vector<double> d(dim, 0.0);
  for (const auto& e : x.entries()) d[e.index] = e.value;
  return d;
}

// Integrates exp(g(u)) over the real line where g is smooth and decays
// double-exponentially in both directions. Shifts by the maximum to keep the
// integrand of order one and returns the log of the integral.
double log_integral(const std::function<double(double)>& g, double lo, double hi) {
  double peak = -std::numeric_limits<double>::infinity();
  const int probes = 4000;
  for (int i = 0; i <= probes; ++i) {
    double u = lo + (hi - lo) * i / probes;
    peak = std::max(peak, g(u));
  }
  auto f = [&](double u) { return std::exp(g(u) - peak); };
  double value = boost::math::quadrature::trapezoidal(f, lo, hi, 1e-15, 30);
  return peak + std::log(value);
}

}  // namespace

EnumeratedMoments enumerate_dropout(
    const SparseVector& x, double q,
    const std::function<double(const std::vector<double>&, std::span<const std::size_t>)>& s) {
  auto entries = x.entries();
  const std::size_t k = entries.size();
  if (k > 20) throw std::invalid_argument("too many entries to enumerate");
  EnumeratedMoments out;
  std::vector<double> values(k);
  std::vector<std::size_t> index(k);
  for (std::size_t i = 0; i < k; ++i) index[i] = entries[i].index;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    double p = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      bool kept = (mask >> i) & 1;
      p *= kept ? (1.0 - q) : q;
      values[i] = kept ? entries[i].value / (1.0 - q) : 0.0;
    }
    if (p == 0.0) continue;
    double v = s(values, index);
    out.mean += p * v;
    out.second += p * v * v;
  }
  return out;
}

EnumeratedMoments hinge_moments_enumerated(std::span<const double> w, double b,
                                           const SparseVector& x, double y, double q, double ell) {
  return enumerate_dropout(x, q, [&](const std::vector<double>& v, std::span<const std::size_t> idx) {
    double score = b;
    for (std::size_t i = 0; i < v.size(); ++i) score += w[idx[i]] * v[i];
    return ell - y * score;
  });
}

EnumeratedMoments logistic_moments_enumerated(std::span<const double> w, double b,
                                              const SparseVector& x, double q) {
  return enumerate_dropout(x, q, [&](const std::vector<double>& v, std::span<const std::size_t> idx) {
    double score = b;
    for (std::size_t i = 0; i < v.size(); ++i) score += w[idx[i]] * v[i];
    return score;
  });
}

double expected_hinge_enumerated(std::span<const double> w, double b, const SparseVector& x,
                                 double y, double q, double ell) {
  return enumerate_dropout(x, q, [&](const std::vector<double>& v, std::span<const std::size_t> idx) {
           double score = b;
           for (std::size_t i = 0; i < v.size(); ++i) score += w[idx[i]] * v[i];
           return std::max(0.0, ell - y * score);
         })
      .mean;
}

double gig_inverse_mean_quadrature(double b) {
  // lambda = e^u; density of GIG(1/2, 1, b) is proportional to
  // lambda^{-1/2} exp(-(b / lambda + lambda) / 2).
  double lo = std::log(b) - 12.0;
  double hi = std::max(12.0, 0.5 * std::log(b) + 12.0);
  auto g = [b](double power) {
    return [b, power](double u) { return power * u - 0.5 * (b * std::exp(-u) + std::exp(u)); };
  };
  double log_num = log_integral(g(-0.5), lo, hi);  // int lambda^{-3/2} ... dlambda
  double log_den = log_integral(g(0.5), lo, hi);   // int lambda^{-1/2} ... dlambda
  return std::exp(log_num - log_den);
}

double hinge_bound_quadrature(double m1, double m2, double c) {
  // E[(lambda + c zeta)^2] = lambda^2 + 2 c lambda m1 + c^2 m2.
  double s = c * c * m2;
  double lo = std::log(std::max(s, 1e-300)) - 12.0;
  double hi = std::max(12.0, 0.5 * std::log(std::max(s, 1e-300)) + 12.0);
  auto g = [&](double u) {
    double lambda = std::exp(u);
    double quad = lambda * lambda + 2.0 * c * lambda * m1 + s;
    return u - 0.5 * std::log(2.0 * std::numbers::pi * lambda) - quad / (2.0 * lambda);
  };
  return -log_integral(g, lo, hi);
}

double pg_mean_by_differentiation(double z, double c) {
  auto f = [c](double t) {
    double half = std::sqrt(2.0 * t) / 2.0;
    return c * std::log(std::cosh(half));
  };
  double t0 = z * z / 2.0;
  auto central = [&](double h) { return (f(t0 + h) - f(t0 - h)) / (2.0 * h); };
  // Richardson table with step halving.
  const int levels = 6;
  double h = std::min(0.25 * t0, 0.1);
  std::vector<std::vector<double>> table(levels, std::vector<double>(levels));
  for (int i = 0; i < levels; ++i) {
    table[i][0] = central(h);
    for (int j = 1; j <= i; ++j) {
      double factor = std::pow(4.0, j);
      table[i][j] = (factor * table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
    }
    h /= 2.0;
  }
  return table[levels - 1][levels - 1];
}

double pg_mean_series(double z, double c) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double a2 = z * z / (4.0 * pi2);
  const long terms = 200000;
  double sum = 0.0;
  for (long k = terms; k >= 1; --k) {
    double u = static_cast<double>(k) - 0.5;
    sum += 1.0 / (u * u + a2);
  }
  // Tail by the midpoint rule.
  double a = std::sqrt(a2);
  double start = static_cast<double>(terms);
  double tail = a > 0 ? (std::numbers::pi / 2.0 - std::atan(start / a)) / a : 1.0 / start;
  return c / (2.0 * pi2) * (sum + tail);
}

double svm_objective(const Dataset& data, std::span<const double> wb, double c, double ell) {
  const std::size_t d = data.dim();
  double reg = 0.0;
  for (std::size_t j = 0; j < d; ++j) reg += wb[j] * wb[j];
  double loss = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    double score = data.example(n).dot(wb) + wb[d];
    loss += std::max(0.0, ell - data.label(n) * score);
  }
  return reg + 2.0 * c * loss;
}

std::vector<double> svm_primal_optimum(const Dataset& data, double c, double ell) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = dense_row(data.example(i), d);
  std::vector<double> y = data.labels();
  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      q[i][j] = y[i] * y[j] * std::inner_product(rows[i].begin(), rows[i].end(), rows[j].begin(), 0.0);

  const double cap = c;
  const double tau = 1e-12;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -ell);
  for (long iter = 0; iter < 50'000'000; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      bool up = (y[t] > 0) ? alpha[t] < cap : alpha[t] > 0;
      bool low = (y[t] > 0) ? alpha[t] > 0 : alpha[t] < cap;
      double v = -y[t] * grad[t];
      if (up && v > gmax) { gmax = v; i = t; }
      if (low && v < gmin) { gmin = v; j = t; }
    }
    if (i == n || j == n || gmax - gmin < 1e-12) break;
    double ai = alpha[i], aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = q[i][i] + q[j][j] + 2.0 * q[i][j];
      if (quad <= 0) quad = tau;
      double delta = (-grad[i] - grad[j]) / quad;
      double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > cap) { alpha[i] = cap; alpha[j] = cap - diff; }
      } else if (alpha[j] > cap) {
        alpha[j] = cap;
        alpha[i] = cap + diff;
      }
    } else {
      double quad = q[i][i] + q[j][j] - 2.0 * q[i][j];
      if (quad <= 0) quad = tau;
      double delta = (grad[i] - grad[j]) / quad;
      double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > cap) {
        if (alpha[i] > cap) { alpha[i] = cap; alpha[j] = sum - cap; }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > cap) {
        if (alpha[j] > cap) { alpha[j] = cap; alpha[i] = sum - cap; }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    double di = alpha[i] - ai, dj = alpha[j] - aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q[i][t] * di + q[j][t] * dj;
  }

  std::vector<double> wb(d + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) wb[k] += alpha[i] * y[i] * rows[i][k];

  // The loss is convex piecewise linear in b with kinks at y_i ell - s_i.
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = std::inner_product(rows[i].begin(), rows[i].end(), wb.begin(), 0.0);
  double best_b = 0.0, best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    double b = y[k] * ell - s[k];
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += std::max(0.0, ell - y[i] * (s[i] + b));
    if (loss < best) { best = loss; best_b = b; }
  }
  wb[d] = best_b;
  return wb;
}

std::vector<double> svm_subgradient(const Dataset& data, double c, double ell, int iters) {
  const std::size_t d = data.dim();
  std::vector<double> wb(d + 1, 0.0), best = wb, g(d + 1);
  double best_value = svm_objective(data, wb, c, ell);
  for (int t = 1; t <= iters; ++t) {
    for (std::size_t j = 0; j < d; ++j) g[j] = 2.0 * wb[j];
    g[d] = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
      double y = data.label(n);
      if (ell - y * (data.example(n).dot(wb) + wb[d]) > 0) {
        for (const auto& e : data.example(n).entries()) g[e.index] -= 2.0 * c * y * e.value;
        g[d] -= 2.0 * c * y;
      }
    }
    double norm = std::sqrt(std::inner_product(g.begin(), g.end(), g.begin(), 0.0));
    if (norm == 0.0) break;
    double step = 1.0 / (norm * std::sqrt(static_cast<double>(t)));
    for (std::size_t j = 0; j <= d; ++j) wb[j] -= step * g[j];
    double v = svm_objective(data, wb, c, ell);
    if (v < best_value) { best_value = v; best = wb; }
  }
  return best;
}

double logistic_objective(const Dataset& data, std::span<const double> wb, double c) {
  const std::size_t d = data.dim();
  double reg = 0.0;
  for (std::size_t j = 0; j < d; ++j) reg += wb[j] * wb[j];
  double loss = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    double m = data.label(n) * (data.example(n).dot(wb) + wb[d]);
    loss += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
  }
  return reg + c * loss;
}

std::vector<double> logistic_gradient_descent(const Dataset& data, double c, int iters) {
  const std::size_t d = data.dim();
  auto gradient = [&](const std::vector<double>& wb) {
    std::vector<double> g(d + 1, 0.0);
    for (std::size_t j = 0; j < d; ++j) g[j] = 2.0 * wb[j];
    for (std::size_t n = 0; n < data.size(); ++n) {
      double y = data.label(n);
      double m = y * (data.example(n).dot(wb) + wb[d]);
      double sig = 1.0 / (1.0 + std::exp(m));
      for (const auto& e : data.example(n).entries()) g[e.index] -= c * y * sig * e.value;
      g[d] -= c * y * sig;
    }
    return g;
  };
  // Lipschitz constant: 2 + (c / 4) * largest eigenvalue of X'X (with the 1 column).
  std::vector<double> v(d + 1, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    std::vector<double> next(d + 1, 0.0);
    for (std::size_t n = 0; n < data.size(); ++n) {
      double s = data.example(n).dot(v) + v[d];
      for (const auto& e : data.example(n).entries()) next[e.index] += s * e.value;
      next[d] += s;
    }
    double norm = std::sqrt(std::inner_product(next.begin(), next.end(), next.begin(), 0.0));
    lambda = norm / std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (std::size_t j = 0; j <= d; ++j) v[j] = next[j] / norm;
  }
  const double lip = 2.0 + c / 4.0 * lambda * 1.01;
  std::vector<double> x(d + 1, 0.0), z = x, prev = x;
  double t = 1.0;
  double fx = logistic_objective(data, x, c);
  for (int it = 0; it < iters; ++it) {
    auto g = gradient(z);
    std::vector<double> next(d + 1);
    for (std::size_t j = 0; j <= d; ++j) next[j] = z[j] - g[j] / lip;
    double fn = logistic_objective(data, next, c);
    if (fn > fx) {
      // Restart momentum.
      t = 1.0;
      z = x;
      continue;
    }
    double tn = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    for (std::size_t j = 0; j <= d; ++j) z[j] = next[j] + (t - 1.0) / tn * (next[j] - x[j]);
    x = std::move(next);
    fx = fn;
    t = tn;
    auto gx = gradient(x);
    double inf = 0.0;
    for (double gi : gx) inf = std::max(inf, std::abs(gi));
    if (inf < 1e-11) break;
  }
  return x;
}

std::vector<double> finite_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                               std::span<const double> x, double h) {
  std::vector<double> p(x.begin(), x.end()), g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double keep = p[i];
    p[i] = keep + h;
    double up = f(p);
    p[i] = keep - h;
    double down = f(p);
    p[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t dim, double density,
                       bool nonnegative) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::bernoulli_distribution present(density);
  std::poisson_distribution<int> counts(2.0);
  std::vector<double> direction(dim);
  for (auto& v : direction) v = gauss(rng);
  std::vector<SparseVector> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Entry> entries;
    for (std::size_t j = 0; j < dim; ++j) {
      if (!present(rng)) continue;
      double v = nonnegative ? static_cast<double>(1 + counts(rng)) : gauss(rng);
      entries.push_back({static_cast<FeatureIndex>(j), v});
    }
    SparseVector x(std::move(entries));
    double score = x.dot(direction) + 0.5 * gauss(rng);
    double y = score >= 0 ? 1.0 : -1.0;
    if (i == 0) y = 1.0;
    if (i == 1) y = -1.0;
    xs.push_back(std::move(x));
    ys.push_back(y);
  }
  return Dataset(dim, std::move(xs), std::move(ys));
}

}  // namespace dropsvm::oracle
