#include "dropsvm/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

#include "dropsvm/errors.hpp"

namespace dropsvm {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Point {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // directional derivative
  std::vector<double> x, g;
};

class LineSearch {
 public:
  LineSearch(const ObjectiveFn& f, const std::vector<double>& x0, const std::vector<double>& dir,
             double f0, double slope0, const LbfgsOptions& opt)
      : f_(f), x0_(x0), dir_(dir), f0_(f0), slope0_(slope0), opt_(opt) {}

  // Returns true with `out` set when a strong-Wolfe point was found, or a
  // point with sufficient decrease if the search ran out of evaluations.
  bool run(double alpha1, Point& out) {
    Point prev{0.0, f0_, slope0_, {}, {}};
    double alpha = alpha1;
    for (int i = 0; i < opt_.max_line_search; ++i) {
      Point cur = eval(alpha);
      if (cur.f > f0_ + opt_.c1 * alpha * slope0_ || (i > 0 && cur.f >= prev.f))
        return zoom(prev, cur, out);
      if (std::abs(cur.slope) <= -opt_.c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) return zoom(cur, prev, out);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return fallback(out);
  }

 private:
  Point eval(double alpha) {
    Point p;
    p.alpha = alpha;
    p.x.resize(x0_.size());
    p.g.resize(x0_.size());
    for (std::size_t i = 0; i < x0_.size(); ++i) p.x[i] = x0_[i] + alpha * dir_[i];
    p.f = f_(p.x, p.g);
    if (!std::isfinite(p.f)) throw NumericalError("objective is not finite during line search");
    for (double v : p.g)
      if (!std::isfinite(v)) throw NumericalError("gradient is not finite during line search");
    p.slope = dot(p.g, dir_);
    ++evals_;
    if (p.f < f0_ + opt_.c1 * alpha * slope0_ && (!best_ || p.f < best_->f)) best_ = p;
    return p;
  }

  bool zoom(Point lo, Point hi, Point& out) {
    while (evals_ < 2 * opt_.max_line_search) {
      const double a = interpolate(lo, hi);
      Point cur = eval(a);
      if (cur.f > f0_ + opt_.c1 * a * slope0_ || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -opt_.c2 * slope0_) {
          out = std::move(cur);
          return true;
        }
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
      if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, lo.alpha)) break;
    }
    return fallback(out);
  }

  // Cubic minimizer of the two bracketing points, kept away from the ends.
  static double interpolate(const Point& lo, const Point& hi) {
    const double a = lo.alpha, b = hi.alpha;
    const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
    const double disc = d1 * d1 - lo.slope * hi.slope;
    double t = 0.5 * (a + b);
    if (disc >= 0.0) {
      const double d2 = std::copysign(std::sqrt(disc), b - a);
      const double cand = b - (b - a) * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2);
      if (std::isfinite(cand)) t = cand;
    }
    const double lo_b = std::min(a, b), hi_b = std::max(a, b), span = hi_b - lo_b;
    return std::clamp(t, lo_b + 0.1 * span, hi_b - 0.1 * span);
  }

  bool fallback(Point& out) {
    if (!best_) return false;
    out = *best_;
    return true;
  }

  const ObjectiveFn& f_;
  const std::vector<double>& x0_;
  const std::vector<double>& dir_;
  double f0_, slope0_;
  const LbfgsOptions& opt_;
  int evals_ = 0;
  std::optional<Point> best_;
};

}  // namespace

LbfgsResult minimize_lbfgs(const ObjectiveFn& f, std::vector<double> x0, const LbfgsOptions& opt) {
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  std::vector<double> g(n);
  res.value = f(res.x, g);
  if (!std::isfinite(res.value)) throw NumericalError("objective is not finite at the start point");
  res.grad_inf_norm = inf_norm(g);

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> dir(n), alpha_buf;

  while (true) {
    if (res.grad_inf_norm <= opt.grad_tol * (1.0 + std::abs(res.value))) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= opt.max_iterations) return res;

    // Two-loop recursion: dir = -H g.
    for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
    const std::size_t m = s_hist.size();
    alpha_buf.assign(m, 0.0);
    for (std::size_t k = m; k-- > 0;) {
      alpha_buf[k] = rho_hist[k] * dot(s_hist[k], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha_buf[k] * y_hist[k][i];
    }
    if (m > 0) {
      const double scale = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& v : dir) v *= scale;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] += (alpha_buf[k] - beta) * s_hist[k][i];
    }

    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      // Lost descent; restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      slope = dot(g, dir);
    }
    const double alpha1 = m == 0 ? std::min(1.0, 1.0 / std::max(inf_norm(g), 1e-300)) : 1.0;

    LineSearch ls(f, res.x, dir, res.value, slope, opt);
    Point p;
    if (!ls.run(alpha1, p) || !(p.f <= res.value)) return res;

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = p.x[i] - res.x[i];
      y[i] = p.g[i] - g[i];
    }
    const double sy = dot(s, y);
    res.x = std::move(p.x);
    g = std::move(p.g);
    res.value = p.f;
    res.grad_inf_norm = inf_norm(g);
    ++res.iterations;

    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
  }
}

}  // namespace dropsvm
