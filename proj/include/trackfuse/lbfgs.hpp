#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace trackfuse {

struct LbfgsOptions {
  int history = 10;
  int max_iter = 5000;
  double gtol = 1e-4;  // on the max-norm of the gradient
  double c1 = 1e-4;    // sufficient decrease
  double c2 = 0.9;     // curvature
  int max_linesearch = 40;

  void validate() const {
    if (history < 1) throw std::invalid_argument("LbfgsOptions: history must be >= 1");
    if (max_iter < 1) throw std::invalid_argument("LbfgsOptions: max_iter must be >= 1");
    if (!(gtol > 0.0)) throw std::invalid_argument("LbfgsOptions: gtol must be positive");
    if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) throw std::invalid_argument("LbfgsOptions: need 0 < c1 < c2 < 1");
    if (max_linesearch < 1) throw std::invalid_argument("LbfgsOptions: max_linesearch must be >= 1");
  }
  friend bool operator==(const LbfgsOptions&, const LbfgsOptions&) = default;
};

struct LbfgsResult {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> trace;  // objective at x0 followed by every accepted iterate
  int iterations = 0;
  int evaluations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  bool line_search_failed = false;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db), kept inside the
// central 80% of the bracket; bisection when the cubic is unusable.
inline double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double margin = 0.1 * (hi - lo);
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double t = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0.0) {
      const double cand = b - (b - a) * (db + d2 - d1) / denom;
      if (std::isfinite(cand)) t = cand;
    }
  }
  if (t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
  return t;
}

}  // namespace detail

/// Limited-memory BFGS (two-loop recursion) with a strong-Wolfe line search.
///
/// `fg(x, grad)` returns f(x) and writes the gradient into `grad`. Stops when the
/// gradient max-norm drops to `gtol`, after `max_iter` iterations, or when the line
/// search cannot find a decrease, in which case the best iterate is returned and
/// `line_search_failed` is set.
template <typename ObjectiveGrad>
LbfgsResult lbfgs_minimize(ObjectiveGrad&& fg, std::vector<double> x0, const LbfgsOptions& opts = {}) {
  opts.validate();
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  std::vector<double> g(n);
  res.f = fg(std::span<const double>(res.x), std::span<double>(g));
  res.evaluations = 1;
  res.trace.push_back(res.f);
  if (!std::isfinite(res.f)) throw std::invalid_argument("lbfgs_minimize: objective is not finite at x0");
  res.grad_norm = detail::max_abs(g);
  if (res.grad_norm <= opts.gtol) {
    res.converged = true;
    return res;
  }

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<double> d(n), q(n), alpha(static_cast<std::size_t>(opts.history));
  std::vector<double> x_try(n), g_try(n);

  auto eval_at = [&](double step, double& f_out, double& dphi_out) {
    for (std::size_t i = 0; i < n; ++i) x_try[i] = res.x[i] + step * d[i];
    f_out = fg(std::span<const double>(x_try), std::span<double>(g_try));
    ++res.evaluations;
    dphi_out = detail::dot(g_try, d);
  };

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    // Two-loop recursion: d = -H g.
    q = g;
    for (std::size_t i = memory.size(); i-- > 0;) {
      alpha[i] = memory[i].rho * detail::dot(memory[i].s, q);
      for (std::size_t k = 0; k < n; ++k) q[k] -= alpha[i] * memory[i].y[k];
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      const double gamma = detail::dot(last.s, last.y) / detail::dot(last.y, last.y);
      for (auto& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const double beta = memory[i].rho * detail::dot(memory[i].y, q);
      for (std::size_t k = 0; k < n; ++k) q[k] += memory[i].s[k] * (alpha[i] - beta);
    }
    for (std::size_t k = 0; k < n; ++k) d[k] = -q[k];

    double dphi0 = detail::dot(g, d);
    if (!(dphi0 < 0.0)) {
      memory.clear();
      for (std::size_t k = 0; k < n; ++k) d[k] = -g[k];
      dphi0 = -detail::dot(g, g);
    }
    const double f0 = res.f;
    double step = memory.empty() ? std::min(1.0, 1.0 / std::sqrt(-dphi0)) : 1.0;

    // Strong-Wolfe search: bracket, then zoom.
    double best_step = 0.0, best_f = f0;
    std::vector<double> best_g;
    bool wolfe = false;
    // Near the optimum f stops resolving the decrease; fall back to the approximate Wolfe
    // conditions (Hager-Zhang), which only rely on the directional derivative.
    const double f_noise = 1e-12 * (std::abs(f0) + 1.0);
    double approx_step = 0.0, approx_f = f0;
    std::vector<double> approx_g;
    auto keep_if_better = [&](double s, double fs, double ds) {
      if (!std::isfinite(fs)) return;
      if (fs < best_f && fs <= f0 + opts.c1 * s * dphi0) {
        best_step = s;
        best_f = fs;
        best_g = g_try;
      } else if (approx_step == 0.0 && fs <= f0 + f_noise && ds >= opts.c2 * dphi0 &&
                 ds <= (2.0 * opts.c1 - 1.0) * dphi0) {
        approx_step = s;
        approx_f = fs;
        approx_g = g_try;
      }
    };
    auto zoom = [&](double lo, double f_lo, double d_lo, double hi, double f_hi, double d_hi, int budget) {
      for (int z = 0; z < budget; ++z) {
        if (std::abs(hi - lo) <= 1e-16 * std::max(1.0, std::abs(lo))) return;
        const double s = detail::cubic_step(lo, f_lo, d_lo, hi, f_hi, d_hi);
        double fs, ds;
        eval_at(s, fs, ds);
        keep_if_better(s, fs, ds);
        if (!std::isfinite(fs) || fs > f0 + opts.c1 * s * dphi0 || fs >= f_lo) {
          hi = s;
          f_hi = std::isfinite(fs) ? fs : std::numeric_limits<double>::max();
          d_hi = std::isfinite(ds) ? ds : 0.0;
        } else {
          if (std::abs(ds) <= -opts.c2 * dphi0) {
            wolfe = true;
            return;
          }
          if (ds * (hi - lo) >= 0.0) {
            hi = lo;
            f_hi = f_lo;
            d_hi = d_lo;
          }
          lo = s;
          f_lo = fs;
          d_lo = ds;
        }
      }
    };

    double prev_step = 0.0, prev_f = f0, prev_d = dphi0;
    for (int ls = 0; ls < opts.max_linesearch && !wolfe; ++ls) {
      double fs, ds;
      eval_at(step, fs, ds);
      keep_if_better(step, fs, ds);
      const int budget = opts.max_linesearch - ls - 1;
      if (!std::isfinite(fs) || fs > f0 + opts.c1 * step * dphi0 || (ls > 0 && fs >= prev_f)) {
        zoom(prev_step, prev_f, prev_d, step, std::isfinite(fs) ? fs : std::numeric_limits<double>::max(),
             std::isfinite(ds) ? ds : 0.0, budget);
        break;
      }
      if (std::abs(ds) <= -opts.c2 * dphi0) {
        wolfe = true;
        break;
      }
      if (ds >= 0.0) {
        zoom(step, fs, ds, prev_step, prev_f, prev_d, budget);
        break;
      }
      prev_step = step;
      prev_f = fs;
      prev_d = ds;
      step *= 2.0;
    }

    if (best_step == 0.0 && approx_step != 0.0) {
      best_step = approx_step;
      best_f = approx_f;
      best_g = std::move(approx_g);
    }
    if (best_step == 0.0) {
      res.line_search_failed = true;
      break;
    }

    // Curvature pair from the accepted step.
    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      p.s[k] = best_step * d[k];
      p.y[k] = best_g[k] - g[k];
      res.x[k] += p.s[k];
    }
    g = best_g;
    res.f = best_f;
    res.trace.push_back(res.f);
    res.iterations = iter + 1;
    const double sy = detail::dot(p.s, p.y);
    if (sy > 1e-12 * detail::dot(p.y, p.y)) {
      p.rho = 1.0 / sy;
      memory.push_back(std::move(p));
      if (memory.size() > static_cast<std::size_t>(opts.history)) memory.pop_front();
    }
    res.grad_norm = detail::max_abs(g);
    if (res.grad_norm <= opts.gtol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace trackfuse
