#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Capacity feasibility of a rectifier network: does some VC dimension inside the
// W*L*log band, together with some sample-complexity constant b >= a, bracket the
// training-set size N?
//
//   c W L log(W/L) <= VC <= C W L log(W)
//   a (VC + log(1/rho)) / sigma <= N <= b (VC + log(1/rho)) / sigma

namespace trackfuse {

enum class LogBase { natural, base2, base10 };

inline const char* to_string(LogBase b) {
  switch (b) {
    case LogBase::natural: return "natural";
    case LogBase::base2: return "base-2";
    case LogBase::base10: return "base-10";
  }
  return "natural";
}

inline double log_in(LogBase base, double x) {
  switch (base) {
    case LogBase::natural: return std::log(x);
    case LogBase::base2: return std::log2(x);
    case LogBase::base10: return std::log10(x);
  }
  return std::log(x);
}

/// Connection weights between consecutive layers; biases are not counted.
inline std::size_t weights_count(std::span<const std::size_t> layer_sizes) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("weights_count: need at least two layers");
  std::size_t w = 0;
  for (std::size_t l = 1; l < layer_sizes.size(); ++l) w += layer_sizes[l - 1] * layer_sizes[l];
  return w;
}

struct VcProblem {
  double weights = 14;  // W
  double layers = 4;    // L
  double patterns = 1;  // N
  double rho = 0.5;     // failure probability
  double sigma = 1.0;   // learning error
  double c = 1.0;
  double C = 1.0;
  double a = 1.0;
  LogBase log_base = LogBase::natural;
  bool strict = false;

  void validate() const {
    if (!(weights >= 1.0 && layers >= 1.0 && patterns >= 1.0)) throw std::invalid_argument("VcProblem: W, L, N must be >= 1");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("VcProblem: rho must lie in (0,1)");
    if (!(sigma > 0.0)) throw std::invalid_argument("VcProblem: sigma must be positive");
    if (!(c <= C)) throw std::invalid_argument("VcProblem: need c <= C");
    if (!(a > 0.0)) throw std::invalid_argument("VcProblem: a must be positive");
  }

  double confidence_term() const { return log_in(log_base, 1.0 / rho); }
};

struct VcInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_clamped = false;  // W < L made the lower bound negative
};

inline VcInterval vc_interval(const VcProblem& p) {
  p.validate();
  const double wl = p.weights * p.layers;
  VcInterval r;
  r.lo = p.c * wl * log_in(p.log_base, p.weights / p.layers);
  r.hi = p.C * wl * log_in(p.log_base, p.weights);
  if (r.lo < 0.0) {
    r.lo = 0.0;
    r.lo_clamped = true;
  }
  return r;
}

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct PointReport {
  LogBase log_base = LogBase::natural;
  double vc = 0.0;
  double b = 0.0;
  std::array<InequalityCheck, 4> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.pass; });
  }
};

/// Evaluates the four inequalities at (vc, b). The lower VC bound is not clamped here.
inline PointReport check_point(const VcProblem& p, double vc, double b) {
  p.validate();
  auto holds = [&](double lhs, double rhs) { return p.strict ? lhs < rhs : lhs <= rhs; };
  const double wl = p.weights * p.layers;
  const double conf = p.confidence_term();
  PointReport r;
  r.log_base = p.log_base;
  r.vc = vc;
  r.b = b;
  const double lo = p.c * wl * log_in(p.log_base, p.weights / p.layers);
  const double hi = p.C * wl * log_in(p.log_base, p.weights);
  const double n_lo = p.a * (vc + conf) / p.sigma;
  const double n_hi = b * (vc + conf) / p.sigma;
  r.checks[0] = {"c*W*L*log(W/L) <= VC", lo, vc, holds(lo, vc)};
  r.checks[1] = {"VC <= C*W*L*log(W)", vc, hi, holds(vc, hi)};
  r.checks[2] = {"a*(VC+log(1/rho))/sigma <= N", n_lo, p.patterns, holds(n_lo, p.patterns)};
  r.checks[3] = {"N <= b*(VC+log(1/rho))/sigma", p.patterns, n_hi, holds(p.patterns, n_hi)};
  return r;
}

/// The same point checked under natural, base-2 and base-10 logarithms.
inline std::array<PointReport, 3> check_point_all_bases(VcProblem p, double vc, double b) {
  std::array<PointReport, 3> out;
  const std::array<LogBase, 3> bases{LogBase::natural, LogBase::base2, LogBase::base10};
  for (std::size_t i = 0; i < 3; ++i) {
    p.log_base = bases[i];
    out[i] = check_point(p, vc, b);
  }
  return out;
}

struct VcSolution {
  bool feasible = false;
  VcInterval interval;
  double min_patterns = 0.0;  // smallest N the lower sample bound admits over the interval
  double b_min = 0.0;         // smallest b for the witness VC
  double witness_vc = 0.0;
  double witness_b = 0.0;
};

/// b is free upward, so the system is feasible iff the VC band is non-empty and its
/// lower end admits N under the lower sample bound. The witness takes the largest
/// admissible VC in the band and the smallest b reaching N there.
inline VcSolution feasibility_solve(const VcProblem& p) {
  VcSolution s;
  s.interval = vc_interval(p);
  const double conf = p.confidence_term();
  const double lo = s.interval.lo;
  const double hi = s.interval.hi;
  s.min_patterns = p.a * (lo + conf) / p.sigma;
  // Largest VC whose lower sample bound still admits N.
  const double vc_cap = p.patterns * p.sigma / p.a - conf;

  if (!p.strict) {
    if (lo > hi || s.min_patterns > p.patterns) return s;
    s.witness_vc = std::min(hi, vc_cap);
    if (s.witness_vc + conf <= 0.0) return s;
    s.b_min = p.patterns * p.sigma / (s.witness_vc + conf);
    s.witness_b = std::max(s.b_min, p.a);
  } else {
    const double top = std::min(hi, vc_cap);
    if (!(lo < top)) return s;
    s.witness_vc = 0.5 * (lo + top);
    if (s.witness_vc + conf <= 0.0) return s;
    s.b_min = p.patterns * p.sigma / (s.witness_vc + conf);
    // Any b above b_min makes the upper sample bound strict.
    s.witness_b = std::max(s.b_min, p.a) * (1.0 + 1e-12);
  }
  // b_min * (VC + conf) / sigma may round just below N; step b up by a few ulps.
  for (int i = 0; i < 16 && !check_point(p, s.witness_vc, s.witness_b).checks[3].pass; ++i) {
    s.witness_b = std::nextafter(s.witness_b, HUGE_VAL);
  }
  s.feasible = check_point(p, s.witness_vc, s.witness_b).all_pass();
  return s;
}

}  // namespace trackfuse
