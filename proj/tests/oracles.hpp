#pragma once

// Independent reference implementations used only by the tests. They share no code
// paths with the library beyond the plain data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "trackfuse/core.hpp"

namespace oracle {

using trackfuse::BoundingBox;
using trackfuse::FrameAnnotation;
using trackfuse::TrackerFrameOutput;

/// IoU by counting cell centers of a grid with `cells` cells per unit length.
inline double raster_iou(const BoundingBox& a, const BoundingBox& b, int cells = 4) {
  const double x0 = std::min(a.x(), b.x());
  const double y0 = std::min(a.y(), b.y());
  const double x1 = std::max(a.right(), b.right());
  const double y1 = std::max(a.bottom(), b.bottom());
  const double step = 1.0 / cells;
  const auto nx = static_cast<long>(std::ceil((x1 - x0) * cells));
  const auto ny = static_cast<long>(std::ceil((y1 - y0) * cells));
  auto inside = [](const BoundingBox& r, double px, double py) {
    return px > r.x() && px < r.right() && py > r.y() && py < r.bottom();
  };
  long both = 0;
  long either = 0;
  for (long i = 0; i < nx; ++i) {
    const double px = x0 + (static_cast<double>(i) + 0.5) * step;
    for (long j = 0; j < ny; ++j) {
      const double py = y0 + (static_cast<double>(j) + 0.5) * step;
      const bool in_a = inside(a, px, py);
      const bool in_b = inside(b, px, py);
      both += (in_a && in_b) ? 1 : 0;
      either += (in_a || in_b) ? 1 : 0;
    }
  }
  return either ? static_cast<double>(both) / static_cast<double>(either) : 0.0;
}

/// Intersection over union computed from explicit corner clipping, no shared helpers.
inline double corner_iou(const BoundingBox& a, const BoundingBox& b) {
  const double l = std::max(a.x(), b.x());
  const double r = std::min(a.x() + a.w(), b.x() + b.w());
  const double t = std::max(a.y(), b.y());
  const double btm = std::min(a.y() + a.h(), b.y() + b.h());
  if (r <= l || btm <= t) return 0.0;
  const double inter = (r - l) * (btm - t);
  return inter / (a.w() * a.h() + b.w() * b.h() - inter);
}

struct LtCurve {
  std::vector<double> taus;  // ascending, -inf first
  std::vector<double> pr, re, f1;
  std::size_t best = 0;  // index into taus
};

/// Long-term precision/recall at every candidate threshold by re-scanning all frames.
inline LtCurve brute_lt(const std::vector<TrackerFrameOutput>& pred, const std::vector<FrameAnnotation>& gt) {
  std::set<double> distinct;
  for (const auto& p : pred) distinct.insert(p.score);
  LtCurve c;
  c.taus.push_back(-std::numeric_limits<double>::infinity());
  c.taus.insert(c.taus.end(), distinct.begin(), distinct.end());
  for (double tau : c.taus) {
    double pr_sum = 0.0, re_sum = 0.0;
    std::size_t np = 0, ng = 0;
    for (std::size_t t = 0; t < gt.size(); ++t) {
      const bool reported = pred[t].box.has_value() && pred[t].score >= tau;
      double o = 0.0;
      if (reported && gt[t]) o = corner_iou(*pred[t].box, *gt[t]);
      if (reported) {
        ++np;
        pr_sum += o;
      }
      if (gt[t]) {
        ++ng;
        re_sum += o;
      }
    }
    const double pr = np ? pr_sum / static_cast<double>(np) : 0.0;
    const double re = ng ? re_sum / static_cast<double>(ng) : 0.0;
    c.pr.push_back(pr);
    c.re.push_back(re);
    c.f1.push_back(pr + re > 0.0 ? 2.0 * pr * re / (pr + re) : 0.0);
  }
  for (std::size_t i = 0; i < c.f1.size(); ++i) {
    if (c.f1[i] >= c.f1[c.best]) c.best = i;  // later index = larger threshold
  }
  return c;
}

/// Best number of agreements over all bijections, by recursive enumeration.
inline std::size_t best_bijection_hits(const std::vector<std::size_t>& assign, const std::vector<int>& labels,
                                       std::size_t k) {
  std::vector<std::vector<std::size_t>> table(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < assign.size(); ++i) ++table[assign[i]][static_cast<std::size_t>(labels[i])];
  std::vector<bool> used(k, false);
  std::function<std::size_t(std::size_t)> rec = [&](std::size_t cl) -> std::size_t {
    if (cl == k) return 0;
    std::size_t best = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (used[c]) continue;
      used[c] = true;
      best = std::max(best, table[cl][c] + rec(cl + 1));
      used[c] = false;
    }
    return best;
  };
  return rec(0);
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Mean cross-entropy of a ReLU/softmax network, evaluated layer by layer with plain loops.
inline double mlp_loss(const std::vector<std::size_t>& sizes, const std::vector<double>& params,
                       const std::vector<std::vector<double>>& inputs, const std::vector<int>& labels) {
  double total = 0.0;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    std::vector<double> a = inputs[s];
    std::size_t off = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
      std::vector<double> z(sizes[l], 0.0);
      for (std::size_t o = 0; o < sizes[l]; ++o) {
        for (std::size_t i = 0; i < sizes[l - 1]; ++i) z[o] += params[off + o * sizes[l - 1] + i] * a[i];
      }
      off += sizes[l] * sizes[l - 1];
      for (std::size_t o = 0; o < sizes[l]; ++o) z[o] += params[off + o];
      off += sizes[l];
      if (l + 1 < sizes.size()) {
        for (auto& v : z) v = std::max(0.0, v);
      }
      a = z;
    }
    const double mx = *std::max_element(a.begin(), a.end());
    double lse = 0.0;
    for (double v : a) lse += std::exp(v - mx);
    lse = mx + std::log(lse);
    total += lse - a[static_cast<std::size_t>(labels[s])];
  }
  return total / static_cast<double>(inputs.size());
}

}  // namespace oracle
