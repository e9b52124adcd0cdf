#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "trackfuse/core.hpp"

namespace trackfuse {

inline double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x(), b.x());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y(), b.y());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

/// Overlap operator over optional regions: 0 when either side is absent.
inline double overlap(const Region& a, const Region& b) noexcept {
  return (a && b) ? iou(*a, *b) : 0.0;
}

/// Center location error in pixels.
inline double acl(const BoundingBox& a, const BoundingBox& b) noexcept {
  const Point ca = center(a);
  const Point cb = center(b);
  return std::hypot(ca.x - cb.x, ca.y - cb.y);
}

using FrameSpan = std::span<const TrackerFrameOutput>;
using AnnotationSpan = std::span<const FrameAnnotation>;

struct OtbConfig {
  double lambda = 20.0;
  double delta = 0.5;
  int auc_grid = 101;
  int tre_segments = 20;

  void validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("OtbConfig: lambda must be positive");
    if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("OtbConfig: delta must lie in [0,1]");
    if (auc_grid < 2) throw std::invalid_argument("OtbConfig: auc_grid must be >= 2");
    if (tre_segments < 1) throw std::invalid_argument("OtbConfig: tre_segments must be >= 1");
  }
};

namespace detail {

inline void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("length mismatch: trace has " + std::to_string(a) + " frames, groundtruth has " +
                                std::to_string(b));
  }
}

// Fraction of groundtruth-present frames whose prediction passes `hit`.
template <typename Hit>
double otb_fraction(FrameSpan pred, AnnotationSpan gt, Hit hit) {
  require_same_length(pred.size(), gt.size());
  std::size_t visible = 0;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    if (!gt[t]) continue;
    ++visible;
    if (pred[t].box && hit(*pred[t].box, *gt[t])) ++hits;
  }
  return visible == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(visible);
}

}  // namespace detail

inline double otb_precision(FrameSpan pred, AnnotationSpan gt, double lambda) {
  return detail::otb_fraction(pred, gt, [lambda](const BoundingBox& p, const BoundingBox& g) {
    return acl(p, g) < lambda;
  });
}

inline double otb_success(FrameSpan pred, AnnotationSpan gt, double delta) {
  return detail::otb_fraction(pred, gt, [delta](const BoundingBox& p, const BoundingBox& g) {
    return iou(p, g) > delta;
  });
}

/// Rectangle-rule area under the success curve, sampled at auc_grid evenly spaced thresholds on [0,1].
inline double otb_auc(FrameSpan pred, AnnotationSpan gt, const OtbConfig& cfg) {
  cfg.validate();
  detail::require_same_length(pred.size(), gt.size());
  std::vector<double> overlaps;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    if (gt[t]) overlaps.push_back(overlap(pred[t].box, gt[t]));
  }
  if (overlaps.empty()) return 0.0;
  double total = 0.0;
  for (int k = 0; k < cfg.auc_grid; ++k) {
    const double delta = static_cast<double>(k) / static_cast<double>(cfg.auc_grid - 1);
    const auto hits = std::count_if(overlaps.begin(), overlaps.end(), [delta](double o) { return o > delta; });
    total += static_cast<double>(hits) / static_cast<double>(overlaps.size());
  }
  return total / static_cast<double>(cfg.auc_grid);
}

inline double otb_precision(const TrackerTrace& trace, AnnotationSpan gt, double lambda) {
  return otb_precision(FrameSpan(trace.frames), gt, lambda);
}
inline double otb_success(const TrackerTrace& trace, AnnotationSpan gt, double delta) {
  return otb_success(FrameSpan(trace.frames), gt, delta);
}
inline double otb_auc(const TrackerTrace& trace, AnnotationSpan gt, const OtbConfig& cfg) {
  return otb_auc(FrameSpan(trace.frames), gt, cfg);
}

/// Temporal robustness on a stored trace: the trace is cut into `segments` contiguous
/// pieces, `metric(pred, gt)` is evaluated per piece, and the mean is taken over pieces
/// holding at least one visible frame. The tracker is not re-run at segment starts.
template <typename Metric>
double otb_tre(FrameSpan pred, AnnotationSpan gt, int segments, Metric metric) {
  detail::require_same_length(pred.size(), gt.size());
  if (segments < 1) throw std::invalid_argument("otb_tre: segment count must be >= 1");
  const std::size_t k = gt.size();
  const auto n = static_cast<std::size_t>(segments);
  if (n > k) throw std::invalid_argument("otb_tre: more segments than frames leaves a segment empty");
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t begin = s * k / n;
    const std::size_t end = (s + 1) * k / n;
    const auto seg_gt = gt.subspan(begin, end - begin);
    if (std::none_of(seg_gt.begin(), seg_gt.end(), [](const FrameAnnotation& g) { return g.has_value(); })) continue;
    sum += metric(pred.subspan(begin, end - begin), seg_gt);
    ++used;
  }
  return used == 0 ? 0.0 : sum / static_cast<double>(used);
}

enum class OtbMetric { precision, success, auc };

inline double otb_tre(FrameSpan pred, AnnotationSpan gt, const OtbConfig& cfg, OtbMetric base) {
  cfg.validate();
  return otb_tre(pred, gt, cfg.tre_segments, [&](FrameSpan p, AnnotationSpan g) {
    switch (base) {
      case OtbMetric::precision: return otb_precision(p, g, cfg.lambda);
      case OtbMetric::success: return otb_success(p, g, cfg.delta);
      case OtbMetric::auc: return otb_auc(p, g, cfg);
    }
    return 0.0;
  });
}

// ---------------------------------------------------------------------------
// Long-term protocol: precision/recall/F1 as a function of the confidence
// threshold, reported at the threshold that maximizes F1.

struct LtPoint {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_p = 0;  // frames reported at the threshold
  std::size_t n_g = 0;  // frames with visible groundtruth
  bool degenerate = false;  // n_p == 0 or n_g == 0
};

struct LtEvalResult {
  std::vector<double> taus;  // ascending; taus[0] is the -inf sentinel
  std::vector<double> pr_curve;
  std::vector<double> re_curve;
  std::vector<double> f1_curve;
  double tau_sigma = 0.0;
  std::size_t tau_index = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_p = 0;
  std::size_t n_g = 0;
  bool degenerate = false;
};

inline double f1_score(double precision, double recall) noexcept {
  return (precision + recall > 0.0) ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

/// Metrics at one fixed threshold: a frame is reported iff it carries a box and score >= tau.
inline LtPoint lt_point(FrameSpan pred, AnnotationSpan gt, double tau) {
  detail::require_same_length(pred.size(), gt.size());
  LtPoint pt;
  double pr_sum = 0.0;
  double re_sum = 0.0;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    const bool reported = pred[t].box && pred[t].score >= tau;
    const double o = reported ? overlap(pred[t].box, gt[t]) : 0.0;
    if (reported) {
      ++pt.n_p;
      pr_sum += o;
    }
    if (gt[t]) {
      ++pt.n_g;
      re_sum += o;
    }
  }
  pt.precision = pt.n_p ? pr_sum / static_cast<double>(pt.n_p) : 0.0;
  pt.recall = pt.n_g ? re_sum / static_cast<double>(pt.n_g) : 0.0;
  pt.f1 = f1_score(pt.precision, pt.recall);
  pt.degenerate = pt.n_p == 0 || pt.n_g == 0;
  return pt;
}

namespace detail {

struct LtFrame {
  double score;
  double overlap;  // Ω against groundtruth, 0 when either side is absent
  bool has_box;
  bool gt_present;
};

// Threshold sweep over frames sorted by descending score. Ties are ordered by content
// so the floating-point sums do not depend on the input frame order.
inline LtEvalResult lt_sweep(std::vector<LtFrame> frames) {
  for (const auto& f : frames) {
    if (!std::isfinite(f.score)) throw std::invalid_argument("vot_lt_eval: every frame needs a finite score");
  }
  std::sort(frames.begin(), frames.end(), [](const LtFrame& a, const LtFrame& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.overlap != b.overlap) return a.overlap < b.overlap;
    if (a.has_box != b.has_box) return a.has_box < b.has_box;
    return a.gt_present < b.gt_present;
  });

  std::size_t n_g = 0;
  for (const auto& f : frames) n_g += f.gt_present ? 1 : 0;

  LtEvalResult r;
  r.n_g = n_g;
  std::vector<std::size_t> np_desc;
  double pr_sum = 0.0;
  double re_sum = 0.0;
  std::size_t n_p = 0;
  auto record = [&](double tau) {
    const double pr = n_p ? pr_sum / static_cast<double>(n_p) : 0.0;
    const double re = n_g ? re_sum / static_cast<double>(n_g) : 0.0;
    r.taus.push_back(tau);
    r.pr_curve.push_back(pr);
    r.re_curve.push_back(re);
    r.f1_curve.push_back(f1_score(pr, re));
    np_desc.push_back(n_p);
  };
  for (std::size_t i = 0; i < frames.size();) {
    const double s = frames[i].score;
    for (; i < frames.size() && frames[i].score == s; ++i) {
      const auto& f = frames[i];
      if (!f.has_box) continue;
      ++n_p;
      pr_sum += f.overlap;
      if (f.gt_present) re_sum += f.overlap;
    }
    record(s);
  }
  record(-std::numeric_limits<double>::infinity());

  // Largest threshold among the F1 maximizers.
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.f1_curve.size(); ++i) {
    if (r.f1_curve[i] > r.f1_curve[best]) best = i;
  }

  const std::size_t m = r.taus.size();
  std::reverse(r.taus.begin(), r.taus.end());
  std::reverse(r.pr_curve.begin(), r.pr_curve.end());
  std::reverse(r.re_curve.begin(), r.re_curve.end());
  std::reverse(r.f1_curve.begin(), r.f1_curve.end());
  r.tau_index = m - 1 - best;
  r.tau_sigma = r.taus[r.tau_index];
  r.precision = r.pr_curve[r.tau_index];
  r.recall = r.re_curve[r.tau_index];
  r.f1 = r.f1_curve[r.tau_index];
  r.n_p = np_desc[best];
  r.degenerate = r.n_p == 0 || r.n_g == 0;
  return r;
}

inline void append_lt_frames(std::vector<LtFrame>& out, FrameSpan pred, AnnotationSpan gt) {
  require_same_length(pred.size(), gt.size());
  for (std::size_t t = 0; t < gt.size(); ++t) {
    out.push_back({pred[t].score, overlap(pred[t].box, gt[t]), pred[t].box.has_value(), gt[t].has_value()});
  }
}

}  // namespace detail

/// Long-term evaluation of one trace. Candidate thresholds are the distinct scores plus a
/// -inf sentinel; F1 is piecewise constant between them so the search is exact.
inline LtEvalResult vot_lt_eval(FrameSpan pred, AnnotationSpan gt) {
  std::vector<detail::LtFrame> frames;
  frames.reserve(gt.size());
  detail::append_lt_frames(frames, pred, gt);
  return detail::lt_sweep(std::move(frames));
}

inline LtEvalResult vot_lt_eval(const TrackerTrace& trace, AnnotationSpan gt) {
  return vot_lt_eval(FrameSpan(trace.frames), gt);
}

struct TraceWithGroundtruth {
  FrameSpan pred;
  AnnotationSpan gt;
};

/// Dataset-level evaluation: frames of all sequences are pooled before a single
/// threshold is chosen. The result does not depend on sequence order.
inline LtEvalResult vot_lt_eval_pooled(std::span<const TraceWithGroundtruth> sequences) {
  std::vector<detail::LtFrame> frames;
  for (const auto& s : sequences) detail::append_lt_frames(frames, s.pred, s.gt);
  return detail::lt_sweep(std::move(frames));
}

}  // namespace trackfuse
