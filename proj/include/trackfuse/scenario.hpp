#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "trackfuse/core.hpp"
#include "trackfuse/metrics.hpp"
#include "trackfuse/random.hpp"

namespace trackfuse {

// Idealized IoU-over-time shapes for a pool of trackers.
enum class ScenarioKind { anti_phase, in_phase, upper_limited, dirac_delta };

enum class ScoreModelKind { calibrated, noisy, miscalibrated };

struct ScoreModel {
  ScoreModelKind kind = ScoreModelKind::calibrated;
  double sigma = 0.05;  // noise of the noisy model and spread of out-of-view scores
  int warp_id = 0;      // miscalibrated: 0 = power warp, 1 = logistic warp
};

/// Half-open frame range [begin, end).
struct FrameInterval {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool contains(std::size_t t) const noexcept { return t >= begin && t < end; }
  friend bool operator==(const FrameInterval&, const FrameInterval&) = default;
};

struct ScenarioSpec {
  std::string name = "synthetic";
  ScenarioKind kind = ScenarioKind::anti_phase;
  std::size_t n_trackers = 2;
  std::size_t length = 1000;

  // anti-phase / in-phase: IoU_j(t) = clip(A_j sin(2 pi f t + rho_j), 0, 1)
  std::vector<double> amplitudes;
  double frequency = 0.01;
  std::vector<double> phases;

  // upper-limited / dirac-delta: IoU_j(t) = K_j
  std::vector<double> constants;
  std::size_t spike_frame = 0;
  std::size_t spike_tracker = 1;
  double spike_value = 1.0;

  std::vector<FrameInterval> oov_windows;
  ScoreModel score_model;
  double oov_score_mean = 0.1;
  std::uint64_t seed = 0;

  // Scene geometry for the groundtruth walk.
  double box_width = 40.0;
  double box_height = 30.0;
  double frame_width = 640.0;
  double frame_height = 480.0;

  bool out_of_view(std::size_t t) const noexcept {
    return std::any_of(oov_windows.begin(), oov_windows.end(), [t](const FrameInterval& w) { return w.contains(t); });
  }

  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("ScenarioSpec: " + msg); };
    if (n_trackers < 2) fail("need at least 2 trackers");
    if (length == 0) fail("length must be positive");
    switch (kind) {
      case ScenarioKind::anti_phase:
      case ScenarioKind::in_phase:
        if (amplitudes.size() != n_trackers) fail("one amplitude per tracker required");
        for (double a : amplitudes) {
          if (!(a > 0.0 && a <= 1.0)) fail("amplitudes must lie in (0,1]");
        }
        if (!std::isfinite(frequency)) fail("frequency must be finite");
        if (kind == ScenarioKind::anti_phase) {
          if (phases.size() != n_trackers) fail("one phase per tracker required");
          for (double p : phases) {
            if (!std::isfinite(p)) fail("phases must be finite");
          }
        }
        break;
      case ScenarioKind::upper_limited:
      case ScenarioKind::dirac_delta:
        if (constants.size() != n_trackers) fail("one constant per tracker required");
        for (double c : constants) {
          if (!(c >= 0.0 && c <= 1.0)) fail("constants must lie in [0,1]");
        }
        if (kind == ScenarioKind::upper_limited &&
            std::set<double>(constants.begin(), constants.end()).size() != constants.size()) {
          fail("upper-limited constants must be distinct");
        }
        if (kind == ScenarioKind::dirac_delta) {
          if (spike_tracker >= n_trackers) fail("spike tracker out of range");
          if (spike_frame >= length) fail("spike frame out of range");
          const double top = *std::max_element(constants.begin(), constants.end());
          if (!(spike_value > top && spike_value <= 1.0)) fail("spike value must exceed every constant and be <= 1");
        }
        break;
    }
    for (const auto& w : oov_windows) {
      if (w.begin >= w.end || w.end > length) fail("out-of-view window outside [0, length)");
    }
    if (!(score_model.sigma >= 0.0)) fail("sigma must be >= 0");
    if (score_model.kind == ScoreModelKind::miscalibrated && (score_model.warp_id < 0 || score_model.warp_id > 1)) {
      fail("unknown warp id");
    }
    if (!(box_width > 0.0 && box_height > 0.0 && frame_width > box_width && frame_height > box_height)) {
      fail("scene geometry must fit the box inside the frame");
    }
  }
};

/// One IoU curve per tracker, indexed [tracker][frame].
inline std::vector<std::vector<double>> gen_iou_curves(const ScenarioSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_trackers;
  const std::size_t k = spec.length;
  std::vector<std::vector<double>> curves(n, std::vector<double>(k, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t t = 0; t < k; ++t) {
      double v = 0.0;
      switch (spec.kind) {
        case ScenarioKind::anti_phase:
        case ScenarioKind::in_phase: {
          const double phase = spec.kind == ScenarioKind::anti_phase ? spec.phases[j] : 0.0;
          v = spec.amplitudes[j] * std::sin(2.0 * std::numbers::pi * spec.frequency * static_cast<double>(t) + phase);
          break;
        }
        case ScenarioKind::upper_limited:
          v = spec.constants[j];
          break;
        case ScenarioKind::dirac_delta:
          v = (j == spec.spike_tracker && t == spec.spike_frame) ? spec.spike_value : spec.constants[j];
          break;
      }
      curves[j][t] = std::clamp(v, 0.0, 1.0);
    }
  }
  return curves;
}

/// Same-size copy of `gt` shifted along a random axis so that its IoU with `gt` equals
/// `target_iou`. For a shift d along an axis of extent e the overlap is (e - d) / (e + d).
inline BoundingBox synth_box_with_iou(const BoundingBox& gt, double target_iou, Rng& rng) {
  if (!(target_iou > 0.0 && target_iou <= 1.0)) {
    throw std::invalid_argument("synth_box_with_iou: target must lie in (0,1]; use synth_disjoint_box for 0");
  }
  const bool along_x = rng.coin();
  const double sign = rng.coin() ? 1.0 : -1.0;
  const double extent = along_x ? gt.w() : gt.h();
  auto shifted = [&](double d) {
    return along_x ? BoundingBox(gt.x() + sign * d, gt.y(), gt.w(), gt.h())
                   : BoundingBox(gt.x(), gt.y() + sign * d, gt.w(), gt.h());
  };
  double d = extent * (1.0 - target_iou) / (1.0 + target_iou);
  if (std::abs(iou(shifted(d), gt) - target_iou) > 1e-9) {
    // Rounding in far-from-origin coordinates; bisect on the exact overlap (decreasing in d).
    double lo = 0.0;
    double hi = extent;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (iou(shifted(mid), gt) > target_iou ? lo : hi) = mid;
    }
    d = 0.5 * (lo + hi);
  }
  return shifted(d);
}

/// Same-size box that does not overlap `gt`.
inline BoundingBox synth_disjoint_box(const BoundingBox& gt, Rng& rng) {
  const bool along_x = rng.coin();
  const double sign = rng.coin() ? 1.0 : -1.0;
  const double extent = along_x ? gt.w() : gt.h();
  const double d = extent * rng.uniform(1.25, 2.0);
  return along_x ? BoundingBox(gt.x() + sign * d, gt.y(), gt.w(), gt.h())
                 : BoundingBox(gt.x(), gt.y() + sign * d, gt.w(), gt.h());
}

namespace detail {

// Strictly increasing maps of [0,1] onto [0,1], one per tracker.
inline double warp_score(double v, int warp_id, std::size_t tracker) {
  const auto slot = static_cast<double>(tracker % 3);
  if (warp_id == 0) {
    const double gamma = std::exp2(slot - 1.0);  // 0.5, 1, 2
    return std::pow(v, gamma);
  }
  const double mid = 0.3 + 0.2 * slot;
  auto logistic = [mid](double x) { return 1.0 / (1.0 + std::exp(-8.0 * (x - mid))); };
  const double lo = logistic(0.0);
  const double hi = logistic(1.0);
  return (logistic(v) - lo) / (hi - lo);
}

}  // namespace detail

/// Synthetic sequence realizing the scenario's IoU curves. Deterministic in (spec, seed).
inline SequenceBundle gen_bundle(const ScenarioSpec& spec) {
  const auto curves = gen_iou_curves(spec);
  const std::size_t n = spec.n_trackers;
  const std::size_t k = spec.length;
  Rng rng(spec.seed);

  SequenceBundle bundle;
  bundle.name = spec.name;
  bundle.groundtruth.reserve(k);
  bundle.traces.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    bundle.traces[j].tracker_name = "tracker" + std::to_string(j);
    bundle.traces[j].frames.reserve(k);
  }

  // Smooth random walk of the target box, reflected at the frame border.
  const double max_x = spec.frame_width - spec.box_width;
  const double max_y = spec.frame_height - spec.box_height;
  double px = 0.5 * max_x;
  double py = 0.5 * max_y;
  double vx = 0.0;
  double vy = 0.0;
  std::vector<Region> last_box(n);

  auto score_for = [&](double v, std::size_t j) {
    switch (spec.score_model.kind) {
      case ScoreModelKind::calibrated: return v;
      case ScoreModelKind::noisy: return std::clamp(v + rng.normal(0.0, spec.score_model.sigma), 0.0, 1.0);
      case ScoreModelKind::miscalibrated: return detail::warp_score(v, spec.score_model.warp_id, j);
    }
    return v;
  };

  for (std::size_t t = 0; t < k; ++t) {
    vx = std::clamp(vx + rng.normal(0.0, 0.5), -4.0, 4.0);
    vy = std::clamp(vy + rng.normal(0.0, 0.5), -4.0, 4.0);
    px += vx;
    py += vy;
    if (px < 0.0 || px > max_x) {
      vx = -vx;
      px = std::clamp(px, 0.0, max_x);
    }
    if (py < 0.0 || py > max_y) {
      vy = -vy;
      py = std::clamp(py, 0.0, max_y);
    }
    const BoundingBox target(px, py, spec.box_width, spec.box_height);

    if (spec.out_of_view(t)) {
      bundle.groundtruth.push_back(std::nullopt);
      for (std::size_t j = 0; j < n; ++j) {
        const BoundingBox from = last_box[j].value_or(target);
        const BoundingBox drifted(from.x() + rng.normal(0.0, 3.0), from.y() + rng.normal(0.0, 3.0), from.w(), from.h());
        const double score = std::clamp(rng.normal(spec.oov_score_mean, spec.score_model.sigma), 0.0, 1.0);
        bundle.traces[j].frames.push_back({score, drifted});
        last_box[j] = drifted;
      }
      continue;
    }

    bundle.groundtruth.push_back(target);
    for (std::size_t j = 0; j < n; ++j) {
      const double v = curves[j][t];
      const BoundingBox box = v > 0.0 ? synth_box_with_iou(target, v, rng) : synth_disjoint_box(target, rng);
      bundle.traces[j].frames.push_back({score_for(v, j), box});
      last_box[j] = box;
    }
  }
  return bundle;
}

}  // namespace trackfuse
