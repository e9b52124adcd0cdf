#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "trackfuse/core.hpp"
#include "trackfuse/fcm.hpp"
#include "trackfuse/mlp.hpp"
#include "trackfuse/standardizer.hpp"

namespace trackfuse {

/// Anything that maps a standardized score vector to a class in [0, N].
template <typename L>
concept Learner = requires(const L& l, std::span<const double> z) {
  { l.predict(z) } -> std::convertible_to<int>;
};

/// Either of the shipped learners behind one value type.
struct AnyLearner {
  std::variant<MlpModel, FcmModel> model;

  int predict(std::span<const double> z) const {
    return std::visit([&](const auto& m) { return m.predict(z); }, model);
  }
  bool is_mlp() const noexcept { return std::holds_alternative<MlpModel>(model); }
};

/// Predicts the same class for every frame.
struct ConstantLearner {
  int cls = 0;
  int predict(std::span<const double>) const { return cls; }
};

enum class OovMode { fallback, suppress };

struct FusionPolicy {
  OovMode mode = OovMode::fallback;
  std::size_t fallback_index = 0;
  /// Emit score 0 instead of the fallback tracker's own score on out-of-view frames.
  bool zero_fallback_score = false;

  void validate(std::size_t n_trackers) const {
    if (mode == OovMode::fallback && fallback_index >= n_trackers) {
      throw std::invalid_argument("FusionPolicy: fallback index " + std::to_string(fallback_index) +
                                  " out of range for " + std::to_string(n_trackers) + " trackers");
    }
  }
};

struct FusedDecision {
  std::size_t frame = 0;
  int chosen = 0;  // N means out of view
  Region emitted_box;
  double emitted_score = 0.0;
};

struct FusionResult {
  TrackerTrace trace;
  std::vector<FusedDecision> decisions;
};

template <Learner L>
int decide_frame(std::span<const double> scores, const L& learner, const Standardizer& standardizer) {
  for (double s : scores) {
    if (!std::isfinite(s)) throw std::invalid_argument("decide_frame: non-finite score");
  }
  const int cls = learner.predict(standardizer.transform(scores));
  if (cls < 0 || cls > static_cast<int>(scores.size())) {
    throw std::runtime_error("decide_frame: learner returned class " + std::to_string(cls) + " outside [0, N]");
  }
  return cls;
}

/// Runs the learner on every frame and emits the chosen tracker's output. Out-of-view
/// predictions emit the fallback tracker's output or nothing, depending on the policy.
template <Learner L>
FusionResult fuse(const SequenceBundle& bundle, const L& learner, const Standardizer& standardizer,
                  const FusionPolicy& policy, std::string name = "fused") {
  require_valid(bundle);
  const std::size_t n = bundle.n_trackers();
  policy.validate(n);
  if (standardizer.dim() != n) {
    throw std::invalid_argument("fuse: learner expects " + std::to_string(standardizer.dim()) + " scores, bundle has " +
                                std::to_string(n) + " trackers");
  }
  FusionResult out;
  out.trace.tracker_name = std::move(name);
  out.trace.frames.reserve(bundle.length());
  out.decisions.reserve(bundle.length());
  std::vector<double> scores(n);
  for (std::size_t t = 0; t < bundle.length(); ++t) {
    for (std::size_t j = 0; j < n; ++j) scores[j] = bundle.traces[j].frames[t].score;
    int cls;
    try {
      cls = decide_frame(std::span<const double>(scores), learner, standardizer);
    } catch (const std::exception& e) {
      throw std::runtime_error("frame " + std::to_string(t) + ": " + e.what());
    }
    TrackerFrameOutput emitted;
    if (cls < static_cast<int>(n)) {
      emitted = bundle.traces[static_cast<std::size_t>(cls)].frames[t];
    } else if (policy.mode == OovMode::fallback) {
      emitted = bundle.traces[policy.fallback_index].frames[t];
      if (policy.zero_fallback_score) emitted.score = 0.0;
    } else {
      emitted = {0.0, std::nullopt};
    }
    out.trace.frames.push_back(emitted);
    out.decisions.push_back({t, cls, emitted.box, emitted.score});
  }
  return out;
}

struct OovStats {
  std::size_t oov_p = 0;  // frames predicted out of view
  std::size_t oov_g = 0;  // frames with absent groundtruth
  std::size_t true_positives = 0;
  double precision = 0.0;  // tp / oov_p
  double recall = 0.0;     // tp / oov_g
  bool precision_undefined = false;
  bool recall_undefined = false;
};

/// Out-of-view detection accounting; `n_trackers` identifies the out-of-view class.
inline OovStats oov_stats(std::span<const FusedDecision> decisions, std::span<const FrameAnnotation> gt,
                          std::size_t n_trackers) {
  if (decisions.size() != gt.size()) throw std::invalid_argument("oov_stats: length mismatch");
  OovStats s;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    const bool predicted = decisions[t].chosen == static_cast<int>(n_trackers);
    const bool absent = !gt[t].has_value();
    s.oov_p += predicted ? 1 : 0;
    s.oov_g += absent ? 1 : 0;
    s.true_positives += (predicted && absent) ? 1 : 0;
  }
  s.precision_undefined = s.oov_p == 0;
  s.recall_undefined = s.oov_g == 0;
  s.precision = s.oov_p ? static_cast<double>(s.true_positives) / static_cast<double>(s.oov_p) : 0.0;
  s.recall = s.oov_g ? static_cast<double>(s.true_positives) / static_cast<double>(s.oov_g) : 0.0;
  return s;
}

}  // namespace trackfuse
