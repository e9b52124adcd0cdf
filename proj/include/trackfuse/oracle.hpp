#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "trackfuse/core.hpp"
#include "trackfuse/metrics.hpp"

namespace trackfuse {

namespace detail {

// Best-IoU tracker at a visible frame, lowest index on ties (including all-zero overlap).
inline std::size_t best_tracker(const SequenceBundle& bundle, std::size_t t) {
  std::size_t best = 0;
  double best_iou = -1.0;
  for (std::size_t j = 0; j < bundle.traces.size(); ++j) {
    const double o = overlap(bundle.traces[j].frames[t].box, bundle.groundtruth[t]);
    if (o > best_iou) {
      best_iou = o;
      best = j;
    }
  }
  return best;
}

}  // namespace detail

/// Per-frame training labels. The label is the index of the tracker with the highest IoU
/// against groundtruth, or N when the target is absent. Scores play no part in the choice.
inline std::vector<LabeledSample> label_frames(const SequenceBundle& bundle) {
  require_valid(bundle);
  const std::size_t n = bundle.n_trackers();
  std::vector<LabeledSample> samples(bundle.length());
  for (std::size_t t = 0; t < bundle.length(); ++t) {
    auto& s = samples[t];
    s.scores.reserve(n);
    for (const auto& trace : bundle.traces) s.scores.push_back(trace.frames[t].score);
    s.label = bundle.groundtruth[t] ? static_cast<int>(detail::best_tracker(bundle, t)) : static_cast<int>(n);
  }
  return samples;
}

/// Upper bound of any selector over the given trackers: the best tracker's output at
/// visible frames, nothing (score 0) where the target is absent.
inline TrackerTrace oracle_fusion(const SequenceBundle& bundle) {
  require_valid(bundle);
  TrackerTrace out{"oracle", {}};
  out.frames.reserve(bundle.length());
  for (std::size_t t = 0; t < bundle.length(); ++t) {
    if (!bundle.groundtruth[t]) {
      out.frames.push_back({0.0, std::nullopt});
    } else {
      out.frames.push_back(bundle.traces[detail::best_tracker(bundle, t)].frames[t]);
    }
  }
  return out;
}

enum class ScenarioTag { anti_phase_like, in_phase_like, upper_limited_like, dirac_like, mixed };

inline const char* to_string(ScenarioTag tag) {
  switch (tag) {
    case ScenarioTag::anti_phase_like: return "anti-phase-like";
    case ScenarioTag::in_phase_like: return "in-phase-like";
    case ScenarioTag::upper_limited_like: return "upper-limited-like";
    case ScenarioTag::dirac_like: return "dirac-like";
    case ScenarioTag::mixed: return "mixed";
  }
  return "mixed";
}

struct ComplementarityReport {
  std::vector<double> win_fraction;  // per tracker, over all frames
  double oov_fraction = 0.0;
  double strict_win_fraction = 0.0;  // best tracker's share of visible frames won without a tie
  double alternation_rate = 0.0;
  double oracle_f1 = 0.0;
  double best_single_f1 = 0.0;
  double oracle_gain = 0.0;
  ScenarioTag tag = ScenarioTag::mixed;
};

/// Tagging thresholds; rules are applied in the order dirac, upper-limited, in-phase, anti-phase.
struct TagRules {
  double upper_limited_share = 0.95;
  double in_phase_gain = 0.01;
  double anti_phase_alternation = 0.8;
};

inline ComplementarityReport complementarity_report(const SequenceBundle& bundle, const TagRules& rules = {}) {
  const auto samples = label_frames(bundle);
  const std::size_t n = bundle.n_trackers();
  const std::size_t k = bundle.length();

  ComplementarityReport rep;
  rep.win_fraction.assign(n, 0.0);
  std::vector<std::size_t> wins(n + 1, 0);
  std::vector<std::size_t> strict_wins(n, 0);
  std::vector<int> visible_labels;
  for (std::size_t t = 0; t < k; ++t) {
    const auto label = static_cast<std::size_t>(samples[t].label);
    ++wins[label];
    if (label == n) continue;
    visible_labels.push_back(samples[t].label);
    const double top = overlap(bundle.traces[label].frames[t].box, bundle.groundtruth[t]);
    bool strict = true;
    for (std::size_t j = 0; j < n && strict; ++j) {
      if (j != label && overlap(bundle.traces[j].frames[t].box, bundle.groundtruth[t]) >= top) strict = false;
    }
    if (strict) ++strict_wins[label];
  }
  for (std::size_t j = 0; j < n; ++j) rep.win_fraction[j] = static_cast<double>(wins[j]) / static_cast<double>(k);
  rep.oov_fraction = static_cast<double>(wins[n]) / static_cast<double>(k);

  const std::size_t n_visible = visible_labels.size();
  if (n_visible > 0) {
    rep.strict_win_fraction = static_cast<double>(*std::max_element(strict_wins.begin(), strict_wins.end())) /
                              static_cast<double>(n_visible);
  }
  if (n_visible >= 2) {
    std::size_t changes = 0;
    for (std::size_t i = 1; i < n_visible; ++i) changes += visible_labels[i] != visible_labels[i - 1] ? 1 : 0;
    rep.alternation_rate = static_cast<double>(changes) / static_cast<double>(n_visible - 1);
  }

  rep.oracle_f1 = vot_lt_eval(oracle_fusion(bundle), bundle.groundtruth).f1;
  rep.best_single_f1 = 0.0;
  for (const auto& trace : bundle.traces) {
    rep.best_single_f1 = std::max(rep.best_single_f1, vot_lt_eval(trace, bundle.groundtruth).f1);
  }
  rep.oracle_gain = rep.oracle_f1 - rep.best_single_f1;

  // Dirac: one visible frame departs from an otherwise constant winner.
  std::size_t departures = n_visible;
  if (n_visible >= 3) {
    std::map<int, std::size_t> counts;
    for (int l : visible_labels) ++counts[l];
    const auto modal = std::max_element(counts.begin(), counts.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
    departures = n_visible - modal->second;
  }

  if (departures == 1) {
    rep.tag = ScenarioTag::dirac_like;
  } else if (rep.strict_win_fraction >= rules.upper_limited_share) {
    rep.tag = ScenarioTag::upper_limited_like;
  } else if (rep.oracle_gain < rules.in_phase_gain) {
    rep.tag = ScenarioTag::in_phase_like;
  } else if (rep.alternation_rate >= rules.anti_phase_alternation) {
    rep.tag = ScenarioTag::anti_phase_like;
  } else {
    rep.tag = ScenarioTag::mixed;
  }
  return rep;
}

}  // namespace trackfuse
