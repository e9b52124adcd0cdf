#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trackfuse {

/// Axis-aligned region in pixels, (x, y) is the top-left corner.
/// Construction enforces finite coordinates and a strictly positive extent.
class BoundingBox {
 public:
  BoundingBox(double x, double y, double w, double h) : x_(x), y_(y), w_(w), h_(h) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) || !std::isfinite(h)) {
      throw std::invalid_argument("BoundingBox: non-finite coordinate");
    }
    if (!(w > 0.0) || !(h > 0.0)) {
      throw std::invalid_argument("BoundingBox: width and height must be positive");
    }
  }

  /// Returns a box when the four values describe a valid region, nothing otherwise.
  static std::optional<BoundingBox> try_make(double x, double y, double w, double h) noexcept {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) || !std::isfinite(h)) return std::nullopt;
    if (!(w > 0.0) || !(h > 0.0)) return std::nullopt;
    return BoundingBox(x, y, w, h);
  }

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double w() const noexcept { return w_; }
  double h() const noexcept { return h_; }
  double right() const noexcept { return x_ + w_; }
  double bottom() const noexcept { return y_ + h_; }
  double area() const noexcept { return w_ * h_; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double x_, y_, w_, h_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline Point center(const BoundingBox& b) noexcept {
  return {b.x() + b.w() / 2.0, b.y() + b.h() / 2.0};
}

/// Present box or Absent (target out of view / no prediction).
using Region = std::optional<BoundingBox>;

/// Per-frame groundtruth.
using FrameAnnotation = Region;

struct TrackerFrameOutput {
  double score = 0.0;
  Region box;
  friend bool operator==(const TrackerFrameOutput&, const TrackerFrameOutput&) = default;
};

struct TrackerTrace {
  std::string tracker_name;
  std::vector<TrackerFrameOutput> frames;

  std::size_t size() const noexcept { return frames.size(); }
  friend bool operator==(const TrackerTrace&, const TrackerTrace&) = default;
};

struct SequenceBundle {
  std::string name;
  std::vector<FrameAnnotation> groundtruth;
  std::vector<TrackerTrace> traces;

  std::size_t length() const noexcept { return groundtruth.size(); }
  std::size_t n_trackers() const noexcept { return traces.size(); }
  friend bool operator==(const SequenceBundle&, const SequenceBundle&) = default;
};

/// Score vector of N trackers with a class in [0, N]; N is the out-of-view class.
struct LabeledSample {
  std::vector<double> scores;
  int label = 0;
  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct Violation {
  std::optional<std::size_t> frame;
  std::string tracker;
  std::string rule;
};

inline std::string to_string(const Violation& v) {
  std::ostringstream os;
  os << v.rule;
  if (!v.tracker.empty()) os << " [tracker " << v.tracker << "]";
  if (v.frame) os << " [frame " << *v.frame << "]";
  return os.str();
}

/// Checks every bundle invariant and lists the violations. Never throws on malformed data.
inline std::vector<Violation> validate_bundle(const SequenceBundle& bundle) {
  std::vector<Violation> report;
  const std::size_t k = bundle.length();
  if (k == 0) report.push_back({std::nullopt, "", "sequence has no frames"});
  if (bundle.traces.size() < 2) report.push_back({std::nullopt, "", "fewer than 2 trackers"});

  std::set<std::string> names;
  for (const auto& trace : bundle.traces) {
    if (trace.tracker_name.empty()) report.push_back({std::nullopt, trace.tracker_name, "empty tracker name"});
    if (!names.insert(trace.tracker_name).second) {
      report.push_back({std::nullopt, trace.tracker_name, "duplicate tracker name"});
    }
    if (trace.frames.size() != k) {
      std::ostringstream os;
      os << "trace length " << trace.frames.size() << " differs from sequence length " << k;
      report.push_back({std::nullopt, trace.tracker_name, os.str()});
    }
    for (std::size_t t = 0; t < trace.frames.size(); ++t) {
      if (!std::isfinite(trace.frames[t].score)) {
        report.push_back({t, trace.tracker_name, "non-finite score"});
      }
    }
  }
  return report;
}

/// Throws std::invalid_argument listing the violations when the bundle is malformed.
inline void require_valid(const SequenceBundle& bundle) {
  const auto report = validate_bundle(bundle);
  if (report.empty()) return;
  std::ostringstream os;
  os << "invalid bundle '" << bundle.name << "':";
  for (const auto& v : report) os << "\n  " << to_string(v);
  throw std::invalid_argument(os.str());
}

}  // namespace trackfuse
