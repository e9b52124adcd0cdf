#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trackfuse/core.hpp"
#include "trackfuse/fcm.hpp"
#include "trackfuse/fusion.hpp"
#include "trackfuse/lbfgs.hpp"
#include "trackfuse/metrics.hpp"
#include "trackfuse/mlp.hpp"
#include "trackfuse/scenario.hpp"
#include "trackfuse/standardizer.hpp"

namespace trackfuse::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// Parse or format failure; the message carries the file and line when known.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int model_version = 1;

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Hash of the canonical (key-sorted, compact) serialization.
inline std::string config_hash(const json& config) { return fnv1a_hex(config.dump()); }

// ---------------------------------------------------------------------------
// Plain text helpers

inline std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

inline void write_text(const fs::path& path, const std::string& text) {
  auto out = open_for_write(path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_number(std::string_view token) {
  const std::string t(trim(token));
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

inline std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line + 1);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Groundtruth: one "x,y,w,h" line per frame

/// A line whose four values do not form a valid box (non-finite or non-positive
/// extent) is an absent target. Anything that is not four numbers is an error.
inline FrameAnnotation parse_groundtruth_line(std::string_view line) {
  std::vector<double> v;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto token = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    const auto num = detail::parse_number(token);
    if (!num) throw FormatError("unparseable groundtruth token '" + std::string(token) + "'");
    v.push_back(*num);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (v.size() != 4) throw FormatError("groundtruth line needs 4 values, got " + std::to_string(v.size()));
  return BoundingBox::try_make(v[0], v[1], v[2], v[3]);
}

inline std::string format_region(const Region& r) {
  if (!r) return "nan,nan,nan,nan";
  return detail::format_double(r->x()) + "," + detail::format_double(r->y()) + "," + detail::format_double(r->w()) +
         "," + detail::format_double(r->h());
}

inline std::vector<FrameAnnotation> read_groundtruth(const fs::path& path) {
  const auto lines = read_lines(path);
  std::vector<FrameAnnotation> gt;
  gt.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      gt.push_back(parse_groundtruth_line(lines[i]));
    } catch (const FormatError& e) {
      throw FormatError(detail::where(path, i) + ": " + e.what());
    }
  }
  return gt;
}

inline void write_groundtruth(const fs::path& path, std::span<const FrameAnnotation> gt) {
  std::string text;
  for (const auto& g : gt) text += format_region(g) + "\n";
  write_text(path, text);
}

// ---------------------------------------------------------------------------
// Canonical trace: one {"frame", "score", "box"} record per line, box = [x,y,w,h] or null.
// An optional leading {"meta": {...}} line carries provenance.

inline json region_to_json(const Region& r) {
  if (!r) return nullptr;
  return json::array({r->x(), r->y(), r->w(), r->h()});
}

inline Region region_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 4) throw FormatError("box must be null or [x,y,w,h]");
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError("box values must be numbers");
  }
  auto box = BoundingBox::try_make(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
  if (!box) throw FormatError("box has non-positive or non-finite extent");
  return box;
}

inline void write_trace(std::ostream& out, const TrackerTrace& trace, const json& meta = nullptr) {
  if (!meta.is_null()) out << json{{"meta", meta}}.dump() << "\n";
  for (std::size_t t = 0; t < trace.frames.size(); ++t) {
    const auto& f = trace.frames[t];
    if (!std::isfinite(f.score)) throw std::invalid_argument("write_trace: non-finite score at frame " + std::to_string(t));
    json rec;
    rec["frame"] = t;
    rec["score"] = f.score;
    rec["box"] = region_to_json(f.box);
    out << rec.dump() << "\n";
  }
}

inline void write_trace(const fs::path& path, const TrackerTrace& trace, const json& meta = nullptr) {
  auto out = open_for_write(path);
  write_trace(out, trace, meta);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline TrackerTrace parse_trace(const std::vector<std::string>& lines, std::string tracker_name, const fs::path& origin) {
  TrackerTrace trace{std::move(tracker_name), {}};
  std::size_t expected = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::trim(lines[i]).empty()) continue;
    try {
      const json rec = json::parse(lines[i]);
      if (!rec.is_object()) throw FormatError("record is not an object");
      if (i == 0 && rec.contains("meta")) continue;
      if (!rec.contains("frame") || !rec["frame"].is_number_integer()) throw FormatError("missing integer frame index");
      if (rec["frame"].get<long long>() != static_cast<long long>(expected)) {
        throw FormatError("frame index " + rec["frame"].dump() + " where " + std::to_string(expected) + " expected");
      }
      if (!rec.contains("score") || !rec["score"].is_number()) throw FormatError("missing score");
      const double score = rec["score"].get<double>();
      if (!std::isfinite(score)) throw FormatError("non-finite score");
      if (!rec.contains("box")) throw FormatError("missing box");
      trace.frames.push_back({score, region_from_json(rec["box"])});
      ++expected;
    } catch (const json::exception& e) {
      throw FormatError(detail::where(origin, i) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(detail::where(origin, i) + ": " + e.what());
    }
  }
  return trace;
}

inline TrackerTrace read_trace(const fs::path& path, std::string tracker_name) {
  return parse_trace(read_lines(path), std::move(tracker_name), path);
}

// ---------------------------------------------------------------------------
// Challenge-toolkit raw output: a boxes file whose first line is the init marker "1"
// and a parallel confidence file with one score per line (first line ignored).

inline TrackerTrace read_vot_raw(const fs::path& boxes_path, const fs::path& confidence_path, std::string tracker_name,
                                 const Region& init_box = std::nullopt) {
  auto boxes = read_lines(boxes_path);
  auto conf = read_lines(confidence_path);
  auto drop_trailing_blanks = [](std::vector<std::string>& v) {
    while (v.size() > 1 && detail::trim(v.back()).empty()) v.pop_back();
  };
  drop_trailing_blanks(boxes);
  drop_trailing_blanks(conf);
  if (conf.empty()) conf.emplace_back();
  if (boxes.empty() || detail::trim(boxes.front()) != "1") {
    throw FormatError(boxes_path.string() + ": first line must be the init marker 1");
  }
  if (boxes.size() != conf.size()) {
    throw FormatError("length mismatch: " + boxes_path.string() + " has " + std::to_string(boxes.size()) +
                      " lines, " + confidence_path.string() + " has " + std::to_string(conf.size()));
  }
  TrackerTrace trace{std::move(tracker_name), {}};
  trace.frames.push_back({1.0, init_box});
  for (std::size_t i = 1; i < boxes.size(); ++i) {
    Region box;
    const auto line = detail::trim(boxes[i]);
    if (line.find(',') == std::string_view::npos) {
      // Single-token status lines ("0", "2") carry no box.
      if (!detail::parse_number(line)) throw FormatError(detail::where(boxes_path, i) + ": unparseable line");
    } else {
      try {
        box = parse_groundtruth_line(line);
      } catch (const FormatError& e) {
        throw FormatError(detail::where(boxes_path, i) + ": " + e.what());
      }
    }
    const auto score = detail::parse_number(conf[i]);
    if (!score || !std::isfinite(*score)) throw FormatError(detail::where(confidence_path, i) + ": bad confidence");
    trace.frames.push_back({*score, box});
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Dataset layout: <root>/<list_file> names sequences; each sequence directory holds the
// groundtruth file and one canonical trace per tracker (<tracker>.jsonl).

struct DatasetLayout {
  fs::path root;
  std::string list_file = "list.txt";
  std::string groundtruth_file = "groundtruth.txt";
  std::string trace_extension = ".jsonl";

  fs::path sequence_dir(const std::string& name) const { return root / name; }
  fs::path groundtruth_path(const std::string& name) const { return root / name / groundtruth_file; }
  fs::path trace_path(const std::string& name, const std::string& tracker) const {
    return root / name / (tracker + trace_extension);
  }
};

struct SequenceAnnotations {
  std::string name;
  std::vector<FrameAnnotation> groundtruth;
};

inline std::vector<std::string> read_sequence_list(const DatasetLayout& layout) {
  const fs::path list = layout.root / layout.list_file;
  std::vector<std::string> names;
  std::set<std::string> seen;
  const auto lines = read_lines(list);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string name(detail::trim(lines[i]));
    if (name.empty()) continue;
    if (!seen.insert(name).second) throw FormatError(detail::where(list, i) + ": duplicate sequence " + name);
    names.push_back(name);
  }
  return names;
}

inline std::vector<SequenceAnnotations> read_dataset(const DatasetLayout& layout) {
  std::vector<SequenceAnnotations> out;
  for (const auto& name : read_sequence_list(layout)) {
    if (!fs::is_directory(layout.sequence_dir(name))) {
      throw FormatError("sequence directory missing: " + layout.sequence_dir(name).string());
    }
    out.push_back({name, read_groundtruth(layout.groundtruth_path(name))});
  }
  return out;
}

inline SequenceBundle load_bundle(const DatasetLayout& layout, const std::string& name,
                                  const std::vector<std::string>& trackers) {
  SequenceBundle b;
  b.name = name;
  b.groundtruth = read_groundtruth(layout.groundtruth_path(name));
  for (const auto& tracker : trackers) b.traces.push_back(read_trace(layout.trace_path(name, tracker), tracker));
  require_valid(b);
  return b;
}

inline std::vector<SequenceBundle> load_bundles(const DatasetLayout& layout, const std::vector<std::string>& trackers) {
  std::vector<SequenceBundle> out;
  for (const auto& name : read_sequence_list(layout)) out.push_back(load_bundle(layout, name, trackers));
  return out;
}

/// Tracker order stored next to the list file, one name per line.
inline std::vector<std::string> read_tracker_order(const fs::path& root) {
  std::vector<std::string> names;
  for (const auto& line : read_lines(root / "trackers.txt")) {
    const std::string name(detail::trim(line));
    if (!name.empty()) names.push_back(name);
  }
  return names;
}

inline void write_dataset(const DatasetLayout& layout, std::span<const SequenceBundle> bundles, const json& meta = nullptr) {
  std::string list;
  for (const auto& b : bundles) {
    require_valid(b);
    list += b.name + "\n";
    write_groundtruth(layout.groundtruth_path(b.name), b.groundtruth);
    for (const auto& trace : b.traces) write_trace(layout.trace_path(b.name, trace.tracker_name), trace, meta);
  }
  write_text(layout.root / layout.list_file, list);
  if (!bundles.empty()) {
    std::string order;
    for (const auto& trace : bundles.front().traces) order += trace.tracker_name + "\n";
    write_text(layout.root / "trackers.txt", order);
  }
}

// ---------------------------------------------------------------------------
// Strict JSON object access

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw FormatError(what + ": expected an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw FormatError(what + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Learner options

inline json to_json(const LbfgsOptions& o) {
  return {{"history", o.history}, {"max_iter", o.max_iter}, {"gtol", o.gtol},
          {"c1", o.c1},           {"c2", o.c2},             {"max_linesearch", o.max_linesearch}};
}

inline LbfgsOptions lbfgs_options_from_json(const json& j) {
  detail::require_keys(j, {"history", "max_iter", "gtol", "c1", "c2", "max_linesearch"}, "lbfgs options");
  LbfgsOptions o;
  detail::read_opt(j, "history", o.history);
  detail::read_opt(j, "max_iter", o.max_iter);
  detail::read_opt(j, "gtol", o.gtol);
  detail::read_opt(j, "c1", o.c1);
  detail::read_opt(j, "c2", o.c2);
  detail::read_opt(j, "max_linesearch", o.max_linesearch);
  o.validate();
  return o;
}

inline json to_json(const FcmOptions& o) {
  return {{"clusters", o.clusters}, {"fuzziness", o.fuzziness}, {"tol", o.tol}, {"max_iter", o.max_iter}, {"seed", o.seed}};
}

inline FcmOptions fcm_options_from_json(const json& j) {
  detail::require_keys(j, {"clusters", "fuzziness", "tol", "max_iter", "seed"}, "fcm options");
  FcmOptions o;
  detail::read_opt(j, "clusters", o.clusters);
  detail::read_opt(j, "fuzziness", o.fuzziness);
  detail::read_opt(j, "tol", o.tol);
  detail::read_opt(j, "max_iter", o.max_iter);
  detail::read_opt(j, "seed", o.seed);
  return o;
}

// ---------------------------------------------------------------------------
// Model record

/// Trained learner plus everything needed to apply it: tracker order, scaling, options.
struct FusionModel {
  std::vector<std::string> trackers;
  Standardizer standardizer;
  AnyLearner learner;
  LbfgsOptions lbfgs;
  FcmOptions fcm;
  std::uint64_t seed = 0;
  std::string config_hash;

  int predict(std::span<const double> z) const { return learner.predict(z); }
};

inline json to_json(const FusionModel& m) {
  json j;
  j["format"] = "trackfuse-model";
  j["version"] = model_version;
  j["trackers"] = m.trackers;
  j["standardizer"] = {{"mean", m.standardizer.mean}, {"std", m.standardizer.std}};
  j["meta"] = {{"config_hash", m.config_hash}, {"seed", m.seed}};
  if (const auto* mlp = std::get_if<MlpModel>(&m.learner.model)) {
    j["learner"] = "mlp";
    j["mlp"] = {{"layer_sizes", mlp->layer_sizes}, {"params", mlp->params}, {"seed", mlp->seed}, {"lbfgs", to_json(m.lbfgs)}};
  } else {
    const auto& fcm = std::get<FcmModel>(m.learner.model);
    j["learner"] = "fcm";
    j["fcm"] = {{"centers", fcm.centers},     {"fuzziness", fcm.fuzziness}, {"cluster_to_class", fcm.cluster_to_class},
                {"tol", fcm.tol},             {"max_iter", fcm.max_iter},   {"seed", fcm.seed}};
  }
  return j;
}

inline FusionModel model_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != "trackfuse-model") throw FormatError("not a trackfuse model record");
    if (!j.contains("version")) throw FormatError("model record has no version field");
    if (j.at("version").get<int>() != model_version) {
      throw FormatError("unsupported model version " + j.at("version").dump() + " (expected " +
                        std::to_string(model_version) + ")");
    }
    detail::require_keys(j, {"format", "version", "trackers", "standardizer", "meta", "learner", "mlp", "fcm"}, "model");
    FusionModel m;
    m.trackers = j.at("trackers").get<std::vector<std::string>>();
    m.standardizer.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
    m.standardizer.std = j.at("standardizer").at("std").get<std::vector<double>>();
    m.config_hash = j.at("meta").at("config_hash").get<std::string>();
    m.seed = j.at("meta").at("seed").get<std::uint64_t>();
    const auto kind = j.at("learner").get<std::string>();
    if (kind == "mlp") {
      const auto& r = j.at("mlp");
      MlpModel mlp{r.at("layer_sizes").get<std::vector<std::size_t>>(), r.at("params").get<std::vector<double>>(),
                   r.at("seed").get<std::uint64_t>()};
      mlp.validate();
      m.lbfgs = lbfgs_options_from_json(r.at("lbfgs"));
      if (mlp.n_inputs() != m.trackers.size() || mlp.n_classes() != m.trackers.size() + 1) {
        throw FormatError("network shape does not match the tracker list");
      }
      m.learner.model = std::move(mlp);
    } else if (kind == "fcm") {
      const auto& r = j.at("fcm");
      FcmModel fcm{r.at("centers").get<std::vector<std::vector<double>>>(), r.at("fuzziness").get<double>(),
                   r.at("cluster_to_class").get<std::vector<int>>(),       r.at("tol").get<double>(),
                   r.at("max_iter").get<int>(),                            r.at("seed").get<std::uint64_t>()};
      fcm.validate();
      if (fcm.n_inputs() != m.trackers.size() || fcm.centers.size() != m.trackers.size() + 1) {
        throw FormatError("cluster layout does not match the tracker list");
      }
      m.fcm.fuzziness = fcm.fuzziness;
      m.fcm.tol = fcm.tol;
      m.fcm.max_iter = fcm.max_iter;
      m.fcm.seed = fcm.seed;
      m.fcm.clusters = fcm.centers.size();
      m.learner.model = std::move(fcm);
    } else {
      throw FormatError("unknown learner '" + kind + "'");
    }
    if (m.standardizer.dim() != m.trackers.size() || m.standardizer.std.size() != m.trackers.size()) {
      throw FormatError("standardizer dimension does not match the tracker list");
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("corrupted model record: ") + e.what());
  }
}

inline void write_model(const fs::path& path, const FusionModel& m) { write_text(path, to_json(m).dump(2) + "\n"); }

/// Loads a model; a non-empty `expected_trackers` must match the stored order exactly.
inline FusionModel read_model(const fs::path& path, const std::vector<std::string>& expected_trackers = {}) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": corrupted model record: " + e.what());
  }
  FusionModel m = model_from_json(j);
  if (!expected_trackers.empty() && expected_trackers != m.trackers) {
    std::string got, want;
    for (const auto& t : m.trackers) got += t + " ";
    for (const auto& t : expected_trackers) want += t + " ";
    throw FormatError("tracker order mismatch: model has [ " + got + "], run expects [ " + want + "]");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Labels

struct LabeledFrame {
  std::string sequence;
  std::size_t frame = 0;
  LabeledSample sample;
};

inline void write_labels(const fs::path& path, const std::vector<std::string>& trackers,
                         std::span<const LabeledFrame> frames, const json& meta) {
  json samples = json::array();
  for (const auto& f : frames) {
    samples.push_back({{"sequence", f.sequence}, {"frame", f.frame}, {"scores", f.sample.scores}, {"label", f.sample.label}});
  }
  const json j = {{"format", "trackfuse-labels"}, {"version", 1}, {"trackers", trackers}, {"meta", meta}, {"samples", samples}};
  write_text(path, j.dump() + "\n");
}

struct LabelSet {
  std::vector<std::string> trackers;
  std::vector<LabeledFrame> frames;
  json meta;
};

inline LabelSet read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    const json j = json::parse(in);
    if (j.value("format", "") != "trackfuse-labels" || j.value("version", 0) != 1) {
      throw FormatError(path.string() + ": not a version-1 label record");
    }
    LabelSet set;
    set.trackers = j.at("trackers").get<std::vector<std::string>>();
    set.meta = j.at("meta");
    const int n = static_cast<int>(set.trackers.size());
    for (const auto& s : j.at("samples")) {
      LabeledFrame f{s.at("sequence").get<std::string>(), s.at("frame").get<std::size_t>(),
                     {s.at("scores").get<std::vector<double>>(), s.at("label").get<int>()}};
      if (static_cast<int>(f.sample.scores.size()) != n || f.sample.label < 0 || f.sample.label > n) {
        throw FormatError(path.string() + ": malformed sample at " + f.sequence + ":" + std::to_string(f.frame));
      }
      set.frames.push_back(std::move(f));
    }
    return set;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": corrupted label record: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Evaluation results

inline json tau_to_json(double tau) {
  if (std::isinf(tau)) return tau < 0 ? "-inf" : "inf";
  return tau;
}

inline json to_json(const LtEvalResult& r) {
  json taus = json::array();
  for (double t : r.taus) taus.push_back(tau_to_json(t));
  return {{"taus", taus},          {"precision_curve", r.pr_curve}, {"recall_curve", r.re_curve},
          {"f1_curve", r.f1_curve}, {"tau_sigma", tau_to_json(r.tau_sigma)},
          {"precision", r.precision}, {"recall", r.recall},       {"f1", r.f1},
          {"n_p", r.n_p},           {"n_g", r.n_g},                {"degenerate", r.degenerate}};
}

/// Flat (tau, Pr, Re, F1) table for plotting.
inline std::string curve_table(const LtEvalResult& r) {
  std::string out = "tau\tprecision\trecall\tf1\n";
  for (std::size_t i = 0; i < r.taus.size(); ++i) {
    const std::string tau = std::isinf(r.taus[i]) ? (r.taus[i] < 0 ? "-inf" : "inf") : detail::format_double(r.taus[i]);
    out += tau + "\t" + detail::format_double(r.pr_curve[i]) + "\t" + detail::format_double(r.re_curve[i]) + "\t" +
           detail::format_double(r.f1_curve[i]) + "\n";
  }
  return out;
}

/// Results record: per-sequence curves plus the frame-pooled dataset result. The plot
/// table for the aggregate is written next to it with a .tsv extension.
inline void write_results(const fs::path& path, const std::vector<std::pair<std::string, LtEvalResult>>& per_sequence,
                          const LtEvalResult& aggregate, const json& meta) {
  json seqs = json::object();
  for (const auto& [name, r] : per_sequence) seqs[name] = to_json(r);
  const json j = {{"format", "trackfuse-results"}, {"protocol", "votlt"}, {"meta", meta},
                  {"sequences", seqs},              {"aggregate", to_json(aggregate)}};
  write_text(path, j.dump(2) + "\n");
  fs::path table = path;
  table.replace_extension(".tsv");
  write_text(table, curve_table(aggregate));
}

// ---------------------------------------------------------------------------
// Scenario specs

inline const std::map<std::string, ScenarioKind>& scenario_kinds() {
  static const std::map<std::string, ScenarioKind> kinds{{"anti-phase", ScenarioKind::anti_phase},
                                                         {"in-phase", ScenarioKind::in_phase},
                                                         {"upper-limited", ScenarioKind::upper_limited},
                                                         {"dirac-delta", ScenarioKind::dirac_delta}};
  return kinds;
}

inline ScenarioKind parse_scenario_kind(const std::string& s) {
  const auto it = scenario_kinds().find(s);
  if (it == scenario_kinds().end()) throw FormatError("unknown scenario kind '" + s + "'");
  return it->second;
}

inline std::string to_string(ScenarioKind k) {
  for (const auto& [name, kind] : scenario_kinds()) {
    if (kind == k) return name;
  }
  return "anti-phase";
}

inline ScenarioSpec scenario_from_json(const json& j) {
  try {
    detail::require_keys(j,
                         {"name", "kind", "n_trackers", "length", "amplitudes", "frequency", "phases", "constants",
                          "spike_frame", "spike_tracker", "spike_value", "oov_windows", "score_model", "oov_score_mean",
                          "seed", "box_width", "box_height", "frame_width", "frame_height"},
                         "scenario");
    ScenarioSpec s;
    detail::read_opt(j, "name", s.name);
    if (!j.contains("kind")) throw FormatError("scenario: missing kind");
    s.kind = parse_scenario_kind(j.at("kind").get<std::string>());
    detail::read_opt(j, "n_trackers", s.n_trackers);
    detail::read_opt(j, "length", s.length);
    detail::read_opt(j, "amplitudes", s.amplitudes);
    detail::read_opt(j, "frequency", s.frequency);
    detail::read_opt(j, "phases", s.phases);
    detail::read_opt(j, "constants", s.constants);
    detail::read_opt(j, "spike_frame", s.spike_frame);
    detail::read_opt(j, "spike_tracker", s.spike_tracker);
    detail::read_opt(j, "spike_value", s.spike_value);
    detail::read_opt(j, "oov_score_mean", s.oov_score_mean);
    detail::read_opt(j, "seed", s.seed);
    detail::read_opt(j, "box_width", s.box_width);
    detail::read_opt(j, "box_height", s.box_height);
    detail::read_opt(j, "frame_width", s.frame_width);
    detail::read_opt(j, "frame_height", s.frame_height);
    if (j.contains("oov_windows")) {
      for (const auto& w : j.at("oov_windows")) {
        if (!w.is_array() || w.size() != 2) throw FormatError("scenario: oov window must be [begin, end)");
        s.oov_windows.push_back({w[0].get<std::size_t>(), w[1].get<std::size_t>()});
      }
    }
    if (j.contains("score_model")) {
      const auto& m = j.at("score_model");
      detail::require_keys(m, {"kind", "sigma", "warp_id"}, "score_model");
      const auto kind = m.value("kind", std::string("calibrated"));
      if (kind == "calibrated") {
        s.score_model.kind = ScoreModelKind::calibrated;
      } else if (kind == "noisy") {
        s.score_model.kind = ScoreModelKind::noisy;
      } else if (kind == "miscalibrated") {
        s.score_model.kind = ScoreModelKind::miscalibrated;
      } else {
        throw FormatError("unknown score model '" + kind + "'");
      }
      detail::read_opt(m, "sigma", s.score_model.sigma);
      detail::read_opt(m, "warp_id", s.score_model.warp_id);
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline json to_json(const ScenarioSpec& s) {
  json windows = json::array();
  for (const auto& w : s.oov_windows) windows.push_back({w.begin, w.end});
  const char* model = s.score_model.kind == ScoreModelKind::calibrated ? "calibrated"
                      : s.score_model.kind == ScoreModelKind::noisy    ? "noisy"
                                                                       : "miscalibrated";
  return {{"name", s.name},
          {"kind", to_string(s.kind)},
          {"n_trackers", s.n_trackers},
          {"length", s.length},
          {"amplitudes", s.amplitudes},
          {"frequency", s.frequency},
          {"phases", s.phases},
          {"constants", s.constants},
          {"spike_frame", s.spike_frame},
          {"spike_tracker", s.spike_tracker},
          {"spike_value", s.spike_value},
          {"oov_windows", windows},
          {"score_model", {{"kind", model}, {"sigma", s.score_model.sigma}, {"warp_id", s.score_model.warp_id}}},
          {"oov_score_mean", s.oov_score_mean},
          {"seed", s.seed},
          {"box_width", s.box_width},
          {"box_height", s.box_height},
          {"frame_width", s.frame_width},
          {"frame_height", s.frame_height}};
}

// ---------------------------------------------------------------------------
// Run configuration

enum class LearnerKind { mlp, fcm };
enum class Protocol { votlt, otb };

struct RunConfig {
  std::vector<std::string> trackers;  // order defines class indices
  LearnerKind learner = LearnerKind::mlp;
  LbfgsOptions lbfgs;
  FcmOptions fcm;
  FusionPolicy policy;
  Protocol protocol = Protocol::votlt;
  OtbConfig otb;
  std::uint64_t seed = 0;
  std::string output = "run";
};

inline json to_json(const RunConfig& c) {
  return {{"trackers", c.trackers},
          {"learner", c.learner == LearnerKind::mlp ? "mlp" : "fcm"},
          {"lbfgs", to_json(c.lbfgs)},
          {"fcm", to_json(c.fcm)},
          {"policy",
           {{"mode", c.policy.mode == OovMode::fallback ? "fallback" : "suppress"},
            {"fallback_index", c.policy.fallback_index},
            {"zero_fallback_score", c.policy.zero_fallback_score}}},
          {"protocol", c.protocol == Protocol::votlt ? "votlt" : "otb"},
          {"otb",
           {{"lambda", c.otb.lambda},
            {"delta", c.otb.delta},
            {"auc_grid", c.otb.auc_grid},
            {"tre_segments", c.otb.tre_segments}}},
          {"seed", c.seed},
          {"output", c.output}};
}

inline RunConfig run_config_from_json(const json& j) {
  try {
    detail::require_keys(j, {"trackers", "learner", "lbfgs", "fcm", "policy", "protocol", "otb", "seed", "output"}, "config");
    RunConfig c;
    detail::read_opt(j, "trackers", c.trackers);
    if (j.contains("learner")) {
      const auto l = j.at("learner").get<std::string>();
      if (l == "mlp") {
        c.learner = LearnerKind::mlp;
      } else if (l == "fcm") {
        c.learner = LearnerKind::fcm;
      } else {
        throw FormatError("config: unknown learner '" + l + "'");
      }
    }
    if (j.contains("lbfgs")) c.lbfgs = lbfgs_options_from_json(j.at("lbfgs"));
    if (j.contains("fcm")) c.fcm = fcm_options_from_json(j.at("fcm"));
    if (j.contains("policy")) {
      const auto& p = j.at("policy");
      detail::require_keys(p, {"mode", "fallback_index", "zero_fallback_score"}, "policy");
      const auto mode = p.value("mode", std::string("fallback"));
      if (mode == "fallback") {
        c.policy.mode = OovMode::fallback;
      } else if (mode == "suppress") {
        c.policy.mode = OovMode::suppress;
      } else {
        throw FormatError("config: unknown policy mode '" + mode + "'");
      }
      detail::read_opt(p, "fallback_index", c.policy.fallback_index);
      detail::read_opt(p, "zero_fallback_score", c.policy.zero_fallback_score);
    }
    if (j.contains("protocol")) {
      const auto p = j.at("protocol").get<std::string>();
      if (p == "votlt") {
        c.protocol = Protocol::votlt;
      } else if (p == "otb") {
        c.protocol = Protocol::otb;
      } else {
        throw FormatError("config: unknown protocol '" + p + "'");
      }
    }
    if (j.contains("otb")) {
      const auto& o = j.at("otb");
      detail::require_keys(o, {"lambda", "delta", "auc_grid", "tre_segments"}, "otb");
      detail::read_opt(o, "lambda", c.otb.lambda);
      detail::read_opt(o, "delta", c.otb.delta);
      detail::read_opt(o, "auc_grid", c.otb.auc_grid);
      detail::read_opt(o, "tre_segments", c.otb.tre_segments);
      c.otb.validate();
    }
    detail::read_opt(j, "seed", c.seed);
    detail::read_opt(j, "output", c.output);
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed config: ") + e.what());
  }
}

inline json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace trackfuse::io
