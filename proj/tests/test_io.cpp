#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "trackfuse/io.hpp"
#include "trackfuse/trackfuse.hpp"

using namespace trackfuse;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) : path_(fs::temp_directory_path() / ("trackfuse_io_" + tag)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

SequenceBundle sample_bundle(const std::string& name, std::uint64_t seed) {
  ScenarioSpec s;
  s.name = name;
  s.kind = ScenarioKind::anti_phase;
  s.length = 120;
  s.amplitudes = {1.0, 1.0};
  s.phases = {0.0, std::numbers::pi};
  s.oov_windows = {{30, 50}};
  s.score_model.kind = ScoreModelKind::noisy;
  s.seed = seed;
  return gen_bundle(s);
}

}  // namespace

TEST(Groundtruth, ParsesBoxesAndAbsentMarkers) {
  EXPECT_EQ(io::parse_groundtruth_line("1,2,3,4"), Region(BoundingBox(1, 2, 3, 4)));
  EXPECT_EQ(io::parse_groundtruth_line("nan,nan,nan,nan"), Region{});
  EXPECT_EQ(io::parse_groundtruth_line("0,0,0,0"), Region{});
  EXPECT_THROW(io::parse_groundtruth_line("1,2,3"), io::FormatError);
  EXPECT_THROW(io::parse_groundtruth_line("1,2,x,4"), io::FormatError);
}

TEST(Groundtruth, ErrorsNameFileAndLine) {
  TempDir dir("gt");
  write_file(dir.path() / "gt.txt", "1,2,3,4\n1,2\n");
  try {
    io::read_groundtruth(dir.path() / "gt.txt");
    FAIL() << "expected FormatError";
  } catch (const io::FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("gt.txt:2"), std::string::npos) << e.what();
  }
}

TEST(Trace, RoundTripIsExact) {
  const auto b = sample_bundle("s", 1);
  std::stringstream ss;
  io::write_trace(ss, b.traces[0], {{"k", 1}});
  std::vector<std::string> lines;
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  EXPECT_EQ(io::parse_trace(lines, b.traces[0].tracker_name, "mem"), b.traces[0]);
}

TEST(Trace, RejectsMalformedRecords) {
  EXPECT_THROW(io::parse_trace({R"({"frame":1,"score":0.5,"box":null})"}, "t", "x"), io::FormatError);
  EXPECT_THROW(io::parse_trace({R"({"frame":0,"box":null})"}, "t", "x"), io::FormatError);
  EXPECT_THROW(io::parse_trace({R"({"frame":0,"score":0.5,"box":[1,2,3]})"}, "t", "x"), io::FormatError);
  EXPECT_THROW(io::parse_trace({R"({"frame":0,"score":0.5,"box":[1,2,0,3]})"}, "t", "x"), io::FormatError);
  EXPECT_THROW(io::parse_trace({"not json"}, "t", "x"), io::FormatError);
}

TEST(VotRaw, InitLineStatusLinesAndLengthMismatch) {
  TempDir dir("raw");
  write_file(dir.path() / "b.txt", "1\n1,2,3,4\n0\n5,6,7,8\n\n");
  write_file(dir.path() / "c.txt", "\n0.7\n0.1\n0.9\n");
  const auto t = io::read_vot_raw(dir.path() / "b.txt", dir.path() / "c.txt", "raw", BoundingBox(0, 0, 2, 2));
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t.frames[0], (TrackerFrameOutput{1.0, BoundingBox(0, 0, 2, 2)}));
  EXPECT_EQ(t.frames[1], (TrackerFrameOutput{0.7, BoundingBox(1, 2, 3, 4)}));
  EXPECT_EQ(t.frames[2], (TrackerFrameOutput{0.1, std::nullopt}));
  write_file(dir.path() / "short.txt", "\n0.7\n");
  EXPECT_THROW(io::read_vot_raw(dir.path() / "b.txt", dir.path() / "short.txt", "raw"), io::FormatError);
  write_file(dir.path() / "noinit.txt", "2\n1,2,3,4\n0\n5,6,7,8\n");
  EXPECT_THROW(io::read_vot_raw(dir.path() / "noinit.txt", dir.path() / "c.txt", "raw"), io::FormatError);
}

TEST(Dataset, RoundTrip) {
  TempDir dir("ds");
  const std::vector<SequenceBundle> bundles{sample_bundle("alpha", 1), sample_bundle("beta", 2)};
  const io::DatasetLayout layout{dir.path()};
  io::write_dataset(layout, bundles, {{"seed", 1}});
  EXPECT_EQ(io::read_tracker_order(dir.path()), (std::vector<std::string>{"tracker0", "tracker1"}));
  const auto loaded = io::load_bundles(layout, io::read_tracker_order(dir.path()));
  EXPECT_EQ(loaded, bundles);
  const auto ann = io::read_dataset(layout);
  ASSERT_EQ(ann.size(), 2u);
  EXPECT_EQ(ann[1].groundtruth, bundles[1].groundtruth);
}

TEST(Dataset, MissingTraceAndDuplicateSequence) {
  TempDir dir("ds_bad");
  const io::DatasetLayout layout{dir.path()};
  io::write_dataset(layout, std::vector<SequenceBundle>{sample_bundle("alpha", 1)});
  EXPECT_THROW(io::load_bundles(layout, {"tracker0", "nope"}), std::runtime_error);
  write_file(dir.path() / "list.txt", "alpha\nalpha\n");
  EXPECT_THROW(io::read_sequence_list(layout), io::FormatError);
}

TEST(Model, MlpRoundTripAndVersioning) {
  TempDir dir("model");
  std::vector<LabeledSample> samples;
  for (const auto& s : label_frames(sample_bundle("a", 3))) samples.push_back(s);
  const auto trained = mlp_train(samples, {}, 9, default_hidden_layers(), 2);
  io::FusionModel m;
  m.trackers = {"tracker0", "tracker1"};
  m.standardizer = trained.standardizer;
  m.learner.model = trained.model;
  m.seed = 9;
  m.config_hash = "abc";
  io::write_model(dir.path() / "m.json", m);
  const auto back = io::read_model(dir.path() / "m.json", m.trackers);
  EXPECT_EQ(back.standardizer, m.standardizer);
  EXPECT_EQ(std::get<MlpModel>(back.learner.model), trained.model);
  EXPECT_EQ(back.config_hash, "abc");
  EXPECT_THROW(io::read_model(dir.path() / "m.json", {"tracker1", "tracker0"}), io::FormatError);

  auto j = io::to_json(m);
  j["version"] = 2;
  EXPECT_THROW(io::model_from_json(j), io::FormatError);
  j = io::to_json(m);
  j["mlp"]["params"].erase(0);
  EXPECT_THROW(io::model_from_json(j), std::exception);
  j = io::to_json(m);
  j["extra"] = 1;
  EXPECT_THROW(io::model_from_json(j), io::FormatError);
  write_file(dir.path() / "broken.json", "{\"format\": ");
  EXPECT_THROW(io::read_model(dir.path() / "broken.json"), io::FormatError);
}

TEST(Model, FcmRoundTrip) {
  std::vector<LabeledSample> samples = label_frames(sample_bundle("a", 4));
  FcmOptions o;
  o.seed = 2;
  const auto trained = fcm_train(samples, o);
  io::FusionModel m;
  m.trackers = {"tracker0", "tracker1"};
  m.standardizer = trained.standardizer;
  m.learner.model = trained.model;
  const auto back = io::model_from_json(io::to_json(m));
  EXPECT_EQ(std::get<FcmModel>(back.learner.model), trained.model);
  EXPECT_FALSE(back.learner.is_mlp());
}

TEST(Labels, RoundTrip) {
  TempDir dir("labels");
  const std::vector<io::LabeledFrame> frames{{"s", 0, {{0.5, 0.25}, 1}}, {"s", 1, {{0.1, 0.2}, 2}}};
  io::write_labels(dir.path() / "l.json", {"a", "b"}, frames, {{"seed", 3}});
  const auto set = io::read_labels(dir.path() / "l.json");
  EXPECT_EQ(set.trackers, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(set.frames.size(), 2u);
  EXPECT_EQ(set.frames[1].sample, frames[1].sample);
  EXPECT_EQ(set.meta["seed"], 3);
}

TEST(Results, SentinelAndTable) {
  const std::vector<FrameAnnotation> gt{BoundingBox(0, 0, 4, 4)};
  const std::vector<TrackerFrameOutput> pred{{0.5, BoundingBox(0, 0, 4, 4)}};
  const auto r = vot_lt_eval(pred, gt);
  const auto j = io::to_json(r);
  EXPECT_EQ(j["taus"][0], "-inf");
  EXPECT_EQ(j["tau_sigma"], 0.5);
  EXPECT_EQ(io::curve_table(r), "tau\tprecision\trecall\tf1\n-inf\t1\t1\t1\n0.5\t1\t1\t1\n");
}

TEST(Scenario, JsonRoundTripAndStrictKeys) {
  ScenarioSpec s;
  s.kind = ScenarioKind::dirac_delta;
  s.constants = {0.4, 0.3};
  s.spike_value = 0.8;
  s.oov_windows = {{3, 9}};
  s.score_model = {ScoreModelKind::miscalibrated, 0.1, 1};
  const auto back = io::scenario_from_json(io::to_json(s));
  EXPECT_EQ(io::to_json(back), io::to_json(s));
  auto j = io::to_json(s);
  j["amplitude"] = 1;
  EXPECT_THROW(io::scenario_from_json(j), io::FormatError);
  EXPECT_THROW(io::parse_scenario_kind("sideways"), io::FormatError);
}

TEST(RunConfig, RoundTripAndUnknownKeys) {
  io::RunConfig c;
  c.trackers = {"a", "b"};
  c.learner = io::LearnerKind::fcm;
  c.policy.mode = OovMode::suppress;
  c.seed = 11;
  const auto back = io::run_config_from_json(io::to_json(c));
  EXPECT_EQ(io::to_json(back), io::to_json(c));
  EXPECT_THROW(io::run_config_from_json({{"sed", 1}}), io::FormatError);
  EXPECT_THROW(io::run_config_from_json({{"learner", "svm"}}), io::FormatError);
}

TEST(Hash, StableAndKeyOrderIndependent) {
  EXPECT_EQ(io::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(io::fnv1a_hex("a"), "af63dc4c8601ec8c");
  const io::json a = {{"x", 1}, {"y", 2}};
  const io::json b = io::json::parse(R"({"y":2,"x":1})");
  EXPECT_EQ(io::config_hash(a), io::config_hash(b));
}
