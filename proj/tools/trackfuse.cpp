// trackfuse command-line driver: synth, label, train, fuse, eval, report, vc-check.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "trackfuse/io.hpp"
#include "trackfuse/trackfuse.hpp"

namespace fs = std::filesystem;
using namespace trackfuse;
using io::json;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::string trackers_csv;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

io::RunConfig load_config(const Common& c) {
  io::RunConfig cfg;
  if (!c.config_path.empty()) cfg = io::run_config_from_json(io::read_json_file(c.config_path));
  if (c.seed) cfg.seed = *c.seed;
  if (c.output) cfg.output = *c.output;
  if (!c.trackers_csv.empty()) cfg.trackers = split_csv(c.trackers_csv);
  return cfg;
}

fs::path out_or_default(const std::string& given, const io::RunConfig& cfg, const char* name) {
  return given.empty() ? fs::path(cfg.output) / name : fs::path(given);
}

/// Provenance block embedded in every artifact; `params` is what the command consumed.
json make_meta(const std::string& command, const io::RunConfig& cfg, const json& params) {
  json config = io::to_json(cfg);
  config.erase("output");  // where artifacts land does not change them
  const json effective = {{"command", command}, {"config", config}, {"params", params}};
  return {{"tool", "trackfuse"}, {"command", command}, {"config_hash", io::config_hash(effective)}, {"seed", cfg.seed}};
}

std::vector<std::string> resolve_trackers(const io::RunConfig& cfg, const fs::path& data_root) {
  if (!cfg.trackers.empty()) return cfg.trackers;
  if (fs::exists(data_root / "trackers.txt")) return io::read_tracker_order(data_root);
  throw std::runtime_error("tracker order unknown: pass --trackers, set it in --config, or provide trackers.txt");
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string scenario_file;
  std::string kind = "anti-phase";
  std::string name = "synthetic";
  std::size_t length = 1000;
  std::string score_model = "calibrated";
  double sigma = 0.05;
  std::vector<std::string> oov;
  std::string out;
};

ScenarioSpec default_scenario(const SynthArgs& a, std::uint64_t seed) {
  ScenarioSpec s;
  s.name = a.name;
  s.kind = io::parse_scenario_kind(a.kind);
  s.length = a.length;
  s.seed = seed;
  switch (s.kind) {
    case ScenarioKind::anti_phase:
      s.amplitudes = {1.0, 1.0};
      s.phases = {0.0, std::numbers::pi};
      break;
    case ScenarioKind::in_phase:
      s.amplitudes = {0.8, 0.8};
      break;
    case ScenarioKind::upper_limited:
      s.constants = {0.9, 0.5};
      break;
    case ScenarioKind::dirac_delta:
      s.constants = {0.6, 0.6};
      s.spike_tracker = 1;
      s.spike_frame = a.length / 2;
      s.spike_value = 0.9;
      break;
  }
  if (a.score_model == "noisy") {
    s.score_model.kind = ScoreModelKind::noisy;
  } else if (a.score_model == "miscalibrated") {
    s.score_model.kind = ScoreModelKind::miscalibrated;
  } else if (a.score_model != "calibrated") {
    throw io::FormatError("unknown score model '" + a.score_model + "'");
  }
  s.score_model.sigma = a.sigma;
  for (const auto& w : a.oov) {
    const auto colon = w.find(':');
    if (colon == std::string::npos) throw io::FormatError("--oov expects BEGIN:END, got '" + w + "'");
    s.oov_windows.push_back({std::stoul(w.substr(0, colon)), std::stoul(w.substr(colon + 1))});
  }
  s.validate();
  return s;
}

int run_synth(const Common& common, const SynthArgs& a) {
  const auto cfg = load_config(common);
  std::vector<ScenarioSpec> specs;
  if (!a.scenario_file.empty()) {
    const json j = io::read_json_file(a.scenario_file);
    if (j.is_object() && j.contains("scenarios")) {
      for (const auto& s : j.at("scenarios")) specs.push_back(io::scenario_from_json(s));
    } else {
      specs.push_back(io::scenario_from_json(j));
    }
  } else {
    specs.push_back(default_scenario(a, cfg.seed));
  }
  json spec_json = json::array();
  for (const auto& s : specs) spec_json.push_back(io::to_json(s));
  const json meta = make_meta("synth", cfg, spec_json);

  std::vector<SequenceBundle> bundles;
  for (const auto& s : specs) bundles.push_back(gen_bundle(s));
  const io::DatasetLayout layout{out_or_default(a.out, cfg, "data")};
  io::write_dataset(layout, bundles, meta);
  io::write_text(layout.root / "synth.json", json{{"meta", meta}, {"scenarios", spec_json}}.dump(2) + "\n");
  std::cout << "synth: wrote " << bundles.size() << " sequence(s) to " << layout.root.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct LabelArgs {
  std::string data;
  std::string out;
};

int run_label(const Common& common, const LabelArgs& a) {
  const auto cfg = load_config(common);
  const io::DatasetLayout layout{a.data};
  const auto trackers = resolve_trackers(cfg, layout.root);
  std::vector<io::LabeledFrame> frames;
  for (const auto& bundle : io::load_bundles(layout, trackers)) {
    const auto samples = label_frames(bundle);
    for (std::size_t t = 0; t < samples.size(); ++t) frames.push_back({bundle.name, t, samples[t]});
  }
  const fs::path out = out_or_default(a.out, cfg, "labels.json");
  io::write_labels(out, trackers, frames, make_meta("label", cfg, {{"trackers", trackers}}));
  std::cout << "label: " << frames.size() << " samples -> " << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string labels;
  std::string out;
  std::string learner;
  std::optional<int> max_iter;
};

int run_train(const Common& common, const TrainArgs& a) {
  auto cfg = load_config(common);
  if (a.learner == "mlp") {
    cfg.learner = io::LearnerKind::mlp;
  } else if (a.learner == "fcm") {
    cfg.learner = io::LearnerKind::fcm;
  } else if (!a.learner.empty()) {
    throw io::FormatError("unknown learner '" + a.learner + "'");
  }
  if (a.max_iter) {
    cfg.lbfgs.max_iter = *a.max_iter;
    cfg.fcm.max_iter = *a.max_iter;
  }
  const auto set = io::read_labels(out_or_default(a.labels, cfg, "labels.json"));
  if (!cfg.trackers.empty() && cfg.trackers != set.trackers) {
    throw io::FormatError("tracker order of the labels differs from the configured order");
  }
  cfg.trackers = set.trackers;
  std::vector<LabeledSample> samples;
  samples.reserve(set.frames.size());
  for (const auto& f : set.frames) samples.push_back(f.sample);

  io::FusionModel model;
  model.trackers = set.trackers;
  model.seed = cfg.seed;
  model.lbfgs = cfg.lbfgs;
  model.fcm = cfg.fcm;
  std::ostringstream summary;
  if (cfg.learner == io::LearnerKind::mlp) {
    auto r = mlp_train(samples, cfg.lbfgs, cfg.seed);
    summary << "mlp: loss " << r.optimizer.f << " after " << r.optimizer.iterations << " iterations";
    model.standardizer = std::move(r.standardizer);
    model.learner.model = std::move(r.model);
  } else {
    cfg.fcm.seed = cfg.seed;
    model.fcm.seed = cfg.seed;
    auto r = fcm_train(samples, cfg.fcm);
    summary << "fcm: mapped training accuracy " << r.train_accuracy << " after " << r.fit.iterations << " iterations";
    model.standardizer = std::move(r.standardizer);
    model.learner.model = std::move(r.model);
    model.fcm.clusters = set.trackers.size() + 1;
  }
  model.config_hash = make_meta("train", cfg, {{"labels_hash", io::config_hash(set.meta)}}).at("config_hash");
  const fs::path out = out_or_default(a.out, cfg, "model.json");
  io::write_model(out, model);
  std::cout << "train: " << summary.str() << " -> " << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct FuseArgs {
  std::string data;
  std::string model;
  std::string out;
  std::string policy;
  std::optional<std::size_t> fallback;
  std::string name = "fused";
};

json decisions_to_json(std::span<const FusedDecision> decisions) {
  json arr = json::array();
  for (const auto& d : decisions) {
    arr.push_back({{"frame", d.frame}, {"chosen", d.chosen}, {"box", io::region_to_json(d.emitted_box)}, {"score", d.emitted_score}});
  }
  return arr;
}

int run_fuse(const Common& common, const FuseArgs& a) {
  auto cfg = load_config(common);
  if (a.policy == "fallback") {
    cfg.policy.mode = OovMode::fallback;
  } else if (a.policy == "suppress") {
    cfg.policy.mode = OovMode::suppress;
  } else if (!a.policy.empty()) {
    throw io::FormatError("unknown policy '" + a.policy + "'");
  }
  if (a.fallback) cfg.policy.fallback_index = *a.fallback;

  const auto model = io::read_model(out_or_default(a.model, cfg, "model.json"), cfg.trackers);
  cfg.trackers = model.trackers;
  const io::DatasetLayout in{a.data};
  const io::DatasetLayout out{out_or_default(a.out, cfg, "fused")};
  const json meta = make_meta("fuse", cfg, {{"model_hash", model.config_hash}, {"name", a.name}});

  std::string list;
  std::size_t frames = 0;
  for (const auto& bundle : io::load_bundles(in, model.trackers)) {
    const auto result = fuse(bundle, model, model.standardizer, cfg.policy, a.name);
    io::write_trace(out.trace_path(bundle.name, a.name), result.trace, meta);
    io::write_text(out.sequence_dir(bundle.name) / "decisions.json",
                   json{{"meta", meta}, {"n_trackers", model.trackers.size()}, {"decisions", decisions_to_json(result.decisions)}}
                           .dump() +
                       "\n");
    list += bundle.name + "\n";
    frames += result.trace.size();
  }
  io::write_text(out.root / out.list_file, list);
  std::cout << "fuse: " << frames << " frames -> " << out.root.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string data;
  std::string traces;
  std::string tracker = "fused";
  std::string protocol;
  std::string out;
};

TrackerTrace groundtruth_as_trace(std::span<const FrameAnnotation> gt) {
  TrackerTrace t{"groundtruth", {}};
  for (const auto& g : gt) t.frames.push_back({1.0, g});
  return t;
}

int run_eval(const Common& common, const EvalArgs& a) {
  auto cfg = load_config(common);
  if (a.protocol == "votlt") {
    cfg.protocol = io::Protocol::votlt;
  } else if (a.protocol == "otb") {
    cfg.protocol = io::Protocol::otb;
  } else if (!a.protocol.empty()) {
    throw io::FormatError("unknown protocol '" + a.protocol + "'");
  }
  const io::DatasetLayout data{a.data};
  const io::DatasetLayout traces{a.traces.empty() ? a.data : a.traces};
  const auto sequences = io::read_dataset(data);

  std::vector<TrackerTrace> loaded;
  for (const auto& seq : sequences) {
    loaded.push_back(a.tracker == "groundtruth" ? groundtruth_as_trace(seq.groundtruth)
                                                : io::read_trace(traces.trace_path(seq.name, a.tracker), a.tracker));
  }
  const json meta = make_meta("eval", cfg, {{"tracker", a.tracker}});
  const fs::path out = out_or_default(a.out, cfg, "results.json");

  if (cfg.protocol == io::Protocol::votlt) {
    std::vector<std::pair<std::string, LtEvalResult>> per_seq;
    std::vector<TraceWithGroundtruth> pooled;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
      per_seq.emplace_back(sequences[i].name, vot_lt_eval(loaded[i], sequences[i].groundtruth));
      pooled.push_back({loaded[i].frames, sequences[i].groundtruth});
    }
    const auto agg = vot_lt_eval_pooled(pooled);
    io::write_results(out, per_seq, agg, meta);
    std::cout << "eval votlt: precision " << agg.precision << " recall " << agg.recall << " f1 " << agg.f1 << " -> "
              << out.string() << "\n";
    return 0;
  }

  cfg.otb.validate();
  json seqs = json::object();
  double sp = 0.0, ss = 0.0, sa = 0.0;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    const FrameSpan pred(loaded[i].frames);
    const AnnotationSpan gt(sequences[i].groundtruth);
    const double p = otb_precision(pred, gt, cfg.otb.lambda);
    const double s = otb_success(pred, gt, cfg.otb.delta);
    const double auc = otb_auc(pred, gt, cfg.otb);
    json rec = {{"precision", p}, {"success", s}, {"auc", auc}};
    if (static_cast<std::size_t>(cfg.otb.tre_segments) <= gt.size()) {
      rec["tre"] = {{"precision", otb_tre(pred, gt, cfg.otb, OtbMetric::precision)},
                    {"success", otb_tre(pred, gt, cfg.otb, OtbMetric::success)},
                    {"auc", otb_tre(pred, gt, cfg.otb, OtbMetric::auc)}};
    }
    seqs[sequences[i].name] = rec;
    sp += p;
    ss += s;
    sa += auc;
  }
  const double n = sequences.empty() ? 1.0 : static_cast<double>(sequences.size());
  const json agg = {{"precision", sp / n}, {"success", ss / n}, {"auc", sa / n}};
  io::write_text(out, json{{"format", "trackfuse-results"}, {"protocol", "otb"}, {"meta", meta}, {"sequences", seqs}, {"aggregate", agg}}
                          .dump(2) +
                          "\n");
  std::cout << "eval otb: precision " << sp / n << " success " << ss / n << " auc " << sa / n << " -> " << out.string()
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::string data;
  std::string fused;
  std::string out;
};

int run_report(const Common& common, const ReportArgs& a) {
  const auto cfg = load_config(common);
  const io::DatasetLayout data{a.data};
  const auto trackers = resolve_trackers(cfg, data.root);
  json seqs = json::object();
  for (const auto& bundle : io::load_bundles(data, trackers)) {
    const auto rep = complementarity_report(bundle);
    json rec = {{"win_fraction", rep.win_fraction},
                {"oov_fraction", rep.oov_fraction},
                {"alternation_rate", rep.alternation_rate},
                {"oracle_f1", rep.oracle_f1},
                {"best_single_f1", rep.best_single_f1},
                {"oracle_gain", rep.oracle_gain},
                {"scenario_tag", to_string(rep.tag)}};
    if (!a.fused.empty()) {
      const json dec = io::read_json_file(fs::path(a.fused) / bundle.name / "decisions.json");
      std::vector<FusedDecision> decisions;
      for (const auto& d : dec.at("decisions")) {
        decisions.push_back({d.at("frame").get<std::size_t>(), d.at("chosen").get<int>(), io::region_from_json(d.at("box")),
                             d.at("score").get<double>()});
      }
      const auto s = oov_stats(decisions, bundle.groundtruth, trackers.size());
      rec["oov"] = {{"oov_p", s.oov_p},         {"oov_g", s.oov_g},         {"true_positives", s.true_positives},
                    {"precision", s.precision}, {"recall", s.recall},       {"precision_undefined", s.precision_undefined},
                    {"recall_undefined", s.recall_undefined}};
    }
    seqs[bundle.name] = rec;
  }
  const fs::path out = out_or_default(a.out, cfg, "report.json");
  io::write_text(out, json{{"format", "trackfuse-report"}, {"meta", make_meta("report", cfg, {{"trackers", trackers}})}, {"sequences", seqs}}
                          .dump(2) +
                          "\n");
  std::cout << "report: " << seqs.size() << " sequence(s) -> " << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct VcArgs {
  double patterns = 0;
  double rho = 0;
  double sigma = 0;
  std::string layers = "2,3,2,1";
  double c = 1.0, C = 1.0, a = 1.0;
  std::string log_base = "natural";
  bool strict = false;
  std::optional<double> check_vc;
  std::optional<double> check_b;
  std::string out;
};

LogBase parse_log_base(const std::string& s) {
  if (s == "natural" || s == "e") return LogBase::natural;
  if (s == "2" || s == "base-2") return LogBase::base2;
  if (s == "10" || s == "base-10") return LogBase::base10;
  throw io::FormatError("unknown log base '" + s + "'");
}

json point_to_json(const PointReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"inequality", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  return {{"log_base", to_string(r.log_base)}, {"vc", r.vc}, {"b", r.b}, {"all_pass", r.all_pass()}, {"checks", checks}};
}

int run_vc(const VcArgs& a) {
  std::vector<std::size_t> sizes;
  for (const auto& s : split_csv(a.layers)) sizes.push_back(std::stoul(s));
  VcProblem p;
  p.weights = static_cast<double>(weights_count(sizes));
  p.layers = static_cast<double>(sizes.size());
  p.patterns = a.patterns;
  p.rho = a.rho;
  p.sigma = a.sigma;
  p.c = a.c;
  p.C = a.C;
  p.a = a.a;
  p.log_base = parse_log_base(a.log_base);
  p.strict = a.strict;
  const auto sol = feasibility_solve(p);

  std::cout << "vc-check\n"
            << "  W = " << p.weights << ", L = " << p.layers << ", N = " << p.patterns << ", rho = " << p.rho
            << ", sigma = " << p.sigma << ", log = " << to_string(p.log_base) << (p.strict ? ", strict" : "") << "\n"
            << "  VC interval: [" << sol.interval.lo << ", " << sol.interval.hi << "]"
            << (sol.interval.lo_clamped ? " (lower bound clamped)" : "") << "\n"
            << "  smallest admissible N: " << sol.min_patterns << "\n"
            << "  " << (sol.feasible ? "feasible" : "infeasible");
  if (sol.feasible) std::cout << ": witness VC = " << sol.witness_vc << ", b = " << sol.witness_b;
  std::cout << "\n";

  json record = {{"W", p.weights},
                 {"L", p.layers},
                 {"N", p.patterns},
                 {"rho", p.rho},
                 {"sigma", p.sigma},
                 {"c", p.c},
                 {"C", p.C},
                 {"a", p.a},
                 {"log_base", to_string(p.log_base)},
                 {"strict", p.strict},
                 {"feasible", sol.feasible},
                 {"vc_interval", {sol.interval.lo, sol.interval.hi}},
                 {"min_patterns", sol.min_patterns},
                 {"b_min", sol.b_min},
                 {"witness", {{"vc", sol.witness_vc}, {"b", sol.witness_b}}}};
  if (a.check_vc && a.check_b) {
    json points = json::array();
    for (const auto& r : check_point_all_bases(p, *a.check_vc, *a.check_b)) {
      std::cout << "  point (VC = " << r.vc << ", b = " << r.b << ") under " << to_string(r.log_base) << " log:\n";
      for (const auto& c : r.checks) {
        std::cout << "    [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << "  (" << c.lhs << " vs " << c.rhs << ")\n";
      }
      points.push_back(point_to_json(r));
    }
    record["point_checks"] = points;
  }
  const std::string line = json{{"vc_check", record}}.dump();
  std::cout << line << "\n";
  if (!a.out.empty()) io::write_text(a.out, record.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trackfuse: learned fusion of long-term tracker outputs"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Seed override");
    sub->add_option("--run-dir", common.output, "Run directory for default output paths");
    sub->add_option("--trackers", common.trackers_csv, "Comma-separated tracker order");
  };

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate synthetic scenario bundles");
  add_common(c_synth);
  c_synth->add_option("--scenario", synth.scenario_file, "Scenario spec file (JSON)")->check(CLI::ExistingFile);
  c_synth->add_option("--kind", synth.kind, "anti-phase | in-phase | upper-limited | dirac-delta");
  c_synth->add_option("--name", synth.name, "Sequence name");
  c_synth->add_option("--length", synth.length, "Frames per sequence");
  c_synth->add_option("--score-model", synth.score_model, "calibrated | noisy | miscalibrated");
  c_synth->add_option("--sigma", synth.sigma, "Score noise");
  c_synth->add_option("--oov", synth.oov, "Out-of-view window BEGIN:END (repeatable)");
  c_synth->add_option("--out", synth.out, "Output dataset directory");

  LabelArgs label;
  auto* c_label = app.add_subcommand("label", "Oracle labels from bundles");
  add_common(c_label);
  c_label->add_option("--data", label.data, "Dataset directory")->required();
  c_label->add_option("--out", label.out, "Label file");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Fit an mlp or fcm learner");
  add_common(c_train);
  c_train->add_option("--labels", train.labels, "Label file");
  c_train->add_option("--learner", train.learner, "mlp | fcm");
  c_train->add_option("--max-iter", train.max_iter, "Iteration cap");
  c_train->add_option("--out", train.out, "Model file");

  FuseArgs fuse_args;
  auto* c_fuse = app.add_subcommand("fuse", "Apply a model and out-of-view policy");
  add_common(c_fuse);
  c_fuse->add_option("--data", fuse_args.data, "Dataset directory")->required();
  c_fuse->add_option("--model", fuse_args.model, "Model file");
  c_fuse->add_option("--policy", fuse_args.policy, "fallback | suppress");
  c_fuse->add_option("--fallback", fuse_args.fallback, "Fallback tracker index");
  c_fuse->add_option("--name", fuse_args.name, "Name of the fused trace");
  c_fuse->add_option("--out", fuse_args.out, "Output directory");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Evaluate a trace (votlt | otb)");
  add_common(c_eval);
  c_eval->add_option("--data", eval.data, "Dataset directory (groundtruth)")->required();
  c_eval->add_option("--traces", eval.traces, "Directory holding the evaluated traces");
  c_eval->add_option("--tracker", eval.tracker, "Trace name, or 'groundtruth'");
  c_eval->add_option("--protocol", eval.protocol, "votlt | otb");
  c_eval->add_option("--out", eval.out, "Results file");

  ReportArgs report;
  auto* c_report = app.add_subcommand("report", "Complementarity and out-of-view statistics");
  add_common(c_report);
  c_report->add_option("--data", report.data, "Dataset directory")->required();
  c_report->add_option("--fused", report.fused, "Fuse output directory (decisions)");
  c_report->add_option("--out", report.out, "Report file");

  VcArgs vc;
  auto* c_vc = app.add_subcommand("vc-check", "Capacity / sample-size feasibility");
  c_vc->add_option("--patterns,-N", vc.patterns, "Training pattern count")->required();
  c_vc->add_option("--rho", vc.rho, "Failure probability")->required();
  c_vc->add_option("--sigma", vc.sigma, "Learning error")->required();
  c_vc->add_option("--layers", vc.layers, "Layer sizes, comma-separated");
  c_vc->add_option("--c", vc.c, "Lower VC constant");
  c_vc->add_option("--C", vc.C, "Upper VC constant");
  c_vc->add_option("--a", vc.a, "Lower sample constant");
  c_vc->add_option("--log-base", vc.log_base, "natural | 2 | 10");
  c_vc->add_flag("--strict", vc.strict, "Strict inequalities");
  c_vc->add_option("--check-vc", vc.check_vc, "VC of a point to check");
  c_vc->add_option("--check-b", vc.check_b, "b of a point to check");
  c_vc->add_option("--out", vc.out, "Record file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (c_synth->parsed()) return run_synth(common, synth);
    if (c_label->parsed()) return run_label(common, label);
    if (c_train->parsed()) return run_train(common, train);
    if (c_fuse->parsed()) return run_fuse(common, fuse_args);
    if (c_eval->parsed()) return run_eval(common, eval);
    if (c_report->parsed()) return run_report(common, report);
    if (c_vc->parsed()) return run_vc(vc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
