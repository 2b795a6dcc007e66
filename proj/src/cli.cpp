/* Copyright 2026 The gunalarm Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "gunalarm/cli.hpp"

#include <chrono>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "gunalarm/alarm.hpp"
#include "gunalarm/detector.hpp"
#include "gunalarm/error.hpp"
#include "gunalarm/eval.hpp"
#include "gunalarm/geometry.hpp"
#include "gunalarm/io.hpp"
#include "gunalarm/sliding_window.hpp"
#include "gunalarm/synthetic.hpp"

namespace gunalarm {
namespace {

struct Dims {
  int a = 0;
  int b = 0;
};

// Parses "640x360".
Dims ParseDims(const std::string& text, const char* flag) {
  const auto sep = text.find_first_of("xX");
  try {
    if (sep == std::string::npos) throw std::invalid_argument("");
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string lhs = text.substr(0, sep);
    const std::string rhs = text.substr(sep + 1);
    Dims d{std::stoi(lhs, &used_a), std::stoi(rhs, &used_b)};
    if (used_a != lhs.size() || used_b != rhs.size()) {
      throw std::invalid_argument("");
    }
    return d;
  } catch (const std::logic_error&) {
    throw ConfigError(std::string(flag) + " expects AxB, got '" + text + "'");
  }
}

ScoreRange ParseRange(const std::string& text, const char* flag) {
  const auto sep = text.find(',');
  try {
    if (sep == std::string::npos) throw std::invalid_argument("");
    return ScoreRange{std::stod(text.substr(0, sep)),
                      std::stod(text.substr(sep + 1))};
  } catch (const std::logic_error&) {
    throw ConfigError(std::string(flag) + " expects LO,HI, got '" + text +
                      "'");
  }
}

// Flags shared by several subcommands. Values given on the command line win
// over the --config file, which wins over built-in defaults.
struct CommonFlags {
  std::string config_path;
  double threshold = 0.7;
  double iou_min = 0.5;
  int k = 5;
  double fps = 25.0;
  int rearm_gap = 0;
  std::string window;
  std::string stride;
  std::string frame;
  double nms = 0.0;
  std::uint64_t seed = 0;
  std::string report_path;

  CLI::Option* threshold_opt = nullptr;
  CLI::Option* iou_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* fps_opt = nullptr;
  CLI::Option* rearm_opt = nullptr;
  CLI::Option* window_opt = nullptr;
  CLI::Option* stride_opt = nullptr;
  CLI::Option* frame_opt = nullptr;
  CLI::Option* nms_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  RunConfig Resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : LoadConfig(config_path);
    if (threshold_opt && threshold_opt->count()) cfg.score_min = threshold;
    if (iou_opt && iou_opt->count()) cfg.iou_min = iou_min;
    if (k_opt && k_opt->count()) cfg.k = k;
    if (fps_opt && fps_opt->count()) cfg.fps = fps;
    if (rearm_opt && rearm_opt->count()) cfg.rearm_gap = rearm_gap;
    if (nms_opt && nms_opt->count()) cfg.nms_iou = nms;
    if (seed_opt && seed_opt->count()) cfg.oracle.seed = seed;
    if (frame_opt && frame_opt->count()) {
      const Dims d = ParseDims(frame, "--frame");
      cfg.window.frame_w = d.a;
      cfg.window.frame_h = d.b;
      cfg.frame = FrameSize{static_cast<double>(d.a),
                            static_cast<double>(d.b)};
    }
    if (window_opt && window_opt->count()) {
      const Dims d = ParseDims(window, "--window");
      cfg.window.win_w = d.a;
      cfg.window.win_h = d.b;
    }
    if (stride_opt && stride_opt->count()) {
      const Dims d = ParseDims(stride, "--stride");
      cfg.window.stride_x = d.a;
      cfg.window.stride_y = d.b;
    }
    Validate(cfg);
    return cfg;
  }
};

void AddConfig(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
}
void AddThreshold(CLI::App* cmd, CommonFlags& f) {
  f.threshold_opt = cmd->add_option("--threshold", f.threshold,
                                    "minimum detection score (default 0.7)");
}
void AddIouMin(CLI::App* cmd, CommonFlags& f) {
  f.iou_opt = cmd->add_option("--iou-min", f.iou_min,
                              "IoU a match must exceed (default 0.5)");
}
void AddAlarm(CLI::App* cmd, CommonFlags& f) {
  f.k_opt = cmd->add_option("--k", f.k, "consecutive positive frames (5)");
  f.fps_opt = cmd->add_option("--fps", f.fps,
                              "frame rate for scenes without one (25)");
  f.rearm_opt = cmd->add_option("--rearm-gap", f.rearm_gap,
                                "negatives needed to re-arm (default k)");
}
void AddNms(CLI::App* cmd, CommonFlags& f) {
  f.nms_opt = cmd->add_option("--nms", f.nms,
                              "apply NMS at this IoU before matching");
}
void AddWindow(CLI::App* cmd, CommonFlags& f) {
  f.frame_opt = cmd->add_option("--frame", f.frame, "frame size WxH (640x360)");
  f.window_opt =
      cmd->add_option("--window", f.window, "window size WxH (160x120)");
  f.stride_opt = cmd->add_option("--stride", f.stride, "stride XxY (60x60)");
}
void AddSeed(CLI::App* cmd, CommonFlags& f) {
  f.seed_opt = cmd->add_option("--seed", f.seed, "random seed");
}
void AddReport(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--report", f.report_path,
                  "write the machine-readable report here");
}

std::string Seconds(double s) { return FormatNumber(s); }

// evaluate ------------------------------------------------------------------

struct EvaluateArgs {
  std::string detections;
  std::string truth;
  std::string video_id;
};

int CmdEvaluate(const EvaluateArgs& a, const CommonFlags& f,
                std::ostream& out) {
  const RunConfig cfg = f.Resolve();
  const DetectionStream dets = ParseDetections(a.detections);
  const AnnotationStream truth = ParseGroundTruth(a.truth);
  const std::string id =
      a.video_id.empty()
          ? std::filesystem::path(a.detections).stem().string()
          : a.video_id;
  const VideoReport report = VideoBoxEval(dets, truth, cfg.video_eval(), id);
  out << VideoTableHeader() << "\n" << VideoTableRow(report) << "\n";
  if (!f.report_path.empty()) WriteFile(f.report_path, WriteVideoReport(report));
  return kExitOk;
}

// alarm ---------------------------------------------------------------------

struct AlarmArgs {
  std::string detections;
  std::string scenes;
};

int CmdAlarm(const AlarmArgs& a, const CommonFlags& f, std::ostream& out) {
  const RunConfig cfg = f.Resolve();
  const DetectionStream dets = ParseDetections(a.detections);
  const auto scenes = ParseSceneSpec(a.scenes, cfg.fps);
  const SuiteReport report = SceneSuiteEval(scenes, dets, cfg.alarm());
  for (const auto& s : report.scenes) {
    if (s.event) {
      out << s.scene_id << " " << s.event->frame << " "
          << Seconds(s.event->aatpi_seconds) << "\n";
    }
  }
  out << "detected " << report.detected << " of " << report.total
      << " scenes, mean AATpI "
      << (report.mean_aatpi ? Seconds(*report.mean_aatpi) + " s" : "n/a")
      << "\n";
  if (!f.report_path.empty()) WriteFile(f.report_path, WriteSuiteReport(report));
  return kExitOk;
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
  std::string truth;
  std::string out_path;
  std::string backend = "oracle";
  double miss_prob = 0.0;
  double fp_rate = 0.0;
  double jitter = 0.0;
  std::string tp_scores;
  std::string fp_scores;
  unsigned threads = 1;
  CLI::Option* miss_opt = nullptr;
  CLI::Option* fp_opt = nullptr;
  CLI::Option* jitter_opt = nullptr;
};

OracleNoiseParams NoiseFrom(const SimulateArgs& a, RunConfig cfg) {
  OracleNoiseParams p = cfg.oracle;
  if (a.miss_opt->count()) p.miss_prob = a.miss_prob;
  if (a.fp_opt->count()) p.fp_rate = a.fp_rate;
  if (a.jitter_opt->count()) p.jitter_sigma = a.jitter;
  if (!a.tp_scores.empty()) p.tp_score_range = ParseRange(a.tp_scores, "--tp-scores");
  if (!a.fp_scores.empty()) p.fp_score_range = ParseRange(a.fp_scores, "--fp-scores");
  Validate(p);
  return p;
}

SlidingWindowOptions WindowOptionsFrom(const RunConfig& cfg, unsigned threads) {
  SlidingWindowOptions o;
  o.scales = {cfg.window};
  o.score_min = cfg.score_min;
  o.nms_iou = cfg.nms_iou.value_or(0.3);
  o.threads = threads;
  return o;
}

std::vector<FrameIndex> FramesOf(const AnnotationStream& truth) {
  std::vector<FrameIndex> frames;
  for (const auto& [f, unused] : truth) frames.push_back(f);
  return frames;
}

int CmdSimulate(const SimulateArgs& a, const CommonFlags& f,
                std::ostream& out) {
  const RunConfig cfg = f.Resolve();
  const OracleNoiseParams noise = NoiseFrom(a, cfg);
  AnnotationStream truth = ParseGroundTruth(a.truth);

  DetectionStream dets;
  if (a.backend == "oracle") {
    dets = DetectAll(OracleBackend(std::move(truth), noise, cfg.frame));
  } else {
    auto frames = FramesOf(truth);
    SlidingWindowBackend backend(
        std::move(frames),
        GroundTruthWindowClassifier(std::move(truth), cfg.iou_min),
        WindowOptionsFrom(cfg, a.threads));
    dets = DetectAll(backend);
  }
  const std::string text = WriteDetections(dets);
  if (a.out_path.empty() || a.out_path == "-") {
    out << text;
  } else {
    WriteFile(a.out_path, text);
  }
  return kExitOk;
}

// windows -------------------------------------------------------------------

int CmdWindows(bool no_clamp, const CommonFlags& f, std::ostream& out) {
  RunConfig cfg = f.Resolve();
  cfg.window.clamp_edges = cfg.window.clamp_edges && !no_clamp;
  for (const auto& w : WindowGrid(cfg.window)) {
    out << FormatNumber(w.x) << " " << FormatNumber(w.y) << " "
        << FormatNumber(w.w) << " " << FormatNumber(w.h) << "\n";
  }
  return kExitOk;
}

// bench ---------------------------------------------------------------------

struct BenchArgs {
  std::string detections;
  std::string truth;
  std::string backend = "replay";
  FrameIndex synthetic = 0;
  unsigned threads = 1;
};

int CmdBench(const BenchArgs& a, const CommonFlags& f, std::ostream& out) {
  using Clock = std::chrono::steady_clock;
  const RunConfig cfg = f.Resolve();

  AnnotationStream truth;
  std::vector<SceneSpec> unused_scenes;
  if (!a.truth.empty()) {
    truth = ParseGroundTruth(a.truth);
  } else if (a.synthetic > 0) {
    SyntheticVideoOptions opts;
    opts.frames = a.synthetic;
    opts.size = cfg.frame;
    opts.seed = cfg.oracle.seed;
    truth = MakeSyntheticVideo(opts).truth;
  }

  std::size_t frames = 0;
  double elapsed = 0.0;
  if (a.backend == "sliding-window") {
    SlidingWindowBackend backend(
        FramesOf(truth), GroundTruthWindowClassifier(truth, cfg.iou_min),
        WindowOptionsFrom(cfg, a.threads));
    const auto t0 = Clock::now();
    for (FrameIndex frame : backend.Frames()) {
      backend.Detect(frame);
      ++frames;
    }
    elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
  } else {
    std::string text;
    if (!a.detections.empty()) {
      text = ReadFile(a.detections);
    } else {
      text = WriteDetections(DetectAll(OracleBackend(truth, cfg.oracle, cfg.frame)));
    }
    // Timed: parse -> threshold -> match -> alarm.
    const auto t0 = Clock::now();
    const DetectionStream dets = ParseDetectionsText(text, "<bench>");
    AlarmMachine alarm(cfg.alarm());
    std::size_t tp = 0;
    std::size_t alarms = 0;
    for (const auto& [frame, fd] : dets) {
      const FrameDetections kept = FilterByThreshold(fd, cfg.score_min);
      std::vector<BoundingBox> gts;
      if (auto it = truth.find(frame); it != truth.end()) {
        for (const auto& b : it->second.boxes) gts.push_back(b.box);
      }
      tp += MatchFrame(kept.detections, gts, cfg.iou_min).tp;
      if (alarm.Feed(FramePositive(kept, cfg.score_min), frame)) ++alarms;
      ++frames;
    }
    elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    out << "matched " << tp << " boxes, " << alarms << " alarms\n";
  }

  out << "pipeline " << a.backend << ": " << frames << " frames processed in "
      << Seconds(elapsed) << " s\n";
  const double fps = frames > 0 && elapsed > 0.0 ? frames / elapsed : 0.0;
  const double latency_ms =
      frames > 0 ? 1000.0 * elapsed / static_cast<double>(frames) : 0.0;
  out << "throughput " << FormatNumber(fps) << " frames/s\n";
  out << "mean latency " << FormatNumber(latency_ms) << " ms/frame\n";
  return kExitOk;
}

// synth ---------------------------------------------------------------------

int CmdSynth(FrameIndex frames, const std::string& truth_path,
             const std::string& scenes_path, const CommonFlags& f) {
  const RunConfig cfg = f.Resolve();
  SyntheticVideoOptions opts;
  opts.frames = frames;
  opts.size = cfg.frame;
  opts.fps = cfg.fps;
  opts.seed = cfg.oracle.seed;
  const SyntheticVideo video = MakeSyntheticVideo(opts);
  WriteFile(truth_path, WriteGroundTruth(video.truth));
  if (!scenes_path.empty()) WriteFile(scenes_path, WriteSceneSpec(video.scenes));
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"gunalarm: handgun detection alarm engine and evaluator",
               "gunalarm"};
  app.require_subcommand(1);

  CommonFlags eval_flags, alarm_flags, sim_flags, win_flags, bench_flags,
      synth_flags;

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand(
      "evaluate", "box-level evaluation of a detections file");
  evaluate->add_option("--detections", eval_args.detections)->required();
  evaluate->add_option("--truth", eval_args.truth,
                       "native ground truth, VOC .xml file or XML directory")
      ->required();
  evaluate->add_option("--video-id", eval_args.video_id,
                       "row label (default: detections file stem)");
  AddConfig(evaluate, eval_flags);
  AddThreshold(evaluate, eval_flags);
  AddIouMin(evaluate, eval_flags);
  AddNms(evaluate, eval_flags);
  AddReport(evaluate, eval_flags);

  AlarmArgs alarm_args;
  auto* alarm = app.add_subcommand("alarm", "run the alarm over scenes");
  alarm->add_option("--detections", alarm_args.detections)->required();
  alarm->add_option("--scenes", alarm_args.scenes)->required();
  AddConfig(alarm, alarm_flags);
  AddThreshold(alarm, alarm_flags);
  AddAlarm(alarm, alarm_flags);
  AddReport(alarm, alarm_flags);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand(
      "simulate", "write detections synthesized from ground truth");
  simulate->add_option("--truth", sim_args.truth)->required();
  simulate->add_option("--out", sim_args.out_path, "output file (default -)");
  simulate->add_option("--backend", sim_args.backend)
      ->check(CLI::IsMember({"oracle", "sliding-window"}));
  sim_args.miss_opt = simulate->add_option("--miss-prob", sim_args.miss_prob);
  sim_args.fp_opt = simulate->add_option("--fp-rate", sim_args.fp_rate);
  sim_args.jitter_opt = simulate->add_option("--jitter", sim_args.jitter);
  simulate->add_option("--tp-scores", sim_args.tp_scores, "LO,HI");
  simulate->add_option("--fp-scores", sim_args.fp_scores, "LO,HI");
  simulate->add_option("--threads", sim_args.threads);
  AddConfig(simulate, sim_flags);
  AddSeed(simulate, sim_flags);
  AddThreshold(simulate, sim_flags);
  AddIouMin(simulate, sim_flags);
  AddNms(simulate, sim_flags);
  AddWindow(simulate, sim_flags);

  bool no_clamp = false;
  auto* windows = app.add_subcommand("windows", "print the window grid");
  windows->add_flag("--no-clamp", no_clamp,
                    "do not add an edge-flush last column/row");
  AddConfig(windows, win_flags);
  AddWindow(windows, win_flags);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "time the evaluation pipeline");
  bench->add_option("--detections", bench_args.detections);
  bench->add_option("--truth", bench_args.truth);
  bench->add_option("--synthetic", bench_args.synthetic,
                    "generate this many synthetic frames");
  bench->add_option("--backend", bench_args.backend)
      ->check(CLI::IsMember({"replay", "sliding-window"}));
  bench->add_option("--threads", bench_args.threads);
  AddConfig(bench, bench_flags);
  AddThreshold(bench, bench_flags);
  AddIouMin(bench, bench_flags);
  AddAlarm(bench, bench_flags);
  AddNms(bench, bench_flags);
  AddWindow(bench, bench_flags);
  AddSeed(bench, bench_flags);

  FrameIndex synth_frames = 600;
  std::string synth_truth;
  std::string synth_scenes;
  auto* synth = app.add_subcommand(
      "synth", "write a synthetic ground-truth stream and its scenes");
  synth->add_option("--frames", synth_frames);
  synth->add_option("--truth-out", synth_truth)->required();
  synth->add_option("--scenes-out", synth_scenes);
  AddConfig(synth, synth_flags);
  AddSeed(synth, synth_flags);
  AddWindow(synth, synth_flags);
  AddAlarm(synth, synth_flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gunalarm: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (*evaluate) return CmdEvaluate(eval_args, eval_flags, out);
    if (*alarm) return CmdAlarm(alarm_args, alarm_flags, out);
    if (*simulate) return CmdSimulate(sim_args, sim_flags, out);
    if (*windows) return CmdWindows(no_clamp, win_flags, out);
    if (*bench) return CmdBench(bench_args, bench_flags, out);
    if (*synth) return CmdSynth(synth_frames, synth_truth, synth_scenes,
                                  synth_flags);
  } catch (const ParseError& e) {
    err << "gunalarm: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    err << "gunalarm: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InvalidGeometryError& e) {
    err << "gunalarm: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "gunalarm: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfigError;
}

}  // namespace gunalarm
