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

#include "gunalarm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <set>
#include <utility>

#include "gunalarm/detector.hpp"
#include "gunalarm/error.hpp"
#include "gunalarm/geometry.hpp"

namespace gunalarm {
namespace {

std::vector<Detection> PositiveDetections(const FrameDetections& frame,
                                          double score_min) {
  std::vector<Detection> out;
  for (const auto& d : FilterByThreshold(frame, score_min).detections) {
    if (d.label == kPositiveLabel) out.push_back(d);
  }
  return out;
}

std::vector<BoundingBox> PositiveTruths(const FrameAnnotations& frame) {
  std::vector<BoundingBox> out;
  for (const auto& b : frame.boxes) {
    if (b.label == kPositiveLabel) out.push_back(b.box);
  }
  return out;
}

}  // namespace

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  if (tn || other.tn) tn = tn.value_or(0) + other.tn.value_or(0);
  return *this;
}

MetricsReport MetricsFromConfusion(const ConfusionCounts& c) {
  if (c.tp < 0 || c.fp < 0 || c.fn < 0 || (c.tn && *c.tn < 0)) {
    throw InputError("confusion counts must be non-negative");
  }
  MetricsReport r;
  r.counts = c;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fp > 0) {
    r.precision = tp / static_cast<double>(c.tp + c.fp);
  } else {
    r.precision_defined = false;
  }
  if (c.tp + c.fn > 0) {
    r.recall = tp / static_cast<double>(c.tp + c.fn);
  } else {
    r.recall_defined = false;
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  } else {
    r.f1_defined = false;
  }
  return r;
}

double PercentHalfUp(double ratio) {
  // Work in hundredths of a percent. The nudge absorbs representation error
  // on exact halves such as 0.125 -> 12.5 -> 1250.0000000001.
  const double hundredths = ratio * 10000.0;
  return std::floor(hundredths + 0.5 + 1e-7) / 100.0;
}

std::string FormatPercent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", PercentHalfUp(ratio));
  return buf;
}

ConfusionCounts ImageLevelEval(const std::map<std::string, bool>& predictions,
                               const std::map<std::string, bool>& truths) {
  std::vector<std::string> offending;
  for (const auto& [id, unused] : predictions) {
    if (!truths.count(id)) offending.push_back(id);
  }
  for (const auto& [id, unused] : truths) {
    if (!predictions.count(id)) offending.push_back(id);
  }
  if (!offending.empty()) {
    std::string msg = "image ids present on only one side:";
    for (const auto& id : offending) msg += " " + id;
    throw InputError(msg);
  }

  ConfusionCounts c;
  c.tn = 0;
  for (const auto& [id, predicted] : predictions) {
    const bool actual = truths.at(id);
    if (predicted && actual) ++c.tp;
    if (predicted && !actual) ++c.fp;
    if (!predicted && actual) ++c.fn;
    if (!predicted && !actual) ++*c.tn;
  }
  return c;
}

bool ImagePredictedPositive(const FrameDetections& detections,
                            double score_min) {
  return !PositiveDetections(detections, score_min).empty();
}

VideoReport VideoBoxEval(const DetectionStream& detections,
                         const AnnotationStream& truths,
                         const VideoEvalOptions& options,
                         std::string video_id) {
  std::set<FrameIndex> frames;
  for (const auto& [f, unused] : detections) frames.insert(f);
  for (const auto& [f, unused] : truths) frames.insert(f);

  VideoReport report;
  report.video_id = std::move(video_id);
  report.frames = static_cast<std::int64_t>(frames.size());
  for (FrameIndex f : frames) {
    std::vector<Detection> dets;
    if (auto it = detections.find(f); it != detections.end()) {
      dets = PositiveDetections(it->second, options.score_min);
      if (options.nms_iou) dets = Nms(dets, *options.nms_iou);
    }
    std::vector<BoundingBox> gts;
    if (auto it = truths.find(f); it != truths.end()) {
      gts = PositiveTruths(it->second);
    }
    const MatchOutcome m = MatchFrame(dets, gts, options.iou_min);
    report.tp += static_cast<std::int64_t>(m.tp);
    report.fp += static_cast<std::int64_t>(m.fp);
    report.gt_p += static_cast<std::int64_t>(gts.size());
  }
  report.metrics = MetricsFromConfusion(
      ConfusionCounts{report.tp, report.fp, report.gt_p - report.tp, {}});
  return report;
}

VideoReport VideoReportFromCounts(std::string video_id, std::int64_t frames,
                                  std::int64_t tp, std::int64_t gt_p,
                                  std::int64_t fp) {
  if (tp > gt_p) throw InputError("tp exceeds gt_p");
  VideoReport r{std::move(video_id), frames, tp, fp, gt_p, {}};
  r.metrics = MetricsFromConfusion(ConfusionCounts{tp, fp, gt_p - tp, {}});
  return r;
}

std::string VideoTableHeader() {
  return "video\tframes\ttp\tgt_p\tfp\tprecision\trecall\tf1";
}

std::string VideoTableRow(const VideoReport& r) {
  return r.video_id + "\t" + std::to_string(r.frames) + "\t" +
         std::to_string(r.tp) + "\t" + std::to_string(r.gt_p) + "\t" +
         std::to_string(r.fp) + "\t" + FormatPercent(r.metrics.precision) +
         "\t" + FormatPercent(r.metrics.recall) + "\t" +
         FormatPercent(r.metrics.f1);
}

SuiteReport SceneSuiteEval(const std::vector<SceneSpec>& scenes,
                           const DetectionStream& detections,
                           const AlarmConfig& cfg) {
  Validate(cfg);
  std::vector<const SceneSpec*> ordered;
  for (const auto& s : scenes) {
    if (s.end < s.start) {
      throw InputError("scene '" + s.id + "' ends before it starts");
    }
    ordered.push_back(&s);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const SceneSpec* a, const SceneSpec* b) {
              return a->start < b->start;
            });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->start <= ordered[i - 1]->end) {
      throw InputError("scenes '" + ordered[i - 1]->id + "' and '" +
                       ordered[i]->id + "' overlap");
    }
  }

  SuiteReport report;
  report.total = scenes.size();
  double aatpi_sum = 0.0;
  for (const auto& scene : scenes) {
    // std::vector<bool> has no contiguous storage to span over.
    const std::size_t n = scene.length();
    auto positives = std::make_unique<bool[]>(n);
    for (FrameIndex f = scene.start; f <= scene.end; ++f) {
      if (auto it = detections.find(f); it != detections.end()) {
        positives[static_cast<std::size_t>(f - scene.start)] =
            FramePositive(it->second, cfg.score_min);
      }
    }
    SceneResult result =
        RunScene(scene, std::span<const bool>(positives.get(), n), cfg);
    if (result.detected) {
      ++report.detected;
      aatpi_sum += result.event->aatpi_seconds;
    }
    report.scenes.push_back(std::move(result));
  }
  if (report.detected > 0) {
    report.mean_aatpi = aatpi_sum / static_cast<double>(report.detected);
  }
  return report;
}

}  // namespace gunalarm
