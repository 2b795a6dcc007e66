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

// Metrics engine: confusion counts, precision/recall/F1, image-level and
// box-level video evaluation, and scene-suite aggregation for the alarm.

#ifndef GUNALARM_EVAL_HPP_
#define GUNALARM_EVAL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gunalarm/alarm.hpp"
#include "gunalarm/types.hpp"

namespace gunalarm {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  // Absent for box-level evaluation, where negatives are not enumerable.
  std::optional<std::int64_t> tn;

  ConfusionCounts& operator+=(const ConfusionCounts& other);
  friend bool operator==(const ConfusionCounts&,
                         const ConfusionCounts&) = default;
};

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  ConfusionCounts counts;
  // False when the metric's denominator was zero; the value is then 0.
  bool precision_defined = true;
  bool recall_defined = true;
  bool f1_defined = true;
};

// Throws InputError on negative counts.
MetricsReport MetricsFromConfusion(const ConfusionCounts& counts);

// Ratio in [0, 1] as a percentage rounded half-up to two decimals.
double PercentHalfUp(double ratio);
// PercentHalfUp rendered with exactly two decimals, e.g. "88.24".
std::string FormatPercent(double ratio);

// Binary image-level confusion keyed by image id. Throws InputError listing
// ids present on only one side.
ConfusionCounts ImageLevelEval(const std::map<std::string, bool>& predictions,
                               const std::map<std::string, bool>& truths);

// An image is called positive iff a pistol detection survives score_min.
bool ImagePredictedPositive(const FrameDetections& detections,
                            double score_min);

struct VideoEvalOptions {
  double iou_min = 0.5;
  double score_min = 0.7;
  // When set, NMS at this IoU runs after thresholding and before matching.
  std::optional<double> nms_iou;
};

struct VideoReport {
  std::string video_id;
  std::int64_t frames = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t gt_p = 0;
  MetricsReport metrics;
};

// Frame-by-frame box evaluation over the union of frame indices; a frame
// missing from either side counts as empty. Only "pistol" detections and
// truth boxes take part.
VideoReport VideoBoxEval(const DetectionStream& detections,
                         const AnnotationStream& truths,
                         const VideoEvalOptions& options,
                         std::string video_id = "video");

// Builds a report straight from reported counts (fn = gt_p - tp).
VideoReport VideoReportFromCounts(std::string video_id, std::int64_t frames,
                                  std::int64_t tp, std::int64_t gt_p,
                                  std::int64_t fp);

// Tab-separated header and row in the layout
// `video frames tp gt_p fp precision recall f1`.
std::string VideoTableHeader();
std::string VideoTableRow(const VideoReport& report);

struct SuiteReport {
  std::vector<SceneResult> scenes;
  std::size_t detected = 0;
  std::size_t total = 0;
  // Mean AATpI over detected scenes; empty when nothing was detected.
  std::optional<double> mean_aatpi;
};

// Runs the alarm over every scene. A frame absent from `detections` is a
// negative frame. Throws InputError if two scenes overlap.
SuiteReport SceneSuiteEval(const std::vector<SceneSpec>& scenes,
                           const DetectionStream& detections,
                           const AlarmConfig& cfg);

}  // namespace gunalarm

#endif  // GUNALARM_EVAL_HPP_
