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

// File formats.
//
// Native ground truth and detections are line-delimited JSON, one frame per
// line:
//
//   {"frame":N,"boxes":[{"x":F,"y":F,"w":F,"h":F,"label":S}]}
//   {"frame":N,"boxes":[{"x":F,"y":F,"w":F,"h":F,"score":F,"label":S}]}
//
// Scene specs are a single document {"scenes":[{"id":S,"start":N,"end":N,
// "fps":F}]}. VOC-style per-image XML is accepted as ground-truth input only.
// Writers emit a canonical form: fixed key order, numbers with at most six
// decimals and no trailing zeros, one newline-terminated record per frame.
// Parsers reject invalid values instead of coercing them and report the
// source and 1-based line of the offending record.

#ifndef GUNALARM_IO_HPP_
#define GUNALARM_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gunalarm/alarm.hpp"
#include "gunalarm/detector.hpp"
#include "gunalarm/eval.hpp"
#include "gunalarm/sliding_window.hpp"
#include "gunalarm/types.hpp"

namespace gunalarm {

inline constexpr std::string_view kMemorySource = "<memory>";

// Canonical number rendering used by every writer.
std::string FormatNumber(double value);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

AnnotationStream ParseGroundTruthText(std::string_view text,
                                      std::string_view source = kMemorySource);

// One VOC <annotation> document. Object names become labels and bndbox
// corners are converted to (x, y, w, h).
FrameAnnotations ParseVocXml(std::string_view xml, FrameIndex frame,
                             std::string_view source = kMemorySource);

// Dispatches on the path: a directory is read as one VOC XML file per frame
// (frame index taken from a numeric file stem, otherwise from sorted order),
// a *.xml file as a single frame 0, anything else as the native format.
AnnotationStream ParseGroundTruth(const std::filesystem::path& path);

std::string WriteGroundTruth(const AnnotationStream& truths);

DetectionStream ParseDetectionsText(std::string_view text,
                                    std::string_view source = kMemorySource);
DetectionStream ParseDetections(const std::filesystem::path& path);
std::string WriteDetections(const DetectionStream& detections);

// Scenes omitting "fps" get `default_fps`.
std::vector<SceneSpec> ParseSceneSpecText(std::string_view text,
                                          std::string_view source =
                                              kMemorySource,
                                          double default_fps = 25.0);
std::vector<SceneSpec> ParseSceneSpec(const std::filesystem::path& path,
                                      double default_fps = 25.0);
std::string WriteSceneSpec(const std::vector<SceneSpec>& scenes);

// Everything a run needs. Unset fields keep these defaults.
struct RunConfig {
  double score_min = 0.7;
  double iou_min = 0.5;
  int k = 5;
  double fps = 25.0;
  std::optional<int> rearm_gap;
  WindowGridSpec window;
  std::optional<double> nms_iou;
  OracleNoiseParams oracle;
  FrameSize frame;

  AlarmConfig alarm() const;
  VideoEvalOptions video_eval() const;
};

// Throws ConfigError naming the offending key.
void Validate(const RunConfig& cfg);

// JSON object with optional keys: score_min, iou_min, k, fps, rearm_gap,
// nms_iou (number or null), seed, frame {w,h}, window {w,h}, stride {x,y},
// clamp_edges, oracle {miss_prob, fp_rate, jitter_sigma, tp_score_range,
// fp_score_range}. Unknown keys are errors.
RunConfig LoadConfigText(std::string_view text,
                         std::string_view source = kMemorySource);
RunConfig LoadConfig(const std::filesystem::path& path);

// Machine-readable reports, one canonical JSON record per line.
std::string WriteVideoReport(const VideoReport& report);
std::string WriteSuiteReport(const SuiteReport& report);

}  // namespace gunalarm

#endif  // GUNALARM_IO_HPP_
