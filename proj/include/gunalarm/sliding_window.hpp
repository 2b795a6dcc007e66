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

// Exhaustive window scan: generate a grid of windows over a frame, classify
// each one, and turn positive windows into detections.

#ifndef GUNALARM_SLIDING_WINDOW_HPP_
#define GUNALARM_SLIDING_WINDOW_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gunalarm/detector.hpp"
#include "gunalarm/types.hpp"

namespace gunalarm {

// One scale of the scan. Defaults are the 160x120 window stepped 60x60 over
// a 640x360 frame.
struct WindowGridSpec {
  int frame_w = 640;
  int frame_h = 360;
  int win_w = 160;
  int win_h = 120;
  int stride_x = 60;
  int stride_y = 60;
  // Append a last column/row flush with the frame edge when the stride does
  // not land there exactly.
  bool clamp_edges = true;
};

// Throws ConfigError.
void Validate(const WindowGridSpec& spec);

// Windows in row-major order. Every window lies inside the frame.
std::vector<BoundingBox> WindowGrid(const WindowGridSpec& spec);

struct WindowClassification {
  BoundingBox window;
  std::string label;
  double score = 0.0;
};

// Per-window classifier contract: (frame, window) -> label and score. A real
// implementation would crop the frame image; the engine never sees pixels.
// Any exception thrown is reported as a BackendError naming the window.
using WindowClassifier =
    std::function<WindowClassification(FrameIndex, const BoundingBox&)>;

struct SlidingWindowOptions {
  std::vector<WindowGridSpec> scales{WindowGridSpec{}};
  double score_min = 0.7;
  double nms_iou = 0.3;
  // Worker threads used to classify windows; 0 or 1 means inline.
  unsigned threads = 1;
};

// Classifies every window of every scale, keeps windows labelled "pistol"
// with score >= score_min (the box is the window itself), then applies NMS.
// Output is independent of enumeration order and thread count.
FrameDetections SlidingWindowDetect(FrameIndex frame,
                                    const WindowClassifier& classifier,
                                    const SlidingWindowOptions& options);

// Test classifier backed by ground truth: a window is "pistol" when its IoU
// with some truth box exceeds `iou_min`, scored by that best IoU; otherwise
// "background" with score 0.
class GroundTruthWindowClassifier {
 public:
  explicit GroundTruthWindowClassifier(AnnotationStream truths,
                                       double iou_min = 0.5);

  WindowClassification operator()(FrameIndex frame,
                                  const BoundingBox& window) const;

 private:
  AnnotationStream truths_;
  double iou_min_;
};

// Detector backend that runs the window scan for each frame in `frames`.
class SlidingWindowBackend final : public DetectorBackend {
 public:
  SlidingWindowBackend(std::vector<FrameIndex> frames,
                       WindowClassifier classifier,
                       SlidingWindowOptions options);

  FrameDetections Detect(FrameIndex frame) const override;
  std::vector<FrameIndex> Frames() const override { return frames_; }

 private:
  std::vector<FrameIndex> frames_;
  WindowClassifier classifier_;
  SlidingWindowOptions options_;
};

}  // namespace gunalarm

#endif  // GUNALARM_SLIDING_WINDOW_HPP_
