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

// Bounding-box arithmetic: overlap, suppression and frame-level matching.
// Everything here is a pure function of its arguments.

#ifndef GUNALARM_GEOMETRY_HPP_
#define GUNALARM_GEOMETRY_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gunalarm/types.hpp"

namespace gunalarm {

// Intersection area over union area, in [0, 1]. Areas are taken on the
// continuous rectangle (no +1 pixel correction). Throws InvalidGeometryError
// if either box is degenerate.
double Iou(const BoundingBox& a, const BoundingBox& b);

// Greedy non-maximum suppression. Detections are visited by descending score
// (stable on input order); a detection is dropped when its IoU with an
// already-kept one exceeds `iou_threshold`. The result is in visiting order.
// Throws ConfigError if the threshold is outside [0, 1].
std::vector<Detection> Nms(std::span<const Detection> detections,
                           double iou_threshold);

struct MatchOutcome {
  // (detection index, ground-truth index) into the caller's sequences.
  std::vector<std::pair<std::size_t, std::size_t>> assignments;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// Greedy one-to-one matching. Detections are visited by descending score
// (ties keep input order); each takes the unmatched truth with the highest
// IoU (ties go to the lowest truth index) provided that IoU is strictly
// greater than `iou_min`.
MatchOutcome MatchFrame(std::span<const Detection> detections,
                        std::span<const BoundingBox> truths, double iou_min);

}  // namespace gunalarm

#endif  // GUNALARM_GEOMETRY_HPP_
