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

// Domain types shared by every module.

#ifndef GUNALARM_TYPES_HPP_
#define GUNALARM_TYPES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gunalarm {

using FrameIndex = std::int64_t;

// The positive class. Other labels pass through backends untouched but are
// ignored by the alarm and by evaluation unless a caller selects them.
inline constexpr std::string_view kPositiveLabel = "pistol";

// Axis-aligned rectangle in pixel coordinates: origin top-left, y grows
// downward. A valid box has finite coordinates and w > 0, h > 0.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const noexcept { return x + w; }
  double bottom() const noexcept { return y + h; }
  double area() const noexcept { return w * h; }

  // VOC-style corners. Throws InvalidGeometryError when xmax <= xmin or
  // ymax <= ymin.
  static BoundingBox FromCorners(double xmin, double ymin, double xmax,
                                 double ymax);

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Throws InvalidGeometryError unless `box` is valid.
void Validate(const BoundingBox& box);
bool IsValid(const BoundingBox& box) noexcept;

struct Detection {
  BoundingBox box;
  std::string label{kPositiveLabel};
  double score = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct FrameDetections {
  FrameIndex frame = 0;
  std::vector<Detection> detections;

  friend bool operator==(const FrameDetections&,
                         const FrameDetections&) = default;
};

struct LabeledBox {
  BoundingBox box;
  std::string label{kPositiveLabel};

  friend bool operator==(const LabeledBox&, const LabeledBox&) = default;
};

struct FrameAnnotations {
  FrameIndex frame = 0;
  std::vector<LabeledBox> boxes;

  friend bool operator==(const FrameAnnotations&,
                         const FrameAnnotations&) = default;
};

// Streams are keyed by frame index, so iteration is always in frame order.
using DetectionStream = std::map<FrameIndex, FrameDetections>;
using AnnotationStream = std::map<FrameIndex, FrameAnnotations>;

// Pixel extent of a frame; defaults to the 640x360 video geometry.
struct FrameSize {
  double width = 640.0;
  double height = 360.0;
};

}  // namespace gunalarm

#endif  // GUNALARM_TYPES_HPP_
