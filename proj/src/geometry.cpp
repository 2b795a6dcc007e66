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

#include "gunalarm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gunalarm/error.hpp"

namespace gunalarm {
namespace {

std::string Describe(const BoundingBox& b) {
  return "(" + std::to_string(b.x) + ", " + std::to_string(b.y) + ", " +
         std::to_string(b.w) + ", " + std::to_string(b.h) + ")";
}

// Indices of `detections` ordered by descending score, stable on input order.
std::vector<std::size_t> ScoreOrder(std::span<const Detection> detections) {
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t lhs, std::size_t rhs) {
                     return detections[lhs].score > detections[rhs].score;
                   });
  return order;
}

// Assumes both boxes already validated.
double IouUnchecked(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace

BoundingBox BoundingBox::FromCorners(double xmin, double ymin, double xmax,
                                     double ymax) {
  BoundingBox box{xmin, ymin, xmax - xmin, ymax - ymin};
  Validate(box);
  return box;
}

bool IsValid(const BoundingBox& box) noexcept {
  return std::isfinite(box.x) && std::isfinite(box.y) &&
         std::isfinite(box.w) && std::isfinite(box.h) && box.w > 0.0 &&
         box.h > 0.0;
}

void Validate(const BoundingBox& box) {
  if (!IsValid(box)) {
    throw InvalidGeometryError("invalid bounding box " + Describe(box) +
                               ": need finite coordinates and w, h > 0");
  }
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  Validate(a);
  Validate(b);
  // Identical boxes are exactly 1 regardless of floating-point rounding.
  if (a == b) return 1.0;
  return IouUnchecked(a, b);
}

std::vector<Detection> Nms(std::span<const Detection> detections,
                           double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("nms iou threshold must be in [0, 1], got " +
                      std::to_string(iou_threshold));
  }
  for (const auto& d : detections) Validate(d.box);

  std::vector<Detection> kept;
  for (std::size_t idx : ScoreOrder(detections)) {
    const Detection& candidate = detections[idx];
    const bool suppressed =
        std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
          return Iou(k.box, candidate.box) > iou_threshold;
        });
    if (!suppressed) kept.push_back(candidate);
  }
  return kept;
}

MatchOutcome MatchFrame(std::span<const Detection> detections,
                        std::span<const BoundingBox> truths, double iou_min) {
  if (!(iou_min >= 0.0 && iou_min < 1.0)) {
    throw ConfigError("iou_min must be in [0, 1), got " +
                      std::to_string(iou_min));
  }
  for (const auto& d : detections) Validate(d.box);
  for (const auto& t : truths) Validate(t);

  MatchOutcome out;
  std::vector<bool> taken(truths.size(), false);
  for (std::size_t det : ScoreOrder(detections)) {
    double best = iou_min;
    std::size_t best_truth = truths.size();
    for (std::size_t t = 0; t < truths.size(); ++t) {
      if (taken[t]) continue;
      const double overlap = Iou(detections[det].box, truths[t]);
      if (overlap > best) {
        best = overlap;
        best_truth = t;
      }
    }
    if (best_truth < truths.size()) {
      taken[best_truth] = true;
      out.assignments.emplace_back(det, best_truth);
    }
  }
  out.tp = out.assignments.size();
  out.fp = detections.size() - out.tp;
  out.fn = truths.size() - out.tp;
  return out;
}

}  // namespace gunalarm
