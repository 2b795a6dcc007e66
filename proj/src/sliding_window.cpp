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

#include "gunalarm/sliding_window.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "gunalarm/error.hpp"
#include "gunalarm/geometry.hpp"

namespace gunalarm {
namespace {

std::vector<int> Positions(int extent, int win, int stride, bool clamp) {
  std::vector<int> pos;
  for (int p = 0; p + win <= extent; p += stride) pos.push_back(p);
  if (clamp && pos.back() != extent - win) pos.push_back(extent - win);
  return pos;
}

std::string WindowText(const BoundingBox& w) {
  return "window (" + std::to_string(static_cast<long long>(w.x)) + ", " +
         std::to_string(static_cast<long long>(w.y)) + ", " +
         std::to_string(static_cast<long long>(w.w)) + ", " +
         std::to_string(static_cast<long long>(w.h)) + ")";
}

}  // namespace

void Validate(const WindowGridSpec& spec) {
  if (spec.frame_w <= 0 || spec.frame_h <= 0) {
    throw ConfigError("frame size must be positive");
  }
  if (spec.win_w <= 0 || spec.win_h <= 0) {
    throw ConfigError("window size must be positive");
  }
  if (spec.win_w > spec.frame_w || spec.win_h > spec.frame_h) {
    throw ConfigError("window " + std::to_string(spec.win_w) + "x" +
                      std::to_string(spec.win_h) + " is larger than frame " +
                      std::to_string(spec.frame_w) + "x" +
                      std::to_string(spec.frame_h));
  }
  if (spec.stride_x <= 0 || spec.stride_y <= 0) {
    throw ConfigError("strides must be positive");
  }
}

std::vector<BoundingBox> WindowGrid(const WindowGridSpec& spec) {
  Validate(spec);
  const auto xs =
      Positions(spec.frame_w, spec.win_w, spec.stride_x, spec.clamp_edges);
  const auto ys =
      Positions(spec.frame_h, spec.win_h, spec.stride_y, spec.clamp_edges);
  std::vector<BoundingBox> windows;
  windows.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) {
      windows.push_back(BoundingBox{static_cast<double>(x),
                                    static_cast<double>(y),
                                    static_cast<double>(spec.win_w),
                                    static_cast<double>(spec.win_h)});
    }
  }
  return windows;
}

FrameDetections SlidingWindowDetect(FrameIndex frame,
                                    const WindowClassifier& classifier,
                                    const SlidingWindowOptions& options) {
  if (!(options.score_min >= 0.0 && options.score_min <= 1.0)) {
    throw ConfigError("score_min must be in [0, 1]");
  }
  std::vector<BoundingBox> windows;
  for (const auto& scale : options.scales) {
    auto grid = WindowGrid(scale);
    windows.insert(windows.end(), grid.begin(), grid.end());
  }

  // Results land at their window's index so aggregation order is fixed.
  std::vector<WindowClassification> results(windows.size());
  std::exception_ptr failure;
  std::size_t failed_at = windows.size();
  std::mutex failure_mu;

  auto classify_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        results[i] = classifier(frame, windows[i]);
        const double s = results[i].score;
        if (!(s >= 0.0 && s <= 1.0)) {
          throw BackendError("classifier score " + std::to_string(s) +
                             " outside [0, 1]");
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
        return;
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(
                                                      windows.size(), 1));
  if (workers <= 1) {
    classify_range(0, windows.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (windows.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < windows.size(); begin += chunk) {
      pool.emplace_back(classify_range, begin,
                        std::min(begin + chunk, windows.size()));
    }
    for (auto& t : pool) t.join();
  }

  if (failure) {
    std::string reason = "unknown error";
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      reason = e.what();
    } catch (...) {
    }
    throw BackendError("classifier failed on frame " + std::to_string(frame) +
                       " " + WindowText(windows[failed_at]) + ": " + reason);
  }

  std::vector<Detection> positives;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& r = results[i];
    if (r.label == kPositiveLabel && r.score >= options.score_min) {
      positives.push_back(Detection{windows[i], r.label, r.score});
    }
  }
  // Canonical order before NMS so equal scores resolve the same way no matter
  // how windows were enumerated.
  std::stable_sort(positives.begin(), positives.end(),
                   [](const Detection& a, const Detection& b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.box.y != b.box.y) return a.box.y < b.box.y;
                     if (a.box.x != b.box.x) return a.box.x < b.box.x;
                     if (a.box.w != b.box.w) return a.box.w < b.box.w;
                     return a.box.h < b.box.h;
                   });

  FrameDetections out;
  out.frame = frame;
  out.detections = Nms(positives, options.nms_iou);
  return out;
}

GroundTruthWindowClassifier::GroundTruthWindowClassifier(
    AnnotationStream truths, double iou_min)
    : truths_(std::move(truths)), iou_min_(iou_min) {}

WindowClassification GroundTruthWindowClassifier::operator()(
    FrameIndex frame, const BoundingBox& window) const {
  WindowClassification out{window, "background", 0.0};
  auto it = truths_.find(frame);
  if (it == truths_.end()) return out;
  double best = 0.0;
  for (const auto& truth : it->second.boxes) {
    if (truth.label != kPositiveLabel) continue;
    best = std::max(best, Iou(window, truth.box));
  }
  if (best > iou_min_) {
    out.label = std::string(kPositiveLabel);
    out.score = best;
  }
  return out;
}

SlidingWindowBackend::SlidingWindowBackend(std::vector<FrameIndex> frames,
                                           WindowClassifier classifier,
                                           SlidingWindowOptions options)
    : frames_(std::move(frames)),
      classifier_(std::move(classifier)),
      options_(std::move(options)) {
  std::sort(frames_.begin(), frames_.end());
  frames_.erase(std::unique(frames_.begin(), frames_.end()), frames_.end());
  for (const auto& scale : options_.scales) Validate(scale);
}

FrameDetections SlidingWindowBackend::Detect(FrameIndex frame) const {
  if (!std::binary_search(frames_.begin(), frames_.end(), frame)) {
    throw MissingFrameError("sliding-window stream has no frame " +
                            std::to_string(frame));
  }
  return SlidingWindowDetect(frame, classifier_, options_);
}

}  // namespace gunalarm
