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

#include "gunalarm/detector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "gunalarm/error.hpp"

namespace gunalarm {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-frame engine keyed on (seed, frame) only.
std::mt19937_64 FrameEngine(std::uint64_t seed, FrameIndex frame) {
  const std::uint64_t key =
      SplitMix64(seed ^ SplitMix64(static_cast<std::uint64_t>(frame)));
  std::seed_seq seq{static_cast<std::uint32_t>(key),
                    static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

void CheckRange(const ScoreRange& r, const char* name) {
  if (!IsProbability(r.lo) || !IsProbability(r.hi) || r.lo > r.hi) {
    throw ConfigError(std::string(name) + " must be a sub-interval of [0, 1]");
  }
}

double DrawScore(std::mt19937_64& rng, const ScoreRange& r) {
  if (r.lo == r.hi) return r.lo;
  std::uniform_real_distribution<double> dist(r.lo, r.hi);
  return std::min(dist(rng), r.hi);
}

}  // namespace

ReplayBackend::ReplayBackend(DetectionStream stream)
    : stream_(std::move(stream)) {}

FrameDetections ReplayBackend::Detect(FrameIndex frame) const {
  auto it = stream_.find(frame);
  if (it == stream_.end()) {
    throw MissingFrameError("replay stream has no frame " +
                            std::to_string(frame));
  }
  return it->second;
}

std::vector<FrameIndex> ReplayBackend::Frames() const {
  std::vector<FrameIndex> frames;
  frames.reserve(stream_.size());
  for (const auto& [frame, unused] : stream_) frames.push_back(frame);
  return frames;
}

void Validate(const OracleNoiseParams& params) {
  if (!IsProbability(params.miss_prob)) {
    throw ConfigError("miss_prob must be in [0, 1]");
  }
  if (!(params.fp_rate >= 0.0) || !std::isfinite(params.fp_rate)) {
    throw ConfigError("fp_rate must be a finite value >= 0");
  }
  if (!(params.jitter_sigma >= 0.0) || !std::isfinite(params.jitter_sigma)) {
    throw ConfigError("jitter_sigma must be a finite value >= 0");
  }
  CheckRange(params.tp_score_range, "tp_score_range");
  CheckRange(params.fp_score_range, "fp_score_range");
}

FrameDetections NoisyOracleDetect(const FrameAnnotations& truths,
                                  const OracleNoiseParams& params,
                                  const FrameSize& bounds) {
  Validate(params);
  if (!(bounds.width > 2.0 && bounds.height > 2.0)) {
    throw ConfigError("oracle frame size must exceed 2x2 pixels");
  }

  std::mt19937_64 rng = FrameEngine(params.seed, truths.frame);
  std::bernoulli_distribution keep(1.0 - params.miss_prob);
  std::normal_distribution<double> jitter(0.0, 1.0);

  FrameDetections out;
  out.frame = truths.frame;
  for (const auto& truth : truths.boxes) {
    Validate(truth.box);
    // Draw unconditionally so one box's fate never shifts another's draws.
    const bool survives = keep(rng);
    double edges[4];
    for (double& e : edges) e = jitter(rng) * params.jitter_sigma;
    const double score = DrawScore(rng, params.tp_score_range);
    if (!survives) continue;

    BoundingBox box = truth.box;
    if (params.jitter_sigma > 0.0) {
      const double x1 = std::clamp(box.x + edges[0], 0.0, bounds.width);
      const double y1 = std::clamp(box.y + edges[1], 0.0, bounds.height);
      const double x2 = std::clamp(box.right() + edges[2], 0.0, bounds.width);
      const double y2 =
          std::clamp(box.bottom() + edges[3], 0.0, bounds.height);
      if (x2 - x1 <= 1.0 || y2 - y1 <= 1.0) continue;
      box = BoundingBox{x1, y1, x2 - x1, y2 - y1};
    }
    out.detections.push_back(Detection{box, truth.label, score});
  }

  if (params.fp_rate > 0.0) {
    std::poisson_distribution<int> count(params.fp_rate);
    const int spurious = count(rng);
    std::uniform_real_distribution<double> size_frac(0.05, 0.25);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < spurious; ++i) {
      const double w = std::max(2.0, size_frac(rng) * bounds.width);
      const double h = std::max(2.0, size_frac(rng) * bounds.height);
      const double x = unit(rng) * (bounds.width - w);
      const double y = unit(rng) * (bounds.height - h);
      const double score = DrawScore(rng, params.fp_score_range);
      out.detections.push_back(
          Detection{BoundingBox{x, y, w, h}, std::string(kPositiveLabel),
                    score});
    }
  }
  return out;
}

OracleBackend::OracleBackend(AnnotationStream truths, OracleNoiseParams params,
                             FrameSize bounds)
    : truths_(std::move(truths)), params_(params), bounds_(bounds) {
  Validate(params_);
}

FrameDetections OracleBackend::Detect(FrameIndex frame) const {
  auto it = truths_.find(frame);
  if (it == truths_.end()) {
    throw MissingFrameError("ground truth has no frame " +
                            std::to_string(frame));
  }
  return NoisyOracleDetect(it->second, params_, bounds_);
}

std::vector<FrameIndex> OracleBackend::Frames() const {
  std::vector<FrameIndex> frames;
  frames.reserve(truths_.size());
  for (const auto& [frame, unused] : truths_) frames.push_back(frame);
  return frames;
}

FrameDetections FilterByThreshold(const FrameDetections& detections,
                                  double t) {
  if (!IsProbability(t)) {
    throw ConfigError("score threshold must be in [0, 1], got " +
                      std::to_string(t));
  }
  FrameDetections out;
  out.frame = detections.frame;
  std::copy_if(detections.detections.begin(), detections.detections.end(),
               std::back_inserter(out.detections),
               [t](const Detection& d) { return d.score >= t; });
  return out;
}

DetectionStream DetectAll(const DetectorBackend& backend) {
  DetectionStream out;
  for (FrameIndex frame : backend.Frames()) {
    out.emplace(frame, backend.Detect(frame));
  }
  return out;
}

}  // namespace gunalarm
