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

#ifndef GUNALARM_DETECTOR_HPP_
#define GUNALARM_DETECTOR_HPP_

#include <cstdint>
#include <vector>

#include "gunalarm/types.hpp"

namespace gunalarm {

// Contract every detector backend fulfils. Backends are immutable once
// constructed, so Detect may be called concurrently. Detect is deterministic
// for a given backend and frame and throws MissingFrameError for frames the
// backend's stream does not contain.
class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;

  virtual FrameDetections Detect(FrameIndex frame) const = 0;

  // Frame indices of the stream, ascending.
  virtual std::vector<FrameIndex> Frames() const = 0;
};

// Returns the stored detections verbatim.
class ReplayBackend final : public DetectorBackend {
 public:
  explicit ReplayBackend(DetectionStream stream);

  FrameDetections Detect(FrameIndex frame) const override;
  std::vector<FrameIndex> Frames() const override;

 private:
  DetectionStream stream_;
};

struct ScoreRange {
  double lo = 0.0;
  double hi = 1.0;
};

// Noise model of the synthetic oracle backend.
struct OracleNoiseParams {
  double miss_prob = 0.0;     // probability a true box is dropped
  double fp_rate = 0.0;       // Poisson mean of spurious boxes per frame
  double jitter_sigma = 0.0;  // std-dev (px) of the per-edge perturbation
  ScoreRange tp_score_range{0.8, 1.0};
  ScoreRange fp_score_range{0.5, 0.9};
  std::uint64_t seed = 0;
};

// Throws ConfigError naming the offending field.
void Validate(const OracleNoiseParams& params);

// Synthesizes detections for one annotated frame.
//
// Every truth box survives with probability 1 - miss_prob. Survivors have
// each edge shifted by N(0, jitter_sigma), are clipped to `bounds` and are
// dropped if clipping leaves a side of 1 px or less; with zero jitter the box
// is passed through untouched. Their scores are uniform in tp_score_range and
// they keep the truth label. Then Poisson(fp_rate) spurious "pistol" boxes
// are placed uniformly inside `bounds` with scores from fp_score_range.
//
// The random state depends only on (seed, frame), so frames may be produced
// in any order, or concurrently, with identical results.
FrameDetections NoisyOracleDetect(const FrameAnnotations& truths,
                                  const OracleNoiseParams& params,
                                  const FrameSize& bounds = {});

// Oracle backend over a ground-truth stream.
class OracleBackend final : public DetectorBackend {
 public:
  OracleBackend(AnnotationStream truths, OracleNoiseParams params,
                FrameSize bounds = {});

  FrameDetections Detect(FrameIndex frame) const override;
  std::vector<FrameIndex> Frames() const override;

 private:
  AnnotationStream truths_;
  OracleNoiseParams params_;
  FrameSize bounds_;
};

// Keeps detections whose score is >= t, preserving order. Throws ConfigError
// if t is outside [0, 1].
FrameDetections FilterByThreshold(const FrameDetections& detections, double t);

// Runs `backend` over every frame it holds.
DetectionStream DetectAll(const DetectorBackend& backend);

}  // namespace gunalarm

#endif  // GUNALARM_DETECTOR_HPP_
