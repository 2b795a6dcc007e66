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

// Temporal alarm: fire once k consecutive frames are positive.

#ifndef GUNALARM_ALARM_HPP_
#define GUNALARM_ALARM_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "gunalarm/types.hpp"

namespace gunalarm {

struct AlarmConfig {
  int k = 5;
  double score_min = 0.7;
  // Time base for scenes that do not carry their own frame rate.
  double fps = 25.0;
  // Consecutive negatives needed to re-arm after firing; unset means k.
  std::optional<int> rearm_gap;

  int EffectiveRearmGap() const { return rearm_gap.value_or(k); }
};

// Throws ConfigError.
void Validate(const AlarmConfig& cfg);

struct AlarmEvent {
  FrameIndex frame = 0;
  // Video time from the origin (scene start) to the alarm frame, inclusive.
  double aatpi_seconds = 0.0;
  std::string scene_id;

  friend bool operator==(const AlarmEvent&, const AlarmEvent&) = default;
};

struct SceneSpec {
  std::string id;
  FrameIndex start = 0;
  FrameIndex end = 0;  // inclusive
  double fps = 25.0;

  std::size_t length() const {
    return static_cast<std::size_t>(end - start + 1);
  }
};

// True iff some detection carries the positive label with score >= score_min.
bool FramePositive(const FrameDetections& detections, double score_min);

// Plain state of one alarm stream.
struct AlarmState {
  int run = 0;              // consecutive positives while armed
  int negatives = 0;        // consecutive negatives while latched
  bool latched = false;
  std::optional<FrameIndex> last_frame;
};

struct StepResult {
  AlarmState state;
  std::optional<AlarmEvent> event;
};

// One transition. While armed, a positive extends the run and a negative
// resets it; the first time the run reaches k an event is emitted at `frame`
// and the machine latches. A latched machine re-arms (with an empty run)
// after rearm_gap consecutive negatives. The event's time is measured from
// `origin`. Throws SequencingError unless frame > state.last_frame.
StepResult Step(const AlarmState& state, const AlarmConfig& cfg,
                bool positive, FrameIndex frame, FrameIndex origin,
                double fps, const std::string& scene_id = {});

// Stateful wrapper for a single stream. The origin is the first frame fed
// unless given explicitly.
class AlarmMachine {
 public:
  explicit AlarmMachine(AlarmConfig cfg, std::string scene_id = {},
                        std::optional<FrameIndex> origin = std::nullopt,
                        std::optional<double> fps = std::nullopt);

  std::optional<AlarmEvent> Feed(bool positive, FrameIndex frame);
  void Reset();

  const AlarmState& state() const { return state_; }
  const AlarmConfig& config() const { return cfg_; }

 private:
  AlarmConfig cfg_;
  std::string scene_id_;
  std::optional<FrameIndex> configured_origin_;
  std::optional<FrameIndex> origin_;
  double fps_;
  AlarmState state_;
};

// Elapsed scene time, (alarm_frame - start + 1) / fps. Throws RangeError if
// the alarm lies outside the scene.
double Aatpi(const SceneSpec& scene, FrameIndex alarm_frame);

struct SceneResult {
  std::string scene_id;
  bool detected = false;
  std::optional<AlarmEvent> event;  // first alarm inside the scene
  std::size_t positive_frames = 0;
  std::size_t frames = 0;
};

// Runs a fresh machine over one scene; positives[i] describes frame
// scene.start + i. Throws InputError on a length mismatch.
SceneResult RunScene(const SceneSpec& scene, std::span<const bool> positives,
                     const AlarmConfig& cfg);

}  // namespace gunalarm

#endif  // GUNALARM_ALARM_HPP_
