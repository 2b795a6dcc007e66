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

#include "gunalarm/alarm.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gunalarm/error.hpp"

namespace gunalarm {

void Validate(const AlarmConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("k must be >= 1");
  if (!(cfg.fps > 0.0) || !std::isfinite(cfg.fps)) {
    throw ConfigError("fps must be > 0");
  }
  if (!(cfg.score_min >= 0.0 && cfg.score_min <= 1.0)) {
    throw ConfigError("score_min must be in [0, 1]");
  }
  if (cfg.rearm_gap && *cfg.rearm_gap < 0) {
    throw ConfigError("rearm_gap must be >= 0");
  }
}

bool FramePositive(const FrameDetections& detections, double score_min) {
  return std::any_of(detections.detections.begin(),
                     detections.detections.end(), [&](const Detection& d) {
                       return d.label == kPositiveLabel && d.score >= score_min;
                     });
}

StepResult Step(const AlarmState& state, const AlarmConfig& cfg,
                bool positive, FrameIndex frame, FrameIndex origin,
                double fps, const std::string& scene_id) {
  if (state.last_frame && frame <= *state.last_frame) {
    throw SequencingError("frame " + std::to_string(frame) +
                          " fed after frame " +
                          std::to_string(*state.last_frame));
  }
  StepResult out{state, std::nullopt};
  AlarmState& s = out.state;
  s.last_frame = frame;

  if (s.latched) {
    s.negatives = positive ? 0 : s.negatives + 1;
    if (s.negatives >= cfg.EffectiveRearmGap()) {
      s.latched = false;
      s.negatives = 0;
      s.run = 0;
    }
    return out;
  }

  s.run = positive ? s.run + 1 : 0;
  if (s.run >= cfg.k) {
    out.event = AlarmEvent{frame, static_cast<double>(frame - origin + 1) / fps,
                           scene_id};
    s.run = 0;
    s.negatives = 0;
    s.latched = cfg.EffectiveRearmGap() > 0;
  }
  return out;
}

AlarmMachine::AlarmMachine(AlarmConfig cfg, std::string scene_id,
                           std::optional<FrameIndex> origin,
                           std::optional<double> fps)
    : cfg_(std::move(cfg)),
      scene_id_(std::move(scene_id)),
      configured_origin_(origin),
      origin_(origin),
      fps_(fps.value_or(cfg_.fps)) {
  Validate(cfg_);
  if (!(fps_ > 0.0)) throw ConfigError("fps must be > 0");
}

std::optional<AlarmEvent> AlarmMachine::Feed(bool positive, FrameIndex frame) {
  if (!origin_) origin_ = frame;
  StepResult r = Step(state_, cfg_, positive, frame, *origin_, fps_, scene_id_);
  state_ = r.state;
  return r.event;
}

void AlarmMachine::Reset() {
  state_ = AlarmState{};
  origin_ = configured_origin_;
}

double Aatpi(const SceneSpec& scene, FrameIndex alarm_frame) {
  if (alarm_frame < scene.start || alarm_frame > scene.end) {
    throw RangeError("alarm frame " + std::to_string(alarm_frame) +
                     " outside scene '" + scene.id + "' [" +
                     std::to_string(scene.start) + ", " +
                     std::to_string(scene.end) + "]");
  }
  if (!(scene.fps > 0.0)) throw ConfigError("scene fps must be > 0");
  return static_cast<double>(alarm_frame - scene.start + 1) / scene.fps;
}

SceneResult RunScene(const SceneSpec& scene, std::span<const bool> positives,
                     const AlarmConfig& cfg) {
  if (scene.end < scene.start) {
    throw InputError("scene '" + scene.id + "' ends before it starts");
  }
  if (positives.size() != scene.length()) {
    throw InputError("scene '" + scene.id + "' spans " +
                     std::to_string(scene.length()) + " frames but " +
                     std::to_string(positives.size()) + " flags were given");
  }
  AlarmMachine machine(cfg, scene.id, scene.start, scene.fps);
  SceneResult result;
  result.scene_id = scene.id;
  result.frames = positives.size();
  for (std::size_t i = 0; i < positives.size(); ++i) {
    if (positives[i]) ++result.positive_frames;
    auto event =
        machine.Feed(positives[i], scene.start + static_cast<FrameIndex>(i));
    if (event && !result.event) {
      event->aatpi_seconds = Aatpi(scene, event->frame);
      result.event = std::move(event);
      result.detected = true;
    }
  }
  return result;
}

}  // namespace gunalarm
