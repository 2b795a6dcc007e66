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

#ifndef GUNALARM_SYNTHETIC_HPP_
#define GUNALARM_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "gunalarm/alarm.hpp"
#include "gunalarm/types.hpp"

namespace gunalarm {

// A seeded synthetic annotation stream: runs of frames in which one or two
// pistols drift across the frame, separated by empty stretches. Every run of
// visible-pistol frames is also emitted as a scene.
struct SyntheticVideo {
  AnnotationStream truth;
  std::vector<SceneSpec> scenes;
};

struct SyntheticVideoOptions {
  FrameIndex frames = 600;
  FrameSize size;
  double fps = 25.0;
  int min_run = 5;
  int max_run = 40;
  int min_gap = 3;
  int max_gap = 20;
  std::uint64_t seed = 0;
};

SyntheticVideo MakeSyntheticVideo(const SyntheticVideoOptions& options);

}  // namespace gunalarm

#endif  // GUNALARM_SYNTHETIC_HPP_
