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

#include "gunalarm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gunalarm/error.hpp"

namespace gunalarm {

SyntheticVideo MakeSyntheticVideo(const SyntheticVideoOptions& o) {
  if (o.frames < 0 || o.min_run < 1 || o.max_run < o.min_run ||
      o.min_gap < 0 || o.max_gap < o.min_gap || !(o.fps > 0.0) ||
      !(o.size.width >= 64.0 && o.size.height >= 64.0)) {
    throw ConfigError("invalid synthetic video options");
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> run_len(o.min_run, o.max_run);
  std::uniform_int_distribution<int> gap_len(o.min_gap, o.max_gap);
  std::uniform_int_distribution<int> pistols(1, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SyntheticVideo video;
  FrameIndex f = 0;
  while (f < o.frames) {
    const FrameIndex gap_end = std::min<FrameIndex>(f + gap_len(rng), o.frames);
    for (; f < gap_end; ++f) video.truth[f] = FrameAnnotations{f, {}};
    if (f >= o.frames) break;

    const FrameIndex run_end = std::min<FrameIndex>(f + run_len(rng), o.frames);
    const int count = pistols(rng);
    struct Track {
      double x, y, w, h, dx, dy;
    };
    std::vector<Track> tracks;
    for (int i = 0; i < count; ++i) {
      const double w = 24.0 + unit(rng) * 56.0;
      const double h = 16.0 + unit(rng) * 40.0;
      tracks.push_back(Track{unit(rng) * (o.size.width - w),
                             unit(rng) * (o.size.height - h), w, h,
                             unit(rng) * 6.0 - 3.0, unit(rng) * 4.0 - 2.0});
    }
    const FrameIndex run_start = f;
    for (; f < run_end; ++f) {
      FrameAnnotations ann{f, {}};
      for (auto& t : tracks) {
        t.x = std::clamp(t.x + t.dx, 0.0, o.size.width - t.w);
        t.y = std::clamp(t.y + t.dy, 0.0, o.size.height - t.h);
        // Hundredths of a pixel keep the canonical text form lossless.
        auto q = [](double v) { return std::round(v * 100.0) / 100.0; };
        ann.boxes.push_back(
            LabeledBox{BoundingBox{q(t.x), q(t.y), q(t.w), q(t.h)}, "pistol"});
      }
      video.truth[f] = std::move(ann);
    }
    video.scenes.push_back(SceneSpec{
        "scene" + std::to_string(video.scenes.size() + 1), run_start,
        run_end - 1, o.fps});
  }
  return video;
}

}  // namespace gunalarm
