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

#include "gunalarm/eval.hpp"

#include "gtest/gtest.h"
#include "gunalarm/detector.hpp"
#include "gunalarm/error.hpp"

namespace gunalarm {
namespace {

struct ReferenceRow {
  std::int64_t tp, fp, fn;
  const char* precision;
  const char* recall;
  const char* f1;
};

void ExpectRow(const ReferenceRow& row) {
  const auto m = MetricsFromConfusion(ConfusionCounts{row.tp, row.fp, row.fn, {}});
  EXPECT_EQ(FormatPercent(m.precision), row.precision);
  EXPECT_EQ(FormatPercent(m.recall), row.recall);
  EXPECT_EQ(FormatPercent(m.f1), row.f1);
}

TEST(MetricsTest, SlidingWindowDatabaseTwoRow) {
  ExpectRow({98, 11, 206, "89.91", "32.24", "47.46"});
}

TEST(MetricsTest, RegionProposalRow) {
  ExpectRow({304, 57, 0, "84.21", "100.00", "91.43"});
}

TEST(MetricsTest, EmptyConfusionIsUndefined) {
  const auto m = MetricsFromConfusion(ConfusionCounts{});
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_FALSE(m.precision_defined);
  EXPECT_FALSE(m.recall_defined);
  EXPECT_FALSE(m.f1_defined);
}

TEST(MetricsTest, NegativeCountsThrow) {
  EXPECT_THROW(MetricsFromConfusion(ConfusionCounts{-1, 0, 0, {}}),
               InputError);
}

TEST(MetricsTest, F1IsHarmonicMean) {
  for (std::int64_t tp = 1; tp < 40; tp += 3) {
    for (std::int64_t fp = 0; fp < 40; fp += 7) {
      for (std::int64_t fn = 0; fn < 40; fn += 5) {
        const auto m = MetricsFromConfusion(ConfusionCounts{tp, fp, fn, {}});
        EXPECT_NEAR(m.f1 * (m.precision + m.recall),
                    2 * m.precision * m.recall, 1e-12);
        EXPECT_LE(std::min(m.precision, m.recall), m.f1 + 1e-15);
        EXPECT_GE(std::max(m.precision, m.recall), m.f1 - 1e-15);
      }
    }
  }
}

TEST(PercentTest, RoundsHalfUp) {
  EXPECT_EQ(FormatPercent(0.12345), "12.35");
  EXPECT_EQ(FormatPercent(0.123449), "12.34");
  EXPECT_EQ(FormatPercent(0.00005), "0.01");
  EXPECT_EQ(FormatPercent(1.0), "100.00");
  EXPECT_EQ(FormatPercent(0.2), "20.00");
}

TEST(ImageLevelEvalTest, PerfectClassifierOnBalancedSet) {
  std::map<std::string, bool> truth;
  for (int i = 0; i < 608; ++i) truth["img" + std::to_string(i)] = i < 304;
  const auto c = ImageLevelEval(truth, truth);
  EXPECT_EQ(c.tp, 304);
  EXPECT_EQ(c.tn, 304);
  EXPECT_EQ(c.fp, 0);
  EXPECT_EQ(c.fn, 0);
}

TEST(ImageLevelEvalTest, AllNegativePredictions) {
  std::map<std::string, bool> truth;
  std::map<std::string, bool> pred;
  for (int i = 0; i < 608; ++i) {
    truth["img" + std::to_string(i)] = i < 304;
    pred["img" + std::to_string(i)] = false;
  }
  const auto c = ImageLevelEval(pred, truth);
  EXPECT_EQ(c.tp, 0);
  EXPECT_EQ(c.fn, 304);
  EXPECT_EQ(c.tn, 304);
  EXPECT_EQ(c.fp, 0);
}

TEST(ImageLevelEvalTest, EmptySets) {
  const auto c = ImageLevelEval({}, {});
  EXPECT_EQ(c, (ConfusionCounts{0, 0, 0, 0}));
}

TEST(ImageLevelEvalTest, MismatchedIdsListed) {
  try {
    ImageLevelEval({{"a", true}, {"b", false}}, {{"a", true}, {"c", true}});
    FAIL();
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find(" b"), std::string::npos);
    EXPECT_NE(msg.find(" c"), std::string::npos);
  }
}

TEST(ImageLevelEvalTest, PredictedPositiveNeedsPistolAboveThreshold) {
  FrameDetections d{0,
                    {Detection{{0, 0, 5, 5}, "knife", 0.99},
                     Detection{{0, 0, 5, 5}, "pistol", 0.6}}};
  EXPECT_FALSE(ImagePredictedPositive(d, 0.7));
  EXPECT_TRUE(ImagePredictedPositive(d, 0.6));
}

TEST(VideoReportTest, ReferenceCountsVideoOne) {
  const auto r = VideoReportFromCounts("1", 393, 60, 162, 8);
  EXPECT_EQ(VideoTableRow(r), "1\t393\t60\t162\t8\t88.24\t37.04\t52.17");
}

TEST(VideoReportTest, ReferenceCountsVideoSix) {
  const auto r = VideoReportFromCounts("6", 212, 141, 290, 30);
  EXPECT_EQ(FormatPercent(r.metrics.precision), "82.46");
  EXPECT_EQ(FormatPercent(r.metrics.recall), "48.62");
  EXPECT_EQ(FormatPercent(r.metrics.f1), "61.17");
}

TEST(VideoBoxEvalTest, SelfMatchIsPerfect) {
  AnnotationStream truth;
  for (FrameIndex f = 0; f < 30; ++f) {
    truth[f] = FrameAnnotations{
        f, {LabeledBox{{double(f), 10, 30, 20}, "pistol"},
            LabeledBox{{200, double(f), 25, 25}, "pistol"}}};
  }
  truth[30] = FrameAnnotations{30, {}};
  const auto dets = DetectAll(OracleBackend(truth, OracleNoiseParams{}));
  const auto r = VideoBoxEval(dets, truth, VideoEvalOptions{});
  EXPECT_EQ(r.frames, 31);
  EXPECT_EQ(r.tp, 60);
  EXPECT_EQ(r.fp, 0);
  EXPECT_EQ(r.gt_p, 60);
  EXPECT_EQ(r.metrics.precision, 1.0);
  EXPECT_EQ(r.metrics.recall, 1.0);
}

TEST(VideoBoxEvalTest, ThresholdLabelAndMissingFrames) {
  AnnotationStream truth;
  truth[0] = FrameAnnotations{0, {LabeledBox{{0, 0, 10, 10}, "pistol"}}};
  truth[2] = FrameAnnotations{2, {LabeledBox{{0, 0, 10, 10}, "pistol"},
                                  LabeledBox{{50, 50, 10, 10}, "rifle"}}};
  DetectionStream dets;
  dets[0] = FrameDetections{0,
                            {Detection{{0, 0, 10, 10}, "pistol", 0.9},
                             Detection{{30, 30, 10, 10}, "pistol", 0.5}}};
  dets[1] = FrameDetections{1, {Detection{{0, 0, 10, 10}, "pistol", 0.8}}};
  dets[2] = FrameDetections{2, {Detection{{50, 50, 10, 10}, "rifle", 0.9}}};
  const auto r = VideoBoxEval(dets, truth, VideoEvalOptions{});
  EXPECT_EQ(r.frames, 3);
  EXPECT_EQ(r.tp, 1);       // frame 0
  EXPECT_EQ(r.fp, 1);       // frame 1 has no truth; 0.5 box filtered
  EXPECT_EQ(r.gt_p, 2);     // rifle ignored
  EXPECT_EQ(r.metrics.counts.fn, 1);
}

TEST(VideoBoxEvalTest, OptionalNmsRemovesDuplicates) {
  AnnotationStream truth;
  truth[0] = FrameAnnotations{0, {LabeledBox{{0, 0, 10, 10}, "pistol"}}};
  DetectionStream dets;
  dets[0] = FrameDetections{0,
                            {Detection{{0, 0, 10, 10}, "pistol", 0.9},
                             Detection{{1, 0, 10, 10}, "pistol", 0.8}}};
  VideoEvalOptions opts;
  EXPECT_EQ(VideoBoxEval(dets, truth, opts).fp, 1);
  opts.nms_iou = 0.5;
  EXPECT_EQ(VideoBoxEval(dets, truth, opts).fp, 0);
}

DetectionStream PositiveRun(FrameIndex start, int length, double score = 0.9) {
  DetectionStream out;
  for (int i = 0; i < length; ++i) {
    out[start + i] = FrameDetections{
        start + i, {Detection{{0, 0, 10, 10}, "pistol", score}}};
  }
  return out;
}

TEST(SceneSuiteEvalTest, ThreeFirableScenes) {
  DetectionStream dets;
  for (FrameIndex s : {0, 20, 40}) dets.merge(PositiveRun(s, 6));
  const std::vector<SceneSpec> scenes{
      {"a", 0, 9, 25.0}, {"b", 20, 29, 25.0}, {"c", 40, 49, 25.0}};
  const auto r = SceneSuiteEval(scenes, dets, AlarmConfig{});
  EXPECT_EQ(r.detected, 3u);
  EXPECT_EQ(r.total, 3u);
  ASSERT_TRUE(r.mean_aatpi);
  EXPECT_NEAR(*r.mean_aatpi, 0.2, 1e-12);
}

TEST(SceneSuiteEvalTest, RunOfFourDoesNotFire) {
  const std::vector<SceneSpec> scenes{{"a", 0, 9, 25.0}};
  const auto r = SceneSuiteEval(scenes, PositiveRun(2, 4), AlarmConfig{});
  EXPECT_EQ(r.detected, 0u);
  EXPECT_FALSE(r.mean_aatpi);
}

TEST(SceneSuiteEvalTest, SubThresholdScoresAreNegative) {
  const std::vector<SceneSpec> scenes{{"a", 0, 9, 25.0}};
  EXPECT_EQ(SceneSuiteEval(scenes, PositiveRun(0, 10, 0.6), AlarmConfig{})
                .detected,
            0u);
}

TEST(SceneSuiteEvalTest, OverlappingScenesThrow) {
  const std::vector<SceneSpec> scenes{{"a", 0, 9, 25.0}, {"b", 9, 15, 25.0}};
  EXPECT_THROW(SceneSuiteEval(scenes, {}, AlarmConfig{}), InputError);
}

}  // namespace
}  // namespace gunalarm
