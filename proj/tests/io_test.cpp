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

#include "gunalarm/io.hpp"

#include <filesystem>
#include <random>

#include "gtest/gtest.h"
#include "gunalarm/error.hpp"

namespace gunalarm {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("gunalarm_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

constexpr char kVoc[] = R"(<annotation>
  <filename>frame_000.jpg</filename>
  <size><width>640</width><height>360</height><depth>3</depth></size>
  <object>
    <name>pistol</name>
    <bndbox><xmin>10</xmin><ymin>20</ymin><xmax>110</xmax><ymax>140</ymax></bndbox>
  </object>
  <object>
    <name>knife</name>
    <bndbox><xmin>1.5</xmin><ymin>2</ymin><xmax>3.5</xmax><ymax>4</ymax></bndbox>
  </object>
</annotation>)";

TEST(FormatNumberTest, CanonicalForms) {
  EXPECT_EQ(FormatNumber(1.0), "1");
  EXPECT_EQ(FormatNumber(0.9), "0.9");
  EXPECT_EQ(FormatNumber(0.2), "0.2");
  EXPECT_EQ(FormatNumber(12.3456789), "12.345679");
  EXPECT_EQ(FormatNumber(-0.0), "0");
  EXPECT_EQ(FormatNumber(1e-9), "0");
}

TEST(VocTest, ConvertsCornersToWidthHeight) {
  const auto ann = ParseVocXml(kVoc, 3);
  EXPECT_EQ(ann.frame, 3);
  ASSERT_EQ(ann.boxes.size(), 2u);
  EXPECT_EQ(ann.boxes[0].label, "pistol");
  EXPECT_EQ(ann.boxes[0].box, (BoundingBox{10, 20, 100, 120}));
  EXPECT_EQ(ann.boxes[1].label, "knife");
  EXPECT_EQ(ann.boxes[1].box, (BoundingBox{1.5, 2, 2, 2}));
}

TEST(VocTest, NoObjectsIsEmptyFrame) {
  const auto ann = ParseVocXml("<annotation><filename>x</filename></annotation>",
                               0);
  EXPECT_TRUE(ann.boxes.empty());
}

TEST(VocTest, InvertedCornersAreInvalidGeometry) {
  EXPECT_THROW(
      ParseVocXml("<annotation><object><name>pistol</name><bndbox><xmin>50"
                  "</xmin><ymin>0</ymin><xmax>50</xmax><ymax>10</ymax>"
                  "</bndbox></object></annotation>",
                  0),
      InvalidGeometryError);
}

TEST(VocTest, MalformedXmlIsParseError) {
  EXPECT_THROW(ParseVocXml("<annotation><object>", 0), ParseError);
  EXPECT_THROW(ParseVocXml("<other/>", 0), ParseError);
  EXPECT_THROW(
      ParseVocXml("<annotation><object><name>pistol</name><bndbox><xmin>a"
                  "</xmin><ymin>0</ymin><xmax>5</xmax><ymax>10</ymax>"
                  "</bndbox></object></annotation>",
                  0),
      ParseError);
}

TEST(VocTest, DirectoryUsesNumericStems) {
  TempDir dir;
  WriteFile(dir.path() / "000007.xml", kVoc);
  WriteFile(dir.path() / "000002.xml", "<annotation></annotation>");
  WriteFile(dir.path() / "notes.txt", "ignored");
  const auto truth = ParseGroundTruth(dir.path());
  ASSERT_EQ(truth.size(), 2u);
  EXPECT_TRUE(truth.at(2).boxes.empty());
  EXPECT_EQ(truth.at(7).boxes.size(), 2u);
}

TEST(VocTest, DirectoryWithNamedFilesUsesSortedOrder) {
  TempDir dir;
  WriteFile(dir.path() / "b.xml", kVoc);
  WriteFile(dir.path() / "a.xml", "<annotation></annotation>");
  const auto truth = ParseGroundTruth(dir.path());
  ASSERT_EQ(truth.size(), 2u);
  EXPECT_TRUE(truth.at(0).boxes.empty());
  EXPECT_EQ(truth.at(1).boxes.size(), 2u);
}

TEST(GroundTruthTest, EmptyFileIsEmptyStream) {
  EXPECT_TRUE(ParseGroundTruthText("").empty());
  EXPECT_TRUE(ParseGroundTruthText("\n  \n").empty());
}

TEST(GroundTruthTest, EmptyBoxListIsFrameWithoutBoxes) {
  const auto truth = ParseGroundTruthText(R"({"frame":4,"boxes":[]})");
  ASSERT_EQ(truth.size(), 1u);
  EXPECT_TRUE(truth.at(4).boxes.empty());
}

TEST(GroundTruthTest, RoundTrip) {
  AnnotationStream truth;
  truth[0] = FrameAnnotations{0, {LabeledBox{{1.5, 2.25, 30, 40}, "pistol"}}};
  truth[3] = FrameAnnotations{3, {}};
  truth[9] = FrameAnnotations{
      9, {LabeledBox{{0, 0, 1, 1}, "pi\"stol"}, LabeledBox{{5, 5, 5, 5}, "x"}}};
  const std::string text = WriteGroundTruth(truth);
  EXPECT_EQ(ParseGroundTruthText(text), truth);
  EXPECT_EQ(WriteGroundTruth(ParseGroundTruthText(text)), text);
}

TEST(GroundTruthTest, ErrorsCarryLineNumbers) {
  try {
    ParseGroundTruthText("{\"frame\":0,\"boxes\":[]}\n\n{\"frame\":1,\"boxes\":[{}]}\n",
                         "gt.jsonl");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.source(), "gt.jsonl");
  }
}

TEST(GroundTruthTest, ZeroWidthIsInvalidGeometry) {
  EXPECT_THROW(ParseGroundTruthText(
                   R"({"frame":0,"boxes":[{"x":0,"y":0,"w":0,"h":3,"label":"pistol"}]})"),
               InvalidGeometryError);
}

TEST(DetectionsTest, SingleRecord) {
  const auto dets = ParseDetectionsText(
      R"({"frame":0,"boxes":[{"x":1,"y":2,"w":3,"h":4,"score":0.9,"label":"pistol"}]})");
  ASSERT_EQ(dets.size(), 1u);
  ASSERT_EQ(dets.at(0).detections.size(), 1u);
  const Detection& d = dets.at(0).detections[0];
  EXPECT_EQ(d.box, (BoundingBox{1, 2, 3, 4}));
  EXPECT_EQ(d.score, 0.9);
  EXPECT_EQ(d.label, "pistol");
}

TEST(DetectionsTest, CanonicalWriteIsStable) {
  const std::string canonical =
      "{\"frame\":0,\"boxes\":[{\"x\":1,\"y\":2,\"w\":3,\"h\":4,\"score\":0.9,"
      "\"label\":\"pistol\"}]}\n{\"frame\":5,\"boxes\":[]}\n";
  EXPECT_EQ(WriteDetections(ParseDetectionsText(canonical)), canonical);
}

TEST(DetectionsTest, DuplicateFrameRejected) {
  EXPECT_THROW(ParseDetectionsText("{\"frame\":1,\"boxes\":[]}\n"
                                   "{\"frame\":1,\"boxes\":[]}\n"),
               ParseError);
}

TEST(DetectionsTest, EmptyFileIsEmptyMap) {
  EXPECT_TRUE(ParseDetectionsText("").empty());
}

TEST(DetectionsTest, RejectsBadValues) {
  const char* bad[] = {
      R"({"frame":-1,"boxes":[]})",
      R"({"frame":1.5,"boxes":[]})",
      R"({"frame":0,"boxes":[{"x":1,"y":2,"w":3,"h":4,"score":1.2,"label":"pistol"}]})",
      R"({"frame":0,"boxes":[{"x":1,"y":2,"w":3,"h":4,"score":-0.1,"label":"pistol"}]})",
      R"({"frame":0,"boxes":[{"x":"1","y":2,"w":3,"h":4,"score":0.5,"label":"pistol"}]})",
      R"({"frame":0,"boxes":[{"x":1,"y":2,"w":3,"h":4,"label":"pistol"}]})",
      R"({"frame":0,"boxes":[{"x":1,"y":2,"w":3,"h":4,"score":0.5,"label":""}]})",
      R"({"frame":0,"boxes":[{"x":1,"y":2,"w":3,"h":4,"score":0.5,"label":"p","z":1}]})",
      R"({"frame":0})",
      R"({"frame":0,"boxes":[]})"
      "\nnot json",
  };
  for (const char* text : bad) {
    EXPECT_THROW(ParseDetectionsText(text), ParseError) << text;
  }
}

TEST(SceneSpecTest, FpsDefaultsTo25) {
  const auto scenes = ParseSceneSpecText(R"({"scenes":[{"id":"s1","start":0,"end":9}]})");
  ASSERT_EQ(scenes.size(), 1u);
  EXPECT_EQ(scenes[0].id, "s1");
  EXPECT_EQ(scenes[0].start, 0);
  EXPECT_EQ(scenes[0].end, 9);
  EXPECT_EQ(scenes[0].fps, 25.0);
}

TEST(SceneSpecTest, RoundTrip) {
  const std::vector<SceneSpec> scenes{{"a", 0, 4, 25.0}, {"b", 10, 30, 29.97}};
  const auto text = WriteSceneSpec(scenes);
  EXPECT_EQ(WriteSceneSpec(ParseSceneSpecText(text)), text);
}

TEST(SceneSpecTest, Errors) {
  EXPECT_THROW(ParseSceneSpecText(R"({"scenes":[{"id":"s","start":5,"end":4}]})"),
               ConfigError);
  EXPECT_THROW(
      ParseSceneSpecText(R"({"scenes":[{"id":"s","start":0,"end":4,"fps":0}]})"),
      ConfigError);
  try {
    ParseSceneSpecText(R"({"scenes":[{"id":"s","start":0,"end":4,"speed":1}]})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("speed"), std::string::npos);
  }
  EXPECT_THROW(ParseSceneSpecText(R"({"scenes":[{"id":"s","start":0,"end":4},)"
                                  R"({"id":"s","start":5,"end":9}]})"),
               ConfigError);
  EXPECT_THROW(ParseSceneSpecText("{"), ParseError);
}

TEST(ConfigTest, DefaultsApplied) {
  const RunConfig cfg = LoadConfigText(R"({"score_min":0.8})");
  EXPECT_EQ(cfg.k, 5);
  EXPECT_EQ(cfg.fps, 25.0);
  EXPECT_EQ(cfg.score_min, 0.8);
  EXPECT_EQ(cfg.iou_min, 0.5);
  EXPECT_EQ(cfg.window.win_w, 160);
  EXPECT_EQ(cfg.window.stride_y, 60);
  EXPECT_FALSE(cfg.nms_iou);
}

TEST(ConfigTest, FullConfig) {
  const RunConfig cfg = LoadConfigText(R"({
    "score_min": 0.9, "iou_min": 0.4, "k": 3, "fps": 30, "rearm_gap": 10,
    "nms_iou": 0.45, "seed": 77, "frame": {"w": 800, "h": 600},
    "window": {"w": 200, "h": 100}, "stride": {"x": 50, "y": 25},
    "clamp_edges": false,
    "oracle": {"miss_prob": 0.1, "fp_rate": 0.5, "jitter_sigma": 2,
               "tp_score_range": [0.7, 1.0], "fp_score_range": [0.4, 0.8]}})");
  EXPECT_EQ(cfg.k, 3);
  EXPECT_EQ(cfg.rearm_gap, 10);
  EXPECT_EQ(cfg.nms_iou, 0.45);
  EXPECT_EQ(cfg.oracle.seed, 77u);
  EXPECT_EQ(cfg.window.frame_w, 800);
  EXPECT_EQ(cfg.frame.height, 600.0);
  EXPECT_EQ(cfg.window.stride_y, 25);
  EXPECT_FALSE(cfg.window.clamp_edges);
  EXPECT_EQ(cfg.oracle.fp_score_range.lo, 0.4);
  const AlarmConfig alarm = cfg.alarm();
  EXPECT_EQ(alarm.k, 3);
  EXPECT_EQ(alarm.score_min, 0.9);
}

TEST(ConfigTest, RangeAndKeyErrorsNameTheKey) {
  auto message = [](const char* text) {
    try {
      LoadConfigText(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"score_min":1.5})").find("score_min"), std::string::npos);
  EXPECT_NE(message(R"({"thresh":0.5})").find("thresh"), std::string::npos);
  EXPECT_NE(message(R"({"oracle":{"miss":0.5}})").find("oracle.miss"),
            std::string::npos);
  EXPECT_NE(message(R"({"k":0})").find("\"k\""), std::string::npos);
  EXPECT_NE(message(R"({"fps":-1})").find("fps"), std::string::npos);
  EXPECT_NE(message(R"({"window":{"w":700}})").find("window"), std::string::npos);
}

TEST(ReadFileTest, MissingFileIsParseError) {
  EXPECT_THROW(ReadFile("/nonexistent/gunalarm/file"), ParseError);
}

TEST(ReportTest, VideoReportRecord) {
  const auto r = VideoReportFromCounts("1", 393, 60, 162, 8);
  EXPECT_EQ(WriteVideoReport(r),
            "{\"video\":\"1\",\"frames\":393,\"tp\":60,\"gt_p\":162,\"fp\":8,"
            "\"precision\":0.882353,\"recall\":0.37037,\"f1\":0.521739}\n");
}

}  // namespace
}  // namespace gunalarm
