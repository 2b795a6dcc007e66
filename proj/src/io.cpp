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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"

#include "gunalarm/error.hpp"

namespace gunalarm {
namespace {

using nlohmann::json;

class LineContext {
 public:
  LineContext(std::string_view source, std::size_t line)
      : source_(source), line_(line) {}

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(source_, line_, what);
  }

  const json& Require(const json& obj, const char* key) const {
    auto it = obj.find(key);
    if (it == obj.end()) Fail(std::string("missing key \"") + key + "\"");
    return *it;
  }

  double Number(const json& obj, const char* key) const {
    const json& v = Require(obj, key);
    if (!v.is_number()) Fail(std::string("\"") + key + "\" is not a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) Fail(std::string("\"") + key + "\" is not finite");
    return d;
  }

  std::string String(const json& obj, const char* key) const {
    const json& v = Require(obj, key);
    if (!v.is_string()) Fail(std::string("\"") + key + "\" is not a string");
    auto s = v.get<std::string>();
    if (s.empty()) Fail(std::string("\"") + key + "\" is empty");
    return s;
  }

  FrameIndex Frame(const json& obj) const {
    const json& v = Require(obj, "frame");
    if (!v.is_number_integer()) Fail("\"frame\" is not an integer");
    if (v.is_number_unsigned()) {
      if (v.get<std::uint64_t>() >
          static_cast<std::uint64_t>(std::numeric_limits<FrameIndex>::max())) {
        Fail("\"frame\" out of range");
      }
      return static_cast<FrameIndex>(v.get<std::uint64_t>());
    }
    const auto f = v.get<std::int64_t>();
    if (f < 0) Fail("negative frame index " + std::to_string(f));
    return f;
  }

  void OnlyKeys(const json& obj, std::initializer_list<const char*> allowed,
                const char* what) const {
    for (const auto& [key, unused] : obj.items()) {
      if (std::none_of(allowed.begin(), allowed.end(),
                       [&](const char* a) { return key == a; })) {
        Fail(std::string("unknown key \"") + key + "\" in " + what);
      }
    }
  }

  BoundingBox Box(const json& obj) const {
    BoundingBox b{Number(obj, "x"), Number(obj, "y"), Number(obj, "w"),
                  Number(obj, "h")};
    if (!IsValid(b)) {
      throw InvalidGeometryError(source_ + ":" + std::to_string(line_) +
                                 ": box needs w > 0 and h > 0");
    }
    return b;
  }

 private:
  std::string source_;
  std::size_t line_;
};

// Calls fn(record, context) for every non-blank line.
template <typename Fn>
void ForEachRecord(std::string_view text, std::string_view source, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    LineContext ctx(source, line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      ctx.Fail(std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) ctx.Fail("record is not an object");
    fn(record, ctx);
  }
}

const json& BoxArray(const json& record, const LineContext& ctx) {
  const json& boxes = ctx.Require(record, "boxes");
  if (!boxes.is_array()) ctx.Fail("\"boxes\" is not an array");
  return boxes;
}

std::string Quote(std::string_view s) { return json(std::string(s)).dump(); }

std::string BoxFields(const BoundingBox& b) {
  return "\"x\":" + FormatNumber(b.x) + ",\"y\":" + FormatNumber(b.y) +
         ",\"w\":" + FormatNumber(b.w) + ",\"h\":" + FormatNumber(b.h);
}

bool NumericStem(const std::string& stem, FrameIndex* out) {
  if (stem.empty() || stem.size() > 18 ||
      !std::all_of(stem.begin(), stem.end(),
                   [](unsigned char c) { return std::isdigit(c); })) {
    return false;
  }
  *out = std::stoll(stem);
  return true;
}

[[noreturn]] void ConfigFail(std::string_view source, const std::string& key,
                             const std::string& what) {
  throw ConfigError(std::string(source) + ": config key \"" + key + "\" " +
                    what);
}

double ConfigNumber(const json& v, std::string_view source,
                    const std::string& key) {
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    ConfigFail(source, key, "must be a number");
  }
  return v.get<double>();
}

int ConfigInt(const json& v, std::string_view source, const std::string& key) {
  if (!v.is_number_integer()) ConfigFail(source, key, "must be an integer");
  const auto i = v.get<std::int64_t>();
  if (i < std::numeric_limits<int>::min() ||
      i > std::numeric_limits<int>::max()) {
    ConfigFail(source, key, "is out of range");
  }
  return static_cast<int>(i);
}

ScoreRange ConfigRange(const json& v, std::string_view source,
                       const std::string& key) {
  if (!v.is_array() || v.size() != 2) {
    ConfigFail(source, key, "must be a [lo, hi] pair");
  }
  return ScoreRange{ConfigNumber(v[0], source, key),
                    ConfigNumber(v[1], source, key)};
}

const json& ConfigObject(const json& v, std::string_view source,
                         const std::string& key) {
  if (!v.is_object()) ConfigFail(source, key, "must be an object");
  return v;
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing " + path.string());
}

AnnotationStream ParseGroundTruthText(std::string_view text,
                                      std::string_view source) {
  AnnotationStream out;
  ForEachRecord(text, source, [&](const json& rec, const LineContext& ctx) {
    ctx.OnlyKeys(rec, {"frame", "boxes"}, "frame record");
    FrameAnnotations frame;
    frame.frame = ctx.Frame(rec);
    for (const json& b : BoxArray(rec, ctx)) {
      if (!b.is_object()) ctx.Fail("box entry is not an object");
      ctx.OnlyKeys(b, {"x", "y", "w", "h", "label"}, "ground-truth box");
      frame.boxes.push_back(LabeledBox{ctx.Box(b), ctx.String(b, "label")});
    }
    const FrameIndex index = frame.frame;
    if (!out.emplace(index, std::move(frame)).second) {
      ctx.Fail("duplicate frame index " + std::to_string(index));
    }
  });
  return out;
}

FrameAnnotations ParseVocXml(std::string_view xml, FrameIndex frame,
                             std::string_view source) {
  namespace pt = boost::property_tree;
  const std::string src(source);
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(src, e.line(), "malformed XML: " + e.message());
  }

  FrameAnnotations out;
  out.frame = frame;
  auto root = tree.get_child_optional("annotation");
  if (!root) throw ParseError(src, 0, "missing <annotation> root");

  auto read_coord = [&](const pt::ptree& bndbox, const char* tag) {
    auto v = bndbox.get_optional<std::string>(tag);
    if (!v) throw ParseError(src, 0, std::string("missing <") + tag + ">");
    try {
      std::size_t used = 0;
      const double d = std::stod(*v, &used);
      if (used != v->size() || !std::isfinite(d)) throw std::invalid_argument("");
      return d;
    } catch (const std::logic_error&) {
      throw ParseError(src, 0,
                       std::string("<") + tag + "> is not a number: " + *v);
    }
  };

  for (const auto& [tag, node] : *root) {
    if (tag != "object") continue;
    auto name = node.get_optional<std::string>("name");
    if (!name || name->empty()) {
      throw ParseError(src, 0, "object without <name>");
    }
    auto bndbox = node.get_child_optional("bndbox");
    if (!bndbox) throw ParseError(src, 0, "object without <bndbox>");
    const double xmin = read_coord(*bndbox, "xmin");
    const double ymin = read_coord(*bndbox, "ymin");
    const double xmax = read_coord(*bndbox, "xmax");
    const double ymax = read_coord(*bndbox, "ymax");
    if (xmax <= xmin || ymax <= ymin) {
      throw InvalidGeometryError(src + ": bndbox needs xmax > xmin and "
                                       "ymax > ymin");
    }
    out.boxes.push_back(
        LabeledBox{BoundingBox::FromCorners(xmin, ymin, xmax, ymax), *name});
  }
  return out;
}

AnnotationStream ParseGroundTruth(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".xml") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    bool numeric = true;
    for (const auto& f : files) {
      FrameIndex unused;
      numeric = numeric && NumericStem(f.stem().string(), &unused);
    }
    AnnotationStream out;
    for (std::size_t i = 0; i < files.size(); ++i) {
      FrameIndex frame = static_cast<FrameIndex>(i);
      if (numeric) NumericStem(files[i].stem().string(), &frame);
      auto ann = ParseVocXml(ReadFile(files[i]), frame, files[i].string());
      if (!out.emplace(frame, std::move(ann)).second) {
        throw ParseError(files[i].string(), 0,
                         "duplicate frame index " + std::to_string(frame));
      }
    }
    return out;
  }
  const std::string text = ReadFile(path);
  if (path.extension() == ".xml") {
    AnnotationStream out;
    out.emplace(0, ParseVocXml(text, 0, path.string()));
    return out;
  }
  return ParseGroundTruthText(text, path.string());
}

std::string WriteGroundTruth(const AnnotationStream& truths) {
  std::string out;
  for (const auto& [frame, ann] : truths) {
    out += "{\"frame\":" + std::to_string(frame) + ",\"boxes\":[";
    for (std::size_t i = 0; i < ann.boxes.size(); ++i) {
      if (i) out += ",";
      out += "{" + BoxFields(ann.boxes[i].box) +
             ",\"label\":" + Quote(ann.boxes[i].label) + "}";
    }
    out += "]}\n";
  }
  return out;
}

DetectionStream ParseDetectionsText(std::string_view text,
                                    std::string_view source) {
  DetectionStream out;
  ForEachRecord(text, source, [&](const json& rec, const LineContext& ctx) {
    ctx.OnlyKeys(rec, {"frame", "boxes"}, "frame record");
    FrameDetections frame;
    frame.frame = ctx.Frame(rec);
    for (const json& b : BoxArray(rec, ctx)) {
      if (!b.is_object()) ctx.Fail("box entry is not an object");
      ctx.OnlyKeys(b, {"x", "y", "w", "h", "score", "label"}, "detection");
      Detection d{ctx.Box(b), ctx.String(b, "label"), ctx.Number(b, "score")};
      if (d.score < 0.0 || d.score > 1.0) {
        ctx.Fail("score " + FormatNumber(d.score) + " outside [0, 1]");
      }
      frame.detections.push_back(std::move(d));
    }
    const FrameIndex index = frame.frame;
    if (!out.emplace(index, std::move(frame)).second) {
      ctx.Fail("duplicate frame index " + std::to_string(index));
    }
  });
  return out;
}

DetectionStream ParseDetections(const std::filesystem::path& path) {
  return ParseDetectionsText(ReadFile(path), path.string());
}

std::string WriteDetections(const DetectionStream& detections) {
  std::string out;
  for (const auto& [frame, dets] : detections) {
    out += "{\"frame\":" + std::to_string(frame) + ",\"boxes\":[";
    for (std::size_t i = 0; i < dets.detections.size(); ++i) {
      const Detection& d = dets.detections[i];
      if (i) out += ",";
      out += "{" + BoxFields(d.box) + ",\"score\":" + FormatNumber(d.score) +
             ",\"label\":" + Quote(d.label) + "}";
    }
    out += "]}\n";
  }
  return out;
}

std::vector<SceneSpec> ParseSceneSpecText(std::string_view text,
                                          std::string_view source,
                                          double default_fps) {
  const std::string src(source);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(src, 0, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError(src, 0, "scene spec is not an object");
  for (const auto& [key, unused] : doc.items()) {
    if (key != "scenes") ConfigFail(source, key, "is not recognised");
  }
  auto it = doc.find("scenes");
  if (it == doc.end() || !it->is_array()) {
    throw ParseError(src, 0, "\"scenes\" must be an array");
  }

  std::vector<SceneSpec> scenes;
  std::set<std::string> ids;
  for (const json& s : *it) {
    if (!s.is_object()) throw ParseError(src, 0, "scene is not an object");
    for (const auto& [key, unused] : s.items()) {
      if (key != "id" && key != "start" && key != "end" && key != "fps") {
        ConfigFail(source, key, "is not recognised in a scene");
      }
    }
    SceneSpec scene;
    if (!s.contains("id") || !s["id"].is_string() ||
        s["id"].get<std::string>().empty()) {
      ConfigFail(source, "id", "must be a non-empty string");
    }
    scene.id = s["id"].get<std::string>();
    for (const char* key : {"start", "end"}) {
      if (!s.contains(key) || !s[key].is_number_integer() ||
          s[key].get<std::int64_t>() < 0) {
        ConfigFail(source, key,
                   "must be a non-negative integer (scene '" + scene.id + "')");
      }
    }
    scene.start = s["start"].get<FrameIndex>();
    scene.end = s["end"].get<FrameIndex>();
    if (scene.end < scene.start) {
      ConfigFail(source, "end", "precedes start in scene '" + scene.id + "'");
    }
    scene.fps = s.contains("fps") ? ConfigNumber(s["fps"], source, "fps")
                                  : default_fps;
    if (!(scene.fps > 0.0)) {
      ConfigFail(source, "fps", "must be > 0 (scene '" + scene.id + "')");
    }
    if (!ids.insert(scene.id).second) {
      ConfigFail(source, "id", "'" + scene.id + "' is duplicated");
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::vector<SceneSpec> ParseSceneSpec(const std::filesystem::path& path,
                                      double default_fps) {
  return ParseSceneSpecText(ReadFile(path), path.string(), default_fps);
}

std::string WriteSceneSpec(const std::vector<SceneSpec>& scenes) {
  std::string out = "{\"scenes\":[";
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    if (i) out += ",";
    out += "{\"id\":" + Quote(scenes[i].id) +
           ",\"start\":" + std::to_string(scenes[i].start) +
           ",\"end\":" + std::to_string(scenes[i].end) +
           ",\"fps\":" + FormatNumber(scenes[i].fps) + "}";
  }
  out += "]}\n";
  return out;
}

AlarmConfig RunConfig::alarm() const {
  return AlarmConfig{k, score_min, fps, rearm_gap};
}

VideoEvalOptions RunConfig::video_eval() const {
  return VideoEvalOptions{iou_min, score_min, nms_iou};
}

void Validate(const RunConfig& cfg) {
  auto fail = [](const char* key, const std::string& what) {
    throw ConfigError(std::string("config key \"") + key + "\" " + what);
  };
  if (!(cfg.score_min >= 0.0 && cfg.score_min <= 1.0)) {
    fail("score_min", "must be in [0, 1]");
  }
  if (!(cfg.iou_min >= 0.0 && cfg.iou_min < 1.0)) {
    fail("iou_min", "must be in [0, 1)");
  }
  if (cfg.k < 1) fail("k", "must be >= 1");
  if (!(cfg.fps > 0.0)) fail("fps", "must be > 0");
  if (cfg.rearm_gap && *cfg.rearm_gap < 0) fail("rearm_gap", "must be >= 0");
  if (cfg.nms_iou && !(*cfg.nms_iou >= 0.0 && *cfg.nms_iou <= 1.0)) {
    fail("nms_iou", "must be in [0, 1]");
  }
  try {
    Validate(cfg.window);
  } catch (const ConfigError& e) {
    fail("window", std::string("is invalid: ") + e.what());
  }
  try {
    Validate(cfg.oracle);
  } catch (const ConfigError& e) {
    fail("oracle", std::string("is invalid: ") + e.what());
  }
}

RunConfig LoadConfigText(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(source), 0,
                     std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError(std::string(source), 0, "config is not an object");
  }

  RunConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "score_min") {
      cfg.score_min = ConfigNumber(v, source, key);
    } else if (key == "iou_min") {
      cfg.iou_min = ConfigNumber(v, source, key);
    } else if (key == "k") {
      cfg.k = ConfigInt(v, source, key);
    } else if (key == "fps") {
      cfg.fps = ConfigNumber(v, source, key);
    } else if (key == "rearm_gap") {
      cfg.rearm_gap = ConfigInt(v, source, key);
    } else if (key == "nms_iou") {
      if (v.is_null()) {
        cfg.nms_iou.reset();
      } else {
        cfg.nms_iou = ConfigNumber(v, source, key);
      }
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) {
        ConfigFail(source, key, "must be a non-negative integer");
      }
      cfg.oracle.seed = v.get<std::uint64_t>();
    } else if (key == "clamp_edges") {
      if (!v.is_boolean()) ConfigFail(source, key, "must be a boolean");
      cfg.window.clamp_edges = v.get<bool>();
    } else if (key == "frame" || key == "window") {
      for (const auto& [sub, sv] : ConfigObject(v, source, key).items()) {
        const std::string path = key + "." + sub;
        if (sub != "w" && sub != "h") {
          ConfigFail(source, path, "is not recognised");
        }
        const int n = ConfigInt(sv, source, path);
        if (key == "frame") {
          (sub == "w" ? cfg.window.frame_w : cfg.window.frame_h) = n;
          (sub == "w" ? cfg.frame.width : cfg.frame.height) = n;
        } else {
          (sub == "w" ? cfg.window.win_w : cfg.window.win_h) = n;
        }
      }
    } else if (key == "stride") {
      for (const auto& [sub, sv] : ConfigObject(v, source, key).items()) {
        const std::string path = key + "." + sub;
        if (sub != "x" && sub != "y") {
          ConfigFail(source, path, "is not recognised");
        }
        (sub == "x" ? cfg.window.stride_x : cfg.window.stride_y) =
            ConfigInt(sv, source, path);
      }
    } else if (key == "oracle") {
      for (const auto& [sub, sv] : ConfigObject(v, source, key).items()) {
        const std::string path = key + "." + sub;
        if (sub == "miss_prob") {
          cfg.oracle.miss_prob = ConfigNumber(sv, source, path);
        } else if (sub == "fp_rate") {
          cfg.oracle.fp_rate = ConfigNumber(sv, source, path);
        } else if (sub == "jitter_sigma") {
          cfg.oracle.jitter_sigma = ConfigNumber(sv, source, path);
        } else if (sub == "tp_score_range") {
          cfg.oracle.tp_score_range = ConfigRange(sv, source, path);
        } else if (sub == "fp_score_range") {
          cfg.oracle.fp_score_range = ConfigRange(sv, source, path);
        } else {
          ConfigFail(source, path, "is not recognised");
        }
      }
    } else {
      ConfigFail(source, key, "is not recognised");
    }
  }
  try {
    Validate(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  return LoadConfigText(ReadFile(path), path.string());
}

std::string WriteVideoReport(const VideoReport& r) {
  return "{\"video\":" + Quote(r.video_id) +
         ",\"frames\":" + std::to_string(r.frames) +
         ",\"tp\":" + std::to_string(r.tp) +
         ",\"gt_p\":" + std::to_string(r.gt_p) +
         ",\"fp\":" + std::to_string(r.fp) +
         ",\"precision\":" + FormatNumber(r.metrics.precision) +
         ",\"recall\":" + FormatNumber(r.metrics.recall) +
         ",\"f1\":" + FormatNumber(r.metrics.f1) + "}\n";
}

std::string WriteSuiteReport(const SuiteReport& r) {
  std::string out;
  for (const auto& s : r.scenes) {
    out += "{\"scene\":" + Quote(s.scene_id) +
           ",\"frames\":" + std::to_string(s.frames) +
           ",\"positive_frames\":" + std::to_string(s.positive_frames) +
           ",\"detected\":" + (s.detected ? "true" : "false");
    if (s.event) {
      out += ",\"alarm_frame\":" + std::to_string(s.event->frame) +
             ",\"aatpi\":" + FormatNumber(s.event->aatpi_seconds);
    }
    out += "}\n";
  }
  out += "{\"summary\":{\"detected\":" + std::to_string(r.detected) +
         ",\"total\":" + std::to_string(r.total) + ",\"mean_aatpi\":" +
         (r.mean_aatpi ? FormatNumber(*r.mean_aatpi) : "null") + "}}\n";
  return out;
}

}  // namespace gunalarm
