// Copyright 2026 the maskface authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maskface/landmark.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "maskface/errors.hpp"

namespace maskface {

using nlohmann::json;

void validate(const FaceLandmarks& lm, const std::string& context) {
  const std::string prefix = context.empty() ? std::string{} : context + ": ";
  for (const Vec2& p : lm.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ValidationError(prefix + "non-finite landmark coordinate");
    }
  }
  if (!(lm.bbox.width > 0.0) || !(lm.bbox.height > 0.0)) {
    throw ValidationError(prefix + "bbox must have positive width and height");
  }
  const double slack_x = 0.5 * lm.bbox.width;
  const double slack_y = 0.5 * lm.bbox.height;
  const double x0 = lm.bbox.x - slack_x;
  const double x1 = lm.bbox.x + lm.bbox.width + slack_x;
  const double y0 = lm.bbox.y - slack_y;
  const double y1 = lm.bbox.y + lm.bbox.height + slack_y;
  for (int i = 0; i < kLandmarkCount; ++i) {
    const Vec2 p = lm.points[static_cast<std::size_t>(i)];
    if (p.x < x0 || p.x > x1 || p.y < y0 || p.y > y1) {
      throw ValidationError(prefix + "point " + std::to_string(i) +
                            " lies outside the expanded bounding box");
    }
  }
}

std::string to_string(FaceTilt bin) {
  switch (bin) {
    case FaceTilt::Left:
      return "LEFT";
    case FaceTilt::Front:
      return "FRONT";
    case FaceTilt::Right:
      return "RIGHT";
  }
  return "FRONT";
}

FaceTilt parse_face_tilt(const std::string& name) {
  if (name == "LEFT") return FaceTilt::Left;
  if (name == "FRONT") return FaceTilt::Front;
  if (name == "RIGHT") return FaceTilt::Right;
  throw LookupError("unknown tilt bin '" + name + "' (valid: LEFT, FRONT, RIGHT)");
}

FaceTilt bin_for_angle(double angle_deg) {
  if (angle_deg < -kTiltFrontHalfWidthDeg) return FaceTilt::Left;
  if (angle_deg > kTiltFrontHalfWidthDeg) return FaceTilt::Right;
  return FaceTilt::Front;
}

TiltBin estimate_tilt(const FaceLandmarks& lm) {
  const Vec2 nose = lm.points[kIdxTiltNoseTop];
  const Vec2 chin = lm.points[kIdxChinTip];
  const double dx = chin.x - nose.x;
  const double dy = chin.y - nose.y;
  if (dx == 0.0 && dy == 0.0) {
    throw GeometryError("estimate_tilt: nose bridge and chin tip coincide");
  }
  // Angle against image-vertical (0, +1); x-deviation gives the sign.
  const double angle_deg = std::atan2(dx, dy) * 180.0 / std::numbers::pi;
  return {bin_for_angle(angle_deg), angle_deg};
}

FaceAnchors extract_anchors(const FaceLandmarks& lm) {
  FaceAnchors a;
  a.points = {lm.points[kIdxAnchorNoseBridge], lm.points[kIdxChinTip],
              lm.points[kIdxAnchorUpperLeftJaw], lm.points[kIdxAnchorUpperRightJaw],
              lm.points[kIdxAnchorLowerLeftJaw], lm.points[kIdxAnchorLowerRightJaw]};
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    for (std::size_t j = i + 1; j < a.points.size(); ++j) {
      if (a.points[i] == a.points[j]) {
        throw ValidationError("anchors: implausible landmark set, anchor points coincide");
      }
    }
  }
  if (!(a.chin_tip().y > a.nose_bridge().y)) {
    throw ValidationError("anchors: implausible landmark set, chin tip above nose bridge");
  }
  if (!(a.upper_left_jaw().x < a.upper_right_jaw().x)) {
    throw ValidationError("anchors: implausible landmark set, jaw sides reversed");
  }
  return a;
}

namespace {

int line_of_byte_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

Vec2 parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ValidationError("landmark point must be an [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::vector<FaceLandmarks> load_landmarks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open landmark file: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": line " +
                     std::to_string(line_of_byte_offset(text, e.byte)) +
                     ": " + e.what());
  }

  if (!doc.is_object() || !doc.contains("faces") || !doc["faces"].is_array()) {
    throw ValidationError(path.string() + ": expected object with a \"faces\" array");
  }
  const std::string image_id = doc.value("image", std::string{});

  std::vector<FaceLandmarks> out;
  int face_index = 0;
  for (const json& face : doc["faces"]) {
    const std::string context = "face " + std::to_string(face_index);
    if (!face.contains("points") || !face["points"].is_array()) {
      throw ValidationError(context + ": missing \"points\" array");
    }
    if (face["points"].size() != kLandmarkCount) {
      throw ValidationError(context + ": expected 68 points, got " +
                            std::to_string(face["points"].size()));
    }
    if (!face.contains("bbox") || !face["bbox"].is_array() || face["bbox"].size() != 4) {
      throw ValidationError(context + ": missing [x, y, w, h] \"bbox\"");
    }
    FaceLandmarks lm;
    lm.image_id = image_id;
    lm.bbox = {face["bbox"][0].get<double>(), face["bbox"][1].get<double>(),
               face["bbox"][2].get<double>(), face["bbox"][3].get<double>()};
    for (int i = 0; i < kLandmarkCount; ++i) {
      lm.points[static_cast<std::size_t>(i)] =
          parse_point(face["points"][static_cast<std::size_t>(i)]);
    }
    validate(lm, context);
    out.push_back(std::move(lm));
    ++face_index;
  }
  return out;
}

void save_landmarks(const std::filesystem::path& path,
                    const std::vector<FaceLandmarks>& faces) {
  json doc;
  doc["image"] = faces.empty() ? std::string{} : faces.front().image_id;
  for (const FaceLandmarks& lm : faces) {
    if (lm.image_id != doc["image"].get<std::string>()) {
      throw ArgumentError("save_landmarks: all faces must share one image id");
    }
  }
  doc["faces"] = json::array();
  for (const FaceLandmarks& lm : faces) {
    json face;
    face["bbox"] = {lm.bbox.x, lm.bbox.y, lm.bbox.width, lm.bbox.height};
    json pts = json::array();
    for (const Vec2& p : lm.points) pts.push_back({p.x, p.y});
    face["points"] = std::move(pts);
    doc["faces"].push_back(std::move(face));
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write landmark file: " + path.string());
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("failed writing landmark file: " + path.string());
  }
}

}  // namespace maskface
