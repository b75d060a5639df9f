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

#ifndef MASKFACE_LANDMARK_HPP
#define MASKFACE_LANDMARK_HPP

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "maskface/geometry.hpp"

namespace maskface {

inline constexpr int kLandmarkCount = 68;

// iBUG 300-W indices (0-based) used by this toolkit.
inline constexpr int kIdxTiltNoseTop = 27;  // top of the nose bridge, tilt axis
inline constexpr int kIdxChinTip = 8;
inline constexpr int kIdxAnchorNoseBridge = 28;
inline constexpr int kIdxAnchorUpperLeftJaw = 2;
inline constexpr int kIdxAnchorUpperRightJaw = 14;
inline constexpr int kIdxAnchorLowerLeftJaw = 5;
inline constexpr int kIdxAnchorLowerRightJaw = 11;

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const BBox&, const BBox&) = default;
};

// One detected face: 68 iBUG 300-W points in pixel coordinates (origin
// top-left, y grows downward) plus the detector's bounding box.
struct FaceLandmarks {
  std::array<Vec2, kLandmarkCount> points{};
  std::string image_id;
  BBox bbox;
};

// Throws ValidationError unless all coordinates are finite, the bbox
// has positive extent, and every point lies within the bbox expanded by
// 50% on each side (detector slack). `context` prefixes the message,
// e.g. "face 0".
void validate(const FaceLandmarks& lm, const std::string& context = {});

enum class FaceTilt { Left, Front, Right };

std::string to_string(FaceTilt bin);
FaceTilt parse_face_tilt(const std::string& name);

// Bin thresholds: FRONT for |angle| <= 15 deg, LEFT below, RIGHT above.
inline constexpr double kTiltFrontHalfWidthDeg = 15.0;

struct TiltBin {
  FaceTilt bin = FaceTilt::Front;
  double angle_deg = 0.0;
};

FaceTilt bin_for_angle(double angle_deg);

// Signed angle, in degrees, of the nose-bridge-top (27) -> chin-tip (8)
// vector against the image-vertical axis; positive when the chin
// deviates toward increasing x. Throws GeometryError if the two points
// coincide.
TiltBin estimate_tilt(const FaceLandmarks& lm);

// The six contact points that drive mask placement, in fixed order.
struct FaceAnchors {
  // order: nose-bridge, chin-tip, upper-left-jaw, upper-right-jaw,
  // lower-left-jaw, lower-right-jaw
  std::array<Vec2, 6> points{};

  Vec2 nose_bridge() const { return points[0]; }
  Vec2 chin_tip() const { return points[1]; }
  Vec2 upper_left_jaw() const { return points[2]; }
  Vec2 upper_right_jaw() const { return points[3]; }
  Vec2 lower_left_jaw() const { return points[4]; }
  Vec2 lower_right_jaw() const { return points[5]; }
};

// Selects anchors from fixed landmark indices (28, 8, 2, 14, 5, 11) and
// checks their plausibility invariants: six distinct points, chin below
// nose bridge, left jaw left of right jaw. Throws ValidationError on an
// implausible landmark set.
FaceAnchors extract_anchors(const FaceLandmarks& lm);

// Landmark JSON ingestion. Format (one file per image):
//   {"image": "<path>",
//    "faces": [{"bbox": [x, y, w, h],
//               "points": [[x0, y0], ..., [x67, y67]]}]}
// Coordinates are floating-point pixels, origin top-left. Order of
// faces is preserved. Malformed JSON raises ParseError with line
// context; a wrong point count raises ValidationError naming the face.
std::vector<FaceLandmarks> load_landmarks(const std::filesystem::path& path);

// Inverse of load_landmarks. All faces must share one image_id (the
// file's "image" field); an empty list writes an empty faces array.
void save_landmarks(const std::filesystem::path& path,
                    const std::vector<FaceLandmarks>& faces);

}  // namespace maskface

#endif  // MASKFACE_LANDMARK_HPP
