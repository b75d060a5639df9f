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

#ifndef MASKFACE_MASKWARP_HPP
#define MASKFACE_MASKWARP_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "maskface/geometry.hpp"
#include "maskface/image.hpp"
#include "maskface/landmark.hpp"

namespace maskface {

enum class MaskType { Cloth, SurgicalGreen, SurgicalBlue, N95, Gas };

inline constexpr std::array<MaskType, 5> kAllMaskTypes = {
    MaskType::Cloth, MaskType::SurgicalGreen, MaskType::SurgicalBlue,
    MaskType::N95, MaskType::Gas};

std::string to_string(MaskType type);
// Throws LookupError naming the five valid types.
MaskType parse_mask_type(const std::string& name);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// "#RRGGBB" or "RRGGBB" -> Rgb; throws ParseError otherwise.
Rgb parse_hex_color(const std::string& hex);

// One mask asset: an RGBA raster whose alpha is 0 outside the mask
// silhouette and > 0 inside, plus the six template-space anchor points
// in FaceAnchors order (nose-bridge, chin-tip, upper-left-jaw,
// upper-right-jaw, lower-left-jaw, lower-right-jaw).
struct MaskTemplate {
  MaskType type = MaskType::Cloth;
  FaceTilt bin = FaceTilt::Front;
  Image image;
  std::array<Vec2, 6> anchors{};
};

// Throws ValidationError unless the image is non-empty RGBA and all
// anchors lie within its bounds.
void validate(const MaskTemplate& tpl);

// The template/pattern/color asset set. Immutable after construction
// and safe to share across worker threads.
//
// On-disk layout (load/save): a directory holding one RGBA PNG per
// (type, bin), one RGB PNG per pattern, and manifest.json:
//   {"templates": [{"type": "...", "bin": "...", "file": "...",
//                   "anchors": [[x, y] x 6]}, ...],
//    "patterns":  [{"name": "...", "file": "..."}, ...],
//    "colors":    {"white": "#FFFFFF", ...}}
class MaskLibrary {
 public:
  // The generated asset set shipped with the toolkit: all five mask
  // types x three tilt bins, 24 tileable patterns, and named colors.
  static MaskLibrary builtin();

  static MaskLibrary load(const std::filesystem::path& dir);
  void save(const std::filesystem::path& dir) const;

  void add_template(MaskTemplate tpl);
  void add_pattern(const std::string& name, Image pattern);
  void add_color(const std::string& name, Rgb value);

  // Throws LookupError when the (type, bin) template is missing.
  const MaskTemplate& select(MaskType type, FaceTilt bin) const;

  bool has_pattern(const std::string& name) const;
  // Throws LookupError listing available pattern names.
  const Image& pattern(const std::string& name) const;
  // Sorted; the order used for seeded pattern draws.
  std::vector<std::string> pattern_names() const;

  // Named color or "#RRGGBB" hex literal; throws LookupError/ParseError.
  Rgb color(const std::string& name_or_hex) const;
  const std::map<std::string, Rgb>& colors() const { return colors_; }

  // Checks the completeness invariant: a template for every
  // (type, bin) combination. Throws ValidationError when violated.
  void require_complete() const;

 private:
  std::map<std::pair<MaskType, FaceTilt>, MaskTemplate> templates_;
  std::map<std::string, Image> patterns_;
  std::map<std::string, Rgb> colors_;
};

// Keyed template lookup driven by an estimated tilt.
const MaskTemplate& select_template(const MaskLibrary& lib, MaskType type,
                                    const TiltBin& tilt);

struct TransformFit {
  Transform2D transform;
  double rms_residual_px = 0.0;
  bool poor_fit = false;
};

// Projective fit from the six template anchors onto the face anchors
// (normalized DLT, affine fallback on rank deficiency). poor_fit is set
// when the RMS reprojection residual exceeds max_residual_px.
TransformFit estimate_transform(const std::array<Vec2, 6>& src,
                                const FaceAnchors& dst,
                                double max_residual_px = 4.0);

inline constexpr double kDefaultMaxResidualPx = 4.0;

// Inverse-mapped projective warp: every output pixel (x, y) samples the
// template at T^-1 * (x, y) with bilinear interpolation on all four
// channels; samples outside the template are fully transparent. Bytes
// are rounded to nearest (half away from zero). Output is RGBA out_w x
// out_h. Throws ArgumentError on zero size, GeometryError if T is not
// invertible.
Image warp_mask(const MaskTemplate& tpl, const Transform2D& transform,
                int out_w, int out_h);

// Blends a tiled pattern into the mask silhouette, preserving shading:
// within alpha > 0,
//   out = (1 - intensity) * base + intensity * pattern * luminance / 255
// with Rec.601 luminance of the base pixel. Tiling is anchored at the
// template origin. Alpha and pixels outside the silhouette are never
// modified. intensity must be in [0, 1].
MaskTemplate apply_pattern(const MaskTemplate& tpl, const Image& pattern,
                           double intensity);

// Same blending scheme with a solid color at intensity 1.
MaskTemplate apply_color(const MaskTemplate& tpl, Rgb color);

// Per-pixel source-over compositing: out = a * mask + (1 - a) * face.
// Pixels where the mask alpha is 0 are copied from the face untouched.
// face must be RGB, mask RGBA, same dimensions (ArgumentError).
Image blend(const Image& face, const Image& warped_mask);

}  // namespace maskface

#endif  // MASKFACE_MASKWARP_HPP
