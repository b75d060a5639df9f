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
//
// Generated asset set: procedurally rendered mask templates (5 types x
// 3 tilt bins), 24 tileable patterns and a named color table. Purely
// deterministic so the shipped library is reproducible from source.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "maskface/maskwarp.hpp"

namespace maskface {

namespace {

constexpr int kTplW = 240;
constexpr int kTplH = 200;

struct TemplateShape {
  // FaceAnchors order: NB, CT, ULJ, URJ, LLJ, LRJ.
  std::array<Vec2, 6> anchors;
};

TemplateShape shape_for_bin(FaceTilt bin) {
  // Frontal hexagon; side bins compress the averted cheek.
  TemplateShape front{{Vec2{120, 36}, {120, 186}, {18, 70}, {222, 70}, {42, 150}, {198, 150}}};
  if (bin == FaceTilt::Front) return front;
  TemplateShape left{{Vec2{100, 38}, {96, 184}, {30, 74}, {212, 66}, {52, 148}, {182, 152}}};
  if (bin == FaceTilt::Left) return left;
  // Right bin mirrors the left one; jaw anchors swap sides.
  TemplateShape right;
  const auto mirror = [](Vec2 p) { return Vec2{kTplW - 1 - p.x, p.y}; };
  right.anchors[0] = mirror(left.anchors[0]);
  right.anchors[1] = mirror(left.anchors[1]);
  right.anchors[2] = mirror(left.anchors[3]);
  right.anchors[3] = mirror(left.anchors[2]);
  right.anchors[4] = mirror(left.anchors[5]);
  right.anchors[5] = mirror(left.anchors[4]);
  return right;
}

// Silhouette polygon: NB -> URJ -> LRJ -> CT -> LLJ -> ULJ.
std::vector<Vec2> outline(const TemplateShape& s) {
  return {s.anchors[0], s.anchors[3], s.anchors[5],
          s.anchors[1], s.anchors[4], s.anchors[2]};
}

bool point_in_polygon(const std::vector<Vec2>& poly, double px, double py) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > py) != (b.y > py) &&
        px < (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

struct Shade {
  double r, g, b;
};

Shade base_color(MaskType type) {
  switch (type) {
    case MaskType::SurgicalGreen:
      return {120, 170, 140};
    case MaskType::SurgicalBlue:
      return {110, 150, 205};
    case MaskType::N95:
      return {232, 230, 222};
    case MaskType::Cloth:
      return {80, 82, 100};
    case MaskType::Gas:
      return {70, 72, 66};
  }
  return {128, 128, 128};
}

// Type-specific decoration, multiplicative on the shaded base.
double decoration(MaskType type, int x, int y) {
  switch (type) {
    case MaskType::SurgicalGreen:
    case MaskType::SurgicalBlue: {
      // three pleat folds
      for (int fold : {82, 112, 142}) {
        if (std::abs(y - fold) <= 2) return 0.82;
      }
      return 1.0;
    }
    case MaskType::N95: {
      // vertical seam + exhalation valve
      if (std::abs(x - kTplW / 2) <= 1) return 0.85;
      const double dx = x - 120.0, dy = y - 108.0;
      if (dx * dx + dy * dy <= 14.0 * 14.0) return 0.72;
      return 1.0;
    }
    case MaskType::Cloth: {
      // coarse weave
      return ((x / 4 + y / 4) % 2 == 0) ? 1.0 : 0.93;
    }
    case MaskType::Gas: {
      const auto disk = [&](double cx, double cy, double rad) {
        const double dx = x - cx, dy = y - cy;
        return dx * dx + dy * dy <= rad * rad;
      };
      if (disk(62, 142, 20) || disk(178, 142, 20)) return 0.55;
      if (disk(120, 120, 16)) return 0.66;
      return 1.0;
    }
  }
  return 1.0;
}

MaskTemplate render_template(MaskType type, FaceTilt bin) {
  const TemplateShape shape = shape_for_bin(bin);
  const std::vector<Vec2> poly = outline(shape);
  const Shade base = base_color(type);

  MaskTemplate tpl;
  tpl.type = type;
  tpl.bin = bin;
  tpl.anchors = shape.anchors;
  tpl.image = Image(kTplW, kTplH, 4, 0);

  for (int y = 0; y < kTplH; ++y) {
    // vertical shading, brighter toward the chin
    const double shade = 0.82 + 0.3 * static_cast<double>(y) / kTplH;
    for (int x = 0; x < kTplW; ++x) {
      if (!point_in_polygon(poly, x, y)) continue;
      const double deco = decoration(type, x, y);
      const auto channel = [&](double v) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(v * shade * deco), 0l, 255l));
      };
      tpl.image.at(x, y, 0) = channel(base.r);
      tpl.image.at(x, y, 1) = channel(base.g);
      tpl.image.at(x, y, 2) = channel(base.b);
      tpl.image.at(x, y, 3) = 255;
    }
  }
  return tpl;
}

struct Colorway {
  const char* name;
  Rgb fg;
  Rgb bg;
};

constexpr int kPatternSize = 32;

Image render_pattern(int style, const Colorway& cw) {
  Image img(kPatternSize, kPatternSize, 3);
  for (int y = 0; y < kPatternSize; ++y) {
    for (int x = 0; x < kPatternSize; ++x) {
      bool fg = false;
      switch (style) {
        case 0:  // stripes_h
          fg = (y / 4) % 2 == 0;
          break;
        case 1:  // stripes_v
          fg = (x / 4) % 2 == 0;
          break;
        case 2:  // stripes_diag
          fg = ((x + y) / 4) % 2 == 0;
          break;
        case 3:  // checker
          fg = (x / 8 + y / 8) % 2 == 0;
          break;
        case 4: {  // dots
          const int dx = x % 16 - 8;
          const int dy = y % 16 - 8;
          fg = dx * dx + dy * dy <= 12;
          break;
        }
        case 5:  // grid
          fg = (x % 16) < 2 || (y % 16) < 2;
          break;
        default:
          break;
      }
      const Rgb c = fg ? cw.fg : cw.bg;
      img.at(x, y, 0) = c.r;
      img.at(x, y, 1) = c.g;
      img.at(x, y, 2) = c.b;
    }
  }
  return img;
}

}  // namespace

MaskLibrary MaskLibrary::builtin() {
  MaskLibrary lib;
  for (MaskType type : kAllMaskTypes) {
    for (FaceTilt bin : {FaceTilt::Left, FaceTilt::Front, FaceTilt::Right}) {
      lib.add_template(render_template(type, bin));
    }
  }

  const char* style_names[6] = {"stripes_h", "stripes_v", "stripes_diag",
                                "checker",   "dots",      "grid"};
  const Colorway colorways[4] = {
      {"red", {180, 60, 60}, {235, 220, 220}},
      {"blue", {60, 90, 180}, {215, 225, 240}},
      {"green", {70, 150, 90}, {220, 235, 222}},
      {"mono", {60, 60, 60}, {225, 225, 225}},
  };
  for (int style = 0; style < 6; ++style) {
    for (const Colorway& cw : colorways) {
      lib.add_pattern(std::string(style_names[style]) + "_" + cw.name,
                      render_pattern(style, cw));
    }
  }

  lib.add_color("white", {255, 255, 255});
  lib.add_color("black", {0, 0, 0});
  lib.add_color("red", {180, 60, 60});
  lib.add_color("green", {70, 150, 75});
  lib.add_color("blue", {60, 90, 180});
  lib.add_color("navy", {31, 45, 90});
  lib.add_color("teal", {46, 125, 125});
  lib.add_color("olive", {107, 107, 45});
  lib.add_color("maroon", {110, 32, 32});
  lib.add_color("pink", {217, 140, 166});
  lib.add_color("gray", {128, 128, 128});
  lib.add_color("tan", {200, 180, 140});
  return lib;
}

}  // namespace maskface
