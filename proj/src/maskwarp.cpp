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

#include "maskface/maskwarp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maskface/errors.hpp"

namespace maskface {

using nlohmann::json;

std::string to_string(MaskType type) {
  switch (type) {
    case MaskType::Cloth:
      return "cloth";
    case MaskType::SurgicalGreen:
      return "surgical_green";
    case MaskType::SurgicalBlue:
      return "surgical_blue";
    case MaskType::N95:
      return "n95";
    case MaskType::Gas:
      return "gas";
  }
  return "cloth";
}

MaskType parse_mask_type(const std::string& name) {
  for (MaskType t : kAllMaskTypes) {
    if (to_string(t) == name) return t;
  }
  std::string valid;
  for (MaskType t : kAllMaskTypes) {
    if (!valid.empty()) valid += ", ";
    valid += to_string(t);
  }
  throw LookupError("unknown mask type '" + name + "' (valid types: " + valid + ")");
}

Rgb parse_hex_color(const std::string& hex) {
  std::string h = hex;
  if (!h.empty() && h.front() == '#') h.erase(0, 1);
  if (h.size() != 6 ||
      !std::all_of(h.begin(), h.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); })) {
    throw ParseError("invalid hex color '" + hex + "', expected #RRGGBB");
  }
  const auto byte = [&](int i) {
    return static_cast<std::uint8_t>(std::stoi(h.substr(static_cast<std::size_t>(i), 2), nullptr, 16));
  };
  return {byte(0), byte(2), byte(4)};
}

void validate(const MaskTemplate& tpl) {
  if (tpl.image.empty()) {
    throw ValidationError("mask template: image is empty");
  }
  if (tpl.image.channels() != 4) {
    throw ValidationError("mask template: image must be RGBA");
  }
  for (const Vec2& a : tpl.anchors) {
    if (a.x < 0 || a.x > tpl.image.width() - 1 || a.y < 0 ||
        a.y > tpl.image.height() - 1) {
      throw ValidationError("mask template: anchor outside image bounds");
    }
  }
}

void MaskLibrary::add_template(MaskTemplate tpl) {
  validate(tpl);
  templates_[{tpl.type, tpl.bin}] = std::move(tpl);
}

void MaskLibrary::add_pattern(const std::string& name, Image pattern) {
  if (pattern.empty() || pattern.channels() != 3) {
    throw ValidationError("pattern '" + name + "' must be a non-empty RGB image");
  }
  patterns_[name] = std::move(pattern);
}

void MaskLibrary::add_color(const std::string& name, Rgb value) {
  colors_[name] = value;
}

const MaskTemplate& MaskLibrary::select(MaskType type, FaceTilt bin) const {
  const auto it = templates_.find({type, bin});
  if (it == templates_.end()) {
    throw LookupError("mask library: no template for type '" + to_string(type) +
                      "', bin '" + to_string(bin) + "'");
  }
  return it->second;
}

bool MaskLibrary::has_pattern(const std::string& name) const {
  return patterns_.count(name) > 0;
}

const Image& MaskLibrary::pattern(const std::string& name) const {
  const auto it = patterns_.find(name);
  if (it == patterns_.end()) {
    std::string names;
    for (const auto& [n, img] : patterns_) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw LookupError("unknown pattern '" + name + "' (available: " + names + ")");
  }
  return it->second;
}

std::vector<std::string> MaskLibrary::pattern_names() const {
  std::vector<std::string> names;
  names.reserve(patterns_.size());
  for (const auto& [n, img] : patterns_) names.push_back(n);
  return names;  // std::map iterates in sorted order
}

Rgb MaskLibrary::color(const std::string& name_or_hex) const {
  const auto it = colors_.find(name_or_hex);
  if (it != colors_.end()) return it->second;
  if (!name_or_hex.empty() && name_or_hex.front() == '#') {
    return parse_hex_color(name_or_hex);
  }
  std::string names;
  for (const auto& [n, c] : colors_) {
    if (!names.empty()) names += ", ";
    names += n;
  }
  throw LookupError("unknown color '" + name_or_hex +
                    "' (use #RRGGBB or one of: " + names + ")");
}

void MaskLibrary::require_complete() const {
  for (MaskType t : kAllMaskTypes) {
    for (FaceTilt b : {FaceTilt::Left, FaceTilt::Front, FaceTilt::Right}) {
      if (templates_.find({t, b}) == templates_.end()) {
        throw ValidationError("mask library incomplete: missing template for '" +
                              to_string(t) + "' / '" + to_string(b) + "'");
      }
    }
  }
}

MaskLibrary MaskLibrary::load(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) {
    throw IoError("cannot open library manifest: " + manifest_path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(manifest_path.string() + ": " + e.what());
  }

  MaskLibrary lib;
  for (const json& entry : doc.value("templates", json::array())) {
    MaskTemplate tpl;
    tpl.type = parse_mask_type(entry.at("type").get<std::string>());
    tpl.bin = parse_face_tilt(entry.at("bin").get<std::string>());
    tpl.image = load_png(dir / entry.at("file").get<std::string>(), 4);
    const json& anchors = entry.at("anchors");
    if (!anchors.is_array() || anchors.size() != 6) {
      throw ValidationError(manifest_path.string() + ": template '" +
                            entry.at("file").get<std::string>() +
                            "' needs exactly 6 anchors");
    }
    for (std::size_t i = 0; i < 6; ++i) {
      tpl.anchors[i] = {anchors[i][0].get<double>(), anchors[i][1].get<double>()};
    }
    lib.add_template(std::move(tpl));
  }
  for (const json& entry : doc.value("patterns", json::array())) {
    lib.add_pattern(entry.at("name").get<std::string>(),
                    load_png(dir / entry.at("file").get<std::string>(), 3));
  }
  if (doc.contains("colors")) {
    for (const auto& [name, hex] : doc["colors"].items()) {
      lib.add_color(name, parse_hex_color(hex.get<std::string>()));
    }
  }
  lib.require_complete();
  return lib;
}

void MaskLibrary::save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create library directory: " + dir.string());
  }

  json doc;
  doc["templates"] = json::array();
  for (const auto& [key, tpl] : templates_) {
    const std::string file = to_string(key.first) + "_" + to_string(key.second) + ".png";
    save_png(dir / file, tpl.image);
    json entry;
    entry["type"] = to_string(key.first);
    entry["bin"] = to_string(key.second);
    entry["file"] = file;
    json anchors = json::array();
    for (const Vec2& a : tpl.anchors) anchors.push_back({a.x, a.y});
    entry["anchors"] = std::move(anchors);
    doc["templates"].push_back(std::move(entry));
  }
  doc["patterns"] = json::array();
  for (const auto& [name, img] : patterns_) {
    const std::string file = "pattern_" + name + ".png";
    save_png(dir / file, img);
    doc["patterns"].push_back({{"name", name}, {"file", file}});
  }
  doc["colors"] = json::object();
  for (const auto& [name, c] : colors_) {
    char hex[8];
    std::snprintf(hex, sizeof hex, "#%02X%02X%02X", c.r, c.g, c.b);
    doc["colors"][name] = hex;
  }

  std::ofstream out(dir / "manifest.json");
  if (!out) {
    throw IoError("cannot write library manifest in " + dir.string());
  }
  out << doc.dump(2) << '\n';
}

const MaskTemplate& select_template(const MaskLibrary& lib, MaskType type,
                                    const TiltBin& tilt) {
  return lib.select(type, tilt.bin);
}

TransformFit estimate_transform(const std::array<Vec2, 6>& src,
                                const FaceAnchors& dst,
                                double max_residual_px) {
  const HomographyFit fit =
      estimate_homography(std::span<const Vec2>(src),
                          std::span<const Vec2>(dst.points), max_residual_px);
  return {fit.transform, fit.rms_residual_px, fit.poor_fit};
}

namespace {

inline std::uint8_t round_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
}

// Rec.601 luma of a template pixel.
inline double luminance(const Image& img, int x, int y) {
  return 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) +
         0.114 * img.at(x, y, 2);
}

}  // namespace

Image warp_mask(const MaskTemplate& tpl, const Transform2D& transform,
                int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) {
    throw ArgumentError("warp_mask: output size must be positive");
  }
  const Transform2D inv = transform.inverse();
  const Image& src = tpl.image;
  const auto& m = inv.matrix();

  Image out(out_w, out_h, 4, 0);
  // Texels outside the template contribute fully transparent black.
  const auto texel = [&](int x, int y, int c) -> double {
    return src.in_bounds(x, y) ? static_cast<double>(src.at(x, y, c)) : 0.0;
  };

  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      const double w = m[6] * x + m[7] * y + m[8];
      if (std::abs(w) < 1e-12) continue;  // maps to infinity: transparent
      const double u = (m[0] * x + m[1] * y + m[2]) / w;
      const double v = (m[3] * x + m[4] * y + m[5]) / w;
      const double fu = std::floor(u);
      const double fv = std::floor(v);
      const int x0 = static_cast<int>(fu);
      const int y0 = static_cast<int>(fv);
      const double fx = u - fu;
      const double fy = v - fv;
      if (x0 < -1 || x0 > src.width() - 1 || y0 < -1 || y0 > src.height() - 1) {
        continue;  // entirely outside: transparent
      }
      for (int c = 0; c < 4; ++c) {
        const double val = (1.0 - fx) * (1.0 - fy) * texel(x0, y0, c) +
                           fx * (1.0 - fy) * texel(x0 + 1, y0, c) +
                           (1.0 - fx) * fy * texel(x0, y0 + 1, c) +
                           fx * fy * texel(x0 + 1, y0 + 1, c);
        out.at(x, y, c) = round_byte(val);
      }
    }
  }
  return out;
}

MaskTemplate apply_pattern(const MaskTemplate& tpl, const Image& pattern,
                           double intensity) {
  if (!(intensity >= 0.0 && intensity <= 1.0)) {
    throw ArgumentError("apply_pattern: intensity must be in [0, 1]");
  }
  if (pattern.empty() || pattern.channels() != 3) {
    throw ArgumentError("apply_pattern: pattern must be a non-empty RGB image");
  }
  MaskTemplate out = tpl;
  Image& img = out.image;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y, 3) == 0) continue;  // outside the silhouette
      const double lum = luminance(img, x, y);
      const int px = x % pattern.width();
      const int py = y % pattern.height();
      for (int c = 0; c < 3; ++c) {
        const double base = img.at(x, y, c);
        const double patterned = pattern.at(px, py, c) * lum / 255.0;
        img.at(x, y, c) = round_byte((1.0 - intensity) * base + intensity * patterned);
      }
    }
  }
  return out;
}

MaskTemplate apply_color(const MaskTemplate& tpl, Rgb color) {
  Image solid(1, 1, 3);
  solid.at(0, 0, 0) = color.r;
  solid.at(0, 0, 1) = color.g;
  solid.at(0, 0, 2) = color.b;
  return apply_pattern(tpl, solid, 1.0);
}

Image blend(const Image& face, const Image& warped_mask) {
  if (face.channels() != 3 || warped_mask.channels() != 4) {
    throw ArgumentError("blend: face must be RGB and mask RGBA");
  }
  if (face.width() != warped_mask.width() || face.height() != warped_mask.height()) {
    throw ArgumentError("blend: dimensions differ");
  }
  Image out = face;
  for (int y = 0; y < face.height(); ++y) {
    for (int x = 0; x < face.width(); ++x) {
      const std::uint8_t a = warped_mask.at(x, y, 3);
      if (a == 0) continue;  // face bytes stay untouched
      const double alpha = a / 255.0;
      for (int c = 0; c < 3; ++c) {
        out.at(x, y, c) = round_byte(alpha * warped_mask.at(x, y, c) +
                                     (1.0 - alpha) * face.at(x, y, c));
      }
    }
  }
  return out;
}

}  // namespace maskface
