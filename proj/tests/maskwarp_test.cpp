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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "maskface/errors.hpp"
#include "maskface/rng.hpp"
#include "test_util.hpp"

using namespace maskface;
using maskface::testing::TempDir;

namespace {

std::uint8_t round_byte_oracle(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
}

double luminance_oracle(const Image& img, int x, int y) {
  return 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
}

// Small opaque RGBA template with an optional transparent border ring.
MaskTemplate tiny_template(int w, int h, int border = 0) {
  MaskTemplate tpl;
  tpl.type = MaskType::Cloth;
  tpl.bin = FaceTilt::Front;
  tpl.image = Image(w, h, 4);
  SplitMix64 rng(static_cast<std::uint64_t>(w) * 31 + h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        tpl.image.at(x, y, c) = static_cast<std::uint8_t>(rng.next() & 0xFF);
      }
      const bool inside = x >= border && x < w - border && y >= border && y < h - border;
      tpl.image.at(x, y, 3) = inside ? 255 : 0;
    }
  }
  tpl.anchors = {Vec2{w / 2.0, 0.0},          Vec2{w / 2.0, h - 1.0},
                 Vec2{0.0, h / 4.0},          Vec2{w - 1.0, h / 4.0},
                 Vec2{w / 8.0, 3.0 * h / 4.0}, Vec2{7.0 * w / 8.0, 3.0 * h / 4.0}};
  return tpl;
}

FaceAnchors anchors_at(const std::array<Vec2, 6>& pts) {
  FaceAnchors a;
  a.points = pts;
  return a;
}

// Independent solve of the same normalized DLT system: smallest
// eigenvector of A^T A via a self-adjoint eigensolver instead of the
// production SVD path.
Transform2D dlt_oracle(const std::array<Vec2, 6>& src, const FaceAnchors& dst) {
  const auto normalize = [](std::span<const Vec2> pts) {
    double cx = 0, cy = 0;
    for (const Vec2& p : pts) {
      cx += p.x;
      cy += p.y;
    }
    cx /= static_cast<double>(pts.size());
    cy /= static_cast<double>(pts.size());
    double mean = 0;
    for (const Vec2& p : pts) mean += std::hypot(p.x - cx, p.y - cy);
    mean /= static_cast<double>(pts.size());
    const double s = std::sqrt(2.0) / mean;
    Eigen::Matrix3d t;
    t << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
    return t;
  };
  const Eigen::Matrix3d ts = normalize(src);
  const Eigen::Matrix3d td = normalize(dst.points);

  Eigen::MatrixXd a(12, 9);
  for (int i = 0; i < 6; ++i) {
    const Eigen::Vector3d p = ts * Eigen::Vector3d(src[i].x, src[i].y, 1.0);
    const Eigen::Vector3d q = td * Eigen::Vector3d(dst.points[i].x, dst.points[i].y, 1.0);
    a.row(2 * i) << 0, 0, 0, -p.x(), -p.y(), -1, q.y() * p.x(), q.y() * p.y(), q.y();
    a.row(2 * i + 1) << p.x(), p.y(), 1, 0, 0, 0, -q.x() * p.x(), -q.x() * p.y(), -q.x();
  }
  const Eigen::Matrix<double, 9, 9> ata = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> eig(ata);
  const Eigen::VectorXd h = eig.eigenvectors().col(0);  // smallest eigenvalue
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Eigen::Matrix3d full = td.inverse() * hn * ts;
  std::array<double, 9> m{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m[static_cast<std::size_t>(3 * r + c)] = full(r, c);
  return Transform2D::from_matrix(m);
}

double rms_residual(const Transform2D& t, const std::array<Vec2, 6>& src,
                    const FaceAnchors& dst) {
  double sq = 0.0;
  for (int i = 0; i < 6; ++i) {
    const Vec2 m = t.apply(src[i]);
    sq += (m.x - dst.points[i].x) * (m.x - dst.points[i].x) +
          (m.y - dst.points[i].y) * (m.y - dst.points[i].y);
  }
  return std::sqrt(sq / 6.0);
}

}  // namespace

TEST_CASE("mask type names round-trip; unknown names list the five types") {
  for (MaskType t : kAllMaskTypes) {
    CHECK(parse_mask_type(to_string(t)) == t);
  }
  try {
    parse_mask_type("scarf");
    FAIL("expected LookupError");
  } catch (const LookupError& e) {
    const std::string msg = e.what();
    for (MaskType t : kAllMaskTypes) {
      CHECK(msg.find(to_string(t)) != std::string::npos);
    }
  }
}

TEST_CASE("hex colors parse") {
  CHECK(parse_hex_color("#AABBCC") == Rgb{170, 187, 204});
  CHECK(parse_hex_color("00ff00") == Rgb{0, 255, 0});
  CHECK_THROWS_AS(parse_hex_color("#ABC"), ParseError);
  CHECK_THROWS_AS(parse_hex_color("#GGGGGG"), ParseError);
  CHECK_THROWS_AS(parse_hex_color(""), ParseError);
}

TEST_CASE("template validation") {
  MaskTemplate tpl = tiny_template(8, 8);
  CHECK_NOTHROW(validate(tpl));

  MaskTemplate empty = tpl;
  empty.image = Image();
  CHECK_THROWS_AS(validate(empty), ValidationError);

  MaskTemplate rgb = tpl;
  rgb.image = Image(8, 8, 3);
  CHECK_THROWS_AS(validate(rgb), ValidationError);

  MaskTemplate stray = tpl;
  stray.anchors[2] = Vec2{-1.0, 0.0};
  CHECK_THROWS_AS(validate(stray), ValidationError);
}

TEST_CASE("built-in library is complete and selection is keyed") {
  const MaskLibrary lib = MaskLibrary::builtin();
  CHECK_NOTHROW(lib.require_complete());
  CHECK(lib.pattern_names().size() >= 24);

  const MaskTemplate& n95_front = lib.select(MaskType::N95, FaceTilt::Front);
  CHECK(n95_front.type == MaskType::N95);
  CHECK(n95_front.bin == FaceTilt::Front);
  const MaskTemplate& cloth_left = lib.select(MaskType::Cloth, FaceTilt::Left);
  CHECK(cloth_left.type == MaskType::Cloth);
  CHECK(cloth_left.bin == FaceTilt::Left);

  // Silhouette alpha: transparent at the canvas corner, opaque in the
  // anchor centroid.
  for (MaskType t : kAllMaskTypes) {
    for (FaceTilt b : {FaceTilt::Left, FaceTilt::Front, FaceTilt::Right}) {
      const MaskTemplate& tpl = lib.select(t, b);
      CHECK_NOTHROW(validate(tpl));
      CHECK(tpl.image.alpha(0, 0) == 0);
      Vec2 centroid{};
      for (const Vec2& p : tpl.anchors) {
        centroid = centroid + p;
      }
      const int cx = static_cast<int>(centroid.x / 6.0);
      const int cy = static_cast<int>(centroid.y / 6.0);
      CHECK(tpl.image.alpha(cx, cy) > 0);
    }
  }

  // Patterns are RGB and nonempty; colors resolve by name or hex.
  for (const std::string& name : lib.pattern_names()) {
    const Image& p = lib.pattern(name);
    CHECK(p.channels() == 3);
    CHECK_FALSE(p.empty());
  }
  CHECK(lib.colors().count("white") == 1);
  CHECK(lib.color("white") == Rgb{255, 255, 255});
  CHECK(lib.color("#336699") == Rgb{0x33, 0x66, 0x99});
  CHECK_THROWS_AS(lib.color("no_such_color"), LookupError);
  CHECK_THROWS_AS(lib.pattern("no_such_pattern"), LookupError);

  MaskLibrary empty;
  CHECK_THROWS_AS(empty.select(MaskType::N95, FaceTilt::Front), LookupError);
  CHECK_THROWS_AS(empty.require_complete(), ValidationError);

  const TiltBin tilt{FaceTilt::Right, 30.0};
  CHECK(select_template(lib, MaskType::Gas, tilt).bin == FaceTilt::Right);
}

TEST_CASE("library save/load round-trips templates, patterns and colors") {
  TempDir tmp;
  const MaskLibrary lib = MaskLibrary::builtin();
  lib.save(tmp.path());
  const MaskLibrary loaded = MaskLibrary::load(tmp.path());
  CHECK_NOTHROW(loaded.require_complete());

  for (MaskType t : kAllMaskTypes) {
    for (FaceTilt b : {FaceTilt::Left, FaceTilt::Front, FaceTilt::Right}) {
      const MaskTemplate& a = lib.select(t, b);
      const MaskTemplate& c = loaded.select(t, b);
      CHECK(a.image == c.image);
      for (int i = 0; i < 6; ++i) {
        CHECK(a.anchors[i].x == doctest::Approx(c.anchors[i].x).epsilon(1e-12));
        CHECK(a.anchors[i].y == doctest::Approx(c.anchors[i].y).epsilon(1e-12));
      }
    }
  }
  CHECK(loaded.pattern_names() == lib.pattern_names());
  for (const std::string& name : lib.pattern_names()) {
    CHECK(loaded.pattern(name) == lib.pattern(name));
  }
  CHECK(loaded.colors() == lib.colors());

  CHECK_THROWS_AS(MaskLibrary::load(tmp / "missing_dir"), IoError);
}

TEST_CASE("estimate_transform: identity and translation cases") {
  const MaskTemplate tpl = tiny_template(24, 20);
  const TransformFit ident =
      estimate_transform(tpl.anchors, anchors_at(tpl.anchors));
  for (int i = 0; i < 9; ++i) {
    CHECK(std::abs(ident.transform.matrix()[i] -
                   Transform2D::identity().matrix()[i]) < 1e-9);
  }
  CHECK(ident.rms_residual_px < 1e-9);
  CHECK_FALSE(ident.poor_fit);

  std::array<Vec2, 6> shifted = tpl.anchors;
  for (Vec2& p : shifted) p = p + Vec2{10, 5};
  const TransformFit trans = estimate_transform(tpl.anchors, anchors_at(shifted));
  CHECK(std::abs(trans.transform.matrix()[2] - 10.0) < 1e-9);
  CHECK(std::abs(trans.transform.matrix()[5] - 5.0) < 1e-9);
}

TEST_CASE("estimate_transform recovers projective maps and matches the DLT oracle") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const MaskTemplate tpl = tiny_template(240, 200);
    const Transform2D truth = Transform2D::from_matrix(
        {1.0 + 0.3 * (rng.next_unit() - 0.5), 0.3 * (rng.next_unit() - 0.5),
         100.0 * rng.next_unit(), 0.3 * (rng.next_unit() - 0.5),
         1.0 + 0.3 * (rng.next_unit() - 0.5), 100.0 * rng.next_unit(),
         0.0008 * (rng.next_unit() - 0.5), 0.0008 * (rng.next_unit() - 0.5), 1.0});
    FaceAnchors dst;
    for (int i = 0; i < 6; ++i) dst.points[i] = truth.apply(tpl.anchors[i]);

    const TransformFit fit = estimate_transform(tpl.anchors, dst);
    for (int i = 0; i < 9; ++i) {
      CHECK(std::abs(fit.transform.matrix()[i] - truth.matrix()[i]) < 1e-6);
    }
    CHECK(fit.rms_residual_px < 1e-6);
    CHECK_FALSE(fit.poor_fit);

    // Noisy correspondences: production solve and the eigen-solver
    // oracle must agree on both the matrix and the residual.
    FaceAnchors noisy = dst;
    for (int i = 0; i < 6; ++i) {
      noisy.points[i] =
          noisy.points[i] + Vec2{2.0 * (rng.next_unit() - 0.5), 2.0 * (rng.next_unit() - 0.5)};
    }
    const TransformFit fit_noisy = estimate_transform(tpl.anchors, noisy, 1e9);
    const Transform2D oracle = dlt_oracle(tpl.anchors, noisy);
    for (int i = 0; i < 9; ++i) {
      CHECK(std::abs(fit_noisy.transform.matrix()[i] - oracle.matrix()[i]) < 1e-6);
    }
    CHECK(std::abs(fit_noisy.rms_residual_px -
                   rms_residual(oracle, tpl.anchors, noisy)) < 1e-6);
  }
}

TEST_CASE("warp_mask: identity transform reproduces the template byte-exactly") {
  const MaskTemplate tpl = tiny_template(17, 13, 2);
  const Image out = warp_mask(tpl, Transform2D::identity(), 17, 13);
  CHECK(out == tpl.image);
}

TEST_CASE("warp_mask: integer shift moves bytes exactly and clears the border") {
  const MaskTemplate tpl = tiny_template(16, 12);
  const Image out = warp_mask(tpl, Transform2D::translation(3, 0), 16, 12);
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 16; ++x) {
      if (x >= 3) {
        for (int c = 0; c < 4; ++c) CHECK(out.at(x, y, c) == tpl.image.at(x - 3, y, c));
      } else {
        CHECK(out.alpha(x, y) == 0);
      }
    }
  }
}

TEST_CASE("warp_mask: 2x upscale of a 2x2 checker matches the bilinear table") {
  MaskTemplate tpl;
  tpl.type = MaskType::Cloth;
  tpl.bin = FaceTilt::Front;
  tpl.image = Image(2, 2, 4);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 2; ++x) {
      const std::uint8_t v = (x == y) ? 255 : 0;
      for (int c = 0; c < 3; ++c) tpl.image.at(x, y, c) = v;
      tpl.image.at(x, y, 3) = 255;
    }
  }
  tpl.anchors = {Vec2{0, 0}, {1, 1}, {0, 1}, {1, 0}, {0.5, 0.5}, {1, 0.5}};

  const Transform2D scale2 = Transform2D::from_matrix({2, 0, 0, 0, 2, 0, 0, 0, 1});
  const Image out = warp_mask(tpl, scale2, 4, 4);

  // Hand-evaluated bilinear samples at u,v in {0, .5, 1, 1.5}; samples
  // past the template edge mix with transparent black.
  const int expected_value[4][4] = {{255, 128, 0, 0},
                                    {128, 128, 128, 64},
                                    {0, 128, 255, 128},
                                    {0, 64, 128, 64}};
  const int expected_alpha[4][4] = {{255, 255, 255, 128},
                                    {255, 255, 255, 128},
                                    {255, 255, 255, 128},
                                    {128, 128, 128, 64}};
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      for (int c = 0; c < 3; ++c) {
        CHECK(out.at(x, y, c) == expected_value[y][x]);
      }
      CHECK(out.at(x, y, 3) == expected_alpha[y][x]);
    }
  }
}

TEST_CASE("warp_mask argument and geometry errors") {
  const MaskTemplate tpl = tiny_template(8, 8);
  CHECK_THROWS_AS(warp_mask(tpl, Transform2D::identity(), 0, 8), ArgumentError);
  CHECK_THROWS_AS(warp_mask(tpl, Transform2D::identity(), 8, -1), ArgumentError);
}

TEST_CASE("apply_pattern endpoints and single-pixel oracle") {
  const MaskLibrary lib = MaskLibrary::builtin();
  const MaskTemplate& base = lib.select(MaskType::Cloth, FaceTilt::Front);
  const Image& stripes = lib.pattern(lib.pattern_names().front());

  // intensity 0: unchanged byte-for-byte.
  CHECK(apply_pattern(base, stripes, 0.0).image == base.image);

  // intensity 1 with a white pattern: luminance replicated per channel.
  Image white(1, 1, 3, 255);
  const MaskTemplate lum_tpl = apply_pattern(base, white, 1.0);
  for (int y = 0; y < base.image.height(); y += 7) {
    for (int x = 0; x < base.image.width(); x += 5) {
      if (base.image.alpha(x, y) == 0) continue;
      const std::uint8_t expect = round_byte_oracle(luminance_oracle(base.image, x, y));
      for (int c = 0; c < 3; ++c) CHECK(lum_tpl.image.at(x, y, c) == expect);
    }
  }

  // Single-pixel arithmetic: base (100,150,200), pattern (50,60,70),
  // intensity 0.5. Luminance = 140.75; patterned channel = p*lum/255;
  // final = 0.5*base + 0.5*patterned -> (64, 92, 119).
  MaskTemplate one;
  one.type = MaskType::Cloth;
  one.bin = FaceTilt::Front;
  one.image = Image(1, 1, 4);
  one.image.at(0, 0, 0) = 100;
  one.image.at(0, 0, 1) = 150;
  one.image.at(0, 0, 2) = 200;
  one.image.at(0, 0, 3) = 255;
  one.anchors.fill(Vec2{0, 0});
  Image pat(1, 1, 3);
  pat.at(0, 0, 0) = 50;
  pat.at(0, 0, 1) = 60;
  pat.at(0, 0, 2) = 70;
  const MaskTemplate mixed = apply_pattern(one, pat, 0.5);
  CHECK(mixed.image.at(0, 0, 0) == 64);
  CHECK(mixed.image.at(0, 0, 1) == 92);
  CHECK(mixed.image.at(0, 0, 2) == 119);
  CHECK(mixed.image.at(0, 0, 3) == 255);

  CHECK_THROWS_AS(apply_pattern(base, stripes, 1.5), ArgumentError);
  CHECK_THROWS_AS(apply_pattern(base, stripes, -0.1), ArgumentError);
}

TEST_CASE("apply_pattern tiles from the template origin and spares the outside") {
  const MaskTemplate tpl = tiny_template(20, 16, 3);
  Image pattern(4, 3, 3);
  SplitMix64 rng(5);
  for (auto& b : pattern.pixels()) b = static_cast<std::uint8_t>(rng.next() & 0xFF);

  const MaskTemplate out = apply_pattern(tpl, pattern, 0.7);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 20; ++x) {
      CHECK(out.image.at(x, y, 3) == tpl.image.at(x, y, 3));  // alpha untouched
      if (tpl.image.alpha(x, y) == 0) {
        for (int c = 0; c < 3; ++c) CHECK(out.image.at(x, y, c) == tpl.image.at(x, y, c));
      } else {
        const double lum = luminance_oracle(tpl.image, x, y);
        for (int c = 0; c < 3; ++c) {
          const double patterned = pattern.at(x % 4, y % 3, c) * lum / 255.0;
          const double expect = 0.3 * tpl.image.at(x, y, c) + 0.7 * patterned;
          CHECK(out.image.at(x, y, c) == round_byte_oracle(expect));
        }
      }
    }
  }
}

TEST_CASE("apply_color endpoints and single-pixel oracle") {
  const MaskLibrary lib = MaskLibrary::builtin();
  const MaskTemplate& base = lib.select(MaskType::SurgicalGreen, FaceTilt::Front);

  const MaskTemplate white = apply_color(base, Rgb{255, 255, 255});
  const MaskTemplate black = apply_color(base, Rgb{0, 0, 0});
  for (int y = 0; y < base.image.height(); y += 9) {
    for (int x = 0; x < base.image.width(); x += 7) {
      if (base.image.alpha(x, y) == 0) continue;
      const std::uint8_t lum = round_byte_oracle(luminance_oracle(base.image, x, y));
      for (int c = 0; c < 3; ++c) {
        CHECK(white.image.at(x, y, c) == lum);  // luminance preserved
        CHECK(black.image.at(x, y, c) == 0);    // multiplicative zero
      }
    }
  }

  MaskTemplate one;
  one.type = MaskType::Cloth;
  one.bin = FaceTilt::Front;
  one.image = Image(1, 1, 4);
  one.image.at(0, 0, 0) = 80;
  one.image.at(0, 0, 1) = 120;
  one.image.at(0, 0, 2) = 160;
  one.image.at(0, 0, 3) = 200;
  one.anchors.fill(Vec2{0, 0});
  // lum = 0.299*80 + 0.587*120 + 0.114*160 = 112.6
  const MaskTemplate red = apply_color(one, Rgb{200, 30, 40});
  CHECK(red.image.at(0, 0, 0) == round_byte_oracle(200 * 112.6 / 255.0));
  CHECK(red.image.at(0, 0, 1) == round_byte_oracle(30 * 112.6 / 255.0));
  CHECK(red.image.at(0, 0, 2) == round_byte_oracle(40 * 112.6 / 255.0));
  CHECK(red.image.at(0, 0, 3) == 200);
}

TEST_CASE("blend endpoints") {
  const Image face = maskface::testing::textured_image(10, 8, 3);

  Image clear(10, 8, 4);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 10; ++x) {
      clear.at(x, y, 0) = 99;  // color present but fully transparent
      clear.at(x, y, 3) = 0;
    }
  }
  CHECK(blend(face, clear) == face);

  Image opaque(10, 8, 4);
  SplitMix64 rng(8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 10; ++x) {
      for (int c = 0; c < 3; ++c) opaque.at(x, y, c) = static_cast<std::uint8_t>(rng.next());
      opaque.at(x, y, 3) = 255;
    }
  }
  const Image composited = blend(face, opaque);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 10; ++x) {
      for (int c = 0; c < 3; ++c) CHECK(composited.at(x, y, c) == opaque.at(x, y, c));
    }
  }

  CHECK_THROWS_AS(blend(Image(9, 8, 3), opaque), ArgumentError);
  CHECK_THROWS_AS(blend(Image(10, 8, 4, 1), opaque), ArgumentError);
}

TEST_CASE("blend matches the per-pixel compositing oracle on random fixtures") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const int w = 4 + static_cast<int>(rng.next_below(12));
    const int h = 4 + static_cast<int>(rng.next_below(12));
    const Image face = maskface::testing::textured_image(w, h, rng.next());
    Image mask(w, h, 4);
    for (auto& b : mask.pixels()) b = static_cast<std::uint8_t>(rng.next() & 0xFF);

    const Image out = blend(face, mask);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double a = mask.at(x, y, 3) / 255.0;
        for (int c = 0; c < 3; ++c) {
          const std::uint8_t expect =
              mask.at(x, y, 3) == 0
                  ? face.at(x, y, c)
                  : round_byte_oracle(a * mask.at(x, y, c) + (1.0 - a) * face.at(x, y, c));
          CHECK(out.at(x, y, c) == expect);
        }
      }
    }
  }
}

TEST_CASE("quarter-alpha checker over a solid face follows the formula") {
  Image face(4, 4, 3);
  for (auto& b : face.pixels()) b = 200;
  Image mask(4, 4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      for (int c = 0; c < 3; ++c) mask.at(x, y, c) = 40;
      mask.at(x, y, 3) = ((x + y) % 2 == 0) ? 64 : 0;  // ~0.25 alpha checker
    }
  }
  const Image out = blend(face, mask);
  const std::uint8_t blended = round_byte_oracle((64 / 255.0) * 40 + (191.0 / 255.0) * 200);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      const std::uint8_t expect = ((x + y) % 2 == 0) ? blended : 200;
      for (int c = 0; c < 3; ++c) CHECK(out.at(x, y, c) == expect);
    }
  }
}
