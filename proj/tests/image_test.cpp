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

#include "maskface/image.hpp"

#include <fstream>

#include "doctest.h"
#include "maskface/errors.hpp"
#include "test_util.hpp"

using namespace maskface;
using maskface::testing::TempDir;
using maskface::testing::textured_image;

TEST_CASE("Image indexing and fill") {
  Image img(4, 3, 3, 17);
  CHECK(img.width() == 4);
  CHECK(img.height() == 3);
  CHECK(img.channels() == 3);
  CHECK_FALSE(img.empty());
  CHECK(img.at(3, 2, 2) == 17);
  img.at(1, 2, 0) = 200;
  CHECK(img.at(1, 2, 0) == 200);
  CHECK(img.pixels().size() == 4u * 3u * 3u);

  CHECK(img.alpha(0, 0) == 255);  // RGB images read as opaque
  Image rgba(2, 2, 4, 9);
  CHECK(rgba.alpha(1, 1) == 9);

  CHECK(img.in_bounds(0, 0));
  CHECK(img.in_bounds(3, 2));
  CHECK_FALSE(img.in_bounds(4, 0));
  CHECK_FALSE(img.in_bounds(0, -1));

  CHECK(Image().empty());
}

TEST_CASE("PNG round-trip is byte-exact for RGB and RGBA") {
  TempDir tmp;
  const Image rgb = textured_image(33, 21, 5);
  save_png(tmp / "rgb.png", rgb);
  CHECK(load_png(tmp / "rgb.png", 3) == rgb);

  Image rgba(15, 9, 4);
  for (int y = 0; y < rgba.height(); ++y) {
    for (int x = 0; x < rgba.width(); ++x) {
      rgba.at(x, y, 0) = static_cast<std::uint8_t>(x * 16);
      rgba.at(x, y, 1) = static_cast<std::uint8_t>(y * 25);
      rgba.at(x, y, 2) = static_cast<std::uint8_t>((x + y) * 9);
      rgba.at(x, y, 3) = static_cast<std::uint8_t>(x * y * 3);
    }
  }
  save_png(tmp / "rgba.png", rgba);
  CHECK(load_png(tmp / "rgba.png", 4) == rgba);
}

TEST_CASE("PNG loading converts channel counts") {
  TempDir tmp;
  Image rgba(6, 4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) {
      rgba.at(x, y, 0) = 10;
      rgba.at(x, y, 1) = 20;
      rgba.at(x, y, 2) = 30;
      rgba.at(x, y, 3) = static_cast<std::uint8_t>(40 * y);
    }
  }
  save_png(tmp / "rgba.png", rgba);
  const Image as_rgb = load_png(tmp / "rgba.png", 3);
  CHECK(as_rgb.channels() == 3);
  CHECK(as_rgb.at(5, 3, 0) == 10);  // alpha stripped, color kept
  CHECK(as_rgb.at(5, 3, 2) == 30);

  const Image rgb = textured_image(6, 4);
  save_png(tmp / "rgb.png", rgb);
  const Image as_rgba = load_png(tmp / "rgb.png", 4);
  CHECK(as_rgba.channels() == 4);
  CHECK(as_rgba.at(2, 2, 1) == rgb.at(2, 2, 1));
  CHECK(as_rgba.alpha(2, 2) == 255);  // opaque channel added
}

TEST_CASE("PNG error contract") {
  TempDir tmp;
  CHECK_THROWS_AS(load_png(tmp / "does_not_exist.png", 3), IoError);

  const auto not_png = tmp / "not_a.png";
  {
    std::ofstream f(not_png, std::ios::binary);
    f << "this is not a png";
  }
  CHECK_THROWS_AS(load_png(not_png, 3), IoError);

  const Image img = textured_image(4, 4);
  CHECK_THROWS_AS(save_png(tmp / "no_such_dir" / "x.png", img), IoError);
}
