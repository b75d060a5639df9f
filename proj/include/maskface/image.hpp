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

#ifndef MASKFACE_IMAGE_HPP
#define MASKFACE_IMAGE_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

namespace maskface {

// Interleaved 8-bit raster, row-major. channels is 3 (RGB) or 4 (RGBA).
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int x, int y, int c) const {
    return pixels_[idx(x, y, c)];
  }
  std::uint8_t& at(int x, int y, int c) { return pixels_[idx(x, y, c)]; }

  // Alpha of an RGBA image; 255 for RGB.
  std::uint8_t alpha(int x, int y) const {
    return channels_ == 4 ? at(x, y, 3) : 255;
  }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t idx(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Reads a PNG, converting to the requested channel count (3 or 4).
// Grayscale and palette images are expanded; 16-bit is narrowed; alpha
// is stripped or an opaque channel added as needed. Throws IoError if
// the file cannot be opened or is not a decodable PNG.
Image load_png(const std::filesystem::path& path, int channels);

// Writes an RGB or RGBA PNG. Throws IoError on failure.
void save_png(const std::filesystem::path& path, const Image& img);

}  // namespace maskface

#endif  // MASKFACE_IMAGE_HPP
