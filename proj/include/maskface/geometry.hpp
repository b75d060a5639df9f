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

#ifndef MASKFACE_GEOMETRY_HPP
#define MASKFACE_GEOMETRY_HPP

#include <array>
#include <span>

namespace maskface {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }

// 3x3 projective transform, row-major, normalized so m[8] == 1 and
// |det| > 1e-12. Construction goes through from_matrix() which enforces
// both invariants.
class Transform2D {
 public:
  Transform2D() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

  static Transform2D identity() { return Transform2D{}; }
  static Transform2D translation(double tx, double ty);
  // Normalizes the bottom-right entry to 1; throws GeometryError if that
  // entry is (near) zero or the matrix is singular.
  static Transform2D from_matrix(const std::array<double, 9>& m);

  const std::array<double, 9>& matrix() const { return m_; }
  double det() const;

  // Projective application H * (p.x, p.y, 1) with perspective divide.
  // Throws GeometryError when p maps to the line at infinity.
  Vec2 apply(Vec2 p) const;

  Transform2D inverse() const;
  // this ∘ other: applies `other` first.
  Transform2D compose(const Transform2D& other) const;

 private:
  std::array<double, 9> m_;
};

struct HomographyFit {
  Transform2D transform;
  double rms_residual_px = 0.0;
  // Residual exceeded the caller's max_residual_px. Flagged, not fatal,
  // so bulk jobs can keep going.
  bool poor_fit = false;
  // The full projective system was rank-deficient and a 6-parameter
  // affine fit was used instead.
  bool affine_fallback = false;
};

// Least-squares projective fit via the normalized direct linear
// transform: both point sets are translated to their centroid and
// scaled to mean distance sqrt(2) before the 2n x 9 system is solved
// for the smallest singular vector. Requires src.size() == dst.size()
// >= 4; throws GeometryError on degenerate configurations.
HomographyFit estimate_homography(std::span<const Vec2> src,
                                  std::span<const Vec2> dst,
                                  double max_residual_px = 4.0);

}  // namespace maskface

#endif  // MASKFACE_GEOMETRY_HPP
