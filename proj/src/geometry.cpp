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

#include "maskface/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstddef>
#include <vector>

#include "maskface/errors.hpp"

namespace maskface {

namespace {

constexpr double kSingularEps = 1e-12;

struct Normalization {
  // x' = scale * (x - cx), y' = scale * (y - cy)
  double cx = 0.0, cy = 0.0, scale = 1.0;

  Vec2 apply(Vec2 p) const { return {scale * (p.x - cx), scale * (p.y - cy)}; }
};

Normalization hartley_normalization(std::span<const Vec2> pts) {
  Normalization n;
  for (const Vec2& p : pts) {
    n.cx += p.x;
    n.cy += p.y;
  }
  n.cx /= static_cast<double>(pts.size());
  n.cy /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const Vec2& p : pts) {
    mean_dist += std::hypot(p.x - n.cx, p.y - n.cy);
  }
  mean_dist /= static_cast<double>(pts.size());
  if (mean_dist < kSingularEps) {
    throw GeometryError("homography fit: all points coincide");
  }
  n.scale = std::sqrt(2.0) / mean_dist;
  return n;
}

Eigen::Matrix3d normalization_matrix(const Normalization& n) {
  Eigen::Matrix3d t;
  t << n.scale, 0, -n.scale * n.cx, 0, n.scale, -n.scale * n.cy, 0, 0, 1;
  return t;
}

// Fallback when the projective system is rank-deficient: least-squares
// [a b c; d e f; 0 0 1] over the normalized correspondences.
Eigen::Matrix3d fit_affine(const std::vector<Vec2>& src,
                           const std::vector<Vec2>& dst) {
  const auto n = static_cast<Eigen::Index>(src.size());
  Eigen::MatrixXd m(n, 3);
  Eigen::MatrixXd rhs(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = src[static_cast<std::size_t>(i)].x;
    m(i, 1) = src[static_cast<std::size_t>(i)].y;
    m(i, 2) = 1.0;
    rhs(i, 0) = dst[static_cast<std::size_t>(i)].x;
    rhs(i, 1) = dst[static_cast<std::size_t>(i)].y;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    throw GeometryError("homography fit: source points are collinear");
  }
  const Eigen::MatrixXd params = qr.solve(rhs);  // 3x2, columns (x|y)
  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
  h(0, 0) = params(0, 0);
  h(0, 1) = params(1, 0);
  h(0, 2) = params(2, 0);
  h(1, 0) = params(0, 1);
  h(1, 1) = params(1, 1);
  h(1, 2) = params(2, 1);
  return h;
}

}  // namespace

Transform2D Transform2D::translation(double tx, double ty) {
  return from_matrix({1, 0, tx, 0, 1, ty, 0, 0, 1});
}

Transform2D Transform2D::from_matrix(const std::array<double, 9>& m) {
  if (std::abs(m[8]) < kSingularEps) {
    throw GeometryError("transform: bottom-right entry is zero, cannot normalize");
  }
  Transform2D t;
  for (std::size_t i = 0; i < 9; ++i) t.m_[i] = m[i] / m[8];
  if (std::abs(t.det()) < kSingularEps) {
    throw GeometryError("transform: matrix is singular");
  }
  return t;
}

double Transform2D::det() const {
  const auto& m = m_;
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Vec2 Transform2D::apply(Vec2 p) const {
  const double u = m_[0] * p.x + m_[1] * p.y + m_[2];
  const double v = m_[3] * p.x + m_[4] * p.y + m_[5];
  const double w = m_[6] * p.x + m_[7] * p.y + m_[8];
  if (std::abs(w) < kSingularEps) {
    throw GeometryError("transform: point maps to the line at infinity");
  }
  return {u / w, v / w};
}

Transform2D Transform2D::inverse() const {
  const auto& m = m_;
  const double d = det();
  // Adjugate / det; from_matrix renormalizes the bottom-right entry.
  std::array<double, 9> inv{
      (m[4] * m[8] - m[5] * m[7]) / d, (m[2] * m[7] - m[1] * m[8]) / d,
      (m[1] * m[5] - m[2] * m[4]) / d, (m[5] * m[6] - m[3] * m[8]) / d,
      (m[0] * m[8] - m[2] * m[6]) / d, (m[2] * m[3] - m[0] * m[5]) / d,
      (m[3] * m[7] - m[4] * m[6]) / d, (m[1] * m[6] - m[0] * m[7]) / d,
      (m[0] * m[4] - m[1] * m[3]) / d};
  return from_matrix(inv);
}

Transform2D Transform2D::compose(const Transform2D& other) const {
  const auto& a = m_;
  const auto& b = other.m_;
  std::array<double, 9> c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[3 * i + k] * b[3 * k + j];
      c[3 * i + j] = s;
    }
  }
  return from_matrix(c);
}

HomographyFit estimate_homography(std::span<const Vec2> src,
                                  std::span<const Vec2> dst,
                                  double max_residual_px) {
  if (src.size() != dst.size()) {
    throw ArgumentError("homography fit: point counts differ");
  }
  if (src.size() < 4) {
    throw ArgumentError("homography fit: need at least 4 correspondences");
  }

  const Normalization ns = hartley_normalization(src);
  const Normalization nd = hartley_normalization(dst);
  std::vector<Vec2> s(src.size()), d(dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    s[i] = ns.apply(src[i]);
    d[i] = nd.apply(dst[i]);
  }

  // DLT rows for h = (h11..h33) mapping (x,y) -> (u,v):
  //   [ 0  0  0  -x -y -1  vx  vy  v ]
  //   [ x  y  1   0  0  0 -ux -uy -u ]
  const auto n = static_cast<Eigen::Index>(src.size());
  Eigen::MatrixXd a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 p = s[static_cast<std::size_t>(i)];
    const Vec2 q = d[static_cast<std::size_t>(i)];
    a.row(2 * i) << 0, 0, 0, -p.x, -p.y, -1, q.y * p.x, q.y * p.y, q.y;
    a.row(2 * i + 1) << p.x, p.y, 1, 0, 0, 0, -q.x * p.x, -q.x * p.y, -q.x;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  bool rank_deficient = sv(0) < kSingularEps || sv(7) < 1e-10 * sv(0);

  Eigen::Matrix3d h_norm;
  bool affine = false;
  if (!rank_deficient) {
    const Eigen::VectorXd h = svd.matrixV().col(8);
    h_norm << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    // A one-dimensional nullspace can still encode a rank-2 (non
    // invertible) homography for conic-degenerate inputs; fall back.
    if (std::abs(h_norm.determinant()) < kSingularEps) rank_deficient = true;
  }
  if (rank_deficient) {
    h_norm = fit_affine(s, d);
    affine = true;
  }

  const Eigen::Matrix3d td = normalization_matrix(nd);
  const Eigen::Matrix3d ts = normalization_matrix(ns);
  const Eigen::Matrix3d h_full = td.inverse() * h_norm * ts;

  std::array<double, 9> m{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m[static_cast<std::size_t>(3 * r + c)] = h_full(r, c);

  HomographyFit fit;
  fit.transform = Transform2D::from_matrix(m);
  fit.affine_fallback = affine;

  double sq_sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Vec2 mapped = fit.transform.apply(src[i]);
    const double dx = mapped.x - dst[i].x;
    const double dy = mapped.y - dst[i].y;
    sq_sum += dx * dx + dy * dy;
  }
  fit.rms_residual_px = std::sqrt(sq_sum / static_cast<double>(src.size()));
  fit.poor_fit = fit.rms_residual_px > max_residual_px;
  return fit;
}

}  // namespace maskface
