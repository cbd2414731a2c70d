// Copyright 2026 The torusparam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small built-in meshes used by the tests and the `fixture` CLI command.

#include <functional>
#include <map>
#include <random>

#include "torusparam/marked_disk.hpp"

namespace torusparam::fixtures {

/// Boundary-loop vertices at k evenly spaced loop positions.
inline std::vector<int> spaced_marks(const SurfaceMesh& disk, int k) {
  const BoundaryLoop loop = boundary_loop(disk);
  if (loop.size() < k) throw ConfigError("boundary too short for marks");
  std::vector<int> marks;
  for (int i = 0; i < k; ++i) {
    marks.push_back(loop.vertices[static_cast<std::size_t>(i) * loop.size() / k]);
  }
  return marks;
}

inline SurfaceMesh single_triangle() {
  return SurfaceMesh::from_triangles(
      {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{0, 1, 2}});
}

/// Unit square split along a diagonal.
inline SurfaceMesh quad() {
  return SurfaceMesh::from_triangles(
      {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)},
      {{0, 1, 2}, {0, 2, 3}});
}

/// Unit square fanned around its center (vertex 4).
inline SurfaceMesh quad_fan() {
  return SurfaceMesh::from_triangles(
      {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0),
       Vec3(0.5, 0.5, 0)},
      {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
}

/// Delaunay triangulation (Bowyer-Watson) of planar points whose convex
/// hull vertices come first in ccw order. Returns ccw faces. Points are
/// inserted last to first so cocircular hull points arrive after the
/// interior ones.
inline std::vector<Face> delaunay(const std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<Vec2> p = pts;
  double span = 1.0;
  for (const Vec2& q : pts) span = std::max(span, q.cwiseAbs().maxCoeff());
  p.emplace_back(-100.0 * span, -100.0 * span);
  p.emplace_back(100.0 * span, -100.0 * span);
  p.emplace_back(0.0, 100.0 * span);
  std::vector<Face> tris{{n, n + 1, n + 2}};

  auto in_circle = [&](const Face& t, const Vec2& d) {
    const Vec2 a = p[t[0]] - d, b = p[t[1]] - d, c = p[t[2]] - d;
    const double det = a.squaredNorm() * cross2(b, c) -
                       b.squaredNorm() * cross2(a, c) +
                       c.squaredNorm() * cross2(a, b);
    return det > 0.0;
  };
  for (int i = n - 1; i >= 0; --i) {
    std::vector<Face> keep;
    std::map<std::pair<int, int>, int> boundary;
    for (const Face& t : tris) {
      if (!in_circle(t, p[i])) {
        keep.push_back(t);
        continue;
      }
      for (int k = 0; k < 3; ++k) {
        const int a = t[k], b = t[(k + 1) % 3];
        if (boundary.erase({b, a}) == 0) boundary[{a, b}] = 1;
      }
    }
    for (const auto& [e, unused] : boundary) keep.push_back({e.first, e.second, i});
    tris = std::move(keep);
  }
  std::vector<Face> out;
  for (const Face& t : tris) {
    if (t[0] < n && t[1] < n && t[2] < n) out.push_back(t);
  }
  return out;
}

namespace detail {

inline SurfaceMesh planar_disk(const std::vector<Vec2>& pts) {
  std::vector<Vec3> pos;
  for (const Vec2& q : pts) pos.emplace_back(q.x(), q.y(), 0.0);
  return SurfaceMesh::from_triangles(std::move(pos), delaunay(pts));
}

/// Rejection-sampled points inside the ellipse with semi-axes (rx, ry), at
/// least `gap` apart and away from the points already present.
inline void scatter(std::vector<Vec2>& pts, int count, double rx, double ry,
                    double gap, std::mt19937& rng,
                    const std::function<bool(const Vec2&)>& allowed = {}) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int guard = 0;
  while (count > 0) {
    if (++guard > 1000000) throw ConfigError("point scattering failed");
    const Vec2 q(rx * u(rng), ry * u(rng));
    if (q.cwiseQuotient(Vec2(rx, ry)).norm() > 1.0) continue;
    if (allowed && !allowed(q)) continue;
    bool ok = true;
    for (const Vec2& r : pts) ok &= (r - q).norm() >= gap;
    if (!ok) continue;
    pts.push_back(q);
    --count;
  }
}

}  // namespace detail

/**
 * 50-vertex planar Delaunay disk: 16 points on the unit circle (vertices
 * 0..15, ccw) and 34 scattered points inside radius 0.7. No triangle has
 * three boundary vertices, so every cotangent edge weight is nonnegative.
 */
inline SurfaceMesh random_delaunay_disk(unsigned seed = 7) {
  std::vector<Vec2> pts;
  for (int i = 0; i < 16; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 16.0;
    pts.emplace_back(std::cos(a), std::sin(a));
  }
  std::mt19937 rng(seed);
  detail::scatter(pts, 34, 0.7, 0.7, 0.12, rng);
  return detail::planar_disk(pts);
}

/// True when no boundary edge faces an obtuse angle; interior Delaunay
/// edges are nonnegative anyway.
inline bool boundary_angles_acute(const SurfaceMesh& m) {
  for (int h = 0; h < m.num_halfedges(); ++h) {
    if (!m.is_boundary_halfedge(h)) continue;
    const Vec3& o = m.position(m.head(SurfaceMesh::next(h)));
    if ((m.position(m.tail(h)) - o).dot(m.position(m.head(h)) - o) < 0.0) {
      return false;
    }
  }
  return true;
}

/**
 * 20-vertex planar disk without symmetries: 8 unevenly spaced boundary
 * points on an ellipse and 12 interior points. Seeds are advanced from
 * `seed` until no boundary edge faces an obtuse angle.
 */
inline SurfaceMesh asymmetric_disk(unsigned seed = 11) {
  const double angles[8] = {0.0, 0.55, 1.5, 2.2, 3.0, 3.9, 4.6, 5.5};
  for (unsigned s = seed; s < seed + 1000; ++s) {
    std::vector<Vec2> pts;
    for (double a : angles) {
      pts.emplace_back(1.3 * std::cos(a), 0.9 * std::sin(a));
    }
    // Keep interior points out of the diametral circles of the hull edges.
    auto outside_hull_circles = [&](const Vec2& q) {
      for (int i = 0; i < 8; ++i) {
        if ((pts[i] - q).dot(pts[(i + 1) % 8] - q) <= 0.0) return false;
      }
      return true;
    };
    std::mt19937 rng(s);
    detail::scatter(pts, 12, 1.05, 0.7, 0.2, rng, outside_hull_circles);
    SurfaceMesh m = detail::planar_disk(pts);
    if (boundary_angles_acute(m)) return m;
  }
  throw ConfigError("no acute asymmetric disk found");
}

/// The asymmetric disk lifted onto a smooth bump, for non-planar cotangent
/// weights.
inline SurfaceMesh bumped_disk(unsigned seed = 11) {
  const SurfaceMesh flat = asymmetric_disk(seed);
  std::vector<Vec3> pos = flat.positions();
  for (Vec3& q : pos) {
    q.z() = 0.25 * std::exp(-2.0 * (q.x() - 0.2) * (q.x() - 0.2) -
                            3.0 * q.y() * q.y());
  }
  return SurfaceMesh::from_triangles(std::move(pos), flat.faces());
}

/** @brief Sphere with an order-3 rotation fixing `apex` */
struct SymmetricSphere {
  SurfaceMesh mesh;
  int apex = 0;
  std::vector<int> sigma;
  int seed_target = 1;
};

/// Regular tetrahedron, apex 0 on the z axis; sigma = (0, 2, 3, 1) rotates
/// the base by 2 pi / 3 about z.
inline SymmetricSphere tetrahedron() {
  std::vector<Vec3> pos{Vec3(0, 0, 1)};
  const double r = std::sqrt(8.0 / 9.0);
  for (int i = 0; i < 3; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 3.0;
    pos.emplace_back(r * std::cos(a), r * std::sin(a), -1.0 / 3.0);
  }
  SymmetricSphere s;
  s.mesh = SurfaceMesh::from_triangles(
      std::move(pos), {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
  s.sigma = {0, 2, 3, 1};
  return s;
}

/// Vertex permutation induced by a rotation of 2 pi / 3 about z.
inline std::vector<int> z_rotation_permutation(const SurfaceMesh& m) {
  const Mat2 rot = rotation2(2.0 * std::numbers::pi / 3.0);
  std::vector<int> sigma(m.num_vertices(), -1);
  for (int v = 0; v < m.num_vertices(); ++v) {
    const Vec3& p = m.position(v);
    const Vec2 q = rot * Vec2(p.x(), p.y());
    double best = std::numeric_limits<double>::infinity();
    for (int w = 0; w < m.num_vertices(); ++w) {
      const Vec3& o = m.position(w);
      const double d = (Vec3(q.x(), q.y(), p.z()) - o).norm();
      if (d < best) {
        best = d;
        sigma[v] = w;
      }
    }
    if (best > 1e-9) throw ConfigError("mesh is not symmetric about z");
  }
  return sigma;
}

/**
 * Tetrahedron refined `levels` times by midpoint subdivision and projected
 * to the unit sphere. Symmetric under the same rotation; seed target is the
 * base vertex 1.
 */
inline SymmetricSphere subdivided_sphere(int levels = 1) {
  SymmetricSphere s = tetrahedron();
  std::vector<Vec3> pos = s.mesh.positions();
  std::vector<Face> faces = s.mesh.faces();
  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      pos.push_back((pos[a] + pos[b]).normalized());
      const int id = static_cast<int>(pos.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<Face> next;
    for (const Face& f : faces) {
      const int a = midpoint(f[0], f[1]);
      const int b = midpoint(f[1], f[2]);
      const int c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({a, f[1], b});
      next.push_back({c, b, f[2]});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }
  s.mesh = SurfaceMesh::from_triangles(std::move(pos), std::move(faces));
  s.sigma = z_rotation_permutation(s.mesh);
  return s;
}

}  // namespace torusparam::fixtures
