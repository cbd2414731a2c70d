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

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>
#include <vector>

#include <Eigen/Geometry>

#include "torusparam/marked_disk.hpp"

namespace torusparam {

/**
 * @brief A sphere with an order-3 symmetry and three symmetric cut paths.
 *
 * paths[j] runs from the apex (a fixed point of sigma) to leaf L_j, and
 * sigma maps paths[j] onto paths[j+1 mod 3].
 */
struct SphereCutSystem {
  SurfaceMesh mesh;
  int apex = -1;
  std::array<std::vector<int>, 3> paths;
  std::vector<int> sigma;

  int leaf(int j) const { return paths[j].back(); }
};

namespace detail {

/// Halfedge u -> v, or -1.
inline int find_halfedge(const SurfaceMesh& m, int u, int v) {
  for (int h : m.outgoing(u)) {
    if (m.head(h) == v) return h;
  }
  return -1;
}

/// Face index keyed by its vertex set (as a sorted triple).
inline std::map<std::array<int, 3>, int> face_lookup(const SurfaceMesh& m) {
  std::map<std::array<int, 3>, int> out;
  for (int f = 0; f < m.num_faces(); ++f) {
    Face s = m.face(f);
    std::sort(s.begin(), s.end());
    out.emplace(s, f);
  }
  return out;
}

/// Throws ConfigError unless sigma is an order-3 orientation-preserving
/// simplicial automorphism of m. Returns the induced face permutation.
inline std::vector<int> check_order3_automorphism(const SurfaceMesh& m,
                                                  const std::vector<int>& sigma) {
  const int n = m.num_vertices();
  if (static_cast<int>(sigma.size()) != n) {
    throw ConfigError("sigma must list one image per vertex");
  }
  std::vector<char> hit(n, 0);
  for (int v : sigma) {
    if (v < 0 || v >= n || hit[v]) {
      throw ConfigError("sigma is not a permutation");
    }
    hit[v] = 1;
  }
  for (int v = 0; v < n; ++v) {
    if (sigma[sigma[sigma[v]]] != v) {
      throw ConfigError("sigma^3 is not the identity (vertex " +
                        std::to_string(v) + ")");
    }
  }
  bool identity = true;
  for (int v = 0; v < n; ++v) identity &= sigma[v] == v;
  if (identity) throw ConfigError("sigma is the identity");

  const auto lookup = face_lookup(m);
  std::vector<int> face_map(m.num_faces());
  for (int f = 0; f < m.num_faces(); ++f) {
    const Face& t = m.face(f);
    const Face img{sigma[t[0]], sigma[t[1]], sigma[t[2]]};
    Face key = img;
    std::sort(key.begin(), key.end());
    auto it = lookup.find(key);
    if (it == lookup.end()) {
      throw ConfigError("sigma does not map face " + std::to_string(f) +
                        " to a face");
    }
    const Face& g = m.face(it->second);
    // Same cyclic order means orientation is preserved.
    const int r = static_cast<int>(std::find(g.begin(), g.end(), img[0]) -
                                   g.begin());
    if (g[(r + 1) % 3] != img[1]) {
      throw ConfigError("sigma reverses orientation");
    }
    face_map[f] = it->second;
  }
  return face_map;
}

}  // namespace detail

/// Throws ConfigError describing the first violated invariant.
inline void validate(const SphereCutSystem& c) {
  const SurfaceMesh& m = c.mesh;
  if (!classify(m).is_sphere()) throw TopologyError("cut mesh is not a sphere");
  const int n = m.num_vertices();
  if (c.apex < 0 || c.apex >= n) throw ConfigError("apex out of range");
  detail::check_order3_automorphism(m, c.sigma);
  if (c.sigma[c.apex] != c.apex) throw ConfigError("sigma must fix the apex");

  std::vector<int> owner(n, -1);
  for (int j = 0; j < 3; ++j) {
    const auto& p = c.paths[j];
    if (p.size() < 2 || p.front() != c.apex) {
      throw ConfigError("path " + std::to_string(j) +
                        " must start at the apex and have an edge");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0 || p[i] >= n) throw ConfigError("path vertex out of range");
      if (i > 0 && detail::find_halfedge(m, p[i - 1], p[i]) < 0) {
        throw ConfigError("path " + std::to_string(j) + " skips an edge at " +
                          std::to_string(p[i - 1]) + "-" +
                          std::to_string(p[i]));
      }
      if (i == 0) continue;
      if (owner[p[i]] >= 0) {
        throw ConfigError("cut paths are not simple and disjoint (vertex " +
                          std::to_string(p[i]) + ")");
      }
      owner[p[i]] = j;
    }
  }
  for (int j = 0; j < 3; ++j) {
    const auto& p = c.paths[j];
    const auto& q = c.paths[(j + 1) % 3];
    bool ok = p.size() == q.size();
    for (std::size_t i = 0; ok && i < p.size(); ++i) ok = c.sigma[p[i]] == q[i];
    if (!ok) {
      throw ConfigError("sigma does not map path " + std::to_string(j) +
                        " onto path " + std::to_string((j + 1) % 3));
    }
  }
}

/**
 * Symmetric cut paths: a shortest edge path from the apex to `seed_target`
 * and its two sigma images. When the images collide, the colliding vertices
 * are penalized and the search repeats.
 */
inline SphereCutSystem make_symmetric_cuts(const SurfaceMesh& mesh, int apex,
                                           const std::vector<int>& sigma,
                                           int seed_target,
                                           int max_rounds = 64) {
  const int n = mesh.num_vertices();
  detail::check_order3_automorphism(mesh, sigma);
  if (apex < 0 || apex >= n || sigma[apex] != apex) {
    throw ConfigError("apex must be a fixed point of sigma");
  }
  if (seed_target < 0 || seed_target >= n || sigma[seed_target] == seed_target) {
    throw ConfigError("seed target must not be fixed by sigma");
  }

  std::vector<double> penalty(n, 0.0);
  std::set<int> conflicts;
  for (int round = 0; round < max_rounds; ++round) {
    // Dijkstra on edge length scaled by the penalty of the entered vertex.
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> from(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[apex] = 0.0;
    pq.emplace(0.0, apex);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      if (u == seed_target) break;
      for (int h : mesh.outgoing(u)) {
        const int v = mesh.head(h);
        if (v == apex || (sigma[v] == v && v != seed_target)) continue;
        const double len = (mesh.position(v) - mesh.position(u)).norm();
        const double nd = d + len * (1.0 + penalty[v]);
        if (nd < dist[v] || (nd == dist[v] && u < from[v])) {
          dist[v] = nd;
          from[v] = u;
          pq.emplace(nd, v);
        }
      }
    }
    if (from[seed_target] < 0) {
      throw ConfigError("seed target is unreachable from the apex");
    }
    std::vector<int> path;
    for (int v = seed_target; v != -1; v = from[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());

    std::set<int> on_path(path.begin() + 1, path.end());
    conflicts.clear();
    for (int v : on_path) {
      if (on_path.count(sigma[v]) || on_path.count(sigma[sigma[v]])) {
        conflicts.insert(v);
      }
    }
    if (conflicts.empty()) {
      SphereCutSystem c;
      c.mesh = mesh;
      c.apex = apex;
      c.sigma = sigma;
      c.paths[0] = path;
      for (int j = 1; j < 3; ++j) {
        c.paths[j] = c.paths[j - 1];
        for (int& v : c.paths[j]) v = sigma[v];
      }
      validate(c);
      return c;
    }
    for (int v : conflicts) {
      if (v != seed_target) penalty[v] = 2.0 * penalty[v] + 1.0;
    }
  }
  std::ostringstream msg;
  msg << "no disjoint symmetric paths found; conflicting vertices:";
  for (int v : conflicts) msg << ' ' << v;
  throw ConfigError(msg.str());
}

/**
 * Guess sigma from geometry: rotate by 2*pi/3 about the axis through the
 * apex and the vertex centroid, then match vertices by nearest neighbor.
 * Throws ConfigError when no consistent match exists.
 */
inline std::vector<int> detect_sigma(const SurfaceMesh& mesh, int apex,
                                     double rel_tol = 1e-6) {
  const int n = mesh.num_vertices();
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : mesh.positions()) centroid += p;
  centroid /= n;
  const Vec3 origin = mesh.position(apex);
  Vec3 axis = centroid - origin;
  if (axis.norm() < 1e-12 * mesh.diameter()) {
    throw ConfigError("cannot detect symmetry axis: centroid at apex");
  }
  axis.normalize();
  const Eigen::AngleAxisd rot(2.0 * std::numbers::pi / 3.0, axis);
  const double tol = rel_tol * mesh.diameter();
  std::vector<int> sigma(n, -1);
  for (int v = 0; v < n; ++v) {
    const Vec3 q = origin + rot * (mesh.position(v) - origin);
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int w = 0; w < n; ++w) {
      const double d = (mesh.position(w) - q).norm();
      if (d < bd) {
        bd = d;
        best = w;
      }
    }
    if (bd > tol) {
      throw ConfigError("mesh is not 3-fold symmetric about the detected "
                        "axis (vertex " + std::to_string(v) + ")");
    }
    sigma[v] = best;
  }
  detail::check_order3_automorphism(mesh, sigma);
  return sigma;
}

/** @brief A sphere cut open along the star of three paths */
struct CutDisk {
  MarkedDisk disk;  ///< marks: apex, L, apex, L, apex, L in loop order
  std::vector<int> to_sphere;
  /// Cut path index carried by sides 2s and 2s+1.
  std::array<int, 3> side_path{};
};

/**
 * Cut the sphere along the star. The resulting disk has six marks
 * alternating apex copies and leaves; side 2s runs apex -> leaf along
 * path side_path[s] and side 2s+1 runs back along the other bank.
 * Disk face indices equal sphere face indices.
 */
inline CutDisk cut_along_star(const SphereCutSystem& c) {
  const SurfaceMesh& m = c.mesh;
  std::set<std::pair<int, int>> cut;
  for (const auto& p : c.paths) {
    for (std::size_t i = 1; i < p.size(); ++i) {
      cut.emplace(std::min(p[i - 1], p[i]), std::max(p[i - 1], p[i]));
    }
  }
  auto is_cut = [&](int h) {
    const int a = m.tail(h), b = m.head(h);
    return cut.count({std::min(a, b), std::max(a, b)}) > 0;
  };

  std::vector<int> corner_vertex(m.num_halfedges(), -1);
  std::vector<Vec3> positions;
  CutDisk out;
  for (int v = 0; v < m.num_vertices(); ++v) {
    const std::vector<int> fan = m.outgoing(v);
    const int count = static_cast<int>(fan.size());
    int start = 0;
    for (int i = 0; i < count; ++i) {
      if (is_cut(fan[i])) {
        start = i;
        break;
      }
    }
    int current = -1;
    for (int i = 0; i < count; ++i) {
      const int h = fan[(start + i) % count];
      if (i == 0 || is_cut(h)) {
        current = static_cast<int>(positions.size());
        positions.push_back(m.position(v));
        out.to_sphere.push_back(v);
      }
      // The face of h lies between h and its ccw successor.
      corner_vertex[h] = current;
    }
  }
  std::vector<Face> faces(m.num_faces());
  for (int f = 0; f < m.num_faces(); ++f) {
    for (int k = 0; k < 3; ++k) faces[f][k] = corner_vertex[3 * f + k];
  }
  SurfaceMesh disk_mesh = SurfaceMesh::from_triangles(positions, faces);
  const BoundaryLoop loop = boundary_loop(disk_mesh);

  // Start the marks at the apex copy that precedes leaf L_0.
  const int len = loop.size();
  int start = -1;
  for (int i = 0; i < len; ++i) {
    if (out.to_sphere[loop.vertices[i]] != c.apex) continue;
    for (int j = 1; j < len; ++j) {
      const int s = out.to_sphere[loop.vertices[(i + j) % len]];
      if (s == c.leaf(0)) start = i;
      if (s == c.apex || s == c.leaf(0) || s == c.leaf(1) || s == c.leaf(2)) {
        break;
      }
    }
    if (start >= 0) break;
  }
  if (start < 0) throw TopologyError("cut disk boundary has unexpected shape");
  std::vector<int> marks;
  for (int i = 0; i < len; ++i) {
    const int dv = loop.vertices[(start + i) % len];
    const int s = out.to_sphere[dv];
    if (s == c.apex || s == c.leaf(0) || s == c.leaf(1) || s == c.leaf(2)) {
      marks.push_back(dv);
    }
  }
  if (marks.size() != 6) {
    throw TopologyError("cut disk should have 6 corners, found " +
                        std::to_string(marks.size()));
  }
  out.disk = MarkedDisk::make(std::move(disk_mesh), marks);

  for (int s = 0; s < 3; ++s) {
    const int leaf = out.to_sphere[out.disk.marks[2 * s + 1]];
    const int j = leaf == c.leaf(0) ? 0 : leaf == c.leaf(1) ? 1 : 2;
    out.side_path[s] = j;
    std::vector<int> fwd, back;
    for (int v : out.disk.sides[2 * s]) fwd.push_back(out.to_sphere[v]);
    for (int v : out.disk.sides[2 * s + 1]) back.push_back(out.to_sphere[v]);
    std::reverse(back.begin(), back.end());
    if (fwd != c.paths[j] || back != c.paths[j]) {
      throw TopologyError("cut disk sides do not follow the cut paths");
    }
  }
  return out;
}

}  // namespace torusparam
