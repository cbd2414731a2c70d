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
#include <unordered_map>
#include <utility>
#include <vector>

#include "torusparam/core.hpp"

namespace torusparam {

/**
 * @brief Indexed triangle mesh with implicit halfedge connectivity.
 *
 * Halfedge `3 * f + k` runs from corner k to corner k + 1 of face f, so
 * `next`, `prev` and `face` are arithmetic. Opposite halfedges are stored
 * explicitly; -1 marks a boundary halfedge. Storing the twins explicitly
 * (instead of deriving them from vertex pairs) lets glued complexes carry
 * several distinct edges between the same two vertices.
 *
 * Values are immutable after construction.
 */
class SurfaceMesh {
 public:
  SurfaceMesh() = default;

  /**
   * Build from a face list, pairing halfedges by their vertex pairs.
   * Throws TopologyError on repeated corner indices, edges shared by more
   * than two faces, inconsistent orientation and non-manifold vertices.
   */
  static SurfaceMesh from_triangles(std::vector<Vec3> positions,
                                    std::vector<Face> faces);

  /**
   * Build from a face list with explicit opposite halfedges. `twins[h]` is
   * the halfedge opposite to h or -1. Validated the same way.
   */
  static SurfaceMesh from_twins(std::vector<Vec3> positions,
                                std::vector<Face> faces,
                                std::vector<int> twins);

  int num_vertices() const { return static_cast<int>(positions_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_halfedges() const { return 3 * num_faces(); }
  int num_edges() const { return static_cast<int>(edge_halfedge_.size()); }

  const std::vector<Vec3>& positions() const { return positions_; }
  const Vec3& position(int v) const { return positions_[v]; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }

  static int face_of(int h) { return h / 3; }
  static int next(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
  static int prev(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }
  int twin(int h) const { return twins_[h]; }
  int tail(int h) const { return faces_[h / 3][h % 3]; }
  int head(int h) const { return faces_[h / 3][(h % 3 + 1) % 3]; }
  bool is_boundary_halfedge(int h) const { return twins_[h] < 0; }

  int edge(int h) const { return halfedge_edge_[h]; }
  /// A halfedge of edge e; the interior one has the smaller index.
  int edge_halfedge(int e) const { return edge_halfedge_[e]; }
  bool is_boundary_edge(int e) const {
    return twins_[edge_halfedge_[e]] < 0;
  }

  /**
   * Outgoing halfedge of v. For boundary vertices it is the boundary
   * halfedge leaving v, so a counterclockwise sweep from it visits the
   * whole fan.
   */
  int vertex_halfedge(int v) const { return vertex_halfedge_[v]; }
  bool is_boundary_vertex(int v) const {
    return twins_[vertex_halfedge_[v]] < 0;
  }

  /// Counterclockwise successor among halfedges leaving the same vertex.
  int rotate_ccw(int h) const { return twins_[prev(h)]; }
  /// Clockwise successor; -1 past a boundary.
  int rotate_cw(int h) const {
    const int t = twins_[h];
    return t < 0 ? -1 : next(t);
  }

  /// Outgoing halfedges of v in counterclockwise order.
  std::vector<int> outgoing(int v) const {
    std::vector<int> out;
    const int start = vertex_halfedge_[v];
    int h = start;
    do {
      out.push_back(h);
      h = rotate_ccw(h);
    } while (h >= 0 && h != start);
    return out;
  }

  /// Faces with a zero (or numerically negligible) area.
  const std::vector<int>& zero_area_faces() const { return zero_area_; }

  /// Length of the longest axis-aligned bounding box diagonal.
  double diameter() const {
    if (positions_.empty()) return 0.0;
    Vec3 lo = positions_[0], hi = positions_[0];
    for (const Vec3& p : positions_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
  }

 private:
  void finalize();

  std::vector<Vec3> positions_;
  std::vector<Face> faces_;
  std::vector<int> twins_;
  std::vector<int> halfedge_edge_;
  std::vector<int> edge_halfedge_;
  std::vector<int> vertex_halfedge_;
  std::vector<int> zero_area_;
};

/** @brief Cyclic list of boundary vertices with the surface on the left */
struct BoundaryLoop {
  std::vector<int> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
  /// Position of v in the loop, or -1.
  int index_of(int v) const {
    auto it = std::find(vertices.begin(), vertices.end(), v);
    return it == vertices.end() ? -1
                                : static_cast<int>(it - vertices.begin());
  }
};

struct TopologyReport {
  int euler_characteristic = 0;
  int boundary_loop_count = 0;
  /// (2 - chi - b) / 2; the genus of the closed surface after capping holes.
  int genus = 0;

  bool is_disk() const {
    return euler_characteristic == 1 && boundary_loop_count == 1;
  }
  bool is_sphere() const {
    return euler_characteristic == 2 && boundary_loop_count == 0;
  }
  bool is_torus() const {
    return euler_characteristic == 0 && boundary_loop_count == 0;
  }
};

inline std::vector<BoundaryLoop> boundary_loops(const SurfaceMesh& mesh) {
  std::vector<BoundaryLoop> loops;
  std::vector<char> seen(mesh.num_halfedges(), 0);
  for (int h0 = 0; h0 < mesh.num_halfedges(); ++h0) {
    if (!mesh.is_boundary_halfedge(h0) || seen[h0]) continue;
    BoundaryLoop loop;
    int h = h0;
    do {
      seen[h] = 1;
      loop.vertices.push_back(mesh.tail(h));
      h = mesh.vertex_halfedge(mesh.head(h));
    } while (h != h0);
    loops.push_back(std::move(loop));
  }
  return loops;
}

inline TopologyReport classify(const SurfaceMesh& mesh) {
  TopologyReport r;
  r.euler_characteristic =
      mesh.num_vertices() - mesh.num_edges() + mesh.num_faces();
  r.boundary_loop_count = static_cast<int>(boundary_loops(mesh).size());
  r.genus = (2 - r.euler_characteristic - r.boundary_loop_count) / 2;
  return r;
}

/// The single boundary loop of a disk. Throws TopologyError otherwise.
inline BoundaryLoop boundary_loop(const SurfaceMesh& mesh) {
  if (!classify(mesh).is_disk()) {
    throw TopologyError("mesh is not a disk");
  }
  BoundaryLoop loop = boundary_loops(mesh).front();
  // Canonical start: smallest vertex index, orientation unchanged.
  auto it = std::min_element(loop.vertices.begin(), loop.vertices.end());
  std::rotate(loop.vertices.begin(), it, loop.vertices.end());
  return loop;
}

// ---------------------------------------------------------------------------

inline SurfaceMesh SurfaceMesh::from_triangles(std::vector<Vec3> positions,
                                               std::vector<Face> faces) {
  const auto nv = static_cast<std::int64_t>(positions.size());
  std::unordered_map<std::int64_t, int> directed;
  directed.reserve(faces.size() * 3);
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    const Face& t = faces[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv) {
        throw TopologyError("face " + std::to_string(f) +
                            " references missing vertex " +
                            std::to_string(t[k]));
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw TopologyError("degenerate face " + std::to_string(f) + " (" +
                          std::to_string(t[0]) + ", " + std::to_string(t[1]) +
                          ", " + std::to_string(t[2]) + ")");
    }
    for (int k = 0; k < 3; ++k) {
      const std::int64_t key = t[k] * nv + t[(k + 1) % 3];
      if (!directed.emplace(key, 3 * f + k).second) {
        throw TopologyError(
            "edge (" + std::to_string(t[k]) + ", " +
            std::to_string(t[(k + 1) % 3]) +
            ") is used twice in the same direction: non-manifold edge or "
            "inconsistent orientation");
      }
    }
  }
  std::vector<int> twins(faces.size() * 3, -1);
  for (const auto& [key, h] : directed) {
    const std::int64_t a = key / nv, b = key % nv;
    auto it = directed.find(b * nv + a);
    if (it != directed.end()) twins[h] = it->second;
  }
  return from_twins(std::move(positions), std::move(faces), std::move(twins));
}

inline SurfaceMesh SurfaceMesh::from_twins(std::vector<Vec3> positions,
                                           std::vector<Face> faces,
                                           std::vector<int> twins) {
  SurfaceMesh m;
  m.positions_ = std::move(positions);
  m.faces_ = std::move(faces);
  m.twins_ = std::move(twins);
  if (m.twins_.size() != m.faces_.size() * 3) {
    throw TopologyError("twin table size does not match face count");
  }
  m.finalize();
  return m;
}

inline void SurfaceMesh::finalize() {
  const int nh = num_halfedges();
  const int nv = num_vertices();
  for (int h = 0; h < nh; ++h) {
    const int t = twins_[h];
    if (t < 0) continue;
    if (t >= nh || t == h || twins_[t] != h) {
      throw TopologyError("halfedge " + std::to_string(h) +
                          " has an inconsistent opposite");
    }
    if (tail(t) != head(h) || head(t) != tail(h)) {
      throw TopologyError("opposite halfedges " + std::to_string(h) + ", " +
                          std::to_string(t) + " disagree on endpoints");
    }
  }

  halfedge_edge_.assign(nh, -1);
  edge_halfedge_.clear();
  for (int h = 0; h < nh; ++h) {
    if (halfedge_edge_[h] >= 0) continue;
    const int e = static_cast<int>(edge_halfedge_.size());
    edge_halfedge_.push_back(h);
    halfedge_edge_[h] = e;
    if (twins_[h] >= 0) halfedge_edge_[twins_[h]] = e;
  }

  // Vertex fans: every vertex must have exactly one fan (a disk or half
  // disk), otherwise it is a non-manifold vertex.
  std::vector<int> out_count(nv, 0), boundary_out(nv, -1), any_out(nv, -1);
  for (int h = 0; h < nh; ++h) {
    const int v = tail(h);
    ++out_count[v];
    any_out[v] = h;
    if (twins_[h] < 0) {
      if (boundary_out[v] >= 0) {
        throw TopologyError("non-manifold vertex " + std::to_string(v) +
                            " (more than one boundary gap)");
      }
      boundary_out[v] = h;
    }
  }
  vertex_halfedge_.assign(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (out_count[v] == 0) {
      throw TopologyError("vertex " + std::to_string(v) +
                          " is not referenced by any face");
    }
    vertex_halfedge_[v] = boundary_out[v] >= 0 ? boundary_out[v] : any_out[v];
    int count = 0;
    const int start = vertex_halfedge_[v];
    int h = start;
    do {
      ++count;
      if (count > out_count[v]) break;
      h = rotate_ccw(h);
    } while (h >= 0 && h != start);
    if (count != out_count[v]) {
      throw TopologyError("non-manifold vertex " + std::to_string(v) +
                          " (link is not a single disk)");
    }
  }

  zero_area_.clear();
  for (int f = 0; f < num_faces(); ++f) {
    const Vec3& a = positions_[faces_[f][0]];
    const Vec3 e1 = positions_[faces_[f][1]] - a;
    const Vec3 e2 = positions_[faces_[f][2]] - a;
    if (e1.cross(e2).norm() <= 1e-14 * e1.norm() * e2.norm()) {
      zero_area_.push_back(f);
    }
  }
}

}  // namespace torusparam
