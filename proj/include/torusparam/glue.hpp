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

// Generic gluing of disk copies along boundary sides into a closed complex,
// plus the planar "layout" that records where each copy sits in the
// universal cover of the flat torus. The layout provides the translation
// carried by every glued side, which in turn yields a reference jump
// cocycle for the harmonic solve and the expected corner images used by the
// symmetry checks.

#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "torusparam/lattice.hpp"
#include "torusparam/marked_disk.hpp"

namespace torusparam {

/** @brief Identification of side `side_a` of one copy with a side of another */
struct GlueRecord {
  int copy_a = 0;
  int side_a = 0;
  int copy_b = 0;
  int side_b = 0;
  /// false: vertex t of side a meets vertex t of side b. true: it meets
  /// vertex (len - t), i.e. the sides run in opposite directions.
  bool reversed = false;
  /// Layout translation: position of the shared side in copy a's frame
  /// minus its position in copy b's frame. A layout-lattice vector.
  Vec2 shift = Vec2::Zero();
};

/** @brief Everything a builder declares about a gluing */
struct GluingPlan {
  std::string construction;
  int copy_count = 0;
  std::vector<char> flipped;                     ///< per copy
  std::vector<std::vector<Vec2>> layout_corners;  ///< per copy, per mark
  std::vector<GlueRecord> glues;                 ///< shift filled by glue_copies
  Lattice layout_lattice;
  Lattice target_lattice;
};

/** @brief Data kept when the copied disk is a sphere cut open along a star */
struct SphereProvenance {
  SurfaceMesh sphere;
  std::vector<int> disk_to_sphere;  ///< per disk vertex
  int apex = -1;
  std::array<int, 3> leaves{};
  std::vector<int> sigma;
  /// +1 when sigma turns each tile counterclockwise in the plane.
  int rotation_sign = 1;
};

/**
 * @brief Closed complex glued from k copies of a disk.
 *
 * Torus face `c * F + f` is face f of copy c (reversed when the copy is
 * flipped). A "corner key" `c * n + v` names disk vertex v of copy c; several
 * keys may collapse into one torus vertex.
 */
struct GluedTorus {
  std::string construction;
  int copy_count = 0;
  MarkedDisk disk;
  SurfaceMesh mesh;
  std::vector<char> flipped;
  std::vector<GlueRecord> glues;

  std::vector<int> face_copy;                    ///< per torus face
  std::vector<int> face_source;                  ///< disk face per torus face
  std::vector<std::array<int, 3>> face_corner_key;  ///< per torus face corner
  std::vector<int> key_vertex;                   ///< corner key -> torus vertex
  std::vector<std::vector<int>> vertex_keys;     ///< torus vertex -> keys

  Lattice layout_lattice;
  Lattice target_lattice;
  std::vector<std::vector<Vec2>> layout_corners;
  /// Per corner key: offset of that copy's frame relative to the frame of
  /// the vertex's anchor key, in layout coordinates.
  std::vector<Vec2> key_shift;

  std::optional<SphereProvenance> sphere;

  int disk_vertex_count() const { return disk.mesh.num_vertices(); }
  int key(int copy, int disk_vertex) const {
    return copy * disk_vertex_count() + disk_vertex;
  }
  int key_copy(int key) const { return key / disk_vertex_count(); }
  int key_disk_vertex(int key) const { return key % disk_vertex_count(); }
  int torus_vertex(int copy, int disk_vertex) const {
    return key_vertex[key(copy, disk_vertex)];
  }
  /// Copy 0, mark 0.
  int default_pin() const { return torus_vertex(0, disk.marks[0]); }

  /// Linear map sending layout-lattice generators to target generators.
  Mat2 layout_to_target() const {
    return target_lattice.basis() * layout_lattice.basis().inverse();
  }
  /// Base-surface vertex under a torus vertex (disk or sphere vertex).
  int base_vertex(int torus_v) const {
    const int dv = key_disk_vertex(vertex_keys[torus_v].front());
    return sphere ? sphere->disk_to_sphere[dv] : dv;
  }
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

/// Halfedge of torus face (c, f) that realizes disk halfedge 3f + k.
inline int torus_halfedge(int copy, int f, int k, int disk_faces,
                          bool flipped) {
  const int tf = copy * disk_faces + f;
  return 3 * tf + (flipped ? 2 - k : k);
}

}  // namespace detail

/**
 * Glue copies of `disk` as described by `plan`. Throws TopologyError when
 * the result is not a closed manifold, and ConfigError when the plan is
 * inconsistent (unequal side lengths, reused sides, non-lattice shifts).
 */
inline GluedTorus glue_copies(const MarkedDisk& disk, GluingPlan plan) {
  const int n = disk.mesh.num_vertices();
  const int nf = disk.mesh.num_faces();
  const int k = plan.copy_count;
  const int marks = disk.mark_count();
  if (static_cast<int>(plan.flipped.size()) != k ||
      static_cast<int>(plan.layout_corners.size()) != k) {
    throw ConfigError("gluing plan sizes do not match copy count");
  }
  for (const auto& c : plan.layout_corners) {
    if (static_cast<int>(c.size()) != marks) {
      throw ConfigError("layout needs one corner per mark");
    }
  }

  GluedTorus t;
  t.construction = plan.construction;
  t.copy_count = k;
  t.disk = disk;
  t.flipped = plan.flipped;
  t.layout_lattice = plan.layout_lattice;
  t.target_lattice = plan.target_lattice;
  t.layout_corners = plan.layout_corners;

  const double tol3 = 1e-12 * std::max(1.0, disk.mesh.diameter());
  std::vector<char> side_used(static_cast<std::size_t>(k) * marks, 0);
  detail::UnionFind uf(k * n);

  // Key relations for the layout cocycle: shift[b] = shift[a] - glue.shift.
  std::vector<std::vector<std::pair<int, Vec2>>> key_links(k * n);
  // Twins across glued sides.
  std::vector<int> twins(3 * k * nf, -1);

  for (GlueRecord& g : plan.glues) {
    if (g.copy_a < 0 || g.copy_a >= k || g.copy_b < 0 || g.copy_b >= k ||
        g.side_a < 0 || g.side_a >= marks || g.side_b < 0 ||
        g.side_b >= marks) {
      throw ConfigError("glue record out of range");
    }
    for (auto [c, s] : {std::pair{g.copy_a, g.side_a},
                        std::pair{g.copy_b, g.side_b}}) {
      char& used = side_used[static_cast<std::size_t>(c) * marks + s];
      if (used) {
        throw ConfigError("side " + std::to_string(s) + " of copy " +
                          std::to_string(c) + " is glued twice");
      }
      used = 1;
    }
    const auto& sa = disk.sides[g.side_a];
    const auto& sb = disk.sides[g.side_b];
    if (sa.size() != sb.size()) {
      throw ConfigError("glued sides have different lengths");
    }
    const int len = static_cast<int>(sa.size()) - 1;
    auto partner = [&](int i) { return g.reversed ? sb[len - i] : sb[i]; };

    // Layout shift from the two end corners of the side.
    const auto& ca = plan.layout_corners[g.copy_a];
    const auto& cb = plan.layout_corners[g.copy_b];
    const int a0 = g.side_a, a1 = (g.side_a + 1) % marks;
    const int b0 = g.reversed ? (g.side_b + 1) % marks : g.side_b;
    const int b1 = g.reversed ? g.side_b : (g.side_b + 1) % marks;
    const Vec2 s0 = ca[a0] - cb[b0];
    const Vec2 s1 = ca[a1] - cb[b1];
    bool on_lattice = false;
    plan.layout_lattice.round(s0, &on_lattice, 1e-9);
    if ((s0 - s1).norm() > 1e-9 || !on_lattice) {
      throw ConfigError("layout of copies " + std::to_string(g.copy_a) +
                        " and " + std::to_string(g.copy_b) +
                        " does not match across the glued side");
    }
    g.shift = s0;

    for (int i = 0; i <= len; ++i) {
      const int va = sa[i], vb = partner(i);
      if ((disk.mesh.position(va) - disk.mesh.position(vb)).norm() > tol3) {
        throw ConfigError("glued vertices have different 3D positions");
      }
      const int ka = g.copy_a * n + va, kb = g.copy_b * n + vb;
      uf.unite(ka, kb);
      key_links[ka].emplace_back(kb, -g.shift);
      key_links[kb].emplace_back(ka, g.shift);
    }
    for (int i = 0; i < len; ++i) {
      // Disk boundary halfedge from sa[i] to sa[i+1] meets the one along
      // side b between the partners.
      const int ha = disk.mesh.vertex_halfedge(sa[i]);
      const int j = g.reversed ? len - 1 - i : i;
      const int hb = disk.mesh.vertex_halfedge(sb[j]);
      const int ta = detail::torus_halfedge(g.copy_a, ha / 3, ha % 3, nf,
                                            plan.flipped[g.copy_a]);
      const int tb = detail::torus_halfedge(g.copy_b, hb / 3, hb % 3, nf,
                                            plan.flipped[g.copy_b]);
      twins[ta] = tb;
      twins[tb] = ta;
    }
  }
  t.glues = plan.glues;

  // Torus vertices in order of first key appearance.
  t.key_vertex.assign(k * n, -1);
  std::vector<int> root_vertex(k * n, -1);
  std::vector<Vec3> positions;
  for (int key = 0; key < k * n; ++key) {
    const int r = uf.find(key);
    if (root_vertex[r] < 0) {
      root_vertex[r] = static_cast<int>(positions.size());
      positions.push_back(disk.mesh.position(key % n));
      t.vertex_keys.emplace_back();
    }
    t.key_vertex[key] = root_vertex[r];
    t.vertex_keys[root_vertex[r]].push_back(key);
  }

  std::vector<Face> faces(static_cast<std::size_t>(k) * nf);
  t.face_copy.resize(faces.size());
  t.face_source.resize(faces.size());
  t.face_corner_key.resize(faces.size());
  for (int c = 0; c < k; ++c) {
    for (int f = 0; f < nf; ++f) {
      const Face& df = disk.mesh.face(f);
      const int tf = c * nf + f;
      std::array<int, 3> keys{c * n + df[0], c * n + df[1], c * n + df[2]};
      if (plan.flipped[c]) std::swap(keys[1], keys[2]);
      t.face_corner_key[tf] = keys;
      for (int q = 0; q < 3; ++q) faces[tf][q] = t.key_vertex[keys[q]];
      t.face_copy[tf] = c;
      t.face_source[tf] = f;
      for (int q = 0; q < 3; ++q) {
        const int dh = 3 * f + q;
        const int dt = disk.mesh.twin(dh);
        if (dt < 0) continue;
        twins[detail::torus_halfedge(c, f, q, nf, plan.flipped[c])] =
            detail::torus_halfedge(c, dt / 3, dt % 3, nf, plan.flipped[c]);
      }
    }
  }
  for (int h = 0; h < static_cast<int>(twins.size()); ++h) {
    if (twins[h] < 0) {
      throw TopologyError("gluing leaves boundary: copy " +
                          std::to_string(h / 3 / nf) + " has an unglued side");
    }
  }
  t.mesh = SurfaceMesh::from_twins(std::move(positions), std::move(faces),
                                   std::move(twins));
  const TopologyReport topo = classify(t.mesh);
  if (!topo.is_torus()) {
    throw TopologyError("glued complex has Euler characteristic " +
                        std::to_string(topo.euler_characteristic) +
                        ", expected a torus");
  }

  // Layout cocycle: walk each vertex class from its anchor key.
  t.key_shift.assign(k * n, Vec2::Zero());
  std::vector<char> seen(k * n, 0);
  for (const auto& keys : t.vertex_keys) {
    const int anchor = keys.front();
    seen[anchor] = 1;
    std::queue<int> q;
    q.push(anchor);
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      for (const auto& [b, delta] : key_links[a]) {
        const Vec2 s = t.key_shift[a] + delta;
        if (!seen[b]) {
          seen[b] = 1;
          t.key_shift[b] = s;
          q.push(b);
        } else if ((t.key_shift[b] - s).norm() > 1e-9) {
          throw ConfigError(
              "layout translations are inconsistent around a vertex");
        }
      }
    }
  }
  return t;
}

}  // namespace torusparam
