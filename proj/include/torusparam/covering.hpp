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

#include <map>
#include <string>
#include <vector>

#include "torusparam/glue.hpp"

namespace torusparam {

/** @brief Preimages of one base vertex, grouped by local degree */
struct BranchEntry {
  int base_vertex = -1;
  std::string label;                 ///< "pO", "L0".."L2", "v0".., or ""
  int preimages = 0;
  std::map<int, int> degree_counts;  ///< local degree -> number of preimages
};

struct CoveringReport {
  int euler_characteristic = 0;
  bool manifold = false;
  bool projection_consistent = false;
  /// Sum over torus vertices of (local degree - 1); sphere bases only.
  int ramification_sum = 0;
  std::vector<BranchEntry> branch_table;  ///< base vertices that are marked
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

namespace detail {

/// Interior angle of the layout polygon of `copy` at mark j.
inline double layout_corner_angle(const GluedTorus& t, int copy, int j) {
  const auto& c = t.layout_corners[copy];
  const int k = static_cast<int>(c.size());
  const Vec2 a = c[(j + k - 1) % k] - c[j];
  const Vec2 b = c[(j + 1) % k] - c[j];
  return std::abs(std::atan2(cross2(a, b), a.dot(b)));
}

}  // namespace detail

/**
 * Checks that the torus covers its base the way the construction says:
 * Euler characteristic 0, disk vertex links, faces projecting onto base
 * faces with matching corners, and full cone angles. For a sphere base
 * every torus vertex must wrap its base vertex an integer number of times
 * and the local degrees must satisfy Riemann-Hurwitz for a 63-sheeted cover.
 */
inline CoveringReport validate_covering(const GluedTorus& t) {
  CoveringReport r;
  const SurfaceMesh& m = t.mesh;
  const TopologyReport topo = classify(m);
  r.euler_characteristic = topo.euler_characteristic;
  if (topo.euler_characteristic != 0) r.failures.push_back("Euler characteristic is not 0");
  if (topo.boundary_loop_count != 0) r.failures.push_back("torus has boundary");

  // Vertex links: the ccw fan around each vertex must use all its corners.
  std::vector<int> corners(m.num_vertices(), 0);
  for (const Face& f : m.faces()) {
    for (int v : f) ++corners[v];
  }
  r.manifold = true;
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (static_cast<int>(m.outgoing(v).size()) != corners[v]) {
      r.manifold = false;
      r.failures.push_back("vertex " + std::to_string(v) + " link is not a single disk");
      break;
    }
  }

  // Projection: each face corner sits over the matching disk (and sphere)
  // vertex.
  const SurfaceMesh& disk = t.disk.mesh;
  const int nf = disk.num_faces();
  r.projection_consistent = true;
  for (int f = 0; f < m.num_faces(); ++f) {
    const Face& df = disk.face(t.face_source[f]);
    for (int k = 0; k < 3; ++k) {
      const int key = t.face_corner_key[f][k];
      if (t.key_vertex[key] != m.face(f)[k] ||
          std::find(df.begin(), df.end(), t.key_disk_vertex(key)) == df.end() ||
          t.face_copy[f] != t.key_copy(key) || t.face_source[f] != f % nf) {
        r.projection_consistent = false;
      }
    }
  }
  if (!r.projection_consistent) r.failures.push_back("face projection is inconsistent");

  std::map<int, BranchEntry> table;
  if (t.sphere) {
    const SphereProvenance& sp = *t.sphere;
    const SurfaceMesh& base = sp.sphere;
    std::vector<int> base_degree(base.num_vertices(), 0);
    for (const Face& f : base.faces()) {
      for (int v : f) ++base_degree[v];
    }
    std::vector<int> preimages(base.num_vertices(), 0);
    for (int v = 0; v < m.num_vertices(); ++v) {
      const int b = t.base_vertex(v);
      ++preimages[b];
      if (corners[v] % base_degree[b] != 0) {
        r.failures.push_back("torus vertex " + std::to_string(v) +
                             " does not wrap its base vertex a whole number of times");
        continue;
      }
      const int e = corners[v] / base_degree[b];
      r.ramification_sum += e - 1;
      std::string label;
      if (b == sp.apex) label = "pO";
      for (int j = 0; j < 3; ++j) {
        if (b == sp.leaves[j]) label = "L" + std::to_string(j);
      }
      if (label.empty() && e == 1) continue;
      BranchEntry& be = table[b];
      be.base_vertex = b;
      be.label = label;
      ++be.preimages;
      ++be.degree_counts[e];
    }
    // Unbranched vertices must have one preimage per sheet.
    for (int b = 0; b < base.num_vertices(); ++b) {
      if (table.count(b)) continue;
      if (preimages[b] != t.copy_count) {
        r.failures.push_back("base vertex " + std::to_string(b) + " has " +
                             std::to_string(preimages[b]) + " preimages, expected " +
                             std::to_string(t.copy_count));
      }
    }
    // Riemann-Hurwitz: 0 = k * chi(sphere) - sum (e - 1).
    if (r.ramification_sum != 2 * t.copy_count) {
      r.failures.push_back("ramification sum " + std::to_string(r.ramification_sum) +
                           " violates Riemann-Hurwitz (expected " +
                           std::to_string(2 * t.copy_count) + ")");
    }
  } else {
    // Folded copies of a disk: the copy corners meeting at a torus vertex
    // must close up to a full turn in the layout.
    for (int v = 0; v < m.num_vertices(); ++v) {
      double angle = 0.0;
      for (int key : t.vertex_keys[v]) {
        const int dv = t.key_disk_vertex(key);
        const auto mark = std::find(t.disk.marks.begin(), t.disk.marks.end(), dv);
        if (mark != t.disk.marks.end()) {
          angle += detail::layout_corner_angle(
              t, t.key_copy(key), static_cast<int>(mark - t.disk.marks.begin()));
        } else {
          angle += disk.is_boundary_vertex(dv) ? std::numbers::pi
                                               : 2.0 * std::numbers::pi;
        }
      }
      if (std::abs(angle - 2.0 * std::numbers::pi) > 1e-9) {
        r.failures.push_back("corner angles at torus vertex " + std::to_string(v) +
                             " do not add up to a full turn");
      }
      const int dv = t.key_disk_vertex(t.vertex_keys[v].front());
      const auto mark = std::find(t.disk.marks.begin(), t.disk.marks.end(), dv);
      if (mark == t.disk.marks.end()) continue;
      const int j = static_cast<int>(mark - t.disk.marks.begin());
      // Keyed by torus vertex: one mark may split into several classes.
      BranchEntry& be = table[v];
      be.base_vertex = dv;
      be.label = "v" + std::to_string(j);
      be.preimages = 1;
      ++be.degree_counts[static_cast<int>(t.vertex_keys[v].size())];
    }
  }
  for (auto& [key, be] : table) r.branch_table.push_back(be);
  return r;
}

}  // namespace torusparam
