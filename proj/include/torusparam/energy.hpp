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

#include <limits>
#include <string>
#include <vector>

#include "torusparam/mesh.hpp"

namespace torusparam {

enum class WeightScheme { cotangent, uniform };

inline const char* to_string(WeightScheme s) {
  return s == WeightScheme::cotangent ? "cotan" : "uniform";
}

/**
 * @brief Edge weights stored as per-face shares.
 *
 * Each halfedge carries the share its face contributes to the edge weight:
 * the cotangent of the angle opposite the halfedge for the cotangent
 * scheme, 1/2 for the uniform scheme. The weight of an edge is the sum over
 * its (one or two) halfedges, so interior cotangent weights are
 * cot(alpha) + cot(beta) and uniform weights are 1 on every interior edge.
 * A boundary edge keeps only one share. Glued complexes add the shares of
 * the copies meeting at an edge, which is what the Dirichlet energy of the
 * glued surface requires.
 */
struct EdgeWeights {
  WeightScheme scheme = WeightScheme::cotangent;
  std::vector<double> share;   ///< per halfedge
  std::vector<double> weight;  ///< per edge
  /// Faces whose cotangents were replaced by the +inf sentinel.
  std::vector<int> degenerate_faces;

  bool has_sentinel() const { return !degenerate_faces.empty(); }
  double operator[](int e) const { return weight[e]; }
};

namespace detail {

inline void accumulate_edge_weights(const SurfaceMesh& mesh, EdgeWeights& w) {
  w.weight.assign(mesh.num_edges(), 0.0);
  for (int h = 0; h < mesh.num_halfedges(); ++h) {
    w.weight[mesh.edge(h)] += w.share[h];
  }
}

}  // namespace detail

/// cot of the angle between a and b, or +inf when |a x b| is negligible.
inline double cotangent(const Vec3& a, const Vec3& b) {
  const double sin_part = a.cross(b).norm();
  if (sin_part < 1e-14 * a.norm() * b.norm() || sin_part == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return a.dot(b) / sin_part;
}

/// Cotangent weights from the 3D embedding of the mesh.
inline EdgeWeights cotan_weights(const SurfaceMesh& mesh) {
  EdgeWeights w;
  w.scheme = WeightScheme::cotangent;
  w.share.assign(mesh.num_halfedges(), 0.0);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& t = mesh.face(f);
    bool degenerate = false;
    for (int k = 0; k < 3; ++k) {
      // Halfedge k runs t[k] -> t[k+1]; the opposite corner is t[k+2].
      const Vec3& o = mesh.position(t[(k + 2) % 3]);
      const double c = cotangent(mesh.position(t[k]) - o,
                                 mesh.position(t[(k + 1) % 3]) - o);
      if (std::isinf(c)) degenerate = true;
      w.share[3 * f + k] = c;
    }
    if (degenerate) {
      for (int k = 0; k < 3; ++k) {
        w.share[3 * f + k] = std::numeric_limits<double>::infinity();
      }
      w.degenerate_faces.push_back(f);
    }
  }
  detail::accumulate_edge_weights(mesh, w);
  return w;
}

inline EdgeWeights uniform_weights(const SurfaceMesh& mesh) {
  EdgeWeights w;
  w.scheme = WeightScheme::uniform;
  w.share.assign(mesh.num_halfedges(), 0.5);
  detail::accumulate_edge_weights(mesh, w);
  return w;
}

inline EdgeWeights make_weights(const SurfaceMesh& mesh, WeightScheme s) {
  return s == WeightScheme::cotangent ? cotan_weights(mesh)
                                      : uniform_weights(mesh);
}

struct PositivityReport {
  int negative_edge_count = 0;
  double min_weight = std::numeric_limits<double>::infinity();
  double min_interior_weight = std::numeric_limits<double>::infinity();
  int sentinel_count = 0;

  bool all_positive() const {
    return negative_edge_count == 0 && sentinel_count == 0;
  }
};

inline PositivityReport weight_positivity_report(const SurfaceMesh& mesh,
                                                 const EdgeWeights& w) {
  PositivityReport r;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const double x = w.weight[e];
    if (std::isinf(x)) {
      ++r.sentinel_count;
      continue;
    }
    if (x < 0.0) ++r.negative_edge_count;
    r.min_weight = std::min(r.min_weight, x);
    if (!mesh.is_boundary_edge(e)) {
      r.min_interior_weight = std::min(r.min_interior_weight, x);
    }
  }
  return r;
}

namespace detail {

inline void require_finite(const EdgeWeights& w) {
  if (w.has_sentinel()) {
    throw ConfigError("weights contain degenerate-face sentinels (" +
                      std::to_string(w.degenerate_faces.size()) +
                      " faces); use uniform weights or repair the mesh");
  }
}

}  // namespace detail

/**
 * Simplicial Dirichlet energy 1/4 * sum_e w_e |uv_i - uv_j|^2 of a
 * plane-valued map. With cotangent weights this is the sum over faces of
 * the continuous Dirichlet energy of the per-face affine map.
 */
inline double dirichlet_energy(const SurfaceMesh& mesh, const EdgeWeights& w,
                               const std::vector<Vec2>& uv) {
  detail::require_finite(w);
  if (static_cast<int>(uv.size()) != mesh.num_vertices()) {
    throw ConfigError("uv count does not match vertex count");
  }
  double e = 0.0;
  for (int h = 0; h < mesh.num_halfedges(); ++h) {
    e += w.share[h] * (uv[mesh.head(h)] - uv[mesh.tail(h)]).squaredNorm();
  }
  return 0.25 * e;
}

inline double signed_image_area(const SurfaceMesh& mesh,
                                const std::vector<Vec2>& uv) {
  double a = 0.0;
  for (const Face& f : mesh.faces()) a += signed_area(uv[f[0]], uv[f[1]], uv[f[2]]);
  return a;
}

/**
 * Conformal (LSCM) energy: Dirichlet energy minus the signed image area.
 * Nonnegative for orientation-preserving maps, zero exactly when every face
 * map is a similarity. Requires cotangent weights.
 */
inline double conformal_energy(const SurfaceMesh& mesh, const EdgeWeights& w,
                               const std::vector<Vec2>& uv) {
  if (w.scheme != WeightScheme::cotangent) {
    throw ConfigError("conformal energy needs cotangent weights");
  }
  return dirichlet_energy(mesh, w, uv) - signed_image_area(mesh, uv);
}

}  // namespace torusparam
