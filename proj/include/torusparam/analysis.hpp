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

// Checks run on a solved torus: per-copy tiles, symmetry residuals, energy
// accounting and flips.

#include <Eigen/SVD>
#include <optional>
#include <queue>

#include "torusparam/construct.hpp"
#include "torusparam/torus_solve.hpp"

namespace torusparam {

/**
 * Planar image of one copy, indexed by disk vertex. Faces of the copy are
 * unfolded from its first face using the jump-corrected displacements, so
 * the result is a single connected planar patch.
 */
inline std::vector<Vec2> copy_lift(const GluedTorus& t, const TorusEmbedding& emb,
                                   int copy) {
  const SurfaceMesh& m = t.mesh;
  const int nf = t.disk.mesh.num_faces();
  const int first = copy * nf;
  std::vector<Vec2> pos(t.disk_vertex_count());
  std::vector<char> placed(pos.size(), 0);
  std::vector<char> seen(nf, 0);
  auto dv = [&](int f, int k) { return t.key_disk_vertex(t.face_corner_key[f][k]); };

  std::queue<int> q;
  q.push(first);
  seen[0] = 1;
  while (!q.empty()) {
    const int f = q.front();
    q.pop();
    const std::array<Vec2, 3> uv = emb.face_uv(m, f);
    Vec2 offset = Vec2::Zero();
    for (int k = 0; k < 3; ++k) {
      if (placed[dv(f, k)]) {
        offset = pos[dv(f, k)] - uv[k];
        break;
      }
    }
    for (int k = 0; k < 3; ++k) {
      if (!placed[dv(f, k)]) {
        pos[dv(f, k)] = uv[k] + offset;
        placed[dv(f, k)] = 1;
      }
    }
    for (int k = 0; k < 3; ++k) {
      const int g = SurfaceMesh::face_of(m.twin(3 * f + k));
      if (t.face_copy[g] != copy || seen[g - first]) continue;
      seen[g - first] = 1;
      q.push(g);
    }
  }
  return pos;
}

/// Number of faces with non-positive signed area in the plane.
inline int flip_count(const SurfaceMesh& m, const std::vector<Vec2>& uv) {
  int n = 0;
  for (const Face& f : m.faces()) {
    if (signed_area(uv[f[0]], uv[f[1]], uv[f[2]]) <= 0.0) ++n;
  }
  return n;
}

inline int flip_count(const SurfaceMesh& m, const TorusEmbedding& emb) {
  int n = 0;
  for (int f = 0; f < m.num_faces(); ++f) {
    const auto p = emb.face_uv(m, f);
    if (signed_area(p[0], p[1], p[2]) <= 0.0) ++n;
  }
  return n;
}

/// Dirichlet energy of each copy inside the torus.
inline std::vector<double> per_copy_energies(const GluedTorus& t,
                                             const EdgeWeights& w,
                                             const TorusEmbedding& emb) {
  detail::require_finite(w);
  std::vector<double> e(t.copy_count, 0.0);
  for (int h = 0; h < t.mesh.num_halfedges(); ++h) {
    e[t.face_copy[SurfaceMesh::face_of(h)]] +=
        0.25 * w.share[h] * emb.displacement(t.mesh, h).squaredNorm();
  }
  return e;
}

/// (max - min) / mean, or 0 for an empty or zero list.
inline double relative_spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  return mean == 0.0 ? 0.0 : (*hi - *lo) / std::abs(mean);
}

/** @brief Best map q ~ s R p + t between corresponding point sets */
struct Alignment {
  Mat2 rotation = Mat2::Identity();  ///< orthogonal; det -1 if reflected
  double scale = 1.0;
  Vec2 translation = Vec2::Zero();
  double rms = 0.0;
  bool reflected = false;

  Vec2 apply(const Vec2& p) const { return scale * rotation * p + translation; }
};

/**
 * Least-squares orthogonal (optionally reflecting, optionally scaled)
 * alignment of p onto q.
 */
inline Alignment procrustes(const std::vector<Vec2>& p, const std::vector<Vec2>& q,
                            bool allow_reflection, bool allow_scale) {
  if (p.size() != q.size() || p.empty()) {
    throw ConfigError("procrustes needs two nonempty lists of equal size");
  }
  const double n = static_cast<double>(p.size());
  Vec2 cp = Vec2::Zero(), cq = Vec2::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    cp += p[i];
    cq += q[i];
  }
  cp /= n;
  cq /= n;
  Mat2 cov = Mat2::Zero();
  double var_p = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cov += (q[i] - cq) * (p[i] - cp).transpose();
    var_p += (p[i] - cp).squaredNorm();
  }
  Eigen::JacobiSVD<Mat2> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat2 d = Mat2::Identity();
  const bool det_negative = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0;
  if (det_negative && !allow_reflection) d(1, 1) = -1.0;
  Alignment a;
  a.rotation = svd.matrixU() * d * svd.matrixV().transpose();
  a.reflected = a.rotation.determinant() < 0;
  if (allow_scale && var_p > 0.0) {
    a.scale = (svd.singularValues().asDiagonal() * d).trace() / var_p;
  }
  a.translation = cq - a.scale * a.rotation * cp;
  double err = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    err += (a.apply(p[i]) - q[i]).squaredNorm();
  }
  a.rms = std::sqrt(err / n);
  return a;
}

/** @brief Residual of one tested symmetry */
struct SymmetryCheck {
  std::string name;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SymmetryReport {
  std::vector<SymmetryCheck> checks;

  bool all_passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(),
                       [](const SymmetryCheck& c) { return c.passed; });
  }
  double max_residual() const {
    double r = 0.0;
    for (const auto& c : checks) r = std::max(r, c.max_residual);
    return r;
  }
};

namespace detail {

inline SymmetryCheck finish_check(std::string name, const std::vector<double>& r,
                                  double tol) {
  SymmetryCheck c;
  c.name = std::move(name);
  c.tolerance = tol;
  for (double x : r) {
    c.max_residual = std::max(c.max_residual, x);
    c.mean_residual += x;
  }
  if (!r.empty()) c.mean_residual /= static_cast<double>(r.size());
  c.passed = !r.empty() && c.max_residual <= tol;
  return c;
}

}  // namespace detail

/**
 * @brief A symmetry of the copy layout: p -> M p + c maps the marked
 * corners of copy i onto those of copy perm[i], modulo the layout lattice.
 */
struct LayoutSymmetry {
  Mat2 linear = Mat2::Identity();
  Vec2 offset = Vec2::Zero();
  std::vector<int> perm;
};

/// Copy permutation realized by the layout map p -> M p + c, if any.
inline std::optional<LayoutSymmetry> find_layout_symmetry(const GluedTorus& t,
                                                          const Mat2& m) {
  const auto& lc = t.layout_corners;
  const int k = t.copy_count;
  const int marks = t.disk.mark_count();
  for (int j = 0; j < k; ++j) {
    const Vec2 c = lc[j][0] - m * lc[0][0];
    LayoutSymmetry s{m, c, std::vector<int>(k, -1)};
    std::vector<char> hit(k, 0);
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      for (int target = 0; target < k; ++target) {
        // Same lattice translate for every mark.
        const Vec2 d0 = lc[target][0] - (m * lc[i][0] + c);
        bool exact = false;
        t.layout_lattice.round(d0, &exact, 1e-9);
        if (!exact) continue;
        bool all = true;
        for (int mk = 1; mk < marks && all; ++mk) {
          const Vec2 d = lc[target][mk] - (m * lc[i][mk] + c);
          all = (d - d0).norm() < 1e-9;
        }
        if (all && !hit[target]) {
          s.perm[i] = target;
          hit[target] = 1;
          break;
        }
      }
      ok = s.perm[i] >= 0;
    }
    if (ok) return s;
  }
  return std::nullopt;
}

/**
 * Residuals of Phi(S v) against R(Phi(v)) over all torus vertices, where S
 * permutes copies as the layout symmetry does and R is the same symmetry
 * in target coordinates. Distances are taken modulo the target lattice.
 */
inline std::vector<double> layout_symmetry_residuals(const GluedTorus& t,
                                                     const TorusEmbedding& emb,
                                                     const LayoutSymmetry& s) {
  const Mat2 w = t.layout_to_target();
  const Mat2 a = w * s.linear * w.inverse();
  // Phi sends the layout corner of the pin to its lift; fix the translation
  // of R from that correspondence.
  const Vec2 pin_layout = t.layout_corners[0][0];
  const Vec2 base = emb.lift[t.default_pin()] - w * pin_layout;
  auto to_target = [&](const Vec2& p) { return w * p + base; };
  std::vector<double> r;
  for (int v = 0; v < t.mesh.num_vertices(); ++v) {
    const int key = t.vertex_keys[v].front();
    const int image = t.torus_vertex(s.perm[t.key_copy(key)], t.key_disk_vertex(key));
    // R(x) = A (x - to_target(0)) + to_target(c), as a map of the plane.
    const Vec2 mapped = a * (emb.lift[v] - to_target(Vec2::Zero())) +
                        to_target(s.offset);
    r.push_back(emb.lattice.mod_distance(mapped, emb.lift[image]));
  }
  return r;
}

/**
 * Four reflections of the square torus built from 8 copies: about the
 * horizontal, vertical, diagonal and antidiagonal directions. Tolerance is
 * relative to the target diameter.
 */
inline SymmetryReport check_reflections_8(const GluedTorus& t,
                                          const TorusEmbedding& emb,
                                          double rel_tol = 1e-8) {
  if (t.construction != "tri8") {
    throw ConfigError("reflection check needs the 8-copy construction");
  }
  const double tol = rel_tol * std::sqrt(2.0);
  const std::array<std::pair<const char*, Mat2>, 4> refl{{
      {"horizontal", (Mat2() << 1, 0, 0, -1).finished()},
      {"vertical", (Mat2() << -1, 0, 0, 1).finished()},
      {"diagonal", (Mat2() << 0, 1, 1, 0).finished()},
      {"antidiagonal", (Mat2() << 0, -1, -1, 0).finished()},
  }};
  SymmetryReport rep;
  for (const auto& [name, m] : refl) {
    const auto s = find_layout_symmetry(t, m);
    if (!s) throw ConfigError(std::string("layout lacks the ") + name + " reflection");
    rep.checks.push_back(
        detail::finish_check(name, layout_symmetry_residuals(t, emb, *s), tol));
  }
  return rep;
}

/// Disk vertex permutation induced by sigma on a sphere cut along a star.
inline std::vector<int> disk_sigma(const GluedTorus& t) {
  if (!t.sphere) throw ConfigError("torus was not built from a sphere");
  const SphereProvenance& sp = *t.sphere;
  const SurfaceMesh& disk = t.disk.mesh;
  const std::vector<int> face_map =
      detail::check_order3_automorphism(sp.sphere, sp.sigma);
  std::vector<int> out(disk.num_vertices(), -1);
  for (int f = 0; f < disk.num_faces(); ++f) {
    const Face& df = disk.face(f);
    const Face& target = disk.face(face_map[f]);
    for (int k = 0; k < 3; ++k) {
      const int image = sp.sigma[sp.disk_to_sphere[df[k]]];
      for (int l = 0; l < 3; ++l) {
        if (sp.disk_to_sphere[target[l]] == image) {
          if (out[df[k]] >= 0 && out[df[k]] != target[l]) {
            throw TopologyError("sigma does not act on the cut disk");
          }
          out[df[k]] = target[l];
        }
      }
    }
  }
  return out;
}

/**
 * Each tile of the 63-copy torus is mapped onto itself by sigma, which
 * must act on its image as a rotation by 2 pi / 3. The center is fitted per
 * tile by least squares.
 */
inline SymmetryReport check_rotation_63(const GluedTorus& t,
                                        const TorusEmbedding& emb,
                                        double rel_tol = 1e-8) {
  if (t.construction != "sphere63" || !t.sphere) {
    throw ConfigError("rotation check needs the 63-copy construction");
  }
  const std::vector<int> sigma = disk_sigma(t);
  const Mat2 rot = rotation2(t.sphere->rotation_sign * 2.0 * std::numbers::pi / 3.0);
  const double diameter =
      std::max(emb.lattice.v1().norm(), emb.lattice.v2().norm());
  const Mat2 i_minus_r_inv = (Mat2::Identity() - rot).inverse();
  std::vector<double> r;
  for (int c = 0; c < t.copy_count; ++c) {
    const std::vector<Vec2> p = copy_lift(t, emb, c);
    Vec2 mean = Vec2::Zero();
    for (std::size_t v = 0; v < p.size(); ++v) mean += p[sigma[v]] - rot * p[v];
    mean /= static_cast<double>(p.size());
    const Vec2 center = i_minus_r_inv * mean;
    for (std::size_t v = 0; v < p.size(); ++v) {
      const Vec2 q = rot * (p[v] - center) + center;
      r.push_back((q - p[sigma[v]]).norm());
    }
  }
  SymmetryReport rep;
  rep.checks.push_back(detail::finish_check("rotation", r, rel_tol * diameter));
  return rep;
}

/** @brief Per-copy planar tiles and the checks run on them */
struct TileExtraction {
  std::vector<std::vector<Vec2>> tiles;  ///< per copy, per disk vertex
  std::vector<double> areas;
  std::vector<Vec2> centroids;
  std::vector<int> tile_class;  ///< copies with equal layout linear part
  double total_area = 0.0;
  double lattice_area = 0.0;
  double area_error = 0.0;      ///< relative
  /// Worst RMS of a tile against copy 0 moved by the layout isometry.
  double congruence_rms = 0.0;

  bool passed(double area_tol = 1e-8, double rms_tol = 1e-8) const {
    return area_error <= area_tol && congruence_rms <= rms_tol;
  }
};

/**
 * Extracts all tiles, checks that their areas add up to the fundamental
 * domain, and compares every tile with tile 0 under the isometry the
 * layout prescribes between the two copies (with a fitted translation).
 */
inline TileExtraction check_tiling(const GluedTorus& t, const TorusEmbedding& emb) {
  TileExtraction x;
  const SurfaceMesh& disk = t.disk.mesh;
  const Mat2 w = t.layout_to_target();
  const auto& lc = t.layout_corners;
  std::vector<Mat2> classes;
  for (int c = 0; c < t.copy_count; ++c) {
    std::vector<Vec2> p = copy_lift(t, emb, c);
    double raw = 0.0;
    Vec2 moment = Vec2::Zero();
    for (const Face& f : disk.faces()) {
      const double a = signed_area(p[f[0]], p[f[1]], p[f[2]]);
      raw += a;
      moment += a * (p[f[0]] + p[f[1]] + p[f[2]]) / 3.0;
    }
    // Flipped copies traverse the disk faces in reverse.
    const double area = t.flipped[c] ? -raw : raw;
    x.areas.push_back(area);
    x.centroids.push_back(raw != 0.0 ? Vec2(moment / raw) : Vec2::Zero());
    x.total_area += area;

    // Linear part of the layout map from copy 0 to copy c.
    std::vector<Vec2> from(lc[0].begin(), lc[0].end());
    std::vector<Vec2> to(lc[c].begin(), lc[c].end());
    const Alignment la = procrustes(from, to, true, false);
    const Mat2 lin = la.rotation;
    int cls = -1;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if ((classes[i] - lin).norm() < 1e-9) cls = static_cast<int>(i);
    }
    if (cls < 0) {
      cls = static_cast<int>(classes.size());
      classes.push_back(lin);
    }
    x.tile_class.push_back(cls);
    x.tiles.push_back(std::move(p));
  }
  x.lattice_area = emb.lattice.area();
  x.area_error = std::abs(x.total_area - x.lattice_area) / x.lattice_area;

  const std::vector<Vec2>& p0 = x.tiles[0];
  for (int c = 0; c < t.copy_count; ++c) {
    const Mat2 a = w * classes[x.tile_class[c]] * w.inverse();
    Vec2 shift = Vec2::Zero();
    for (std::size_t v = 0; v < p0.size(); ++v) shift += x.tiles[c][v] - a * p0[v];
    shift /= static_cast<double>(p0.size());
    double err = 0.0;
    for (std::size_t v = 0; v < p0.size(); ++v) {
      err += (a * p0[v] + shift - x.tiles[c][v]).squaredNorm();
    }
    x.congruence_rms =
        std::max(x.congruence_rms, std::sqrt(err / static_cast<double>(p0.size())));
  }
  return x;
}

/**
 * 42-copy case: the six tiles of each hexagon, unfolded around their common
 * center, against those of hexagon 0. Returns the worst RMS after a fitted
 * translation.
 */
inline double hexagon_group_rms(const GluedTorus& t, const TorusEmbedding& emb) {
  if (t.construction != "tri42") {
    throw ConfigError("hexagon groups exist only in the 42-copy construction");
  }
  const int center = t.disk.marks[0];
  auto group = [&](int hex) {
    std::vector<Vec2> pts;
    Vec2 anchor = Vec2::Zero();
    for (int j = 0; j < 6; ++j) {
      std::vector<Vec2> p = copy_lift(t, emb, 6 * hex + j);
      // Bring every copy to the same lattice translate of the center.
      Vec2 d = Vec2::Zero();
      if (j == 0) {
        anchor = p[center];
      } else {
        d = emb.lattice.at(emb.lattice.round(anchor - p[center]));
      }
      for (const Vec2& q : p) pts.push_back(q + d);
    }
    return pts;
  };
  const std::vector<Vec2> g0 = group(0);
  double worst = 0.0;
  for (int hex = 1; hex < 7; ++hex) {
    const std::vector<Vec2> g = group(hex);
    Vec2 shift = Vec2::Zero();
    for (std::size_t i = 0; i < g.size(); ++i) shift += g[i] - g0[i];
    shift /= static_cast<double>(g.size());
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      err += (g0[i] + shift - g[i]).squaredNorm();
    }
    worst = std::max(worst, std::sqrt(err / static_cast<double>(g.size())));
  }
  return worst;
}

/// Largest relative deviation of a tile's mark-to-mark distances from
/// their mean (0 for a regular polygon of marks).
inline double mark_polygon_irregularity(const GluedTorus& t,
                                        const std::vector<Vec2>& tile) {
  const auto& marks = t.disk.marks;
  std::vector<double> len;
  for (std::size_t j = 0; j < marks.size(); ++j) {
    len.push_back((tile[marks[(j + 1) % marks.size()]] - tile[marks[j]]).norm());
  }
  double mean = 0.0;
  for (double l : len) mean += l;
  mean /= static_cast<double>(len.size());
  double worst = 0.0;
  for (double l : len) worst = std::max(worst, std::abs(l - mean) / mean);
  return worst;
}

/// Largest distance of a side's vertices from the line through its two
/// marks, over all sides of the tile.
inline double side_straightness(const GluedTorus& t, const std::vector<Vec2>& tile) {
  double worst = 0.0;
  for (const auto& side : t.disk.sides) {
    const Vec2 a = tile[side.front()], b = tile[side.back()];
    const Vec2 d = (b - a).normalized();
    for (int v : side) {
      worst = std::max(worst, std::abs(cross2(d, tile[v] - a)));
    }
  }
  return worst;
}

}  // namespace torusparam
