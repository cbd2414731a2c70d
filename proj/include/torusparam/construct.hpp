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

// Builders for the four torus constructions. Each one only declares a
// GluingPlan (flips, side pairings, planar layout of the copies) and hands
// it to glue_copies, which checks the layout against the pairings.

#include <algorithm>
#include <map>

#include "torusparam/glue.hpp"
#include "torusparam/sphere_cut.hpp"

namespace torusparam {

/**
 * @brief Sublattice of the triangular lattice Z e1 + Z e2, given by two
 * integer generators in (e1, e2) coordinates, with a fixed list of coset
 * representatives. Representative 0 is the origin.
 */
class TriangularSublattice {
 public:
  using Ij = std::array<std::int64_t, 2>;

  TriangularSublattice(Ij g1, Ij g2) : g1_(g1), g2_(g2) {
    det_ = g1[0] * g2[1] - g1[1] * g2[0];
    if (det_ <= 0) throw ConfigError("sublattice generators must be ccw");
    std::vector<Ij> reps;
    const std::int64_t r = det_;
    for (std::int64_t a = -r; a <= r; ++a) {
      for (std::int64_t b = -r; b <= r; ++b) reps.push_back(reduce({a, b}));
    }
    std::sort(reps.begin(), reps.end(), [](const Ij& x, const Ij& y) {
      const bool x0 = x == Ij{0, 0}, y0 = y == Ij{0, 0};
      if (x0 != y0) return x0;
      return x < y;
    });
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    if (static_cast<std::int64_t>(reps.size()) != det_) {
      throw ConfigError("sublattice representative enumeration failed");
    }
    reps_ = std::move(reps);
    for (int i = 0; i < index(); ++i) lookup_[reps_[i]] = i;
  }

  static Vec2 e1() { return {1.0, 0.0}; }
  static Vec2 e2() { return {0.5, std::sqrt(3.0) / 2.0}; }
  static Vec2 point(const Ij& p) {
    return static_cast<double>(p[0]) * e1() + static_cast<double>(p[1]) * e2();
  }

  int index() const { return static_cast<int>(det_); }
  const Ij& rep(int i) const { return reps_[i]; }

  /// Canonical coset representative.
  Ij reduce(const Ij& p) const {
    // Coefficients of p in (g1, g2) are adj(G) p / det.
    const std::int64_t c1 = g2_[1] * p[0] - g2_[0] * p[1];
    const std::int64_t c2 = -g1_[1] * p[0] + g1_[0] * p[1];
    const std::int64_t k1 = floor_div(c1, det_), k2 = floor_div(c2, det_);
    return {p[0] - k1 * g1_[0] - k2 * g2_[0], p[1] - k1 * g1_[1] - k2 * g2_[1]};
  }
  int index_of(const Ij& p) const { return lookup_.at(reduce(p)); }

  Lattice real_lattice() const { return {point(g1_), point(g2_)}; }

 private:
  static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }

  Ij g1_, g2_;
  std::int64_t det_ = 0;
  std::vector<Ij> reps_;
  std::map<Ij, int> lookup_;
};

namespace detail {

/// Corner i of the regular hexagon of the triangular-lattice Voronoi tiling
/// around `center`, at angle 30 + 60 i degrees.
inline Vec2 hex_corner(const Vec2& center, int i) {
  const double a = std::numbers::pi / 6.0 + std::numbers::pi / 3.0 * i;
  return center + Vec2(std::cos(a), std::sin(a)) / std::sqrt(3.0);
}

/// Neighboring hexagon center in direction 60 d degrees; the shared side
/// joins corners d-1 and d.
inline TriangularSublattice::Ij hex_neighbor(int d) {
  static constexpr std::array<TriangularSublattice::Ij, 6> n{
      {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
  return n[((d % 6) + 6) % 6];
}

inline TriangularSublattice::Ij add(const TriangularSublattice::Ij& a,
                                    const TriangularSublattice::Ij& b) {
  return {a[0] + b[0], a[1] + b[1]};
}

inline void require_marks(const MarkedDisk& disk, int k, const char* what) {
  if (disk.mark_count() != k) {
    throw ConfigError(std::string(what) + " needs " + std::to_string(k) +
                      " marks, got " + std::to_string(disk.mark_count()));
  }
}

}  // namespace detail

/**
 * Eight copies of a triangle with marks v0, v1, v2, glued so that the
 * planar layout covers the unit square with v1 at its center. Copies with
 * even 1-based index are flipped.
 */
inline GluedTorus build_torus_8(const MarkedDisk& disk) {
  detail::require_marks(disk, 3, "8-copy construction");
  GluingPlan p;
  p.construction = "tri8";
  p.copy_count = 8;
  for (int c = 0; c < 8; ++c) p.flipped.push_back(c % 2 == 1);
  const Vec2 mid(0.5, 0.5);
  p.layout_corners = {
      {Vec2(0, 0), mid, Vec2(0, 0.5)}, {Vec2(0, 0), mid, Vec2(0.5, 0)},
      {Vec2(1, 0), mid, Vec2(0.5, 0)}, {Vec2(1, 0), mid, Vec2(1, 0.5)},
      {Vec2(1, 1), mid, Vec2(1, 0.5)}, {Vec2(1, 1), mid, Vec2(0.5, 1)},
      {Vec2(0, 1), mid, Vec2(0.5, 1)}, {Vec2(0, 1), mid, Vec2(0, 0.5)}};
  // 1-based copy pairs per side.
  static constexpr int pairs[3][4][2] = {
      {{1, 2}, {3, 4}, {5, 6}, {7, 8}},
      {{1, 8}, {2, 3}, {4, 5}, {6, 7}},
      {{1, 4}, {2, 7}, {3, 6}, {5, 8}}};
  for (int side = 0; side < 3; ++side) {
    for (const auto& q : pairs[side]) {
      p.glues.push_back({q[0] - 1, side, q[1] - 1, side, false, {}});
    }
  }
  p.layout_lattice = Lattice::unit_square();
  p.target_lattice = Lattice::unit_square();
  return glue_copies(disk, std::move(p));
}

/**
 * Four copies of a quadrilateral with marks v0..v3 laid out as a 2 x 2
 * arrangement of w x h rectangles; two of them are flipped.
 */
inline GluedTorus build_torus_4(const MarkedDisk& disk, double w = 1.0,
                                double h = 1.0) {
  detail::require_marks(disk, 4, "4-copy construction");
  if (!(w > 0.0) || !(h > 0.0)) {
    throw ConfigError("rectangle sides must be positive");
  }
  GluingPlan p;
  p.construction = "quad4";
  p.copy_count = 4;
  p.flipped = {0, 1, 0, 1};
  p.layout_corners = {
      {Vec2(0, 0), Vec2(w, 0), Vec2(w, h), Vec2(0, h)},
      {Vec2(2 * w, 0), Vec2(w, 0), Vec2(w, h), Vec2(2 * w, h)},
      {Vec2(2 * w, 2 * h), Vec2(w, 2 * h), Vec2(w, h), Vec2(2 * w, h)},
      {Vec2(0, 2 * h), Vec2(w, 2 * h), Vec2(w, h), Vec2(0, h)}};
  constexpr int A = 0, B = 1, D = 2, C = 3;
  for (auto [a, b, s] : {std::tuple{A, B, 1}, std::tuple{A, B, 3},
                         std::tuple{A, C, 2}, std::tuple{A, C, 0},
                         std::tuple{B, D, 2}, std::tuple{B, D, 0},
                         std::tuple{C, D, 1}, std::tuple{C, D, 3}}) {
    p.glues.push_back({a, s, b, s, false, {}});
  }
  p.layout_lattice = Lattice::rectangle(2 * w, 2 * h);
  p.target_lattice = p.layout_lattice;
  return glue_copies(disk, std::move(p));
}

/// Index-7 sublattice used by the 42-copy construction.
inline TriangularSublattice sublattice_7() { return {{2, 1}, {-1, 3}}; }
/// Index-63 sublattice used by the 63-copy construction.
inline TriangularSublattice sublattice_63() { return {{6, 3}, {-3, 9}}; }

/**
 * 42 copies of a triangle with marks v0, v1, v2: the six triangles of each
 * of the 7 hexagons of the hexagonal tiling modulo an index-7 sublattice.
 * v0 sits at the hexagon center. Copy 6 H + j is triangle m = (j + 1) % 6 of
 * hexagon H, spanning the center and corners m, m+1; it is flipped when m
 * is even.
 */
inline GluedTorus build_torus_42(const MarkedDisk& disk) {
  detail::require_marks(disk, 3, "42-copy construction");
  const TriangularSublattice lat = sublattice_7();
  GluingPlan p;
  p.construction = "tri42";
  p.copy_count = 42;
  auto copy_of = [](int hex, int m) { return 6 * hex + (m + 5) % 6; };
  p.flipped.resize(42);
  p.layout_corners.resize(42);
  for (int hex = 0; hex < 7; ++hex) {
    const Vec2 c = TriangularSublattice::point(lat.rep(hex));
    for (int m = 0; m < 6; ++m) {
      const int cp = copy_of(hex, m);
      const bool odd = m % 2 == 1;
      p.flipped[cp] = !odd;
      const Vec2 a = detail::hex_corner(c, m), b = detail::hex_corner(c, m + 1);
      p.layout_corners[cp] = odd ? std::vector<Vec2>{c, a, b}
                                 : std::vector<Vec2>{c, b, a};
    }
  }
  for (int hex = 0; hex < 7; ++hex) {
    for (int m = 0; m < 6; ++m) {
      // Radial side shared with triangle m+1, through corner m+1.
      const int side = (m + 1) % 2 == 1 ? 0 : 2;
      p.glues.push_back(
          {copy_of(hex, m), side, copy_of(hex, (m + 1) % 6), side, false, {}});
    }
    for (int m = 0; m < 3; ++m) {
      const int other = lat.index_of(
          detail::add(lat.rep(hex), detail::hex_neighbor(m + 1)));
      p.glues.push_back(
          {copy_of(hex, m), 1, copy_of(other, m + 3), 1, false, {}});
    }
  }
  p.layout_lattice = lat.real_lattice();
  p.target_lattice = Lattice::rhombic();
  return glue_copies(disk, std::move(p));
}

/**
 * 63 copies of a sphere with an order-3 rotation, cut open along three
 * symmetric paths into a hexagon. The copies tile the hexagonal tiling
 * modulo an index-63 sublattice; the resulting torus is a 63-fold
 * branched cover of the sphere.
 */
inline GluedTorus build_torus_63(const SphereCutSystem& cuts) {
  validate(cuts);
  CutDisk cut = cut_along_star(cuts);
  const TriangularSublattice lat = sublattice_63();

  GluingPlan p;
  p.construction = "sphere63";
  p.copy_count = lat.index();
  p.flipped.assign(p.copy_count, 0);
  p.layout_corners.resize(p.copy_count);
  auto offset = [](const TriangularSublattice::Ij& ab) {
    return static_cast<int>((((4 * ab[0] + 2 * ab[1]) % 6) + 6) % 6);
  };
  for (int hex = 0; hex < p.copy_count; ++hex) {
    const Vec2 c = TriangularSublattice::point(lat.rep(hex));
    const int r = offset(lat.rep(hex));
    for (int s = 0; s < 6; ++s) {
      // Mark s starts hexagon side (s - r), i.e. sits at corner s - r - 1.
      p.layout_corners[hex].push_back(detail::hex_corner(c, s - r + 5));
    }
  }
  for (int hex = 0; hex < p.copy_count; ++hex) {
    const int r = offset(lat.rep(hex));
    for (int d = 0; d < 3; ++d) {
      const auto nb = detail::add(lat.rep(hex), detail::hex_neighbor(d));
      const int other = lat.index_of(nb);
      const int label = (d + r) % 6;
      const int other_label = (d + 3 + offset(nb)) % 6;
      if (other_label != (label ^ 1)) {
        throw ConfigError("inconsistent side labels in 63-copy layout");
      }
      p.glues.push_back({hex, label, other, other_label, true, {}});
    }
  }
  p.layout_lattice = lat.real_lattice();
  p.target_lattice = Lattice::rhombic();

  GluedTorus t = glue_copies(cut.disk, std::move(p));
  SphereProvenance sp;
  sp.sphere = cuts.mesh;
  sp.disk_to_sphere = cut.to_sphere;
  sp.apex = cuts.apex;
  for (int j = 0; j < 3; ++j) sp.leaves[j] = cuts.leaf(j);
  sp.sigma = cuts.sigma;
  // sigma advances paths 0 -> 1 -> 2; the boundary visits them in the order
  // side_path, which decides the turning direction in the plane.
  sp.rotation_sign = cut.side_path[1] == (cut.side_path[0] + 1) % 3 ? 1 : -1;
  t.sphere = std::move(sp);
  return t;
}

}  // namespace torusparam
