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

// Single-copy solvers: marks pinned to the corners of a convex polygon,
// other boundary vertices sliding along the polygon sides, interior
// vertices free. The minimizer of the Dirichlet energy under these
// constraints is what one copy looks like inside the symmetric torus.

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "torusparam/analysis.hpp"
#include "torusparam/energy.hpp"
#include "torusparam/marked_disk.hpp"

namespace torusparam {

enum class ShapeKind { right_isosceles, equilateral, rectangle };

inline const char* to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::right_isosceles: return "isosceles";
    case ShapeKind::equilateral: return "equilateral";
    case ShapeKind::rectangle: return "rectangle";
  }
  return "?";
}

/** @brief Target polygon; side j runs from corner j to corner j+1 */
struct TargetShape {
  ShapeKind kind = ShapeKind::right_isosceles;
  std::vector<Vec2> corners;

  /// Legs 1/2 with the right angle at the third corner: one eighth of the
  /// unit square.
  static TargetShape right_isosceles() {
    return {ShapeKind::right_isosceles, {Vec2(0, 0), Vec2(0.5, 0.5), Vec2(0, 0.5)}};
  }
  /// Unit side.
  static TargetShape equilateral() {
    return {ShapeKind::equilateral,
            {Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2.0)}};
  }
  static TargetShape rectangle(double w = 1.0, double h = 1.0) {
    if (!(w > 0.0) || !(h > 0.0)) throw ConfigError("rectangle sides must be positive");
    return {ShapeKind::rectangle, {Vec2(0, 0), Vec2(w, 0), Vec2(w, h), Vec2(0, h)}};
  }

  int corner_count() const { return static_cast<int>(corners.size()); }
  double diameter() const {
    double d = 0.0;
    for (const Vec2& a : corners) {
      for (const Vec2& b : corners) d = std::max(d, (a - b).norm());
    }
    return d;
  }
};

struct DirectSolution {
  std::vector<Vec2> uv;
  double relative_residual = 0.0;
  int unknowns = 0;
};

/**
 * Minimize 1/4 sum_h share_h |uv_head - uv_tail|^2 with marks at the shape
 * corners and the remaining vertices of side j on the line of side j.
 * Side vertices carry one tangential unknown, interior vertices two.
 */
inline DirectSolution solve_direct(const MarkedDisk& d, const TargetShape& shape,
                                   const EdgeWeights& w) {
  detail::require_finite(w);
  if (d.mark_count() != shape.corner_count()) {
    throw ConfigError("shape has " + std::to_string(shape.corner_count()) +
                      " corners but the disk has " + std::to_string(d.mark_count()) +
                      " marks");
  }
  const SurfaceMesh& m = d.mesh;
  const int nv = m.num_vertices();

  // uv_v = base_v + sum_k coeff_k * z[col_k]
  struct Term {
    int col;
    Vec2 dir;
  };
  std::vector<Vec2> base(nv, Vec2::Zero());
  std::vector<std::vector<Term>> terms(nv);
  std::vector<char> fixed(nv, 0);
  int n = 0;
  for (int j = 0; j < d.mark_count(); ++j) {
    base[d.marks[j]] = shape.corners[j];
    fixed[d.marks[j]] = 1;
  }
  for (int j = 0; j < d.mark_count(); ++j) {
    const Vec2 a = shape.corners[j];
    const Vec2 dir = (shape.corners[(j + 1) % d.mark_count()] - a).normalized();
    const auto& side = d.sides[j];
    for (std::size_t i = 1; i + 1 < side.size(); ++i) {
      base[side[i]] = a;
      terms[side[i]].push_back({n++, dir});
      fixed[side[i]] = 1;
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (fixed[v]) continue;
    terms[v].push_back({n++, Vec2(1, 0)});
    terms[v].push_back({n++, Vec2(0, 1)});
  }

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int h = 0; h < m.num_halfedges(); ++h) {
    const int i = m.tail(h), j = m.head(h);
    // Gradient of s/4 |D z + delta|^2 is s/2 D^T (D z + delta).
    const double s = 0.5 * w.share[h];
    const Vec2 delta = base[j] - base[i];
    std::vector<std::pair<int, Vec2>> row;
    for (const Term& t : terms[j]) row.emplace_back(t.col, t.dir);
    for (const Term& t : terms[i]) row.emplace_back(t.col, -t.dir);
    for (const auto& [ca, ua] : row) {
      for (const auto& [cb, ub] : row) trips.emplace_back(ca, cb, s * ua.dot(ub));
      rhs[ca] -= s * ua.dot(delta);
    }
  }
  DirectSolution out;
  out.unknowns = n;
  out.uv = base;
  if (n == 0) return out;

  Eigen::SparseMatrix<double> q(n, n);
  q.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(q);
  if (ldlt.info() != Eigen::Success) {
    throw SolverError("direct system is singular");
  }
  const Eigen::VectorXd z = ldlt.solve(rhs);
  const double bn = rhs.norm();
  const double rn = (q * z - rhs).norm();
  out.relative_residual = bn > 0.0 ? rn / bn : rn;
  for (int v = 0; v < nv; ++v) {
    for (const Term& t : terms[v]) out.uv[v] += z[t.col] * t.dir;
  }
  return out;
}

/** @brief Direct solution against copy 0 of the corresponding torus */
struct CrosscheckReport {
  std::string construction;
  double rms_deviation = 0.0;
  double diameter = 0.0;
  double relative_rms = 0.0;
  Alignment alignment;
  double direct_energy = 0.0;
  double copy_energy = 0.0;  ///< energy of copy 0 inside the torus, rescaled
  double energy_relative_difference = 0.0;
  SolverStats torus_stats;
  double direct_residual = 0.0;

  bool passed(double rel_tol = 1e-7) const { return relative_rms <= rel_tol; }
};

/// Torus construction matching a target shape.
inline GluedTorus build_torus_for(const MarkedDisk& d, const TargetShape& shape) {
  switch (shape.kind) {
    case ShapeKind::right_isosceles: return build_torus_8(d);
    case ShapeKind::equilateral: return build_torus_42(d);
    case ShapeKind::rectangle: {
      const Vec2 size = shape.corners[2] - shape.corners[0];
      return build_torus_4(d, size.x(), size.y());
    }
  }
  throw ConfigError("unknown shape");
}

/**
 * Runs both pipelines and aligns copy 0 of the torus to the direct
 * solution: by a plane isometry (reflections allowed), or by a similarity
 * for the equilateral shape whose torus tile size is set by the lattice.
 */
inline CrosscheckReport crosscheck_against_torus(const MarkedDisk& d,
                                                 const TargetShape& shape,
                                                 WeightScheme scheme,
                                                 const SolverOptions& opt = {}) {
  const EdgeWeights dw = make_weights(d.mesh, scheme);
  const DirectSolution direct = solve_direct(d, shape, dw);

  const GluedTorus t = build_torus_for(d, shape);
  const EdgeWeights tw = make_weights(t.mesh, scheme);
  const TorusEmbedding emb = solve_glued_torus(t, tw, opt);
  const std::vector<Vec2> tile = copy_lift(t, emb, 0);

  CrosscheckReport r;
  r.construction = t.construction;
  r.torus_stats = emb.stats;
  r.direct_residual = direct.relative_residual;
  const bool similarity = shape.kind == ShapeKind::equilateral;
  r.alignment = procrustes(tile, direct.uv, true, similarity);
  r.rms_deviation = r.alignment.rms;
  r.diameter = shape.diameter();
  r.relative_rms = r.rms_deviation / r.diameter;
  r.direct_energy = dirichlet_energy(d.mesh, dw, direct.uv);
  // Scaling the plane by s scales the energy by s^2.
  const double copy0 = per_copy_energies(t, tw, emb)[0];
  r.copy_energy = copy0 * r.alignment.scale * r.alignment.scale;
  r.energy_relative_difference =
      std::abs(r.copy_energy - r.direct_energy) / std::max(r.direct_energy, 1e-300);
  return r;
}

}  // namespace torusparam
