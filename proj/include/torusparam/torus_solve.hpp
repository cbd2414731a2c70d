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

// Harmonic maps from a triangulated torus to a flat torus R^2 / L.
//
// The map is stored as one planar lift per vertex plus an integer lattice
// jump per halfedge: the image of halfedge i -> j runs from x_i to
// x_j + J(i -> j). Jumps form a closed integer 1-cochain whose periods fix
// the homotopy class of the map.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <queue>
#include <string>
#include <vector>

#include "torusparam/energy.hpp"
#include "torusparam/glue.hpp"

namespace torusparam {

/** @brief Integer jump (m, n) -> m v1 + n v2 on every halfedge */
struct JumpAssignment {
  std::vector<LatticeCoeff> coeff;

  const LatticeCoeff& operator[](int h) const { return coeff[h]; }

  /// First violated invariant (antisymmetry, closed faces), or empty.
  std::string violation(const SurfaceMesh& m) const {
    if (static_cast<int>(coeff.size()) != m.num_halfedges()) {
      return "jump count does not match halfedge count";
    }
    for (int h = 0; h < m.num_halfedges(); ++h) {
      const int t = m.twin(h);
      if (t >= 0 && (coeff[t][0] != -coeff[h][0] || coeff[t][1] != -coeff[h][1])) {
        return "jump on halfedge " + std::to_string(h) + " is not antisymmetric";
      }
    }
    for (int f = 0; f < m.num_faces(); ++f) {
      LatticeCoeff s{0, 0};
      for (int k = 0; k < 3; ++k) {
        s[0] += coeff[3 * f + k][0];
        s[1] += coeff[3 * f + k][1];
      }
      if (s[0] != 0 || s[1] != 0) {
        return "jumps around face " + std::to_string(f) + " do not sum to 0";
      }
    }
    return {};
  }

  LatticeCoeff sum(const std::vector<int>& halfedges) const {
    LatticeCoeff s{0, 0};
    for (int h : halfedges) {
      s[0] += coeff[h][0];
      s[1] += coeff[h][1];
    }
    return s;
  }
};

/**
 * @brief Spanning tree, dual spanning cotree and the two fundamental loops
 * of the leftover edges.
 */
struct HomologyBasis {
  int root = 0;
  std::vector<int> parent_halfedge;   ///< per vertex: parent -> v, or -1
  std::vector<int> depth;             ///< per vertex tree depth
  std::vector<char> edge_in_tree;
  std::vector<char> edge_in_cotree;
  int root_face = 0;
  std::vector<int> face_order;        ///< cotree BFS order
  std::vector<int> face_parent;       ///< halfedge of f crossing to parent
  std::array<int, 2> leftover{-1, -1};  ///< one halfedge per leftover edge
  std::array<std::vector<int>, 2> loops;  ///< closed halfedge loops
};

/**
 * Tree-cotree decomposition. Throws TopologyError unless exactly two edges
 * are left over, i.e. unless the input is a closed connected torus.
 */
inline HomologyBasis tree_cotree(const SurfaceMesh& m, int root = 0) {
  const int nv = m.num_vertices(), nf = m.num_faces(), ne = m.num_edges();
  if (nv == 0) throw TopologyError("empty mesh");
  for (int h = 0; h < m.num_halfedges(); ++h) {
    if (m.twin(h) < 0) throw TopologyError("tree-cotree needs a closed mesh");
  }
  HomologyBasis b;
  b.root = root;
  b.parent_halfedge.assign(nv, -1);
  b.depth.assign(nv, -1);
  b.edge_in_tree.assign(ne, 0);
  b.edge_in_cotree.assign(ne, 0);

  std::queue<int> q;
  b.depth[root] = 0;
  q.push(root);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int h : m.outgoing(u)) {
      const int v = m.head(h);
      if (b.depth[v] >= 0) continue;
      b.depth[v] = b.depth[u] + 1;
      b.parent_halfedge[v] = h;
      b.edge_in_tree[m.edge(h)] = 1;
      q.push(v);
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (b.depth[v] < 0) throw TopologyError("mesh is not connected");
  }

  b.face_parent.assign(nf, -2);
  b.root_face = 0;
  b.face_parent[0] = -1;
  std::queue<int> fq;
  fq.push(0);
  while (!fq.empty()) {
    const int f = fq.front();
    fq.pop();
    b.face_order.push_back(f);
    for (int k = 0; k < 3; ++k) {
      const int h = 3 * f + k;
      const int e = m.edge(h);
      if (b.edge_in_tree[e] || b.edge_in_cotree[e]) continue;
      const int g = SurfaceMesh::face_of(m.twin(h));
      if (b.face_parent[g] != -2) continue;
      b.face_parent[g] = m.twin(h);
      b.edge_in_cotree[e] = 1;
      fq.push(g);
    }
  }
  if (static_cast<int>(b.face_order.size()) != nf) {
    throw TopologyError("dual graph is not connected");
  }

  int found = 0;
  for (int e = 0; e < ne; ++e) {
    if (b.edge_in_tree[e] || b.edge_in_cotree[e]) continue;
    if (found < 2) b.leftover[found] = m.edge_halfedge(e);
    ++found;
  }
  if (found != 2) {
    throw TopologyError("tree-cotree left " + std::to_string(found) +
                        " edges; a torus leaves exactly 2");
  }

  for (int k = 0; k < 2; ++k) {
    const int h = b.leftover[k];
    int u = m.tail(h), w = m.head(h);
    // Walk both ends up to their common ancestor.
    std::vector<int> down_to_u, up_from_w;
    while (u != w) {
      if (b.depth[u] >= b.depth[w]) {
        down_to_u.push_back(b.parent_halfedge[u]);
        u = m.tail(b.parent_halfedge[u]);
      } else {
        up_from_w.push_back(m.twin(b.parent_halfedge[w]));
        w = m.tail(b.parent_halfedge[w]);
      }
    }
    std::vector<int> loop(down_to_u.rbegin(), down_to_u.rend());
    loop.push_back(h);
    loop.insert(loop.end(), up_from_w.begin(), up_from_w.end());
    b.loops[k] = std::move(loop);
  }
  return b;
}

/**
 * Algebraic intersection number of two closed halfedge loops, the first of
 * which must be simple. Counts signed crossings of `b` with a copy of `a`
 * pushed slightly to its right.
 */
inline int intersection_number(const SurfaceMesh& m, const std::vector<int>& a,
                               const std::vector<int>& b) {
  // right[h] = 1 when halfedge h leaves a vertex of a into a's right side.
  std::vector<char> right(m.num_halfedges(), 0);
  const int len = static_cast<int>(a.size());
  for (int i = 0; i < len; ++i) {
    const int in = a[i], out = a[(i + 1) % len];
    if (m.head(in) != m.tail(out)) {
      throw ConfigError("loop is not closed");
    }
    // Counterclockwise from the reversed incoming edge to the outgoing edge
    // sweeps the right-hand side.
    for (int h = m.rotate_ccw(m.twin(in)); h != out; h = m.rotate_ccw(h)) {
      right[h] = 1;
    }
  }
  int n = 0;
  for (int h : b) n += right[h] - right[m.twin(h)];
  return n;
}

/**
 * Closed integer cochain with prescribed periods on the two loops of `basis`:
 * zero on tree edges, periods[k] on leftover edge k, and the cotree edges
 * solved leaf to root so that every face sums to zero.
 */
inline JumpAssignment assign_jumps(
    const SurfaceMesh& m, const HomologyBasis& basis,
    const std::array<LatticeCoeff, 2>& periods = {LatticeCoeff{1, 0},
                                                  LatticeCoeff{0, 1}}) {
  JumpAssignment j;
  j.coeff.assign(m.num_halfedges(), LatticeCoeff{0, 0});
  std::vector<char> known(m.num_halfedges(), 0);
  for (int e = 0; e < m.num_edges(); ++e) {
    if (basis.edge_in_tree[e]) {
      const int h = m.edge_halfedge(e);
      known[h] = known[m.twin(h)] = 1;
    }
  }
  for (int k = 0; k < 2; ++k) {
    const int h = basis.leftover[k];
    j.coeff[h] = periods[k];
    j.coeff[m.twin(h)] = {-periods[k][0], -periods[k][1]};
    known[h] = known[m.twin(h)] = 1;
  }
  for (auto it = basis.face_order.rbegin(); it != basis.face_order.rend(); ++it) {
    const int f = *it;
    const int hp = basis.face_parent[f];
    LatticeCoeff s{0, 0};
    for (int k = 0; k < 3; ++k) {
      const int h = 3 * f + k;
      if (h == hp) continue;
      if (!known[h]) {
        throw SolverError("cotree peeling reached a face with two unknowns");
      }
      s[0] += j.coeff[h][0];
      s[1] += j.coeff[h][1];
    }
    if (hp < 0) {
      if (s[0] != 0 || s[1] != 0) {
        throw SolverError("root face jump sum is not zero");
      }
      continue;
    }
    j.coeff[hp] = {-s[0], -s[1]};
    j.coeff[m.twin(hp)] = s;
    known[hp] = known[m.twin(hp)] = 1;
  }
  return j;
}

/**
 * Jumps read off the planar layout of the copies: the image of an edge in
 * a copy is the layout difference of its ends, which differs from the
 * difference of the vertex anchors by a layout-lattice vector.
 */
inline JumpAssignment layout_jumps(const GluedTorus& t) {
  const SurfaceMesh& m = t.mesh;
  JumpAssignment j;
  j.coeff.resize(m.num_halfedges());
  for (int f = 0; f < m.num_faces(); ++f) {
    const Face& keys = t.face_corner_key[f];
    for (int k = 0; k < 3; ++k) {
      const int ku = keys[k], kw = keys[(k + 1) % 3];
      bool exact = false;
      j.coeff[3 * f + k] = t.layout_lattice.round(
          t.key_shift[kw] - t.key_shift[ku], &exact, 1e-9);
      if (!exact) throw SolverError("layout shift is not a lattice vector");
    }
  }
  const std::string bad = j.violation(m);
  if (!bad.empty()) throw SolverError("layout jumps: " + bad);
  return j;
}

/// Periods of the layout cochain on the two basis loops.
inline std::array<LatticeCoeff, 2> layout_periods(const GluedTorus& t,
                                                  const HomologyBasis& basis) {
  const JumpAssignment j = layout_jumps(t);
  return {j.sum(basis.loops[0]), j.sum(basis.loops[1])};
}

enum class SolverKind { cholesky, conjugate_gradient };

struct SolverOptions {
  SolverKind kind = SolverKind::cholesky;
  double cg_tolerance = 1e-12;
  /// Iteration cap for conjugate gradients is this factor times sqrt(n).
  double cg_iteration_factor = 50.0;
  /// Lifts are moved into the fundamental parallelogram.
  bool normalize = true;
};

struct SolverStats {
  std::string method;
  int iterations = 0;
  double relative_residual = 0.0;
  /// Largest absolute residual of a single harmonic equation.
  double max_equation_residual = 0.0;
  std::vector<std::string> warnings;
};

/** @brief Harmonic map to R^2 / lattice as per-vertex lifts plus jumps */
struct TorusEmbedding {
  Lattice lattice;
  std::vector<Vec2> lift;
  int pin = 0;
  JumpAssignment jumps;
  SolverStats stats;

  /// Image displacement along halfedge h.
  Vec2 displacement(const SurfaceMesh& m, int h) const {
    return lift[m.head(h)] + lattice.at(jumps[h]) - lift[m.tail(h)];
  }
  /// Consistent planar triangle for face f, starting at the lift of its
  /// first corner.
  std::array<Vec2, 3> face_uv(const SurfaceMesh& m, int f) const {
    std::array<Vec2, 3> p;
    p[0] = lift[m.face(f)[0]];
    p[1] = p[0] + displacement(m, 3 * f);
    p[2] = p[1] + displacement(m, 3 * f + 1);
    return p;
  }
};

namespace detail {

using SparseMatrix = Eigen::SparseMatrix<double>;

inline bool has_negative_share_sum(const SurfaceMesh& m, const EdgeWeights& w) {
  for (int e = 0; e < m.num_edges(); ++e) {
    if (w.weight[e] < 0.0) return true;
  }
  return false;
}

}  // namespace detail

/**
 * Solve sum_j w_ij (x_j + J(i->j) - x_i) = 0 at every vertex but the pin,
 * with x_pin = 0. Both coordinates use the same factorization.
 */
inline TorusEmbedding solve_torus(const SurfaceMesh& m, const EdgeWeights& w,
                                  const JumpAssignment& jumps,
                                  const Lattice& lattice, int pin,
                                  const SolverOptions& opt = {}) {
  detail::require_finite(w);
  const int nv = m.num_vertices();
  if (pin < 0 || pin >= nv) throw ConfigError("pin vertex out of range");
  if (static_cast<int>(w.share.size()) != m.num_halfedges()) {
    throw ConfigError("weights do not match the mesh");
  }
  const std::string bad = jumps.violation(m);
  if (!bad.empty()) throw ConfigError("invalid jumps: " + bad);

  // Unknown index per vertex, pin removed.
  std::vector<int> col(nv, -1);
  int n = 0;
  for (int v = 0; v < nv; ++v) {
    if (v != pin) col[v] = n++;
  }

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::MatrixX2d rhs = Eigen::MatrixX2d::Zero(n, 2);
  auto add = [&](int r, int c, double x) {
    if (col[r] >= 0 && col[c] >= 0) trips.emplace_back(col[r], col[c], x);
  };
  for (int h = 0; h < m.num_halfedges(); ++h) {
    const int i = m.tail(h), j = m.head(h);
    const double s = w.share[h];
    const Vec2 jump = lattice.at(jumps[h]);
    // The share of h enters the equations of both of its ends.
    add(i, i, s);
    add(i, j, -s);
    add(j, j, s);
    add(j, i, -s);
    if (col[i] >= 0) rhs.row(col[i]) += s * jump.transpose();
    if (col[j] >= 0) rhs.row(col[j]) -= s * jump.transpose();
  }
  detail::SparseMatrix k(n, n);
  k.setFromTriplets(trips.begin(), trips.end());
  k.makeCompressed();

  TorusEmbedding emb;
  emb.lattice = lattice;
  emb.pin = pin;
  emb.jumps = jumps;
  emb.lift.assign(nv, Vec2::Zero());
  Eigen::MatrixX2d x = Eigen::MatrixX2d::Zero(n, 2);

  if (n > 0) {
    if (detail::has_negative_share_sum(m, w)) {
      emb.stats.warnings.push_back(
          "negative edge weights: system may be indefinite, using sparse LU");
      Eigen::SparseLU<detail::SparseMatrix> lu;
      lu.compute(k);
      if (lu.info() != Eigen::Success) {
        throw SolverError("sparse LU failed: singular system");
      }
      x = lu.solve(rhs);
      emb.stats.method = "sparse-lu";
    } else if (opt.kind == SolverKind::cholesky) {
      Eigen::SimplicialLDLT<detail::SparseMatrix> ldlt;
      ldlt.compute(k);
      if (ldlt.info() != Eigen::Success) {
        throw SolverError("Cholesky factorization failed (disconnected?)");
      }
      x = ldlt.solve(rhs);
      emb.stats.method = "cholesky";
    } else {
      Eigen::ConjugateGradient<detail::SparseMatrix,
                               Eigen::Lower | Eigen::Upper,
                               Eigen::DiagonalPreconditioner<double>>
          cg;
      cg.setTolerance(opt.cg_tolerance);
      cg.setMaxIterations(std::max(
          1, static_cast<int>(opt.cg_iteration_factor * std::sqrt(n))));
      cg.compute(k);
      for (int c = 0; c < 2; ++c) {
        x.col(c) = cg.solve(rhs.col(c));
        emb.stats.iterations = std::max(emb.stats.iterations,
                                        static_cast<int>(cg.iterations()));
        if (cg.info() != Eigen::Success) {
          throw SolverError("conjugate gradients did not converge in " +
                            std::to_string(cg.iterations()) + " iterations");
        }
      }
      emb.stats.method = "conjugate-gradient";
    }
    const Eigen::MatrixX2d r = k * x - rhs;
    const double bn = rhs.norm();
    emb.stats.relative_residual = bn > 0.0 ? r.norm() / bn : r.norm();
    emb.stats.max_equation_residual = r.rowwise().norm().maxCoeff();
  }
  for (int v = 0; v < nv; ++v) {
    if (col[v] >= 0) emb.lift[v] = x.row(col[v]).transpose();
  }

  if (opt.normalize) {
    std::vector<LatticeCoeff> shift(nv);
    for (int v = 0; v < nv; ++v) {
      shift[v] = lattice.floor(emb.lift[v]);
      emb.lift[v] -= lattice.at(shift[v]);
    }
    for (int h = 0; h < m.num_halfedges(); ++h) {
      LatticeCoeff& c = emb.jumps.coeff[h];
      const LatticeCoeff& a = shift[m.tail(h)];
      const LatticeCoeff& b = shift[m.head(h)];
      c = {c[0] + b[0] - a[0], c[1] + b[1] - a[1]};
    }
  }
  return emb;
}

/// Dirichlet energy of the embedding, with jump-corrected edge vectors.
inline double energy_of(const SurfaceMesh& m, const EdgeWeights& w,
                        const TorusEmbedding& emb) {
  detail::require_finite(w);
  double e = 0.0;
  for (int h = 0; h < m.num_halfedges(); ++h) {
    e += w.share[h] * emb.displacement(m, h).squaredNorm();
  }
  return 0.25 * e;
}

/**
 * Jumps of the layout homotopy class written on a fresh tree-cotree basis.
 * Equal to layout_jumps up to a coboundary.
 */
inline JumpAssignment tree_cotree_jumps(const GluedTorus& t, int root = 0) {
  const HomologyBasis basis = tree_cotree(t.mesh, root);
  return assign_jumps(t.mesh, basis, layout_periods(t, basis));
}

/// Full solve of a glued torus onto its target lattice.
inline TorusEmbedding solve_glued_torus(const GluedTorus& t,
                                        const EdgeWeights& w,
                                        const SolverOptions& opt = {},
                                        int pin = -1) {
  return solve_torus(t.mesh, w, tree_cotree_jumps(t), t.target_lattice,
                     pin < 0 ? t.default_pin() : pin, opt);
}

}  // namespace torusparam
