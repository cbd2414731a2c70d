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

#include <gtest/gtest.h>

#include "torusparam/analysis.hpp"
#include "torusparam/construct.hpp"
#include "torusparam/fixtures.hpp"
#include "torusparam/torus_solve.hpp"

namespace torusparam {
namespace {

namespace fx = fixtures;

struct Case {
  std::string name;
  GluedTorus torus;
  WeightScheme scheme;
};

std::vector<Case> fixture_cases() {
  const SurfaceMesh tri = fx::single_triangle();
  const SurfaceMesh del = fx::random_delaunay_disk();
  const SurfaceMesh asym = fx::asymmetric_disk();
  const MarkedDisk t3 = MarkedDisk::make(tri, {0, 1, 2});
  const MarkedDisk q4 = MarkedDisk::make(fx::quad(), {0, 1, 2, 3});
  const MarkedDisk d3 = MarkedDisk::make(del, fx::spaced_marks(del, 3));
  const MarkedDisk d4 = MarkedDisk::make(del, fx::spaced_marks(del, 4));
  const MarkedDisk a3 = MarkedDisk::make(asym, fx::spaced_marks(asym, 3));
  const fx::SymmetricSphere tet = fx::tetrahedron();
  const fx::SymmetricSphere sph = fx::subdivided_sphere(1);
  const GluedTorus t63 =
      build_torus_63(make_symmetric_cuts(tet.mesh, tet.apex, tet.sigma, tet.seed_target));
  const GluedTorus s63 =
      build_torus_63(make_symmetric_cuts(sph.mesh, sph.apex, sph.sigma, sph.seed_target));
  std::vector<Case> out;
  for (WeightScheme w : {WeightScheme::uniform, WeightScheme::cotangent}) {
    const std::string suffix = std::string("/") + to_string(w);
    out.push_back({"tri8" + suffix, build_torus_8(t3), w});
    out.push_back({"quad4" + suffix, build_torus_4(q4), w});
    out.push_back({"tri42" + suffix, build_torus_42(t3), w});
    out.push_back({"delaunay8" + suffix, build_torus_8(d3), w});
    out.push_back({"delaunay4" + suffix, build_torus_4(d4, 1.5, 1.0), w});
    out.push_back({"delaunay42" + suffix, build_torus_42(d3), w});
    out.push_back({"asymmetric8" + suffix, build_torus_8(a3), w});
    out.push_back({"tetra63" + suffix, t63, w});
    out.push_back({"sphere63" + suffix, s63, w});
  }
  return out;
}

const std::vector<Case>& cases() {
  static const std::vector<Case> c = fixture_cases();
  return c;
}

// Largest |sum_h share_h * displacement_h| over vertices, computed from
// the embedding alone.
double harmonic_defect(const GluedTorus& t, const EdgeWeights& w, const TorusEmbedding& emb) {
  std::vector<Vec2> force(t.mesh.num_vertices(), Vec2::Zero());
  for (int h = 0; h < t.mesh.num_halfedges(); ++h) {
    const Vec2 d = emb.displacement(t.mesh, h);
    force[t.mesh.tail(h)] += w.share[h] * d;
    force[t.mesh.head(h)] -= w.share[h] * d;
  }
  double worst = 0.0;
  for (const Vec2& f : force) worst = std::max(worst, f.norm());
  return worst;
}

TEST(TreeCotree, LeavesTwoEdgesOnTori) {
  for (const Case& c : cases()) {
    const SurfaceMesh& m = c.torus.mesh;
    const HomologyBasis b = tree_cotree(m);
    int tree = 0, cotree = 0;
    for (int e = 0; e < m.num_edges(); ++e) {
      tree += b.edge_in_tree[e];
      cotree += b.edge_in_cotree[e];
      EXPECT_FALSE(b.edge_in_tree[e] && b.edge_in_cotree[e]);
    }
    EXPECT_EQ(tree, m.num_vertices() - 1) << c.name;
    EXPECT_EQ(cotree, m.num_faces() - 1) << c.name;
    EXPECT_EQ(m.num_edges() - tree - cotree, 2) << c.name;
  }
}

TEST(TreeCotree, LoopsAreClosedAndIntersectOnce) {
  for (const Case& c : cases()) {
    const SurfaceMesh& m = c.torus.mesh;
    const HomologyBasis b = tree_cotree(m);
    for (const auto& loop : b.loops) {
      ASSERT_FALSE(loop.empty());
      for (std::size_t i = 0; i < loop.size(); ++i) {
        EXPECT_EQ(m.head(loop[i]), m.tail(loop[(i + 1) % loop.size()]));
      }
    }
    EXPECT_EQ(std::abs(intersection_number(m, b.loops[0], b.loops[1])), 1) << c.name;
    EXPECT_EQ(intersection_number(m, b.loops[0], b.loops[0]), 0) << c.name;
  }
}

TEST(TreeCotree, RejectsNonTori) {
  EXPECT_THROW(tree_cotree(fx::tetrahedron().mesh), TopologyError);
  EXPECT_THROW(tree_cotree(fx::random_delaunay_disk()), TopologyError);
}

TEST(Jumps, AssignedCochainIsClosedWithRequestedPeriods) {
  for (const Case& c : cases()) {
    const SurfaceMesh& m = c.torus.mesh;
    const HomologyBasis b = tree_cotree(m);
    const std::array<LatticeCoeff, 2> periods{LatticeCoeff{2, -1}, LatticeCoeff{3, 5}};
    const JumpAssignment j = assign_jumps(m, b, periods);
    EXPECT_EQ(j.violation(m), "") << c.name;
    EXPECT_EQ(j.sum(b.loops[0]), periods[0]) << c.name;
    EXPECT_EQ(j.sum(b.loops[1]), periods[1]) << c.name;
  }
}

TEST(Jumps, LayoutAndTreeCotreeAgreeOnPeriods) {
  for (const Case& c : cases()) {
    const SurfaceMesh& m = c.torus.mesh;
    const JumpAssignment layout = layout_jumps(c.torus);
    EXPECT_EQ(layout.violation(m), "") << c.name;
    // Periods are a homology invariant: any basis gives equal sums.
    for (int root : {0, m.num_vertices() / 2}) {
      const HomologyBasis b = tree_cotree(m, root);
      const JumpAssignment tc = assign_jumps(m, b, layout_periods(c.torus, b));
      for (const auto& loop : b.loops) EXPECT_EQ(tc.sum(loop), layout.sum(loop)) << c.name;
    }
  }
}

TEST(Jumps, LayoutPeriodsSpanTheLattice) {
  // The covering is connected onto the torus, so the period map is unimodular.
  for (const Case& c : cases()) {
    const HomologyBasis b = tree_cotree(c.torus.mesh);
    const auto p = layout_periods(c.torus, b);
    EXPECT_EQ(std::abs(p[0][0] * p[1][1] - p[0][1] * p[1][0]), 1) << c.name;
  }
}

TEST(Solve, ResidualBelowTolerance) {
  for (const Case& c : cases()) {
    const EdgeWeights w = make_weights(c.torus.mesh, c.scheme);
    const TorusEmbedding emb = solve_glued_torus(c.torus, w);
    EXPECT_LE(emb.stats.relative_residual, 1e-10) << c.name;
    EXPECT_LE(harmonic_defect(c.torus, w, emb), 1e-10) << c.name;
    EXPECT_EQ(emb.jumps.violation(c.torus.mesh), "") << c.name;
  }
}

TEST(Solve, NormalizedLiftsLieInFundamentalDomain) {
  for (const Case& c : cases()) {
    const TorusEmbedding emb =
        solve_glued_torus(c.torus, make_weights(c.torus.mesh, c.scheme));
    for (const Vec2& p : emb.lift) {
      const Vec2 q = emb.lattice.coords(p);
      EXPECT_GE(q.x(), -1e-12);
      EXPECT_LT(q.x(), 1.0 + 1e-12);
      EXPECT_GE(q.y(), -1e-12);
      EXPECT_LT(q.y(), 1.0 + 1e-12);
    }
  }
}

TEST(Solve, NormalizationKeepsDisplacements) {
  for (const Case& c : cases()) {
    const EdgeWeights w = make_weights(c.torus.mesh, c.scheme);
    SolverOptions raw;
    raw.normalize = false;
    const TorusEmbedding a = solve_glued_torus(c.torus, w, raw);
    const TorusEmbedding b = solve_glued_torus(c.torus, w);
    for (int h = 0; h < c.torus.mesh.num_halfedges(); ++h) {
      EXPECT_LT((a.displacement(c.torus.mesh, h) - b.displacement(c.torus.mesh, h)).norm(),
                1e-12);
    }
  }
}

TEST(Solve, PinInvariance) {
  for (const Case& c : cases()) {
    const SurfaceMesh& m = c.torus.mesh;
    const EdgeWeights w = make_weights(m, c.scheme);
    const TorusEmbedding a = solve_glued_torus(c.torus, w);
    for (int pin : {m.num_vertices() - 1, m.num_vertices() / 3}) {
      const TorusEmbedding b = solve_glued_torus(c.torus, w, {}, pin);
      // Align by the translation taking pin to pin, then compare mod lattice.
      const Vec2 shift = a.lift[pin] - b.lift[pin];
      double worst = 0.0;
      for (int v = 0; v < m.num_vertices(); ++v) {
        worst = std::max(worst, a.lattice.mod_distance(a.lift[v], b.lift[v] + shift));
      }
      EXPECT_LE(worst, 1e-8) << c.name << " pin " << pin;
    }
  }
}

TEST(Solve, LayoutJumpsGiveTheSameMap) {
  for (const Case& c : cases()) {
    const SurfaceMesh& m = c.torus.mesh;
    const EdgeWeights w = make_weights(m, c.scheme);
    const TorusEmbedding a = solve_glued_torus(c.torus, w);
    const TorusEmbedding b =
        solve_torus(m, w, layout_jumps(c.torus), c.torus.target_lattice, a.pin);
    EXPECT_NEAR(energy_of(m, w, a), energy_of(m, w, b), 1e-10 * energy_of(m, w, a)) << c.name;
    for (int v = 0; v < m.num_vertices(); ++v) {
      EXPECT_LE(a.lattice.mod_distance(a.lift[v], b.lift[v]), 1e-9) << c.name;
    }
  }
}

TEST(Solve, ConjugateGradientMatchesCholesky) {
  for (const Case& c : cases()) {
    const EdgeWeights w = make_weights(c.torus.mesh, c.scheme);
    if (!weight_positivity_report(c.torus.mesh, w).all_positive()) continue;
    SolverOptions cg;
    cg.kind = SolverKind::conjugate_gradient;
    const TorusEmbedding a = solve_glued_torus(c.torus, w);
    const TorusEmbedding b = solve_glued_torus(c.torus, w, cg);
    EXPECT_EQ(b.stats.method, "conjugate-gradient");
    EXPECT_LE(b.stats.relative_residual, 1e-10) << c.name;
    for (std::size_t v = 0; v < a.lift.size(); ++v) {
      EXPECT_LE(a.lattice.mod_distance(a.lift[v], b.lift[v]), 1e-8) << c.name;
    }
  }
}

TEST(Solve, NegativeWeightsFallBackToLu) {
  // Two subdivision levels produce obtuse pairs of triangles.
  const fx::SymmetricSphere s = fx::subdivided_sphere(2);
  const GluedTorus t = build_torus_63(make_symmetric_cuts(s.mesh, s.apex, s.sigma, 1));
  const EdgeWeights w = cotan_weights(t.mesh);
  ASSERT_GT(weight_positivity_report(t.mesh, w).negative_edge_count, 0);
  const TorusEmbedding emb = solve_glued_torus(t, w);
  EXPECT_EQ(emb.stats.method, "sparse-lu");
  EXPECT_FALSE(emb.stats.warnings.empty());
  EXPECT_LE(emb.stats.relative_residual, 1e-10);
}

TEST(Solve, EightCopyTriangleVertexPositions) {
  // Four torus vertices: the three mark classes and the midpoint class of
  // the right-angle marks. Their images are the half-lattice points.
  const GluedTorus t = build_torus_8(MarkedDisk::make(fx::single_triangle(), {0, 1, 2}));
  for (WeightScheme s : {WeightScheme::uniform, WeightScheme::cotangent}) {
    const TorusEmbedding emb = solve_glued_torus(t, make_weights(t.mesh, s));
    std::vector<Vec2> expected{Vec2(0, 0), Vec2(0.5, 0.5), Vec2(0, 0.5), Vec2(0.5, 0)};
    for (const Vec2& p : emb.lift) {
      double best = 1.0;
      for (const Vec2& q : expected) best = std::min(best, emb.lattice.mod_distance(p, q));
      EXPECT_LE(best, 1e-12);
    }
  }
}

TEST(Solve, EnergyMatchesPerCopySum) {
  for (const Case& c : cases()) {
    const EdgeWeights w = make_weights(c.torus.mesh, c.scheme);
    const TorusEmbedding emb = solve_glued_torus(c.torus, w);
    double sum = 0.0;
    for (double e : per_copy_energies(c.torus, w, emb)) sum += e;
    EXPECT_NEAR(sum, energy_of(c.torus.mesh, w, emb), 1e-12 * sum) << c.name;
  }
}

TEST(Solve, RejectsBadInputs) {
  const GluedTorus t = build_torus_8(MarkedDisk::make(fx::single_triangle(), {0, 1, 2}));
  const EdgeWeights w = uniform_weights(t.mesh);
  JumpAssignment j = tree_cotree_jumps(t);
  EXPECT_THROW(solve_torus(t.mesh, w, j, t.target_lattice, -1), ConfigError);
  EXPECT_THROW(solve_torus(t.mesh, w, j, t.target_lattice, 99), ConfigError);
  j.coeff[0][0] += 1;  // breaks antisymmetry and face closure
  EXPECT_THROW(solve_torus(t.mesh, w, j, t.target_lattice, 0), ConfigError);
}

TEST(Solve, EnergyIsMinimal) {
  // Perturbing any lift raises the energy: the solution is a minimizer.
  const Case& c = cases()[3];
  const EdgeWeights w = make_weights(c.torus.mesh, c.scheme);
  const TorusEmbedding emb = solve_glued_torus(c.torus, w);
  const double e0 = energy_of(c.torus.mesh, w, emb);
  for (int v = 0; v < c.torus.mesh.num_vertices(); v += 17) {
    TorusEmbedding moved = emb;
    moved.lift[v] += Vec2(1e-3, -2e-3);
    EXPECT_GT(energy_of(c.torus.mesh, w, moved), e0);
  }
}

}  // namespace
}  // namespace torusparam
