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

// Release gate: one line per acceptance criterion, exit 1 if any fails.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "torusparam/fixtures.hpp"
#include "torusparam/pipeline.hpp"

namespace {

using namespace torusparam;
namespace fx = torusparam::fixtures;
namespace fs = std::filesystem;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  // Tracks the worst value of a family of <= checks.
  void at_most(double value, double tol, const std::string& what, double* worst) {
    *worst = std::max(*worst, value);
    if (!(value <= tol)) require(false, what + " = " + sci(value));
  }
  static std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
  }
};

MarkedDisk marked(const SurfaceMesh& m, int k) { return MarkedDisk::make(m, fx::spaced_marks(m, k)); }

GluedTorus sphere_torus(const fx::SymmetricSphere& s) {
  return build_torus_63(make_symmetric_cuts(s.mesh, s.apex, s.sigma, s.seed_target));
}

struct Fixture {
  std::string name;
  std::function<GluedTorus()> build;
  bool delaunay = true;  ///< cotan weights are expected positive
};

std::vector<Fixture> all_fixtures() {
  return {
      {"tri8", [] { return build_torus_8(marked(fx::single_triangle(), 3)); }},
      {"quad4", [] { return build_torus_4(marked(fx::quad(), 4)); }},
      {"tri42", [] { return build_torus_42(marked(fx::single_triangle(), 3)); }},
      {"delaunay8", [] { return build_torus_8(marked(fx::random_delaunay_disk(), 3)); }},
      {"delaunay4", [] { return build_torus_4(marked(fx::random_delaunay_disk(), 4)); }},
      {"delaunay42", [] { return build_torus_42(marked(fx::random_delaunay_disk(), 3)); }},
      {"asymmetric8", [] { return build_torus_8(marked(fx::asymmetric_disk(), 3)); }},
      {"tetra63", [] { return sphere_torus(fx::tetrahedron()); }, false},
      {"sphere63", [] { return sphere_torus(fx::subdivided_sphere(1)); }, false},
      {"sphere63x2", [] { return sphere_torus(fx::subdivided_sphere(2)); }, false},
  };
}

Verdict criterion_cell_counts() {
  Verdict v;
  struct Want {
    std::string name;
    GluedTorus t;
    int V, E, F;
  };
  const std::vector<Want> wants{
      {"tri8", build_torus_8(marked(fx::single_triangle(), 3)), 4, 12, 8},
      {"quad4", build_torus_4(marked(fx::quad(), 4)), 4, 12, 8},
      {"tri42", build_torus_42(marked(fx::single_triangle(), 3)), 21, 63, 42},
      {"tetra63", sphere_torus(fx::tetrahedron()), 126, 378, 252}};
  for (const Want& w : wants) {
    const SurfaceMesh& m = w.t.mesh;
    v.require(m.num_vertices() == w.V && m.num_edges() == w.E && m.num_faces() == w.F,
              w.name + " counts " + std::to_string(m.num_vertices()) + "/" +
                  std::to_string(m.num_edges()) + "/" + std::to_string(m.num_faces()));
    const CoveringReport r = validate_covering(w.t);
    v.require(r.euler_characteristic == 0, w.name + " chi");
    v.require(r.manifold, w.name + " links");
  }
  if (v.ok) v.detail = "4/12/8, 4/12/8, 21/63/42, 126/378/252, chi 0, manifold";
  return v;
}

Verdict criterion_branch_table() {
  Verdict v;
  const CoveringReport r = validate_covering(sphere_torus(fx::tetrahedron()));
  v.require(r.ok(), "covering report has failures");
  v.require(r.ramification_sum == 126, "ramification sum " + std::to_string(r.ramification_sum));
  int leaves = 0;
  for (const BranchEntry& b : r.branch_table) {
    if (b.label == "pO") {
      v.require(b.preimages == 63 && b.degree_counts == std::map<int, int>{{1, 63}}, "pO row");
    } else {
      ++leaves;
      v.require(b.preimages == 21 && b.degree_counts == std::map<int, int>{{3, 21}},
                b.label + " row");
    }
  }
  v.require(leaves == 3, "leaf rows " + std::to_string(leaves));
  if (v.ok) v.detail = "pO 63x1, L0/L1/L2 21x3, sum 126";
  return v;
}

Verdict criterion_solve() {
  Verdict v;
  double worst_rr = 0.0, worst_pin = 0.0;
  for (const Fixture& f : all_fixtures()) {
    const GluedTorus t = f.build();
    for (WeightScheme s : {WeightScheme::uniform, WeightScheme::cotangent}) {
      const std::string tag = f.name + "/" + to_string(s);
      const EdgeWeights w = make_weights(t.mesh, s);
      const TorusEmbedding a = solve_glued_torus(t, w);
      v.at_most(a.stats.relative_residual, 1e-10, tag + " residual", &worst_rr);
      v.require(a.jumps.violation(t.mesh).empty(), tag + " jumps");
      const HomologyBasis b = tree_cotree(t.mesh);
      const JumpAssignment layout = layout_jumps(t);
      for (const auto& loop : b.loops) {
        v.require(a.jumps.sum(loop) == layout.sum(loop), tag + " periods");
      }
      const int pin = t.mesh.num_vertices() - 1;
      const TorusEmbedding c = solve_glued_torus(t, w, {}, pin);
      const Vec2 shift = a.lift[pin] - c.lift[pin];
      double dev = 0.0;
      for (std::size_t i = 0; i < a.lift.size(); ++i) {
        dev = std::max(dev, a.lattice.mod_distance(a.lift[i], c.lift[i] + shift));
      }
      v.at_most(dev, 1e-8, tag + " pin", &worst_pin);
    }
  }
  v.detail = "max residual " + Verdict::sci(worst_rr) + ", pin deviation " +
             Verdict::sci(worst_pin) + (v.ok ? ", jumps exact" : "; " + v.detail);
  return v;
}

Verdict criterion_reflections() {
  Verdict v;
  double worst = 0.0;
  for (const auto& [name, mesh] :
       std::vector<std::pair<std::string, SurfaceMesh>>{{"delaunay", fx::random_delaunay_disk()},
                                                        {"asymmetric", fx::asymmetric_disk()}}) {
    const GluedTorus t = build_torus_8(marked(mesh, 3));
    for (WeightScheme s : {WeightScheme::uniform, WeightScheme::cotangent}) {
      const SymmetryReport r = check_reflections_8(t, solve_glued_torus(t, make_weights(t.mesh, s)));
      v.require(r.checks.size() == 4, "four reflections");
      v.at_most(r.max_residual(), 1e-8 * std::sqrt(2.0), name + "/" + to_string(s), &worst);
    }
  }
  v.detail = "max residual " + Verdict::sci(worst) + " (bound 1e-8 x diameter)" +
             (v.ok ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_eight_copy() {
  Verdict v;
  double marks = 0.0, straight = 0.0, spread = 0.0;
  for (const SurfaceMesh& mesh : {fx::single_triangle(), fx::random_delaunay_disk(),
                                  fx::asymmetric_disk()}) {
    const GluedTorus t = build_torus_8(marked(mesh, 3));
    for (WeightScheme s : {WeightScheme::uniform, WeightScheme::cotangent}) {
      const EdgeWeights w = make_weights(t.mesh, s);
      const TorusEmbedding emb = solve_glued_torus(t, w);
      const std::vector<Vec2> tile = copy_lift(t, emb, 0);
      const std::array<Vec2, 3> want{Vec2(0, 0), Vec2(0.5, 0.5), Vec2(0, 0.5)};
      for (int j = 0; j < 3; ++j) {
        v.at_most(emb.lattice.mod_distance(tile[t.disk.marks[j]], want[j]), 1e-8, "mark", &marks);
      }
      v.at_most(side_straightness(t, tile), 1e-8, "collinearity", &straight);
      v.at_most(relative_spread(per_copy_energies(t, w, emb)), 1e-9, "energy spread", &spread);
    }
  }
  v.detail = "marks " + Verdict::sci(marks) + ", collinearity " + Verdict::sci(straight) +
             ", energy spread " + Verdict::sci(spread) + (v.ok ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_forty_two() {
  Verdict v;
  double area = 0.0, hex = 0.0, equi = 0.0;
  for (const SurfaceMesh& mesh : {fx::single_triangle(), fx::random_delaunay_disk()}) {
    const GluedTorus t = build_torus_42(marked(mesh, 3));
    const TorusEmbedding emb = solve_glued_torus(t, uniform_weights(t.mesh));
    const TileExtraction tiles = check_tiling(t, emb);
    const double target = std::sqrt(3.0) / 2.0;
    v.at_most(std::abs(tiles.total_area - target) / target, 1e-8, "area", &area);
    v.at_most(hexagon_group_rms(t, emb), 1e-8, "hexagon groups", &hex);
    for (const auto& tile : tiles.tiles) {
      v.at_most(mark_polygon_irregularity(t, tile), 1e-7, "equilateral", &equi);
    }
  }
  v.detail = "area " + Verdict::sci(area) + ", hexagon RMS " + Verdict::sci(hex) +
             ", edge deviation " + Verdict::sci(equi) + (v.ok ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_crosscheck() {
  Verdict v;
  double worst = 0.0;
  const SurfaceMesh mesh = fx::random_delaunay_disk();
  v.require(mesh.num_vertices() == 50, "fixture size");
  for (const TargetShape& s :
       {TargetShape::right_isosceles(), TargetShape::equilateral(), TargetShape::rectangle()}) {
    const MarkedDisk d = marked(mesh, s.corner_count());
    for (WeightScheme w : {WeightScheme::cotangent, WeightScheme::uniform}) {
      const CrosscheckReport r = crosscheck_against_torus(d, s, w);
      v.at_most(r.relative_rms, 1e-7, std::string(to_string(s.kind)) + "/" + to_string(w),
                &worst);
    }
  }
  v.detail = "max RMS / diameter " + Verdict::sci(worst) + " over 3 shapes x 2 weights" +
             (v.ok ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_sixty_three() {
  Verdict v;
  double rot = 0.0, area = 0.0, cong = 0.0, spread = 0.0;
  for (const auto& s : {fx::tetrahedron(), fx::subdivided_sphere(1)}) {
    const GluedTorus t = sphere_torus(s);
    for (WeightScheme ws : {WeightScheme::uniform, WeightScheme::cotangent}) {
      const EdgeWeights w = make_weights(t.mesh, ws);
      const TorusEmbedding emb = solve_glued_torus(t, w);
      const SymmetryReport r = check_rotation_63(t, emb);
      v.require(r.all_passed(), "rotation check");
      v.at_most(r.max_residual(), 1e-8, "rotation", &rot);
      const TileExtraction tiles = check_tiling(t, emb);
      v.at_most(tiles.area_error, 1e-8, "tiling area", &area);
      v.at_most(tiles.congruence_rms, 1e-8, "tiling congruence", &cong);
      v.at_most(relative_spread(per_copy_energies(t, w, emb)), 1e-9, "energy", &spread);
    }
  }
  v.detail = "rotation " + Verdict::sci(rot) + ", area " + Verdict::sci(area) + ", congruence " +
             Verdict::sci(cong) + ", energy spread " + Verdict::sci(spread) +
             (v.ok ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_flips() {
  Verdict v;
  int runs = 0, total = 0;
  for (const Fixture& f : all_fixtures()) {
    const GluedTorus t = f.build();
    for (WeightScheme s : {WeightScheme::uniform, WeightScheme::cotangent}) {
      const EdgeWeights w = make_weights(t.mesh, s);
      const bool positive = weight_positivity_report(t.mesh, w).all_positive();
      // Cotan runs on the Delaunay disks must have positive weights.
      if (s == WeightScheme::cotangent && f.delaunay) v.require(positive, f.name + " weights");
      if (!positive) continue;
      const int flips = flip_count(t.mesh, solve_glued_torus(t, w));
      ++runs;
      total += flips;
      v.require(flips == 0, f.name + "/" + to_string(s) + " flips " + std::to_string(flips));
    }
  }
  // Direct solutions too.
  for (int k : {3, 4}) {
    const MarkedDisk d = marked(fx::random_delaunay_disk(), k);
    const TargetShape s = k == 3 ? TargetShape::equilateral() : TargetShape::rectangle();
    for (WeightScheme ws : {WeightScheme::uniform, WeightScheme::cotangent}) {
      const int flips = flip_count(d.mesh, solve_direct(d, s, make_weights(d.mesh, ws)).uv);
      ++runs;
      total += flips;
      v.require(flips == 0, "direct flips");
    }
  }
  v.detail = std::to_string(total) + " flipped faces over " + std::to_string(runs) +
             " positive-weight runs" + (v.ok ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_conformal() {
  Verdict v;
  double lowest = std::numeric_limits<double>::infinity();
  for (const SurfaceMesh& mesh : {fx::random_delaunay_disk(), fx::asymmetric_disk()}) {
    const EdgeWeights w = cotan_weights(mesh);
    for (int k : {3, 4}) {
      const MarkedDisk d = marked(mesh, k);
      const TargetShape s = k == 3 ? TargetShape::right_isosceles() : TargetShape::rectangle();
      const std::vector<Vec2> uv = solve_direct(d, s, w).uv;
      if (flip_count(mesh, uv) != 0) continue;
      const double e = conformal_energy(mesh, w, uv);
      lowest = std::min(lowest, e);
      v.require(e >= -1e-12, "negative conformal energy " + Verdict::sci(e));
    }
    const GluedTorus t = build_torus_42(marked(mesh, 3));
    const TorusEmbedding emb = solve_glued_torus(t, cotan_weights(t.mesh));
    for (int c = 0; c < t.copy_count; ++c) {
      if (t.flipped[c]) continue;
      const double e = conformal_energy(mesh, w, copy_lift(t, emb, c));
      lowest = std::min(lowest, e);
      v.require(e >= -1e-12, "negative conformal energy on a copy");
    }
  }
  const MarkedDisk id = MarkedDisk::make(fx::quad_fan(), {0, 1, 2, 3});
  const EdgeWeights w = cotan_weights(id.mesh);
  const double zero = conformal_energy(id.mesh, w, solve_direct(id, TargetShape::rectangle(), w).uv);
  v.require(std::abs(zero) <= 1e-12, "identity fixture " + Verdict::sci(zero));
  v.detail = "min " + Verdict::sci(lowest) + ", identity " + Verdict::sci(zero) +
             (v.ok ? "" : "; " + v.detail);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict criterion_determinism() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "torusparam_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  save_obj(fx::random_delaunay_disk(), dir / "disk.obj");
  save_obj(fx::tetrahedron().mesh, dir / "tet.obj");
  RunConfig disk;
  disk.input = dir / "disk.obj";
  disk.mode = RunMode::disk_isosceles;
  disk.marks = fx::spaced_marks(fx::random_delaunay_disk(), 3);
  disk.method = RunMethod::both;
  disk.out_dir = dir;
  RunConfig sphere;
  sphere.input = dir / "tet.obj";
  sphere.mode = RunMode::sphere_3fold;
  sphere.apex = 0;
  sphere.sigma = {0, 2, 3, 1};
  sphere.seed_target = 1;
  sphere.out_dir = dir;
  int compared = 0;
  for (RunConfig cfg : {disk, sphere}) {
    std::vector<std::string> reports;
    for (const char* name : {"a", "b", "c"}) {
      cfg.name = name;
      const RunOutcome out = run(cfg);
      v.require(out.exit_code == 0, "run failed: " + out.error);
      reports.push_back(slurp(dir / (std::string(name) + ".report.json")));
    }
    for (const std::string& r : reports) {
      v.require(!r.empty() && r == reports[0], std::string(to_string(cfg.mode)) + " differs");
      ++compared;
    }
  }
  fs::remove_all(dir);
  v.detail = std::to_string(compared) + " reports from 2 configs compared byte for byte" +
             (v.ok ? "" : "; " + v.detail);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"combinatorial exactness", criterion_cell_counts},
      {"63-copy branch table", criterion_branch_table},
      {"harmonic solve", criterion_solve},
      {"8-copy reflections", criterion_reflections},
      {"8-copy marks, sides and energies", criterion_eight_copy},
      {"42-copy tiling", criterion_forty_two},
      {"direct vs torus", criterion_crosscheck},
      {"63-copy rotation and tiling", criterion_sixty_three},
      {"bijectivity", criterion_flips},
      {"conformality", criterion_conformal},
      {"determinism", criterion_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += !v.ok;
    std::printf("criterion %2zu %-34s %s  %s\n", i + 1, criteria[i].first.c_str(),
                v.ok ? "PASS" : "FAIL", v.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
