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

// Config -> construction -> solve -> checks -> artifacts.

#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "torusparam/analysis.hpp"
#include "torusparam/construct.hpp"
#include "torusparam/covering.hpp"
#include "torusparam/direct.hpp"
#include "torusparam/obj_io.hpp"
#include "torusparam/report.hpp"
#include "torusparam/sphere_cut.hpp"

namespace torusparam {

enum class RunMode { disk_isosceles, disk_equilateral, disk_rectangle, sphere_3fold };
enum class RunMethod { torus, direct, both };

inline const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::disk_isosceles: return "disk-isosceles";
    case RunMode::disk_equilateral: return "disk-equilateral";
    case RunMode::disk_rectangle: return "disk-rectangle";
    case RunMode::sphere_3fold: return "sphere-3fold";
  }
  return "?";
}

inline const char* to_string(RunMethod m) {
  switch (m) {
    case RunMethod::torus: return "torus";
    case RunMethod::direct: return "direct";
    case RunMethod::both: return "both";
  }
  return "?";
}

inline RunMode parse_mode(const std::string& s) {
  for (RunMode m : {RunMode::disk_isosceles, RunMode::disk_equilateral,
                    RunMode::disk_rectangle, RunMode::sphere_3fold}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown mode '" + s + "'");
}

inline RunMethod parse_method(const std::string& s) {
  for (RunMethod m : {RunMethod::torus, RunMethod::direct, RunMethod::both}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + s + "'");
}

inline WeightScheme parse_weights(const std::string& s) {
  if (s == "cotan" || s == "cotangent") return WeightScheme::cotangent;
  if (s == "uniform") return WeightScheme::uniform;
  throw ConfigError("unknown weights '" + s + "'");
}

inline SolverKind parse_solver(const std::string& s) {
  if (s == "cholesky") return SolverKind::cholesky;
  if (s == "cg") return SolverKind::conjugate_gradient;
  throw ConfigError("unknown solver '" + s + "'");
}

/// Comma-separated integers, e.g. "0,2,3,1".
inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string tok = s.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("not an integer list: '" + s + "'");
    }
    pos = comma + 1;
  }
  return out;
}

/** @brief Check thresholds; relative unless noted */
struct Tolerances {
  double residual = 1e-10;
  double symmetry = 1e-8;        ///< times the target diameter
  double marks = 1e-8;           ///< absolute, in the unit square
  double straightness = 1e-8;    ///< absolute
  double energy_spread = 1e-9;
  double tiling_area = 1e-8;
  double tiling_rms = 1e-8;      ///< times the lattice diameter
  double hexagon_rms = 1e-8;     ///< absolute
  double equilateral = 1e-7;
  double crosscheck = 1e-7;      ///< times the target diameter
  double conformal = 1e-12;      ///< allowed negative conformal energy
};

struct RunConfig {
  std::filesystem::path input;
  RunMode mode = RunMode::disk_isosceles;
  std::vector<int> marks;
  WeightScheme weights = WeightScheme::cotangent;
  RunMethod method = RunMethod::torus;
  std::filesystem::path out_dir = ".";
  std::string name;  ///< defaults to the input stem

  // sphere-3fold
  int apex = -1;
  std::vector<int> sigma;  ///< empty: detect from geometry
  int seed_target = -1;

  double aspect = 1.0;  ///< rectangle width / height
  SolverKind solver = SolverKind::cholesky;
  Tolerances tol;

  std::string output_name() const {
    return name.empty() ? input.stem().string() : name;
  }
};

/**
 * Overlay keys of a JSON config onto `cfg`. Unknown keys are errors so that
 * typos do not silently fall back to defaults.
 */
inline void apply_json_config(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "input") cfg.input = v.get<std::string>();
      else if (key == "mode") cfg.mode = parse_mode(v.get<std::string>());
      else if (key == "marks") cfg.marks = v.get<std::vector<int>>();
      else if (key == "weights") cfg.weights = parse_weights(v.get<std::string>());
      else if (key == "method") cfg.method = parse_method(v.get<std::string>());
      else if (key == "out") cfg.out_dir = v.get<std::string>();
      else if (key == "name") cfg.name = v.get<std::string>();
      else if (key == "pO") cfg.apex = v.get<int>();
      else if (key == "sigma") {
        if (v.is_string() && v.get<std::string>() == "detect") cfg.sigma.clear();
        else cfg.sigma = v.get<std::vector<int>>();
      } else if (key == "seed_target") cfg.seed_target = v.get<int>();
      else if (key == "aspect") cfg.aspect = v.get<double>();
      else if (key == "solver") cfg.solver = parse_solver(v.get<std::string>());
      else if (key == "tolerances") {
        Tolerances& t = cfg.tol;
        const std::map<std::string, double*> fields{
            {"residual", &t.residual},         {"symmetry", &t.symmetry},
            {"marks", &t.marks},               {"straightness", &t.straightness},
            {"energy_spread", &t.energy_spread}, {"tiling_area", &t.tiling_area},
            {"tiling_rms", &t.tiling_rms},     {"hexagon_rms", &t.hexagon_rms},
            {"equilateral", &t.equilateral},   {"crosscheck", &t.crosscheck},
            {"conformal", &t.conformal}};
        for (const auto& [tk, tv] : v.items()) {
          const auto it = fields.find(tk);
          if (it == fields.end()) throw ConfigError("unknown tolerance '" + tk + "'");
          *it->second = tv.get<double>();
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

inline void apply_json_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  apply_json_config(cfg, j);
}

/// Rejects configurations whose fields do not fit the mode.
inline void validate_config(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("no input mesh given");
  if (cfg.mode == RunMode::sphere_3fold) {
    if (cfg.method != RunMethod::torus) {
      throw ConfigError("sphere-3fold has no direct solver; use --method torus");
    }
    if (!cfg.marks.empty()) throw ConfigError("sphere-3fold takes a cut system, not marks");
    if (cfg.apex < 0) throw ConfigError("sphere-3fold needs --pO");
    if (cfg.seed_target < 0) throw ConfigError("sphere-3fold needs --seed-target");
    return;
  }
  const std::size_t want = cfg.mode == RunMode::disk_rectangle ? 4 : 3;
  if (cfg.marks.size() != want) {
    throw ConfigError(std::string(to_string(cfg.mode)) + " needs " +
                      std::to_string(want) + " marks, got " +
                      std::to_string(cfg.marks.size()));
  }
  if (cfg.apex >= 0 || !cfg.sigma.empty() || cfg.seed_target >= 0) {
    throw ConfigError("cut-system fields are only valid for sphere-3fold");
  }
  if (!(cfg.aspect > 0.0)) throw ConfigError("aspect must be positive");
}

enum ExitCode { kExitPass = 0, kExitCheckFailure = 1, kExitConfigError = 2 };

struct RunOutcome {
  int exit_code = kExitPass;
  RunReport report;
  std::string error;
  std::vector<std::filesystem::path> written;
};

using RunLogger = std::function<void(int level, const std::string&)>;

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline TargetShape shape_for(const RunConfig& cfg) {
  switch (cfg.mode) {
    case RunMode::disk_isosceles: return TargetShape::right_isosceles();
    case RunMode::disk_equilateral: return TargetShape::equilateral();
    case RunMode::disk_rectangle: return TargetShape::rectangle(cfg.aspect, 1.0);
    case RunMode::sphere_3fold: break;
  }
  throw ConfigError("mode has no target shape");
}

inline double lattice_diameter(const Lattice& l) {
  return std::max({l.v1().norm(), l.v2().norm(), (l.v1() + l.v2()).norm(),
                   (l.v1() - l.v2()).norm()});
}

inline void add_symmetry(RunReport& r, const SymmetryReport& s, const std::string& prefix) {
  for (const SymmetryCheck& c : s.checks) {
    r.residuals[prefix + c.name] = c.max_residual;
    r.check(prefix + c.name, c.max_residual, c.tolerance, c.passed);
  }
}

/// Conformal energy is only meaningful for cotangent weights.
inline void add_conformal(RunReport& r, const SurfaceMesh& m, const EdgeWeights& w,
                          const std::vector<Vec2>& uv, const std::string& name,
                          double tol) {
  if (w.scheme != WeightScheme::cotangent || flip_count(m, uv) != 0) return;
  const double e = conformal_energy(m, w, uv);
  r.residuals[name] = e;
  const double scale = std::max(1.0, dirichlet_energy(m, w, uv));
  r.check(name + "_nonnegative", e, tol * scale, e >= -tol * scale);
}

struct TorusRun {
  GluedTorus torus;
  TorusEmbedding emb;
  std::vector<Vec2> tile0;
};

inline TorusRun run_torus(const RunConfig& cfg, GluedTorus t, RunReport& r,
                          const RunLogger& log) {
  const Tolerances& tol = cfg.tol;
  log(1, "construction " + t.construction + ": V=" +
             std::to_string(t.mesh.num_vertices()) + " E=" +
             std::to_string(t.mesh.num_edges()) + " F=" +
             std::to_string(t.mesh.num_faces()));
  r.construction = t.construction;
  r.k = t.copy_count;
  r.vertices = t.mesh.num_vertices();
  r.edges = t.mesh.num_edges();
  r.faces = t.mesh.num_faces();

  const CoveringReport cov = validate_covering(t);
  r.euler = cov.euler_characteristic;
  r.branch_table = cov.branch_table;
  r.check("covering", static_cast<double>(cov.failures.size()), 0.0, cov.ok());
  for (const auto& f : cov.failures) r.warnings.push_back("covering: " + f);

  const EdgeWeights w = make_weights(t.mesh, cfg.weights);
  const PositivityReport pos = weight_positivity_report(t.mesh, w);
  SolverOptions opt;
  opt.kind = cfg.solver;
  TorusEmbedding emb = solve_glued_torus(t, w, opt);
  r.solver = emb.stats;
  for (const auto& s : emb.stats.warnings) r.warnings.push_back("solver: " + s);
  log(1, "solver " + emb.stats.method + ": iterations " +
             std::to_string(emb.stats.iterations) + ", residual " +
             sci(emb.stats.relative_residual));
  r.residuals["solver"] = emb.stats.relative_residual;
  r.check_at_most("solver_residual", emb.stats.relative_residual, tol.residual);

  r.flips = flip_count(t.mesh, emb);
  if (pos.all_positive()) {
    r.check("flips", r.flips, 0.0, r.flips == 0);
  } else {
    r.warnings.push_back(std::to_string(pos.negative_edge_count) +
                         " negative edge weights; flip check skipped");
  }

  r.energies = per_copy_energies(t, w, emb);
  r.total_energy = 0.0;
  for (double e : r.energies) r.total_energy += e;
  const double spread = relative_spread(r.energies);
  r.residuals["energy_spread"] = spread;
  r.check_at_most("energy_spread", spread, tol.energy_spread);

  const TileExtraction tiles = check_tiling(t, emb);
  const double ldiam = lattice_diameter(emb.lattice);
  r.residuals["tiling_area"] = tiles.area_error;
  r.residuals["tiling_congruence"] = tiles.congruence_rms;
  r.check_at_most("tiling_area", tiles.area_error, tol.tiling_area);
  r.check_at_most("tiling_congruence", tiles.congruence_rms, tol.tiling_rms * ldiam);

  std::vector<Vec2> tile0 = tiles.tiles[0];
  if (t.construction == "tri8") {
    add_symmetry(r, check_reflections_8(t, emb, tol.symmetry), "reflection_");
    const TargetShape shape = TargetShape::right_isosceles();
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
      worst = std::max(worst, emb.lattice.mod_distance(tile0[t.disk.marks[j]],
                                                        shape.corners[j]));
    }
    r.residuals["mark_positions"] = worst;
    r.check_at_most("mark_positions", worst, tol.marks);
    const double straight = side_straightness(t, tile0);
    r.residuals["side_straightness"] = straight;
    r.check_at_most("side_straightness", straight, tol.straightness);
  } else if (t.construction == "tri42") {
    const double hex = hexagon_group_rms(t, emb);
    r.residuals["hexagon_groups"] = hex;
    r.check_at_most("hexagon_groups", hex, tol.hexagon_rms);
    double irregular = 0.0;
    for (const auto& tile : tiles.tiles) {
      irregular = std::max(irregular, mark_polygon_irregularity(t, tile));
    }
    r.residuals["tile_irregularity"] = irregular;
    r.check_at_most("tile_irregularity", irregular, tol.equilateral);
  } else if (t.construction == "quad4") {
    const double straight = side_straightness(t, tile0);
    r.residuals["side_straightness"] = straight;
    r.check_at_most("side_straightness", straight, tol.straightness);
  } else if (t.construction == "sphere63") {
    add_symmetry(r, check_rotation_63(t, emb, tol.symmetry), "");
  }
  if (!t.flipped[0]) {
    add_conformal(r, t.disk.mesh, make_weights(t.disk.mesh, cfg.weights), tile0,
                  "conformal_energy", tol.conformal);
  }
  return {std::move(t), std::move(emb), std::move(tile0)};
}

inline void write_text(const std::filesystem::path& p, const std::string& s,
                       RunOutcome& out) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << s;
  if (!f) throw Error("write failed: " + p.string());
  out.written.push_back(p);
}

inline RunOutcome run_unchecked(const RunConfig& cfg, const RunLogger& log) {
  validate_config(cfg);
  RunOutcome out;
  RunReport& r = out.report;
  r.mode = to_string(cfg.mode);
  r.weights = to_string(cfg.weights);
  r.method = to_string(cfg.method);

  SurfaceMesh mesh = load_obj(cfg.input);
  log(1, "loaded " + cfg.input.string() + ": " + std::to_string(mesh.num_vertices()) +
             " vertices, " + std::to_string(mesh.num_faces()) + " faces");

  std::optional<TorusRun> tr;
  SurfaceMesh out_mesh;
  std::vector<Vec2> out_uv;

  if (cfg.mode == RunMode::sphere_3fold) {
    const std::vector<int> sigma =
        cfg.sigma.empty() ? detect_sigma(mesh, cfg.apex) : cfg.sigma;
    const SphereCutSystem cuts =
        make_symmetric_cuts(mesh, cfg.apex, sigma, cfg.seed_target);
    tr = run_torus(cfg, build_torus_63(cuts), r, log);
    out_mesh = tr->torus.disk.mesh;
    out_uv = tr->tile0;
  } else {
    const MarkedDisk disk = MarkedDisk::make(mesh, cfg.marks);
    const TargetShape shape = shape_for(cfg);
    if (cfg.method != RunMethod::direct) {
      tr = run_torus(cfg, build_torus_for(disk, shape), r, log);
      out_mesh = disk.mesh;
      out_uv = tr->tile0;
    }
    if (cfg.method != RunMethod::torus) {
      const EdgeWeights w = make_weights(disk.mesh, cfg.weights);
      const DirectSolution direct = solve_direct(disk, shape, w);
      const PositivityReport pos = weight_positivity_report(disk.mesh, w);
      r.residuals["direct"] = direct.relative_residual;
      r.check_at_most("direct_residual", direct.relative_residual, cfg.tol.residual);
      const int flips = flip_count(disk.mesh, direct.uv);
      r.residuals["direct_flips"] = flips;
      if (pos.all_positive()) r.check("direct_flips", flips, 0.0, flips == 0);
      add_conformal(r, disk.mesh, w, direct.uv, "direct_conformal_energy",
                    cfg.tol.conformal);
      if (!tr) {
        r.construction = std::string("direct-") + to_string(shape.kind);
        r.k = 1;
        r.vertices = disk.mesh.num_vertices();
        r.edges = disk.mesh.num_edges();
        r.faces = disk.mesh.num_faces();
        r.euler = classify(disk.mesh).euler_characteristic;
        r.flips = flips;
        r.energies = {dirichlet_energy(disk.mesh, w, direct.uv)};
        r.total_energy = r.energies[0];
        r.solver.method = "direct-ldlt";
        r.solver.relative_residual = direct.relative_residual;
      }
      if (cfg.method == RunMethod::both) {
        SolverOptions opt;
        opt.kind = cfg.solver;
        const CrosscheckReport cc = crosscheck_against_torus(disk, shape, cfg.weights, opt);
        log(1, "crosscheck relative RMS " + sci(cc.relative_rms));
        r.residuals["crosscheck_rms"] = cc.rms_deviation;
        r.residuals["crosscheck_relative_rms"] = cc.relative_rms;
        r.residuals["crosscheck_energy"] = cc.energy_relative_difference;
        r.check_at_most("crosscheck", cc.relative_rms, cfg.tol.crosscheck);
      }
      out_mesh = disk.mesh;
      out_uv = direct.uv;
    }
  }

  std::filesystem::create_directories(cfg.out_dir);
  const std::string name = cfg.output_name();
  const std::filesystem::path base = cfg.out_dir / name;
  {
    const std::filesystem::path p = base.string() + ".uv.obj";
    save_obj_with_uv(out_mesh, out_uv, p);
    out.written.push_back(p);
  }
  write_text(base.string() + ".svg",
             tr ? emit_svg(tr->torus, tr->emb) : emit_svg(out_mesh, out_uv), out);
  write_text(base.string() + ".report.json", emit_report(r), out);
  for (const CheckResult& c : r.checks) {
    log(c.passed ? 2 : 0, std::string(c.passed ? "pass " : "FAIL ") + c.name + " " +
                              sci(c.value) + " (tol " + sci(c.tolerance) + ")");
  }
  out.exit_code = r.passed() ? kExitPass : kExitCheckFailure;
  return out;
}

}  // namespace detail

/**
 * Runs one configuration and writes `<name>.uv.obj`, `<name>.svg` and
 * `<name>.report.json` into the output directory. Exit code 0 when every
 * enabled check passes, 1 on a failed check or solver breakdown, 2 on a
 * configuration or input error.
 */
inline RunOutcome run(const RunConfig& cfg, const RunLogger& log = {}) {
  const RunLogger sink = log ? log : RunLogger([](int, const std::string&) {});
  try {
    return detail::run_unchecked(cfg, sink);
  } catch (const SolverError& e) {
    RunOutcome out;
    out.exit_code = kExitCheckFailure;
    out.error = std::string("solver error: ") + e.what();
    return out;
  } catch (const std::exception& e) {
    RunOutcome out;
    out.exit_code = kExitConfigError;
    out.error = e.what();
    return out;
  }
}

}  // namespace torusparam
