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

// torusparam_cli run ...      parameterize a mesh, write OBJ/SVG/JSON
// torusparam_cli fixture ...  write one of the built-in meshes
//
// TORUSPARAM_LOG=0|1|2 (quiet, info, debug) sets stderr verbosity.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "torusparam/fixtures.hpp"
#include "torusparam/pipeline.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("TORUSPARAM_LOG");
  if (!env || !*env) return 0;
  const std::string s(env);
  if (s == "quiet") return 0;
  if (s == "info") return 1;
  if (s == "debug") return 2;
  return std::atoi(env);
}

torusparam::SurfaceMesh fixture_mesh(const std::string& name, int levels, unsigned seed) {
  namespace fx = torusparam::fixtures;
  if (name == "triangle") return fx::single_triangle();
  if (name == "quad") return fx::quad();
  if (name == "quad-fan") return fx::quad_fan();
  if (name == "delaunay") return fx::random_delaunay_disk(seed ? seed : 7);
  if (name == "asymmetric") return fx::asymmetric_disk(seed ? seed : 11);
  if (name == "bumped") return fx::bumped_disk(seed ? seed : 11);
  if (name == "tetrahedron") return fx::tetrahedron().mesh;
  if (name == "sphere") return fx::subdivided_sphere(levels).mesh;
  throw torusparam::ConfigError("unknown fixture '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric torus parameterization of disks and 3-fold spheres"};
  app.require_subcommand(1);

  // run
  CLI::App* run = app.add_subcommand("run", "parameterize one mesh");
  std::string config_path, input, mode, marks, weights, method, out_dir, name, sigma,
      solver;
  int apex = -1, seed_target = -1;
  double aspect = 1.0;
  run->add_option("--config", config_path, "JSON config file; flags override it");
  auto* o_input = run->add_option("--input", input, "input OBJ mesh");
  auto* o_mode = run->add_option("--mode", mode,
                                 "disk-isosceles | disk-equilateral | disk-rectangle | "
                                 "sphere-3fold");
  auto* o_marks = run->add_option("--marks", marks, "comma-separated boundary marks");
  auto* o_weights = run->add_option("--weights", weights, "cotan | uniform");
  auto* o_method = run->add_option("--method", method, "torus | direct | both");
  auto* o_out = run->add_option("--out", out_dir, "output directory");
  auto* o_name = run->add_option("--name", name, "output base name");
  auto* o_apex = run->add_option("--pO", apex, "apex vertex (sphere-3fold)");
  auto* o_sigma = run->add_option("--sigma", sigma, "vertex permutation or 'detect'");
  auto* o_seed = run->add_option("--seed-target", seed_target, "first cut path end");
  auto* o_aspect = run->add_option("--aspect", aspect, "rectangle width / height");
  auto* o_solver = run->add_option("--solver", solver, "cholesky | cg");

  // fixture
  CLI::App* fixture = app.add_subcommand("fixture", "write a built-in mesh as OBJ");
  std::string fixture_name, fixture_out;
  int levels = 1;
  unsigned seed = 0;
  fixture
      ->add_option("name", fixture_name,
                   "triangle | quad | quad-fan | delaunay | asymmetric | bumped | "
                   "tetrahedron | sphere")
      ->required();
  fixture->add_option("output", fixture_out, "output OBJ path")->required();
  fixture->add_option("--levels", levels, "subdivision levels for 'sphere'");
  fixture->add_option("--seed", seed, "random seed for generated disks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : torusparam::kExitConfigError;
  }

  const int verbosity = log_level();
  auto log = [verbosity](int level, const std::string& msg) {
    if (level <= verbosity) std::cerr << "[torusparam] " << msg << '\n';
  };

  if (fixture->parsed()) {
    try {
      torusparam::save_obj(fixture_mesh(fixture_name, levels, seed), fixture_out);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return torusparam::kExitConfigError;
    }
    log(1, "wrote " + fixture_out);
    return torusparam::kExitPass;
  }

  torusparam::RunConfig cfg;
  try {
    if (!config_path.empty()) torusparam::apply_json_config_file(cfg, config_path);
    if (o_input->count()) cfg.input = input;
    if (o_mode->count()) cfg.mode = torusparam::parse_mode(mode);
    if (o_marks->count()) cfg.marks = torusparam::parse_int_list(marks);
    if (o_weights->count()) cfg.weights = torusparam::parse_weights(weights);
    if (o_method->count()) cfg.method = torusparam::parse_method(method);
    if (o_out->count()) cfg.out_dir = out_dir;
    if (o_name->count()) cfg.name = name;
    if (o_apex->count()) cfg.apex = apex;
    if (o_sigma->count()) {
      cfg.sigma = sigma == "detect" ? std::vector<int>{} : torusparam::parse_int_list(sigma);
    }
    if (o_seed->count()) cfg.seed_target = seed_target;
    if (o_aspect->count()) cfg.aspect = aspect;
    if (o_solver->count()) cfg.solver = torusparam::parse_solver(solver);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return torusparam::kExitConfigError;
  }

  const torusparam::RunOutcome out = torusparam::run(cfg, log);
  if (!out.error.empty()) {
    std::cerr << "error: " << out.error << '\n';
    return out.exit_code;
  }
  for (const auto& c : out.report.checks) {
    if (!c.passed) {
      std::cerr << "check failed: " << c.name << " = " << c.value << " (tolerance "
                << c.tolerance << ")\n";
    }
  }
  for (const auto& p : out.written) log(1, "wrote " + p.string());
  std::cout << (out.exit_code == 0 ? "PASS" : "FAIL") << ' '
            << out.report.construction << ' ' << out.report.k << " copies, "
            << out.report.checks.size() << " checks\n";
  return out.exit_code;
}
