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

#include <cstdio>
#include <json.hpp>
#include <sstream>
#include <string>

#include "torusparam/analysis.hpp"
#include "torusparam/covering.hpp"

namespace torusparam {

struct SvgOptions {
  double size_px = 640.0;
  double margin_px = 20.0;
  /// Draw the neighboring translates of the tiles in light gray.
  bool show_translates = false;
};

namespace detail {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

/// Maps plane coordinates into the SVG viewport with y pointing up.
struct Viewport {
  Vec2 lo, hi;
  double scale = 1.0;
  double margin = 0.0;

  Viewport(const std::vector<Vec2>& pts, const SvgOptions& opt) : margin(opt.margin_px) {
    lo = hi = pts.front();
    for (const Vec2& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const double span = std::max((hi - lo).maxCoeff(), 1e-12);
    scale = (opt.size_px - 2.0 * margin) / span;
  }
  double width() const { return (hi.x() - lo.x()) * scale + 2.0 * margin; }
  double height() const { return (hi.y() - lo.y()) * scale + 2.0 * margin; }
  std::string point(const Vec2& p) const {
    return fmt((p.x() - lo.x()) * scale + margin) + "," +
           fmt((hi.y() - p.y()) * scale + margin);
  }
};

inline std::string hsl_for(int i, int n) {
  // Golden-angle hue steps keep neighboring copies apart.
  const int hue = static_cast<int>(std::fmod(137.508 * i, 360.0));
  (void)n;
  return "hsl(" + std::to_string(hue) + ",65%,70%)";
}

}  // namespace detail

/**
 * SVG of a torus embedding: the fundamental parallelogram and one group of
 * triangles per copy, each tile moved to the translate whose centroid lies
 * in the parallelogram.
 */
inline std::string emit_svg(const GluedTorus& t, const TorusEmbedding& emb,
                            const SvgOptions& opt = {}) {
  if (emb.lift.empty() || t.copy_count == 0) throw ConfigError("empty embedding");
  const Lattice& lat = emb.lattice;
  const std::vector<Vec2> domain{Vec2::Zero(), lat.v1(), lat.v1() + lat.v2(), lat.v2()};

  std::vector<std::vector<Vec2>> tiles;
  std::vector<Vec2> extent = domain;
  for (int c = 0; c < t.copy_count; ++c) {
    std::vector<Vec2> p = copy_lift(t, emb, c);
    Vec2 centroid = Vec2::Zero();
    for (int m : t.disk.marks) centroid += p[m];
    centroid /= static_cast<double>(t.disk.marks.size());
    const Vec2 shift = lat.at(lat.floor(centroid));
    for (Vec2& q : p) q -= shift;
    extent.insert(extent.end(), p.begin(), p.end());
    tiles.push_back(std::move(p));
  }
  const detail::Viewport vp(extent, opt);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << detail::fmt(vp.width()) << "\" height=\"" << detail::fmt(vp.height())
      << "\">\n";
  out << "<title>" << t.construction << ", " << t.copy_count << " copies</title>\n";
  const SurfaceMesh& disk = t.disk.mesh;
  for (int c = 0; c < t.copy_count; ++c) {
    if (opt.show_translates) {
      out << "<g class=\"translates\" fill=\"#eeeeee\" stroke=\"none\">\n";
      for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
          if (i == 0 && j == 0) continue;
          const Vec2 d = lat.at({i, j});
          for (const Face& f : disk.faces()) {
            out << "<polygon points=\"" << vp.point(tiles[c][f[0]] + d) << ' '
                << vp.point(tiles[c][f[1]] + d) << ' ' << vp.point(tiles[c][f[2]] + d)
                << "\"/>\n";
          }
        }
      }
      out << "</g>\n";
    }
    out << "<g id=\"copy-" << c << "\" fill=\"" << detail::hsl_for(c, t.copy_count)
        << "\" stroke=\"#333333\" stroke-width=\"0.3\">\n";
    for (const Face& f : disk.faces()) {
      out << "<polygon points=\"" << vp.point(tiles[c][f[0]]) << ' '
          << vp.point(tiles[c][f[1]]) << ' ' << vp.point(tiles[c][f[2]]) << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "<polygon id=\"fundamental-domain\" fill=\"none\" stroke=\"#000000\" "
         "stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < domain.size(); ++i) {
    out << (i ? " " : "") << vp.point(domain[i]);
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

/// SVG of a planar map of a single disk.
inline std::string emit_svg(const SurfaceMesh& disk, const std::vector<Vec2>& uv,
                            const SvgOptions& opt = {}) {
  if (uv.empty() || disk.num_faces() == 0) throw ConfigError("empty embedding");
  const detail::Viewport vp(uv, opt);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << detail::fmt(vp.width()) << "\" height=\"" << detail::fmt(vp.height())
      << "\">\n<g id=\"copy-0\" fill=\"" << detail::hsl_for(0, 1)
      << "\" stroke=\"#333333\" stroke-width=\"0.3\">\n";
  for (const Face& f : disk.faces()) {
    out << "<polygon points=\"" << vp.point(uv[f[0]]) << ' ' << vp.point(uv[f[1]])
        << ' ' << vp.point(uv[f[2]]) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

/** @brief One pass/fail line of a run */
struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/** @brief Everything a run reports; serialized by emit_report */
struct RunReport {
  std::string construction;
  std::string mode;
  std::string weights;
  std::string method;
  int k = 0;
  int vertices = 0, edges = 0, faces = 0, euler = 0;
  std::vector<double> energies;
  double total_energy = 0.0;
  std::map<std::string, double> residuals;
  int flips = 0;
  std::vector<BranchEntry> branch_table;
  SolverStats solver;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
  }
  void check(std::string name, double value, double tol, bool ok) {
    checks.push_back({std::move(name), value, tol, ok});
  }
  /// Passes when value <= tol.
  void check_at_most(std::string name, double value, double tol) {
    check(std::move(name), value, tol, value <= tol);
  }
};

/// JSON document with sorted keys, so equal reports serialize identically.
inline nlohmann::json report_json(const RunReport& r) {
  using nlohmann::json;
  json j;
  j["construction"] = r.construction;
  j["mode"] = r.mode;
  j["weights"] = r.weights;
  j["method"] = r.method;
  j["k"] = r.k;
  j["counts"] = {{"V", r.vertices}, {"E", r.edges}, {"F", r.faces}, {"euler", r.euler}};
  j["energies"] = r.energies;
  j["total_energy"] = r.total_energy;
  j["residuals"] = json::object();
  for (const auto& [k, v] : r.residuals) j["residuals"][k] = v;
  j["flips"] = r.flips;
  j["branch_table"] = json::array();
  for (const BranchEntry& b : r.branch_table) {
    json degrees = json::object();
    for (auto [d, n] : b.degree_counts) degrees[std::to_string(d)] = n;
    j["branch_table"].push_back({{"label", b.label},
                                 {"base_vertex", b.base_vertex},
                                 {"preimages", b.preimages},
                                 {"local_degrees", degrees}});
  }
  j["solver"] = {{"method", r.solver.method},
                 {"iters", r.solver.iterations},
                 {"residual", r.solver.relative_residual},
                 {"max_equation_residual", r.solver.max_equation_residual}};
  j["checks"] = json::array();
  for (const CheckResult& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed}});
  }
  j["warnings"] = r.warnings;
  j["passed"] = r.passed();
  return j;
}

inline std::string emit_report(const RunReport& r) {
  return report_json(r).dump(2) + "\n";
}

}  // namespace torusparam
