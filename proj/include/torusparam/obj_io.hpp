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

// Wavefront OBJ subset: `v`, `vt` and triangular `f` records. Indices are
// 1-based in the file and 0-based in memory. Other record types (vn, g, o,
// s, usemtl, mtllib) are skipped.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "torusparam/mesh.hpp"

namespace torusparam {

struct ObjContents {
  SurfaceMesh mesh;
  /// Per-vertex texture coordinates, present when every face corner names a
  /// `vt` and each vertex is always paired with the same one.
  std::optional<std::vector<Vec2>> uv;
};

namespace detail {

inline int resolve_obj_index(const std::string& tok, int count, int line) {
  std::size_t used = 0;
  long idx = 0;
  try {
    idx = std::stol(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("bad index '" + tok + "'", line);
  }
  if (used != tok.size()) throw ParseError("bad index '" + tok + "'", line);
  if (idx < 0) idx += count + 1;  // relative reference
  if (idx < 1 || idx > count) {
    throw ParseError("index " + tok + " out of range", line);
  }
  return static_cast<int>(idx - 1);
}

}  // namespace detail

inline ObjContents read_obj(std::istream& in) {
  std::vector<Vec3> positions;
  std::vector<Vec2> texcoords;
  std::vector<Face> faces;
  std::vector<std::array<int, 3>> face_vt;
  bool all_vt = true;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      raw.erase(hash);
    }
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw ParseError("malformed 'v' record", line);
      positions.emplace_back(x, y, z);
    } else if (tag == "vt") {
      double u, v;
      if (!(ls >> u >> v)) throw ParseError("malformed 'vt' record", line);
      texcoords.emplace_back(u, v);
    } else if (tag == "f") {
      std::vector<std::string> corners;
      for (std::string c; ls >> c;) corners.push_back(c);
      if (corners.size() != 3) {
        throw ParseError("face with " + std::to_string(corners.size()) +
                             " corners; only triangles are supported",
                         line);
      }
      Face f{};
      std::array<int, 3> vt{-1, -1, -1};
      for (int k = 0; k < 3; ++k) {
        const std::string& c = corners[k];
        const auto s1 = c.find('/');
        f[k] = detail::resolve_obj_index(c.substr(0, s1),
                                         static_cast<int>(positions.size()),
                                         line);
        if (s1 != std::string::npos) {
          const auto s2 = c.find('/', s1 + 1);
          const std::string t = c.substr(s1 + 1, s2 == std::string::npos
                                                      ? std::string::npos
                                                      : s2 - s1 - 1);
          if (!t.empty()) {
            vt[k] = detail::resolve_obj_index(
                t, static_cast<int>(texcoords.size()), line);
          }
        }
        if (vt[k] < 0) all_vt = false;
      }
      if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
        throw ParseError("degenerate face (repeated vertex index)", line);
      }
      faces.push_back(f);
      face_vt.push_back(vt);
    }
  }

  ObjContents out;
  out.mesh = SurfaceMesh::from_triangles(positions, faces);
  if (all_vt && !faces.empty()) {
    std::vector<int> chosen(positions.size(), -1);
    bool consistent = true;
    for (std::size_t f = 0; f < faces.size() && consistent; ++f) {
      for (int k = 0; k < 3; ++k) {
        int& c = chosen[faces[f][k]];
        if (c < 0) c = face_vt[f][k];
        // Seams (one vertex, several vt) are not representable per vertex.
        else if (texcoords[c] != texcoords[face_vt[f][k]]) consistent = false;
      }
    }
    if (consistent) {
      std::vector<Vec2> uv(positions.size(), Vec2::Zero());
      for (std::size_t v = 0; v < positions.size(); ++v) {
        if (chosen[v] >= 0) uv[v] = texcoords[chosen[v]];
      }
      out.uv = std::move(uv);
    }
  }
  return out;
}

inline ObjContents read_obj_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_obj(in);
}

/// Loads a mesh; normals and texture coordinates in the file are ignored.
inline SurfaceMesh load_obj(const std::filesystem::path& path) {
  return read_obj_file(path).mesh;
}

inline void write_obj_with_uv(std::ostream& out, const SurfaceMesh& mesh,
                              const std::vector<Vec2>& uv) {
  if (static_cast<int>(uv.size()) != mesh.num_vertices()) {
    throw ConfigError("uv count " + std::to_string(uv.size()) +
                      " does not match vertex count " +
                      std::to_string(mesh.num_vertices()));
  }
  out << std::setprecision(17);
  for (const Vec3& p : mesh.positions()) {
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  for (const Vec2& t : uv) out << "vt " << t.x() << ' ' << t.y() << '\n';
  for (const Face& f : mesh.faces()) {
    out << 'f';
    for (int k = 0; k < 3; ++k) out << ' ' << f[k] + 1 << '/' << f[k] + 1;
    out << '\n';
  }
}

inline void save_obj_with_uv(const SurfaceMesh& mesh,
                             const std::vector<Vec2>& uv,
                             const std::filesystem::path& path) {
  if (static_cast<int>(uv.size()) != mesh.num_vertices()) {
    throw ConfigError("uv count does not match vertex count");
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_obj_with_uv(out, mesh, uv);
  if (!out) throw Error("write failed: " + path.string());
}

inline void save_obj(const SurfaceMesh& mesh,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << std::setprecision(17);
  for (const Vec3& p : mesh.positions()) {
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  for (const Face& f : mesh.faces()) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace torusparam
