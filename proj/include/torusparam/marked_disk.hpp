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

#include <set>
#include <vector>

#include "torusparam/mesh.hpp"

namespace torusparam {

/**
 * @brief Disk with k >= 3 marked boundary vertices in boundary-loop order.
 *
 * Side j is the boundary path from mark j to mark j+1 (cyclically), listed
 * vertex by vertex including both ends. The boundary loop runs with the
 * surface on its left, so marks listed in loop order appear
 * counterclockwise.
 */
struct MarkedDisk {
  SurfaceMesh mesh;
  std::vector<int> marks;
  BoundaryLoop loop;
  std::vector<std::vector<int>> sides;

  static MarkedDisk make(SurfaceMesh mesh, std::vector<int> marks) {
    MarkedDisk d;
    d.loop = boundary_loop(mesh);  // throws unless the mesh is a disk
    if (marks.size() < 3) {
      throw ConfigError("a marked disk needs at least 3 marks, got " +
                        std::to_string(marks.size()));
    }
    if (std::set<int>(marks.begin(), marks.end()).size() != marks.size()) {
      throw ConfigError("marks must be distinct");
    }
    std::vector<int> pos;
    for (int m : marks) {
      const int p = d.loop.index_of(m);
      if (p < 0) {
        throw ConfigError("mark " + std::to_string(m) +
                          " is not a boundary vertex");
      }
      pos.push_back(p);
    }
    // Loop order: the positions must increase cyclically exactly once around.
    const int n = d.loop.size();
    int wraps = 0;
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if (pos[(j + 1) % pos.size()] <= pos[j]) ++wraps;
    }
    if (wraps != 1) {
      throw ConfigError(
          "marks are not in counterclockwise boundary-loop order");
    }
    for (std::size_t j = 0; j < pos.size(); ++j) {
      std::vector<int> side;
      const int end = pos[(j + 1) % pos.size()];
      for (int p = pos[j];; p = (p + 1) % n) {
        side.push_back(d.loop.vertices[p]);
        if (p == end) break;
      }
      d.sides.push_back(std::move(side));
    }
    d.mesh = std::move(mesh);
    d.marks = std::move(marks);
    return d;
  }

  int mark_count() const { return static_cast<int>(marks.size()); }
  /// Number of edges on side j.
  int side_length(int j) const {
    return static_cast<int>(sides[j].size()) - 1;
  }
};

}  // namespace torusparam
