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

#include <filesystem>
#include <sstream>

#include "torusparam/fixtures.hpp"
#include "torusparam/marked_disk.hpp"
#include "torusparam/obj_io.hpp"

namespace torusparam {
namespace {

namespace fx = fixtures;

ObjContents parse(const std::string& text) {
  std::istringstream in(text);
  return read_obj(in);
}

// Every halfedge invariant that the rest of the library leans on.
void expect_halfedge_invariants(const SurfaceMesh& m) {
  for (int h = 0; h < m.num_halfedges(); ++h) {
    EXPECT_EQ(SurfaceMesh::next(SurfaceMesh::next(SurfaceMesh::next(h))), h);
    EXPECT_EQ(SurfaceMesh::prev(SurfaceMesh::next(h)), h);
    EXPECT_EQ(m.tail(SurfaceMesh::next(h)), m.head(h));
    const int t = m.twin(h);
    if (t >= 0) {
      EXPECT_EQ(m.twin(t), h);
      EXPECT_EQ(m.tail(t), m.head(h));
      EXPECT_EQ(m.head(t), m.tail(h));
      EXPECT_EQ(m.edge(t), m.edge(h));
    }
  }
  for (int v = 0; v < m.num_vertices(); ++v) {
    for (int h : m.outgoing(v)) EXPECT_EQ(m.tail(h), v);
  }
}

TEST(ObjReader, ParsesPositionsAndFaces) {
  const ObjContents c = parse(
      "# a square\n"
      "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
      "f 1 2 3\nf 1 3 4\n");
  EXPECT_EQ(c.mesh.num_vertices(), 4);
  EXPECT_EQ(c.mesh.num_faces(), 2);
  EXPECT_EQ(c.mesh.num_edges(), 5);
  EXPECT_FALSE(c.uv.has_value());
}

TEST(ObjReader, AcceptsSlashFormsAndRelativeIndices) {
  const ObjContents c = parse(
      "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
      "vt 0 0\nvt 1 0\nvt 0 1\n"
      "f -3/1 -2/2 -1/3\n");
  ASSERT_EQ(c.mesh.num_faces(), 1);
  EXPECT_EQ(c.mesh.face(0), (Face{0, 1, 2}));
  ASSERT_TRUE(c.uv.has_value());
  EXPECT_DOUBLE_EQ((*c.uv)[1].x(), 1.0);
}

TEST(ObjReader, ReportsLineNumbers) {
  try {
    parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
  EXPECT_THROW(parse("v 0 0\n"), ParseError);
  EXPECT_THROW(parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 3 4\n"), ParseError);
  EXPECT_THROW(parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 1 2\n"), ParseError);
}

TEST(ObjReader, RejectsNonManifoldEdge) {
  // Three triangles on the edge 1-2.
  EXPECT_THROW(parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nv 0 0 1\n"
                     "f 1 2 3\nf 2 1 4\nf 1 2 5\n"),
               TopologyError);
}

TEST(ObjReader, RoundTripsThroughWriter) {
  const SurfaceMesh m = fx::random_delaunay_disk();
  std::vector<Vec2> uv;
  for (const Vec3& p : m.positions()) uv.emplace_back(p.x(), p.y());
  std::ostringstream out;
  write_obj_with_uv(out, m, uv);
  const ObjContents back = parse(out.str());
  EXPECT_EQ(back.mesh.faces(), m.faces());
  ASSERT_TRUE(back.uv.has_value());
  for (int v = 0; v < m.num_vertices(); ++v) {
    EXPECT_EQ(back.mesh.position(v), m.position(v));
    EXPECT_EQ((*back.uv)[v], uv[v]);
  }
}

TEST(ObjReader, ShippedFixturesMatchGenerators) {
  const std::filesystem::path dir = TORUSPARAM_FIXTURE_DIR;
  const std::vector<std::pair<std::string, SurfaceMesh>> cases{
      {"triangle", fx::single_triangle()},
      {"quad", fx::quad()},
      {"quad-fan", fx::quad_fan()},
      {"delaunay", fx::random_delaunay_disk()},
      {"asymmetric", fx::asymmetric_disk()},
      {"tetrahedron", fx::tetrahedron().mesh},
      {"sphere1", fx::subdivided_sphere(1).mesh},
      {"sphere2", fx::subdivided_sphere(2).mesh}};
  for (const auto& [name, want] : cases) {
    SCOPED_TRACE(name);
    const SurfaceMesh got = load_obj(dir / (name + ".obj"));
    EXPECT_EQ(got.faces(), want.faces());
    ASSERT_EQ(got.num_vertices(), want.num_vertices());
    for (int v = 0; v < want.num_vertices(); ++v) EXPECT_EQ(got.position(v), want.position(v));
  }
}

TEST(Topology, ClassifiesFixtures) {
  EXPECT_TRUE(classify(fx::single_triangle()).is_disk());
  EXPECT_TRUE(classify(fx::random_delaunay_disk()).is_disk());
  EXPECT_TRUE(classify(fx::tetrahedron().mesh).is_sphere());
  const TopologyReport s = classify(fx::subdivided_sphere(2).mesh);
  EXPECT_TRUE(s.is_sphere());
  EXPECT_EQ(s.genus, 0);
}

TEST(Topology, HalfedgeInvariantsHold) {
  expect_halfedge_invariants(fx::quad_fan());
  expect_halfedge_invariants(fx::random_delaunay_disk());
  expect_halfedge_invariants(fx::asymmetric_disk());
  expect_halfedge_invariants(fx::subdivided_sphere(1).mesh);
}

TEST(Topology, BoundaryVertexFanStartsAtBoundary) {
  const SurfaceMesh m = fx::quad_fan();
  for (int v = 0; v < 4; ++v) {
    const auto fan = m.outgoing(v);
    EXPECT_TRUE(m.is_boundary_halfedge(fan.front()));
    EXPECT_EQ(fan.size(), 2u);
  }
  EXPECT_EQ(m.outgoing(4).size(), 4u);
  EXPECT_FALSE(m.is_boundary_vertex(4));
}

TEST(Topology, BoundaryLoopKeepsSurfaceOnTheLeft) {
  const SurfaceMesh m = fx::random_delaunay_disk();
  const BoundaryLoop loop = boundary_loop(m);
  double area = 0.0;
  for (int i = 0; i < loop.size(); ++i) {
    const Vec3& a = m.position(loop.vertices[i]);
    const Vec3& b = m.position(loop.vertices[(i + 1) % loop.size()]);
    area += a.x() * b.y() - a.y() * b.x();
  }
  EXPECT_GT(area, 0.0);
  EXPECT_THROW(boundary_loop(fx::tetrahedron().mesh), TopologyError);
}

TEST(MarkedDisk, SplitsBoundaryIntoSides) {
  const SurfaceMesh m = fx::random_delaunay_disk();
  const std::vector<int> marks = fx::spaced_marks(m, 3);
  const MarkedDisk d = MarkedDisk::make(m, marks);
  int edges = 0;
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(d.sides[j].front(), marks[j]);
    EXPECT_EQ(d.sides[j].back(), marks[(j + 1) % 3]);
    edges += d.side_length(j);
  }
  EXPECT_EQ(edges, d.loop.size());
}

TEST(MarkedDisk, RejectsBadMarks) {
  const SurfaceMesh m = fx::quad_fan();
  EXPECT_THROW(MarkedDisk::make(m, {0, 1}), ConfigError);
  EXPECT_THROW(MarkedDisk::make(m, {0, 1, 1}), ConfigError);
  EXPECT_THROW(MarkedDisk::make(m, {0, 1, 4}), ConfigError);  // interior
  EXPECT_THROW(MarkedDisk::make(m, {0, 2, 1}), ConfigError);  // clockwise
  EXPECT_THROW(MarkedDisk::make(fx::tetrahedron().mesh, {0, 1, 2}), TopologyError);
}

}  // namespace
}  // namespace torusparam
