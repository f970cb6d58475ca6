#include "pillarflow/triangulate.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pillarflow/mesh_io.hpp"

namespace pillarflow {
namespace {

Pslg unit_square_pslg() {
  Pslg g;
  g.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  g.segments = {{0, 1, BoundaryLabel::Wall},
                {1, 2, BoundaryLabel::Outlet},
                {2, 3, BoundaryLabel::Wall},
                {3, 0, BoundaryLabel::Inlet}};
  return g;
}

double mesh_area(const Mesh& m) {
  double a = 0.0;
  for (int t = 0; t < m.n_triangles(); ++t) a += m.signed_area(t);
  return a;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

TEST(Mesher, SquareAreaConservation) {
  const Mesh m = triangulate(unit_square_pslg(), /*h_target=*/2.0, /*min_angle=*/20.0);
  EXPECT_NEAR(mesh_area(m), 1.0, 1e-12);
  for (int t = 0; t < m.n_triangles(); ++t) EXPECT_GT(m.signed_area(t), 0.0);
}

TEST(Mesher, HoleAreaMatchesInscribedPolygon) {
  DomainSpec s;
  s.m = 1;
  s.rho = 0.125;
  const int n_seg = 64;
  const auto g = build_pslg(s, NSegPolicy::exact(n_seg));
  const Mesh m = triangulate(g, 0.2, 25.0);
  const double r = 0.125;
  const double poly_area = (n_seg / 2.0) * r * r * std::sin(2 * 3.14159265358979323846 / n_seg);
  EXPECT_NEAR(mesh_area(m), 1.0 - poly_area, 1e-12);
}

TEST(Mesher, RespectsAngleAndSizeBounds) {
  DomainSpec s;
  s.m = 2;
  const auto g = build_pslg(s, NSegPolicy::auto_for(0.1));
  const Mesh m = triangulate(g, 0.1, 25.0);
  const auto q = quality_report(m);
  EXPECT_GE(q.min_angle, 25.0 - 1e-9);
  EXPECT_LE(q.h_max, 0.1 * (1 + 1e-12));
  EXPECT_GT(q.fluid_area, 0.0);
}

TEST(Mesher, GridFactorSizeBound) {
  DomainSpec s;
  s.m = 2;
  const double h = s.eps() / 6.0;  // N_g = 6
  const Mesh m = triangulate(build_pslg(s, NSegPolicy::auto_for(h)), h, 25.0);
  EXPECT_LE(quality_report(m).h_max, 1.0 / 12.0 + 1e-15);
}

TEST(Mesher, Determinism) {
  DomainSpec s;
  s.m = 2;
  s.delta = 1.0 / 3.0;
  const auto g = build_pslg(s, NSegPolicy::exact(16));
  const Mesh a = triangulate(g, 0.08, 25.0);
  const Mesh b = triangulate(g, 0.08, 25.0);
  ASSERT_EQ(a.vertices.size(), b.vertices.size());
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    EXPECT_EQ(a.vertices[i].x, b.vertices[i].x);
    EXPECT_EQ(a.vertices[i].y, b.vertices[i].y);
  }
  EXPECT_EQ(a.triangles, b.triangles);
  ASSERT_EQ(a.boundary_edges.size(), b.boundary_edges.size());
  for (std::size_t e = 0; e < a.boundary_edges.size(); ++e) {
    EXPECT_EQ(a.boundary_edges[e].a, b.boundary_edges[e].a);
    EXPECT_EQ(a.boundary_edges[e].b, b.boundary_edges[e].b);
    EXPECT_EQ(a.boundary_edges[e].label, b.boundary_edges[e].label);
  }
}

TEST(Mesher, InletLengthEqualsChannelHeight) {
  DomainSpec s;
  s.m = 2;
  const Mesh m = triangulate(build_pslg(s, NSegPolicy::auto_for(0.12)), 0.12, 25.0);
  double inlet = 0.0, outlet = 0.0;
  for (const auto& e : m.boundary_edges) {
    if (e.label == BoundaryLabel::Inlet) inlet += dist(m.vertices[e.a], m.vertices[e.b]);
    if (e.label == BoundaryLabel::Outlet) outlet += dist(m.vertices[e.a], m.vertices[e.b]);
  }
  EXPECT_NEAR(inlet, s.L_y, 1e-10);
  EXPECT_NEAR(outlet, s.L_y, 1e-10);
  for (const auto& e : m.boundary_edges) {
    if (e.label == BoundaryLabel::Inlet)
      EXPECT_NEAR(m.vertices[e.a].x, 0.0, 1e-12) << "inlet edge off the left boundary";
    if (e.label == BoundaryLabel::Outlet)
      EXPECT_NEAR(m.vertices[e.a].x, s.L_x, 1e-12) << "outlet edge off the right boundary";
  }
}

TEST(Mesher, RefinementMonotonicity) {
  DomainSpec s;
  s.m = 1;
  const auto g = build_pslg(s, NSegPolicy::exact(24));
  double prev = 1e9;
  for (double h : {0.4, 0.2, 0.1, 0.05}) {
    const Mesh m = triangulate(g, h, 25.0);
    EXPECT_LE(m.h_max, prev + 1e-15);
    prev = m.h_max;
  }
}

// Local constrained-Delaunay check: across every unconstrained interior edge,
// the opposite apex must not lie strictly inside the triangle's circumcircle.
TEST(Mesher, LocallyDelaunay) {
  DomainSpec s;
  s.m = 2;
  const Mesh m = triangulate(build_pslg(s, NSegPolicy::auto_for(0.09)), 0.09, 25.0);

  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge2tri;
  for (int t = 0; t < m.n_triangles(); ++t)
    for (int j = 0; j < 3; ++j) {
      const int a = m.triangles[t][(j + 1) % 3], b = m.triangles[t][(j + 2) % 3];
      edge2tri[{std::min(a, b), std::max(a, b)}].push_back({t, m.triangles[t][j]});
    }
  std::set<std::pair<int, int>> constrained;
  for (const auto& e : m.boundary_edges) constrained.insert({e.a, e.b});

  auto incircle = [&](int t, const Vec2& p) {
    const Vec2& a = m.vertices[m.triangles[t][0]];
    const Vec2& b = m.vertices[m.triangles[t][1]];
    const Vec2& c = m.vertices[m.triangles[t][2]];
    const double adx = a.x - p.x, ady = a.y - p.y;
    const double bdx = b.x - p.x, bdy = b.y - p.y;
    const double cdx = c.x - p.x, cdy = c.y - p.y;
    const double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - cdy * bd) - ady * (bdx * cd - cdx * bd) + ad * (bdx * cdy - cdx * bdy);
  };

  int interior_edges = 0;
  for (const auto& [edge, tris] : edge2tri) {
    if (constrained.count(edge)) {
      EXPECT_EQ(tris.size(), 1u) << "boundary edge shared by two triangles";
      continue;
    }
    ASSERT_EQ(tris.size(), 2u) << "interior edge not shared by exactly two triangles";
    ++interior_edges;
    for (int side = 0; side < 2; ++side) {
      const int t = tris[side].first;
      const Vec2& apex = m.vertices[tris[1 - side].second];
      EXPECT_LE(incircle(t, apex), 1e-9) << "edge (" << edge.first << "," << edge.second << ")";
    }
  }
  EXPECT_GT(interior_edges, 0);
}

TEST(Mesher, EveryVertexInsideDomain) {
  DomainSpec s;
  s.m = 2;
  const auto pillars = enumerate_pillars(s);
  const Mesh m = triangulate(build_pslg(s, NSegPolicy::auto_for(0.1)), 0.1, 25.0);
  for (const Vec2& v : m.vertices) {
    EXPECT_GE(v.x, -1e-12);
    EXPECT_LE(v.x, 1.0 + 1e-12);
    EXPECT_GE(v.y, -1e-12);
    EXPECT_LE(v.y, 1.0 + 1e-12);
    for (const auto& p : pillars)
      EXPECT_GE(dist(v, p.center), p.radius * std::cos(3.14159265358979323846 / 16) - 1e-12)
          << "vertex strictly inside a pillar";
  }
}

TEST(Mesher, QualityReportRightTriangle) {
  Mesh m;
  m.vertices = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.h_max = std::sqrt(2.0);
  const auto q = quality_report(m);
  EXPECT_NEAR(q.min_angle, 45.0, 1e-12);
  EXPECT_NEAR(q.h_max, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(q.fluid_area, 0.5, 1e-15);
  EXPECT_EQ(q.n_triangles, 1);
}

TEST(Mesher, QualityReportUnitSquare) {
  Mesh m;
  m.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  const auto q = quality_report(m);
  EXPECT_NEAR(q.fluid_area, 1.0, 1e-15);
}

TEST(MeshIo, RoundTripIsByteIdentical) {
  DomainSpec s;
  s.m = 2;
  const Mesh m = triangulate(build_pslg(s, NSegPolicy::exact(16)), 0.15, 25.0);
  const auto dir = std::filesystem::temp_directory_path() / "pf_meshio";
  std::filesystem::create_directories(dir);
  const std::string b1 = (dir / "m1").string(), b2 = (dir / "m2").string();
  write_mesh(m, b1);
  const Mesh r = read_mesh(b1);
  write_mesh(r, b2);
  for (const char* ext : {".node", ".ele", ".edge"})
    EXPECT_EQ(slurp(b1 + ext), slurp(b2 + ext)) << ext;
  EXPECT_EQ(m.vertices.size(), r.vertices.size());
  EXPECT_EQ(m.triangles, r.triangles);
  EXPECT_EQ(m.h_max, r.h_max);
}

TEST(MeshIo, HandWrittenFixture) {
  const auto dir = std::filesystem::temp_directory_path() / "pf_meshio";
  std::filesystem::create_directories(dir);
  const std::string base = (dir / "hand").string();
  std::ofstream(base + ".node") << "4 2 0 0\n1 0 0\n2 1 0\n3 1 1\n4 0 1\n";
  std::ofstream(base + ".ele") << "2 3 0\n1 1 2 3\n2 1 3 4\n";
  std::ofstream(base + ".edge") << "4 1\n1 1 2 3\n2 2 3 2\n3 3 4 3\n4 4 1 1\n";
  const Mesh m = read_mesh(base);
  EXPECT_NEAR(mesh_area(m), 1.0, 1e-15);
  EXPECT_EQ(m.boundary_edges[1].label, BoundaryLabel::Outlet);
}

TEST(MeshIo, MissingVertexReferenceNamesLine) {
  const auto dir = std::filesystem::temp_directory_path() / "pf_meshio";
  std::filesystem::create_directories(dir);
  const std::string base = (dir / "bad").string();
  std::ofstream(base + ".node") << "3 2 0 0\n1 0 0\n2 1 0\n3 0 1\n";
  std::ofstream(base + ".ele") << "1 3 0\n1 1 2 9\n";
  std::ofstream(base + ".edge") << "0 1\n";
  try {
    read_mesh(base);
    FAIL() << "expected ComputeError";
  } catch (const ComputeError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("line 2"), std::string::npos) << what;
    EXPECT_NE(what.find("missing vertex"), std::string::npos) << what;
  }
}

}  // namespace
}  // namespace pillarflow
