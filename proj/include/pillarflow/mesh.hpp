#ifndef PILLARFLOW_MESH_HPP
#define PILLARFLOW_MESH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "pillarflow/core.hpp"
#include "pillarflow/geometry.hpp"

namespace pillarflow {

/// Conforming triangulation of the fluid region. Triangles are
/// counter-clockwise; every boundary edge carries exactly one label.
struct Mesh {
  struct BoundaryEdge {
    int a = 0;
    int b = 0;
    BoundaryLabel label = BoundaryLabel::Wall;
  };

  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h_max = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  double signed_area(int t) const {
    const Vec2& a = vertices[triangles[t][0]];
    const Vec2& b = vertices[triangles[t][1]];
    const Vec2& c = vertices[triangles[t][2]];
    return 0.5 * cross(b - a, c - a);
  }
};

struct MeshQualityReport {
  double min_angle = 0.0;  // degrees
  double h_max = 0.0;
  double h_min = 0.0;
  int n_vertices = 0;
  int n_triangles = 0;
  double fluid_area = 0.0;
};

/// Exact aggregate statistics over all triangles.
inline MeshQualityReport quality_report(const Mesh& mesh) {
  PF_REQUIRE(!mesh.triangles.empty(), "quality_report: empty mesh");
  MeshQualityReport rep;
  rep.n_vertices = mesh.n_vertices();
  rep.n_triangles = mesh.n_triangles();
  rep.min_angle = 180.0;
  rep.h_min = std::numeric_limits<double>::max();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Vec2& a = mesh.vertices[mesh.triangles[t][0]];
    const Vec2& b = mesh.vertices[mesh.triangles[t][1]];
    const Vec2& c = mesh.vertices[mesh.triangles[t][2]];
    const double la = dist(b, c), lb = dist(c, a), lc = dist(a, b);
    rep.h_max = std::max({rep.h_max, la, lb, lc});
    rep.h_min = std::min({rep.h_min, la, lb, lc});
    rep.fluid_area += 0.5 * cross(b - a, c - a);
    // law of cosines at each corner
    const double ca = std::acos(std::clamp((lb * lb + lc * lc - la * la) / (2 * lb * lc), -1.0, 1.0));
    const double cb = std::acos(std::clamp((la * la + lc * lc - lb * lb) / (2 * la * lc), -1.0, 1.0));
    const double cc = 3.14159265358979323846 - ca - cb;
    const double deg = 180.0 / 3.14159265358979323846;
    rep.min_angle = std::min({rep.min_angle, ca * deg, cb * deg, cc * deg});
  }
  return rep;
}

}  // namespace pillarflow

#endif  // PILLARFLOW_MESH_HPP
