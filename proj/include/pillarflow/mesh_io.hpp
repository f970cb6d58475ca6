#ifndef PILLARFLOW_MESH_IO_HPP
#define PILLARFLOW_MESH_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "pillarflow/mesh.hpp"

namespace pillarflow {

/// Triangle-style text interchange:
///   <base>.node  "n 2 0 0"  then "index x y"        (1-based, %.17g)
///   <base>.ele   "n 3 0"    then "index v0 v1 v2"
///   <base>.edge  "n 1"      then "index v0 v1 label" (1=Inlet 2=Outlet 3=Wall)
inline void write_mesh(const Mesh& mesh, const std::string& base) {
  {
    std::ofstream os(base + ".node");
    PF_CHECK(os.good(), "write_mesh: cannot open ", base, ".node");
    os << mesh.n_vertices() << " 2 0 0\n";
    char buf[96];
    for (int i = 0; i < mesh.n_vertices(); ++i) {
      std::snprintf(buf, sizeof(buf), "%d %.17g %.17g\n", i + 1, mesh.vertices[i].x,
                    mesh.vertices[i].y);
      os << buf;
    }
    PF_CHECK(os.good(), "write_mesh: write failed for ", base, ".node");
  }
  {
    std::ofstream os(base + ".ele");
    PF_CHECK(os.good(), "write_mesh: cannot open ", base, ".ele");
    os << mesh.n_triangles() << " 3 0\n";
    for (int t = 0; t < mesh.n_triangles(); ++t)
      os << t + 1 << " " << mesh.triangles[t][0] + 1 << " " << mesh.triangles[t][1] + 1 << " "
         << mesh.triangles[t][2] + 1 << "\n";
    PF_CHECK(os.good(), "write_mesh: write failed for ", base, ".ele");
  }
  {
    std::ofstream os(base + ".edge");
    PF_CHECK(os.good(), "write_mesh: cannot open ", base, ".edge");
    os << mesh.boundary_edges.size() << " 1\n";
    for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e)
      os << e + 1 << " " << mesh.boundary_edges[e].a + 1 << " " << mesh.boundary_edges[e].b + 1
         << " " << static_cast<int>(mesh.boundary_edges[e].label) << "\n";
    PF_CHECK(os.good(), "write_mesh: write failed for ", base, ".edge");
  }
}

namespace detail {

class LineReader {
 public:
  LineReader(const std::string& path) : path_(path), is_(path) {
    PF_CHECK(is_.good(), "read_mesh: cannot open ", path);
  }

  /// Next non-empty, non-comment line split into a token stream.
  std::istringstream next() {
    std::string line;
    while (std::getline(is_, line)) {
      ++lineno_;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return std::istringstream(line);
    }
    PF_CHECK(false, "read_mesh: unexpected end of file in ", path_, " after line ", lineno_);
    return std::istringstream();
  }

  template <typename T>
  T token(std::istringstream& ss, const char* what) {
    T v{};
    PF_CHECK(static_cast<bool>(ss >> v), "read_mesh: ", path_, " line ", lineno_, ": bad or missing ",
             what, " token");
    return v;
  }

  int line() const { return lineno_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream is_;
  int lineno_ = 0;
};

}  // namespace detail

inline Mesh read_mesh(const std::string& base) {
  Mesh mesh;
  {
    detail::LineReader rd(base + ".node");
    auto head = rd.next();
    const int n = rd.token<int>(head, "vertex count");
    const int dim = rd.token<int>(head, "dimension");
    PF_CHECK(dim == 2, "read_mesh: ", rd.path(), " line ", rd.line(), ": expected dimension 2, got ",
             dim);
    mesh.vertices.resize(n);
    std::vector<bool> seen(n, false);
    for (int i = 0; i < n; ++i) {
      auto row = rd.next();
      const int idx = rd.token<int>(row, "vertex index");
      PF_CHECK(idx >= 1 && idx <= n, "read_mesh: ", rd.path(), " line ", rd.line(),
               ": vertex index ", idx, " out of range 1..", n);
      PF_CHECK(!seen[idx - 1], "read_mesh: ", rd.path(), " line ", rd.line(),
               ": duplicate vertex index ", idx);
      seen[idx - 1] = true;
      mesh.vertices[idx - 1].x = rd.token<double>(row, "x coordinate");
      mesh.vertices[idx - 1].y = rd.token<double>(row, "y coordinate");
    }
  }
  {
    detail::LineReader rd(base + ".ele");
    auto head = rd.next();
    const int n = rd.token<int>(head, "triangle count");
    const int per = rd.token<int>(head, "nodes per triangle");
    PF_CHECK(per == 3, "read_mesh: ", rd.path(), " line ", rd.line(),
             ": expected 3 nodes per triangle, got ", per);
    mesh.triangles.resize(n);
    for (int t = 0; t < n; ++t) {
      auto row = rd.next();
      const int idx = rd.token<int>(row, "triangle index");
      PF_CHECK(idx >= 1 && idx <= n, "read_mesh: ", rd.path(), " line ", rd.line(),
               ": triangle index ", idx, " out of range");
      for (int j = 0; j < 3; ++j) {
        const int v = rd.token<int>(row, "vertex reference");
        PF_CHECK(v >= 1 && v <= mesh.n_vertices(), "read_mesh: ", rd.path(), " line ", rd.line(),
                 ": triangle references missing vertex ", v);
        mesh.triangles[idx - 1][j] = v - 1;
      }
    }
  }
  {
    detail::LineReader rd(base + ".edge");
    auto head = rd.next();
    const int n = rd.token<int>(head, "edge count");
    mesh.boundary_edges.resize(n);
    for (int e = 0; e < n; ++e) {
      auto row = rd.next();
      const int idx = rd.token<int>(row, "edge index");
      PF_CHECK(idx >= 1 && idx <= n, "read_mesh: ", rd.path(), " line ", rd.line(),
               ": edge index ", idx, " out of range");
      const int a = rd.token<int>(row, "edge vertex");
      const int b = rd.token<int>(row, "edge vertex");
      PF_CHECK(a >= 1 && a <= mesh.n_vertices() && b >= 1 && b <= mesh.n_vertices(),
               "read_mesh: ", rd.path(), " line ", rd.line(), ": edge references missing vertex");
      const int label = rd.token<int>(row, "boundary label");
      PF_CHECK(label >= 1 && label <= 3, "read_mesh: ", rd.path(), " line ", rd.line(),
               ": boundary label must be 1, 2 or 3, got ", label);
      mesh.boundary_edges[idx - 1] = {a - 1, b - 1, static_cast<BoundaryLabel>(label)};
    }
  }
  double h = 0.0;
  for (const auto& tv : mesh.triangles)
    h = std::max({h, dist(mesh.vertices[tv[0]], mesh.vertices[tv[1]]),
                  dist(mesh.vertices[tv[1]], mesh.vertices[tv[2]]),
                  dist(mesh.vertices[tv[2]], mesh.vertices[tv[0]])});
  mesh.h_max = h;
  return mesh;
}

}  // namespace pillarflow

#endif  // PILLARFLOW_MESH_IO_HPP
