#ifndef PILLARFLOW_DOFMAP_HPP
#define PILLARFLOW_DOFMAP_HPP

#include <algorithm>
#include <array>
#include <vector>

#include "pillarflow/fe.hpp"
#include "pillarflow/mesh.hpp"

namespace pillarflow {

/// Scalar-field node enumeration for one Taylor-Hood pair on one mesh.
///
/// Scalar nodes: vertices, then edge nodes in lexicographic edge order (for
/// P3, the node nearer the smaller-indexed endpoint comes first), then one
/// cell node per triangle (P3). Velocity DoFs are component-major:
/// dof = component * n_scalar + node. Pressure uses the P(k-1) layout.
struct DofMap {
  ElementPair pair;

  // lexicographically sorted unique edges (a < b)
  std::vector<std::pair<int, int>> edges;

  int n_vnodes = 0;  // scalar velocity nodes
  int n_pnodes = 0;
  std::vector<Vec2> vnode_pos;
  std::vector<Vec2> pnode_pos;
  std::vector<std::array<int, 10>> elem_vnodes;
  std::vector<std::array<int, 6>> elem_pnodes;

  int n_u() const { return 2 * n_vnodes; }
  int n_p() const { return n_pnodes; }
  int velocity_dof(int component, int scalar_node) const {
    return component * n_vnodes + scalar_node;
  }

  int edge_id(int a, int b) const {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    const auto it = std::lower_bound(edges.begin(), edges.end(), key);
    PF_REQUIRE(it != edges.end() && *it == key, "DofMap: unknown edge (", a, ",", b, ")");
    return static_cast<int>(it - edges.begin());
  }
};

namespace detail {

inline Vec2 third_point_of(const Mesh& mesh, int t) {
  const auto& tv = mesh.triangles[t];
  const Vec2 a = mesh.vertices[tv[0]], b = mesh.vertices[tv[1]], c = mesh.vertices[tv[2]];
  return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
}

/// Scalar Lagrange enumeration for one order; shared edge nodes agree across
/// adjacent triangles by construction.
template <int MaxNodes>
void enumerate_scalar(const Mesh& mesh, const std::vector<std::pair<int, int>>& edges, int order,
                      int& n_nodes, std::vector<Vec2>& pos,
                      std::vector<std::array<int, MaxNodes>>& conn) {
  const int nv = mesh.n_vertices();
  const int ne = static_cast<int>(edges.size());
  const int nt = mesh.n_triangles();
  const int per_edge = order == 3 ? 2 : (order == 2 ? 1 : 0);
  const int cell = order == 3 ? 1 : 0;
  n_nodes = nv + per_edge * ne + cell * nt;

  pos.resize(n_nodes);
  for (int v = 0; v < nv; ++v) pos[v] = mesh.vertices[v];
  for (int e = 0; e < ne; ++e) {
    const Vec2 a = mesh.vertices[edges[e].first];
    const Vec2 b = mesh.vertices[edges[e].second];
    if (order == 2) {
      pos[nv + e] = 0.5 * (a + b);
    } else if (order == 3) {
      pos[nv + 2 * e] = a + (1.0 / 3.0) * (b - a);      // nearer the smaller vertex
      pos[nv + 2 * e + 1] = a + (2.0 / 3.0) * (b - a);
    }
  }

  auto edge_lookup = [&](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    return static_cast<int>(std::lower_bound(edges.begin(), edges.end(), key) - edges.begin());
  };

  conn.resize(nt);
  static constexpr int edge_of[3][2] = {{1, 2}, {2, 0}, {0, 1}};
  for (int t = 0; t < nt; ++t) {
    const auto& tv = mesh.triangles[t];
    auto& c = conn[t];
    c.fill(-1);
    for (int i = 0; i < 3; ++i) c[i] = tv[i];
    if (order == 1) continue;
    for (int k = 0; k < 3; ++k) {
      const int gp = tv[edge_of[k][0]], gq = tv[edge_of[k][1]];
      const int e = edge_lookup(gp, gq);
      if (order == 2) {
        c[3 + k] = nv + e;
      } else {
        // local 'a' is nearer gp; global first node is nearer min(gp, gq)
        if (gp < gq) {
          c[3 + 2 * k] = nv + 2 * e;
          c[3 + 2 * k + 1] = nv + 2 * e + 1;
        } else {
          c[3 + 2 * k] = nv + 2 * e + 1;
          c[3 + 2 * k + 1] = nv + 2 * e;
        }
      }
    }
    if (order == 3) {
      pos[nv + 2 * ne + t] = third_point_of(mesh, t);
      c[9] = nv + 2 * ne + t;
    }
  }
}

}  // namespace detail

inline DofMap build_dofmap(const Mesh& mesh, ElementPair pair) {
  pair.validate();
  PF_REQUIRE(mesh.n_triangles() > 0, "build_dofmap: empty mesh");
  DofMap dm;
  dm.pair = pair;

  dm.edges.reserve(mesh.n_triangles() * 3 / 2);
  for (const auto& tv : mesh.triangles)
    for (int j = 0; j < 3; ++j) {
      const int a = tv[j], b = tv[(j + 1) % 3];
      dm.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  std::sort(dm.edges.begin(), dm.edges.end());
  dm.edges.erase(std::unique(dm.edges.begin(), dm.edges.end()), dm.edges.end());

  detail::enumerate_scalar<10>(mesh, dm.edges, pair.velocity_order, dm.n_vnodes, dm.vnode_pos,
                               dm.elem_vnodes);
  detail::enumerate_scalar<6>(mesh, dm.edges, pair.pressure_order(), dm.n_pnodes, dm.pnode_pos,
                              dm.elem_pnodes);
  return dm;
}

}  // namespace pillarflow

#endif  // PILLARFLOW_DOFMAP_HPP
