#ifndef PILLARFLOW_BCS_HPP
#define PILLARFLOW_BCS_HPP

#include <map>

#include "pillarflow/assemble.hpp"

namespace pillarflow {

enum class BcKind { PressureDriven, VelocityDriven, Enclosed };

/// Driving mechanism of a run.
///   PressureDriven: normal-stress (Neumann) inlet/outlet with p_in, p_out;
///     Setup A uses p_in = m^2, p_out = 0.
///   VelocityDriven: parabolic profile u_D(y) = (4 U_max y (L_y - y)/L_y^2, 0)
///     imposed on inlet and outlet (Setup B).
///   Enclosed: homogeneous Dirichlet everywhere (operator studies).
struct BcSetup {
  BcKind kind = BcKind::PressureDriven;
  double p_in = 1.0;
  double p_out = 0.0;
  double U_max = 1.0;
  double mu = 1.0;
  double L_y = 1.0;

  static BcSetup setup_a(int m, double L_y = 1.0) {
    BcSetup s;
    s.kind = BcKind::PressureDriven;
    s.p_in = static_cast<double>(m) * m;
    s.p_out = 0.0;
    s.L_y = L_y;
    return s;
  }
  static BcSetup setup_b(double L_y = 1.0) {
    BcSetup s;
    s.kind = BcKind::VelocityDriven;
    s.U_max = 1.0;
    s.L_y = L_y;
    return s;
  }
  static BcSetup enclosed() {
    BcSetup s;
    s.kind = BcKind::Enclosed;
    return s;
  }

  Vec2 dirichlet_profile(const Vec2& x) const {
    if (kind != BcKind::VelocityDriven) return {0.0, 0.0};
    return {4.0 * U_max * x.y * (L_y - x.y) / (L_y * L_y), 0.0};
  }
};

/// Applies the setup's boundary conditions by symmetric elimination and adds
/// the Neumann traction loads. Wall nodes take precedence at corners shared
/// with the inlet or outlet. Returns the reduced system (free velocity DoFs
/// only); the pressure space is never constrained.
inline AssembledStokes apply_bcs(const AssembledStokes& sys, const BcSetup& setup,
                                 const DofMap& dm, const Mesh& mesh) {
  PF_REQUIRE(!sys.reduced, "apply_bcs: system already reduced");
  PF_REQUIRE(!mesh.boundary_edges.empty(), "apply_bcs: mesh carries no boundary labels");
  const int nv = dm.n_vnodes;
  const int n_vertices = mesh.n_vertices();

  // classify scalar boundary nodes; Wall wins over Inlet/Outlet at corners
  std::vector<char> on_wall(nv, 0), on_io(nv, 0);
  auto nodes_of_edge = [&](const Mesh::BoundaryEdge& e, std::vector<int>& out) {
    out.clear();
    out.push_back(e.a);
    out.push_back(e.b);
    const int eid = dm.edge_id(e.a, e.b);
    if (dm.pair.velocity_order == 2) {
      out.push_back(n_vertices + eid);
    } else if (e.a < e.b) {  // interior nodes ordered from e.a toward e.b
      out.push_back(n_vertices + 2 * eid);
      out.push_back(n_vertices + 2 * eid + 1);
    } else {
      out.push_back(n_vertices + 2 * eid + 1);
      out.push_back(n_vertices + 2 * eid);
    }
  };
  std::vector<int> enodes;
  for (const auto& e : mesh.boundary_edges) {
    nodes_of_edge(e, enodes);
    for (int n : enodes) {
      if (e.label == BoundaryLabel::Wall)
        on_wall[n] = 1;
      else
        on_io[n] = 1;
    }
  }

  AssembledStokes out;
  out.mu = sys.mu;
  out.Mp = sys.Mp;
  out.reduced = true;
  out.dirichlet_mask.assign(dm.n_u(), 0);
  out.dirichlet_values.assign(dm.n_u(), 0.0);

  const bool constrain_io = setup.kind != BcKind::PressureDriven;
  for (int n = 0; n < nv; ++n) {
    if (on_wall[n]) {
      out.dirichlet_mask[n] = out.dirichlet_mask[nv + n] = 1;  // u = 0
    } else if (on_io[n] && constrain_io) {
      out.dirichlet_mask[n] = out.dirichlet_mask[nv + n] = 1;
      const Vec2 u = setup.kind == BcKind::Enclosed ? Vec2{0.0, 0.0}
                                                    : setup.dirichlet_profile(dm.vnode_pos[n]);
      out.dirichlet_values[n] = u.x;
      out.dirichlet_values[nv + n] = u.y;
    }
  }

  // Neumann tractions: f += -p_bc * int_e (n . v) ds on inlet/outlet
  Vector f = sys.f;
  if (setup.kind == BcKind::PressureDriven) {
    // adjacent triangle lookup to orient the outward normal
    std::map<std::pair<int, int>, int> edge2tri;
    for (int t = 0; t < mesh.n_triangles(); ++t)
      for (int j = 0; j < 3; ++j) {
        const int a = mesh.triangles[t][j], b = mesh.triangles[t][(j + 1) % 3];
        edge2tri[{std::min(a, b), std::max(a, b)}] = t;
      }
    const auto& eq = fe::edge_quadrature();
    const int k = dm.pair.velocity_order;
    const int n_trace = k + 1;
    double tr[4];
    std::vector<int> tnodes;
    for (const auto& e : mesh.boundary_edges) {
      if (e.label == BoundaryLabel::Wall) continue;
      const double p_bc = e.label == BoundaryLabel::Inlet ? setup.p_in : setup.p_out;
      const Vec2 pa = mesh.vertices[e.a], pb = mesh.vertices[e.b];
      const double len = dist(pa, pb);
      Vec2 n{pb.y - pa.y, pa.x - pb.x};  // right-hand normal of (pa -> pb)
      n = (1.0 / len) * n;
      const int tri = edge2tri.at({e.a, e.b});
      const Vec2 cen = detail::third_point_of(mesh, tri);
      const Vec2 mid = 0.5 * (pa + pb);
      if (dot(n, cen - mid) > 0) n = -1.0 * n;  // point away from the fluid

      nodes_of_edge(e, tnodes);  // [a, b, interior...] matches eval_trace layout
      for (int q = 0; q < fe::EdgeQuadrature::n; ++q) {
        fe::eval_trace(k, eq.s[q], tr);
        const double wq = eq.w[q] * len;
        for (int i = 0; i < n_trace; ++i) {
          f[tnodes[i]] += -p_bc * n.x * tr[i] * wq;
          f[nv + tnodes[i]] += -p_bc * n.y * tr[i] * wq;
        }
      }
    }
  }

  // symmetric elimination
  out.free_dofs.reserve(dm.n_u());
  out.full_to_free.assign(dm.n_u(), -1);
  for (int d = 0; d < dm.n_u(); ++d)
    if (!out.dirichlet_mask[d]) {
      out.full_to_free[d] = static_cast<int>(out.free_dofs.size());
      out.free_dofs.push_back(d);
    }

  const Vector au = sys.A.multiply(out.dirichlet_values);
  out.f.resize(out.free_dofs.size());
  for (std::size_t i = 0; i < out.free_dofs.size(); ++i)
    out.f[i] = f[out.free_dofs[i]] - au[out.free_dofs[i]];
  const Vector bu = sys.B.multiply(out.dirichlet_values);
  out.g = sys.g;
  for (int k2 = 0; k2 < sys.n_p(); ++k2) out.g[k2] -= bu[k2];

  out.A = sys.A.select(out.free_dofs, out.full_to_free, static_cast<int>(out.free_dofs.size()));
  std::vector<int> all_p(sys.n_p());
  for (int i = 0; i < sys.n_p(); ++i) all_p[i] = i;
  out.B = sys.B.select(all_p, out.full_to_free, static_cast<int>(out.free_dofs.size()));
  return out;
}

}  // namespace pillarflow

#endif  // PILLARFLOW_BCS_HPP
