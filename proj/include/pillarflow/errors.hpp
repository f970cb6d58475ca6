#ifndef PILLARFLOW_ERRORS_HPP
#define PILLARFLOW_ERRORS_HPP

#include <cstdio>
#include <fstream>

#include "pillarflow/assemble.hpp"

namespace pillarflow {

/// Nodal field pair over one DofMap: full component-major velocity vector and
/// pressure vector.
struct FieldSolution {
  Vector u;  // size 2 * n_vnodes
  Vector p;  // size n_pnodes
};

struct InnerBox {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool contains(const Vec2& c) const {
    return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1;
  }
};

/// Interior-subdomain error metrics between a low-order solution and a
/// higher-order reference on the same mesh. Pressures are compared after
/// subtracting each field's own mean over the evaluation subdomain.
struct ErrorReport {
  double rel_p_L2 = 0.0;
  double rel_u_L2 = 0.0;
  double rel_u_H1 = 0.0;
  double abs_u_L2 = 0.0;
  double abs_u_H1 = 0.0;
  double norm_p_ref = 0.0;  // || p_ref - mean(p_ref) || over the subdomain
  double norm_u_ref = 0.0;  // || u_ref || over the subdomain
};

/// Errors over the element subset { T : centroid(T) in inner_box }, by the
/// shared degree-6 quadrature. Both solutions must live on the same mesh.
inline ErrorReport evaluate_errors(const Mesh& mesh, const DofMap& dm_lo, const FieldSolution& lo,
                                   const DofMap& dm_hi, const FieldSolution& hi,
                                   const InnerBox& inner_box) {
  PF_REQUIRE(static_cast<int>(lo.u.size()) == dm_lo.n_u() &&
                 static_cast<int>(hi.u.size()) == dm_hi.n_u(),
             "evaluate_errors: velocity vector sizes do not match the dof maps");
  PF_REQUIRE(static_cast<int>(lo.p.size()) == dm_lo.n_p() &&
                 static_cast<int>(hi.p.size()) == dm_hi.n_p(),
             "evaluate_errors: pressure vector sizes do not match the dof maps");
  PF_REQUIRE(dm_lo.elem_vnodes.size() == dm_hi.elem_vnodes.size(),
             "evaluate_errors: solutions live on different meshes");

  const auto& quad = fe::tri_quadrature();
  const auto& vb_lo = fe::basis_table(dm_lo.pair.velocity_order);
  const auto& pb_lo = fe::basis_table(dm_lo.pair.pressure_order());
  const auto& vb_hi = fe::basis_table(dm_hi.pair.velocity_order);
  const auto& pb_hi = fe::basis_table(dm_hi.pair.pressure_order());

  std::vector<int> subset;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    if (inner_box.contains(detail::third_point_of(mesh, t))) subset.push_back(t);
  PF_REQUIRE(!subset.empty(), "evaluate_errors: no elements inside the evaluation box");

  // pass 1: subdomain means of both pressures
  double area = 0.0, ip_lo = 0.0, ip_hi = 0.0;
  for (int t : subset) {
    const detail::ElementGeometry geo(mesh, t);
    for (int q = 0; q < fe::TriQuadrature::n; ++q) {
      double plo = 0.0, phi = 0.0;
      for (int k = 0; k < pb_lo.nb; ++k) plo += pb_lo.N[q][k] * lo.p[dm_lo.elem_pnodes[t][k]];
      for (int k = 0; k < pb_hi.nb; ++k) phi += pb_hi.N[q][k] * hi.p[dm_hi.elem_pnodes[t][k]];
      const double wq = quad.w[q] * geo.det_j;
      area += wq;
      ip_lo += wq * plo;
      ip_hi += wq * phi;
    }
  }
  const double mean_lo = ip_lo / area, mean_hi = ip_hi / area;

  // pass 2: squared error and reference accumulators
  double e_p = 0.0, e_u = 0.0, e_g = 0.0, r_p = 0.0, r_u = 0.0, r_g = 0.0;
  for (int t : subset) {
    const detail::ElementGeometry geo(mesh, t);
    for (int q = 0; q < fe::TriQuadrature::n; ++q) {
      const double wq = quad.w[q] * geo.det_j;
      double u_lo[2] = {0, 0}, u_hi[2] = {0, 0};
      double g_lo[2][2] = {{0, 0}, {0, 0}}, g_hi[2][2] = {{0, 0}, {0, 0}};
      double p_lo = 0.0, p_hi = 0.0;

      for (int i = 0; i < vb_lo.nb; ++i) {
        const int node = dm_lo.elem_vnodes[t][i];
        const double gx = geo.inv_jt[0][0] * vb_lo.dNdx[q][i] + geo.inv_jt[0][1] * vb_lo.dNdy[q][i];
        const double gy = geo.inv_jt[1][0] * vb_lo.dNdx[q][i] + geo.inv_jt[1][1] * vb_lo.dNdy[q][i];
        for (int c = 0; c < 2; ++c) {
          const double coef = lo.u[c * dm_lo.n_vnodes + node];
          u_lo[c] += vb_lo.N[q][i] * coef;
          g_lo[c][0] += gx * coef;
          g_lo[c][1] += gy * coef;
        }
      }
      for (int i = 0; i < vb_hi.nb; ++i) {
        const int node = dm_hi.elem_vnodes[t][i];
        const double gx = geo.inv_jt[0][0] * vb_hi.dNdx[q][i] + geo.inv_jt[0][1] * vb_hi.dNdy[q][i];
        const double gy = geo.inv_jt[1][0] * vb_hi.dNdx[q][i] + geo.inv_jt[1][1] * vb_hi.dNdy[q][i];
        for (int c = 0; c < 2; ++c) {
          const double coef = hi.u[c * dm_hi.n_vnodes + node];
          u_hi[c] += vb_hi.N[q][i] * coef;
          g_hi[c][0] += gx * coef;
          g_hi[c][1] += gy * coef;
        }
      }
      for (int k = 0; k < pb_lo.nb; ++k) p_lo += pb_lo.N[q][k] * lo.p[dm_lo.elem_pnodes[t][k]];
      for (int k = 0; k < pb_hi.nb; ++k) p_hi += pb_hi.N[q][k] * hi.p[dm_hi.elem_pnodes[t][k]];

      const double dp = (p_lo - mean_lo) - (p_hi - mean_hi);
      e_p += wq * dp * dp;
      r_p += wq * (p_hi - mean_hi) * (p_hi - mean_hi);
      for (int c = 0; c < 2; ++c) {
        e_u += wq * (u_lo[c] - u_hi[c]) * (u_lo[c] - u_hi[c]);
        r_u += wq * u_hi[c] * u_hi[c];
        for (int d = 0; d < 2; ++d) {
          e_g += wq * (g_lo[c][d] - g_hi[c][d]) * (g_lo[c][d] - g_hi[c][d]);
          r_g += wq * g_hi[c][d] * g_hi[c][d];
        }
      }
    }
  }

  ErrorReport rep;
  rep.abs_u_L2 = std::sqrt(e_u);
  rep.abs_u_H1 = std::sqrt(e_g);
  rep.norm_p_ref = std::sqrt(r_p);
  rep.norm_u_ref = std::sqrt(r_u);
  rep.rel_p_L2 = r_p > 0 ? std::sqrt(e_p / r_p) : std::sqrt(e_p);
  rep.rel_u_L2 = r_u > 0 ? rep.abs_u_L2 / rep.norm_u_ref : rep.abs_u_L2;
  rep.rel_u_H1 = r_g > 0 ? rep.abs_u_H1 / std::sqrt(r_g) : rep.abs_u_H1;
  return rep;
}

/// Vertex-sampled fields as CSV rows "x,y,umag,ux,uy,p" (one per mesh
/// vertex; vertices are the leading scalar nodes of every order).
inline void export_fields(const Mesh& mesh, const DofMap& dm, const FieldSolution& sol,
                          const std::string& path) {
  std::ofstream os(path);
  PF_CHECK(os.good(), "export_fields: cannot open ", path);
  os << "x,y,umag,ux,uy,p\n";
  char buf[160];
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const double ux = sol.u[v];
    const double uy = sol.u[dm.n_vnodes + v];
    const double p = sol.p[v];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", mesh.vertices[v].x,
                  mesh.vertices[v].y, std::sqrt(ux * ux + uy * uy), ux, uy, p);
    os << buf;
  }
  PF_CHECK(os.good(), "export_fields: write failed for ", path);
}

}  // namespace pillarflow

#endif  // PILLARFLOW_ERRORS_HPP
