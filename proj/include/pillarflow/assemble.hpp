#ifndef PILLARFLOW_ASSEMBLE_HPP
#define PILLARFLOW_ASSEMBLE_HPP

#include <functional>

#include "pillarflow/dofmap.hpp"
#include "pillarflow/sparse.hpp"

namespace pillarflow {

/// Sparse blocks of the Stokes saddle-point system for one discretization.
///
///   A  : viscous stiffness  mu * int grad(u):grad(v)     (n_u x n_u)
///   B  : negative divergence -int q div(v)               (n_p x n_u)
///   Mp : pressure mass                                   (n_p x n_p)
///   f  : momentum load (body force + Neumann tractions)
///   g  : continuity right-hand side (nonzero only after eliminating
///        inhomogeneous Dirichlet data)
///
/// After apply_bcs the velocity blocks are restricted to free DoFs and the
/// reduction bookkeeping below maps back to the full component-major
/// numbering.
struct AssembledStokes {
  SparseMatrix A;
  SparseMatrix B;
  SparseMatrix Mp;
  Vector f;
  Vector g;
  double mu = 1.0;

  bool reduced = false;
  std::vector<int> free_dofs;        // reduced index -> full velocity dof
  std::vector<int> full_to_free;     // full velocity dof -> reduced index or -1
  std::vector<char> dirichlet_mask;  // per full velocity dof
  Vector dirichlet_values;           // per full velocity dof (0 where free)

  int n_u() const { return A.rows(); }
  int n_p() const { return Mp.rows(); }

  /// Scatter a free-DoF velocity vector into the full component-major layout,
  /// filling constrained entries with their Dirichlet values.
  Vector expand_velocity(const Vector& u_free) const {
    PF_REQUIRE(reduced, "expand_velocity: system has no BC reduction");
    Vector full = dirichlet_values;
    for (std::size_t i = 0; i < free_dofs.size(); ++i) full[free_dofs[i]] = u_free[i];
    return full;
  }
};

using BodyForce = std::function<Vec2(const Vec2&)>;

namespace detail {

/// Per-element geometry: physical gradients are invJT * reference gradients.
struct ElementGeometry {
  double inv_jt[2][2];
  double det_j;

  ElementGeometry(const Mesh& mesh, int t) {
    const auto& tv = mesh.triangles[t];
    const Vec2 a = mesh.vertices[tv[0]], b = mesh.vertices[tv[1]], c = mesh.vertices[tv[2]];
    const double j11 = b.x - a.x, j12 = c.x - a.x;
    const double j21 = b.y - a.y, j22 = c.y - a.y;
    det_j = j11 * j22 - j12 * j21;
    PF_CHECK(det_j > 0, "assemble: degenerate or flipped triangle ", t, " (det J = ", det_j, ")");
    inv_jt[0][0] = j22 / det_j;
    inv_jt[0][1] = -j21 / det_j;
    inv_jt[1][0] = -j12 / det_j;
    inv_jt[1][1] = j11 / det_j;
  }
};

}  // namespace detail

/// Element-loop assembly of A, B, Mp (no boundary conditions). One fixed
/// degree-6 volume rule covers all integrands of both pairs exactly on
/// affine elements. Element matrices are computed on the upper triangle and
/// mirrored, which keeps the assembled A and Mp bitwise symmetric.
inline AssembledStokes assemble(const Mesh& mesh, const DofMap& dm, double mu = 1.0,
                                const BodyForce& body_force = {}) {
  PF_REQUIRE(mu > 0, "assemble: viscosity must be positive");
  const auto& quad = fe::tri_quadrature();
  const auto& vb = fe::basis_table(dm.pair.velocity_order);
  const auto& pb = fe::basis_table(dm.pair.pressure_order());
  const int nbv = vb.nb, nbp = pb.nb;
  const int nv = dm.n_vnodes;

  std::vector<Triplet> ta, tb, tm;
  ta.reserve(static_cast<std::size_t>(mesh.n_triangles()) * nbv * nbv * 2);
  tb.reserve(static_cast<std::size_t>(mesh.n_triangles()) * nbv * nbp * 2);
  tm.reserve(static_cast<std::size_t>(mesh.n_triangles()) * nbp * nbp);

  AssembledStokes sys;
  sys.mu = mu;
  sys.f.assign(dm.n_u(), 0.0);
  sys.g.assign(dm.n_p(), 0.0);

  double ke[10][10], me[6][6], be[6][2 * 10];
  double gx[fe::TriQuadrature::n][10], gy[fe::TriQuadrature::n][10];

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const detail::ElementGeometry geo(mesh, t);

    for (int q = 0; q < fe::TriQuadrature::n; ++q)
      for (int i = 0; i < nbv; ++i) {
        gx[q][i] = geo.inv_jt[0][0] * vb.dNdx[q][i] + geo.inv_jt[0][1] * vb.dNdy[q][i];
        gy[q][i] = geo.inv_jt[1][0] * vb.dNdx[q][i] + geo.inv_jt[1][1] * vb.dNdy[q][i];
      }

    // scalar stiffness, upper triangle then mirror
    for (int i = 0; i < nbv; ++i)
      for (int j = i; j < nbv; ++j) {
        double s = 0.0;
        for (int q = 0; q < fe::TriQuadrature::n; ++q)
          s += quad.w[q] * (gx[q][i] * gx[q][j] + gy[q][i] * gy[q][j]);
        ke[i][j] = ke[j][i] = mu * s * geo.det_j;
      }
    // pressure mass, same symmetrization
    for (int k = 0; k < nbp; ++k)
      for (int l = k; l < nbp; ++l) {
        double s = 0.0;
        for (int q = 0; q < fe::TriQuadrature::n; ++q) s += quad.w[q] * pb.N[q][k] * pb.N[q][l];
        me[k][l] = me[l][k] = s * geo.det_j;
      }
    // divergence coupling: b[k][c*nbv+i] = -int psi_k d(phi_i)/dx_c
    for (int k = 0; k < nbp; ++k)
      for (int i = 0; i < nbv; ++i) {
        double sx = 0.0, sy = 0.0;
        for (int q = 0; q < fe::TriQuadrature::n; ++q) {
          sx += quad.w[q] * pb.N[q][k] * gx[q][i];
          sy += quad.w[q] * pb.N[q][k] * gy[q][i];
        }
        be[k][i] = -sx * geo.det_j;
        be[k][nbv + i] = -sy * geo.det_j;
      }

    const auto& vg = dm.elem_vnodes[t];
    const auto& pg = dm.elem_pnodes[t];
    for (int i = 0; i < nbv; ++i)
      for (int j = 0; j < nbv; ++j) {
        ta.push_back({vg[i], vg[j], ke[i][j]});
        ta.push_back({nv + vg[i], nv + vg[j], ke[i][j]});
      }
    for (int k = 0; k < nbp; ++k) {
      for (int i = 0; i < nbv; ++i) {
        tb.push_back({pg[k], vg[i], be[k][i]});
        tb.push_back({pg[k], nv + vg[i], be[k][nbv + i]});
      }
      for (int l = 0; l < nbp; ++l) tm.push_back({pg[k], pg[l], me[k][l]});
    }

    if (body_force) {
      const auto& tv = mesh.triangles[t];
      const Vec2 p0 = mesh.vertices[tv[0]], p1 = mesh.vertices[tv[1]], p2 = mesh.vertices[tv[2]];
      for (int q = 0; q < fe::TriQuadrature::n; ++q) {
        const Vec2 x = quad.bary[q][0] * p0 + quad.bary[q][1] * p1 + quad.bary[q][2] * p2;
        const Vec2 fx = body_force(x);
        for (int i = 0; i < nbv; ++i) {
          sys.f[vg[i]] += quad.w[q] * vb.N[q][i] * fx.x * geo.det_j;
          sys.f[nv + vg[i]] += quad.w[q] * vb.N[q][i] * fx.y * geo.det_j;
        }
      }
    }
  }

  sys.A = SparseMatrix::from_triplets(dm.n_u(), dm.n_u(), std::move(ta));
  sys.B = SparseMatrix::from_triplets(dm.n_p(), dm.n_u(), std::move(tb));
  sys.Mp = SparseMatrix::from_triplets(dm.n_p(), dm.n_p(), std::move(tm));
  return sys;
}

/// gamma * B^T diag(Mp)^-1 B on the current (reduced or full) velocity space.
inline SparseMatrix graddiv_operator(const AssembledStokes& sys, double gamma) {
  return graddiv_product(sys.B, sys.Mp.diagonal(), gamma);
}

}  // namespace pillarflow

#endif  // PILLARFLOW_ASSEMBLE_HPP
