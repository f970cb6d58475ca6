#ifndef PILLARFLOW_FE_HPP
#define PILLARFLOW_FE_HPP

#include <array>
#include <cmath>
#include <vector>

#include "pillarflow/core.hpp"

namespace pillarflow {

/// Taylor-Hood pairing: continuous P_k velocity with continuous P_{k-1}
/// pressure on the same mesh, k in {2, 3}.
struct ElementPair {
  int velocity_order = 2;

  int pressure_order() const { return velocity_order - 1; }
  void validate() const {
    PF_REQUIRE(velocity_order == 2 || velocity_order == 3,
               "ElementPair: velocity order must be 2 or 3, got ", velocity_order);
  }
};

namespace fe {

inline int nodes_per_triangle(int order) {
  switch (order) {
    case 1: return 3;
    case 2: return 6;
    case 3: return 10;
  }
  PF_REQUIRE(false, "nodes_per_triangle: unsupported order ", order);
  return 0;
}

/// Lagrange basis on the reference triangle (0,0)-(1,0)-(0,1) evaluated at
/// barycentric (l0, l1, l2) = (1-x-y, x, y).
///
/// Local node layout (edge k is opposite vertex k):
///   P1: v0 v1 v2
///   P2: v0 v1 v2 | e0 e1 e2                      (edge midpoints)
///   P3: v0 v1 v2 | e0a e0b e1a e1b e2a e2b | c   (two per edge at thirds,
///       a nearer the first vertex of the edge (v1,v2),(v2,v0),(v0,v1); then
///       the centroid node)
inline void eval_basis(int order, double x, double y, double* N, double* dNdx, double* dNdy) {
  const double l[3] = {1.0 - x - y, x, y};
  const double dldx[3] = {-1.0, 1.0, 0.0};
  const double dldy[3] = {-1.0, 0.0, 1.0};
  static constexpr int edge_of[3][2] = {{1, 2}, {2, 0}, {0, 1}};

  if (order == 1) {
    for (int i = 0; i < 3; ++i) {
      N[i] = l[i];
      dNdx[i] = dldx[i];
      dNdy[i] = dldy[i];
    }
    return;
  }
  if (order == 2) {
    for (int i = 0; i < 3; ++i) {
      N[i] = l[i] * (2 * l[i] - 1);
      dNdx[i] = (4 * l[i] - 1) * dldx[i];
      dNdy[i] = (4 * l[i] - 1) * dldy[i];
    }
    for (int k = 0; k < 3; ++k) {
      const int p = edge_of[k][0], q = edge_of[k][1];
      N[3 + k] = 4 * l[p] * l[q];
      dNdx[3 + k] = 4 * (dldx[p] * l[q] + l[p] * dldx[q]);
      dNdy[3 + k] = 4 * (dldy[p] * l[q] + l[p] * dldy[q]);
    }
    return;
  }
  PF_REQUIRE(order == 3, "eval_basis: unsupported order ", order);
  for (int i = 0; i < 3; ++i) {
    // 0.5 * l (3l-1) (3l-2)
    N[i] = 0.5 * l[i] * (3 * l[i] - 1) * (3 * l[i] - 2);
    const double d = 0.5 * (27 * l[i] * l[i] - 18 * l[i] + 2);
    dNdx[i] = d * dldx[i];
    dNdy[i] = d * dldy[i];
  }
  for (int k = 0; k < 3; ++k) {
    const int p = edge_of[k][0], q = edge_of[k][1];
    // a: 4.5 lp lq (3lp - 1), b: 4.5 lp lq (3lq - 1)
    N[3 + 2 * k] = 4.5 * l[p] * l[q] * (3 * l[p] - 1);
    N[3 + 2 * k + 1] = 4.5 * l[p] * l[q] * (3 * l[q] - 1);
    const double da_dp = 4.5 * l[q] * (6 * l[p] - 1);
    const double da_dq = 4.5 * l[p] * (3 * l[p] - 1);
    dNdx[3 + 2 * k] = da_dp * dldx[p] + da_dq * dldx[q];
    dNdy[3 + 2 * k] = da_dp * dldy[p] + da_dq * dldy[q];
    const double db_dq = 4.5 * l[p] * (6 * l[q] - 1);
    const double db_dp = 4.5 * l[q] * (3 * l[q] - 1);
    dNdx[3 + 2 * k + 1] = db_dp * dldx[p] + db_dq * dldx[q];
    dNdy[3 + 2 * k + 1] = db_dp * dldy[p] + db_dq * dldy[q];
  }
  N[9] = 27 * l[0] * l[1] * l[2];
  dNdx[9] = 27 * (dldx[0] * l[1] * l[2] + l[0] * dldx[1] * l[2] + l[0] * l[1] * dldx[2]);
  dNdy[9] = 27 * (dldy[0] * l[1] * l[2] + l[0] * dldy[1] * l[2] + l[0] * l[1] * dldy[2]);
}

/// Reference-triangle nodes in the local layout above (barycentric over
/// vertices of the element).
inline std::vector<std::array<double, 3>> reference_nodes(int order) {
  static constexpr int edge_of[3][2] = {{1, 2}, {2, 0}, {0, 1}};
  std::vector<std::array<double, 3>> out;
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> b{0, 0, 0};
    b[i] = 1.0;
    out.push_back(b);
  }
  if (order == 1) return out;
  for (int k = 0; k < 3; ++k) {
    const int p = edge_of[k][0], q = edge_of[k][1];
    if (order == 2) {
      std::array<double, 3> b{0, 0, 0};
      b[p] = 0.5;
      b[q] = 0.5;
      out.push_back(b);
    } else {
      std::array<double, 3> a{0, 0, 0}, bb{0, 0, 0};
      a[p] = 2.0 / 3.0;
      a[q] = 1.0 / 3.0;
      bb[p] = 1.0 / 3.0;
      bb[q] = 2.0 / 3.0;
      out.push_back(a);
      out.push_back(bb);
    }
  }
  if (order == 3) out.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  return out;
}

/// Symmetric 12-point triangle rule, exact through degree 6 (covers every
/// product integrand of the P3-P2 pairing on affine elements). Weights sum
/// to 1/2, the reference-triangle measure.
struct TriQuadrature {
  static constexpr int n = 12;
  std::array<std::array<double, 3>, n> bary;  // (l0, l1, l2)
  std::array<double, n> w;

  TriQuadrature() {
    const double a1 = 0.873821971016996, b1 = 0.063089014491502, w1 = 0.050844906370207;
    const double a2 = 0.501426509658179, b2 = 0.249286745170910, w2 = 0.116786275726379;
    const double a3 = 0.636502499121399, b3 = 0.310352451033785, c3 = 0.053145049844816,
                 w3 = 0.082851075618374;
    int i = 0;
    auto put = [&](double x, double y, double z, double ww) {
      bary[i] = {x, y, z};
      w[i] = 0.5 * ww;
      ++i;
    };
    put(a1, b1, b1, w1);
    put(b1, a1, b1, w1);
    put(b1, b1, a1, w1);
    put(a2, b2, b2, w2);
    put(b2, a2, b2, w2);
    put(b2, b2, a2, w2);
    put(a3, b3, c3, w3);
    put(a3, c3, b3, w3);
    put(b3, a3, c3, w3);
    put(b3, c3, a3, w3);
    put(c3, a3, b3, w3);
    put(c3, b3, a3, w3);
  }
};

inline const TriQuadrature& tri_quadrature() {
  static const TriQuadrature q;
  return q;
}

/// 3-point Gauss rule on [0,1] (exact through degree 5) for edge integrals.
struct EdgeQuadrature {
  static constexpr int n = 3;
  std::array<double, n> s;
  std::array<double, n> w;
  EdgeQuadrature() {
    const double r = 0.5 * std::sqrt(0.6);
    s = {0.5 - r, 0.5, 0.5 + r};
    w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  }
};

inline const EdgeQuadrature& edge_quadrature() {
  static const EdgeQuadrature q;
  return q;
}

/// Basis values and reference gradients tabulated at the volume quadrature
/// points for one polynomial order.
struct BasisTable {
  int order;
  int nb;
  // [quad point][local node]
  std::array<std::array<double, 10>, TriQuadrature::n> N, dNdx, dNdy;

  explicit BasisTable(int order_) : order(order_), nb(nodes_per_triangle(order_)) {
    const auto& q = tri_quadrature();
    for (int k = 0; k < TriQuadrature::n; ++k)
      eval_basis(order, q.bary[k][1], q.bary[k][2], N[k].data(), dNdx[k].data(), dNdy[k].data());
  }
};

inline const BasisTable& basis_table(int order) {
  static const BasisTable t1(1), t2(2), t3(3);
  switch (order) {
    case 1: return t1;
    case 2: return t2;
    case 3: return t3;
  }
  PF_REQUIRE(false, "basis_table: unsupported order ", order);
  return t1;
}

/// 1D Lagrange trace of the P_k space on an edge, nodes at the ends plus the
/// interior edge nodes in order of increasing arc parameter.
inline void eval_trace(int order, double s, double* N) {
  if (order == 2) {
    N[0] = (1 - s) * (1 - 2 * s);
    N[1] = s * (2 * s - 1);
    N[2] = 4 * s * (1 - s);  // midpoint
    return;
  }
  PF_REQUIRE(order == 3, "eval_trace: unsupported order ", order);
  const double t = 1 - s;
  N[0] = 0.5 * t * (3 * t - 1) * (3 * t - 2);
  N[1] = 0.5 * s * (3 * s - 1) * (3 * s - 2);
  N[2] = 4.5 * t * s * (3 * t - 1);  // at s = 1/3
  N[3] = 4.5 * t * s * (3 * s - 1);  // at s = 2/3
}

}  // namespace fe
}  // namespace pillarflow

#endif  // PILLARFLOW_FE_HPP
