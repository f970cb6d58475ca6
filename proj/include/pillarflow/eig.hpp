#ifndef PILLARFLOW_EIG_HPP
#define PILLARFLOW_EIG_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>

#include "pillarflow/core.hpp"

namespace pillarflow {

struct EigConfig {
  double tol = 1e-8;
  int max_iter = 500;
};

struct EigResult {
  double lambda = 0.0;
  Vector vector;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // ||S x - lambda M x|| in the M^-1 norm
};

using VectorFn = std::function<Vector(const Vector&)>;

namespace detail {

/// Deterministic start vector (xorshift-filled, values in [-1, 1]).
inline Vector seeded_vector(int n, std::uint64_t seed) {
  Vector v(n);
  std::uint64_t s = seed * 6364136223846793005ull + 1442695040888963407ull;
  for (int i = 0; i < n; ++i) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    v[i] = 2.0 * (static_cast<double>(s >> 11) / 9007199254740992.0) - 1.0;
  }
  return v;
}

}  // namespace detail

/// Smallest nonzero eigenvalue of the pencil (S, M), both symmetric, M SPD.
///
/// Deflated inverse iteration: each step applies S^-1 M (the caller provides
/// this action, e.g. through a factored bordered saddle system), then
/// M-orthogonalizes against the known kernel vector of S, normalizes in the
/// M-inner product and evaluates the Rayleigh quotient (x^T S x)/(x^T M x).
/// Because S z = M x_prev after the solve, the quotient is available without
/// any extra S application.
///
/// Stops when the relative change of the Rayleigh quotient drops below tol
/// and the M^-1-norm eigenresidual is below 10*tol*lambda.
inline EigResult eig_smallest_pencil(int n, const VectorFn& apply_Sinv_M, const VectorFn& apply_M,
                                     const std::optional<Vector>& deflate, const EigConfig& cfg = {},
                                     std::uint64_t seed = 20240811u) {
  PF_REQUIRE(cfg.tol > 0 && cfg.max_iter >= 1, "eig_smallest_pencil: bad config");

  Vector d, md;
  double dmd = 0.0;
  if (deflate) {
    d = *deflate;
    md = apply_M(d);
    dmd = dot(d, md);
    PF_REQUIRE(dmd > 0.0, "eig_smallest_pencil: deflation vector has nonpositive M-norm");
  }
  auto project = [&](Vector& v) {
    if (!d.empty()) axpy(-dot(md, v) / dmd, d, v);
  };

  Vector x = detail::seeded_vector(n, seed);
  project(x);
  Vector mx = apply_M(x);
  double xn = std::sqrt(dot(x, mx));
  PF_CHECK(xn > 0.0, "eig_smallest_pencil: start vector vanished under deflation");
  scale(x, 1.0 / xn);
  scale(mx, 1.0 / xn);

  EigResult out;
  double lambda_prev = 0.0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    Vector z = apply_Sinv_M(x);
    project(z);
    const double num = dot(z, mx);  // z^T S z, since S z = M x and S d = 0
    Vector mz = apply_M(z);
    const double den = dot(z, mz);
    PF_CHECK(den > 0.0, "eig_smallest_pencil: iterate collapsed (S singular beyond deflation?)");
    const double lambda = num / den;
    const double s = std::sqrt(den);

    // residual of (lambda, z/s):  S z/s - lambda M z/s = (M x - lambda M z)/s
    double rr = 0.0;
    {
      // ||w||_M with w = (x - lambda z)/s; M w = (mx - lambda mz)/s
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += (x[i] - lambda * z[i]) * (mx[i] - lambda * mz[i]);
      rr = std::sqrt(std::max(0.0, acc) / den);
    }

    x = z;
    scale(x, 1.0 / s);
    mx = mz;
    scale(mx, 1.0 / s);

    out.lambda = lambda;
    out.iterations = it;
    out.residual = rr;
    if (it > 1 && std::abs(lambda - lambda_prev) <= cfg.tol * std::abs(lambda) &&
        rr <= 10.0 * cfg.tol * std::abs(lambda)) {
      out.converged = true;
      break;
    }
    lambda_prev = lambda;
  }
  out.vector = x;
  return out;
}

/// Largest eigenvalue of the pencil (S, M): power iteration on M^-1 S with
/// M-normalization and the same tolerance contract as the smallest-eigenvalue
/// iteration.
inline EigResult eig_largest_pencil(int n, const VectorFn& apply_Minv_S, const VectorFn& apply_M,
                                    const EigConfig& cfg = {}, std::uint64_t seed = 911u) {
  PF_REQUIRE(cfg.tol > 0 && cfg.max_iter >= 1, "eig_largest_pencil: bad config");

  Vector x = detail::seeded_vector(n, seed);
  Vector mx = apply_M(x);
  double xn = std::sqrt(dot(x, mx));
  scale(x, 1.0 / xn);
  scale(mx, 1.0 / xn);

  EigResult out;
  double lambda_prev = 0.0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    Vector z = apply_Minv_S(x);
    const double lambda = dot(z, mx);  // x^T S x for M-normalized x
    Vector mz = apply_M(z);

    double rr = 0.0;  // ||Sx - lambda Mx||_{M^-1} = ||z - lambda x||_M
    {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += (z[i] - lambda * x[i]) * (mz[i] - lambda * mx[i]);
      rr = std::sqrt(std::max(0.0, acc));
    }

    const double zn = std::sqrt(dot(z, mz));
    PF_CHECK(zn > 0.0, "eig_largest_pencil: iterate vanished");
    x = z;
    scale(x, 1.0 / zn);
    mx = mz;
    scale(mx, 1.0 / zn);

    out.lambda = lambda;
    out.iterations = it;
    out.residual = rr;
    if (it > 1 && std::abs(lambda - lambda_prev) <= cfg.tol * std::abs(lambda) &&
        rr <= 10.0 * cfg.tol * std::abs(lambda)) {
      out.converged = true;
      break;
    }
    lambda_prev = lambda;
  }
  out.vector = x;
  return out;
}

}  // namespace pillarflow

#endif  // PILLARFLOW_EIG_HPP
