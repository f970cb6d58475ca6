#ifndef PILLARFLOW_FGMRES_HPP
#define PILLARFLOW_FGMRES_HPP

#include <chrono>
#include <cmath>
#include <functional>
#include <utility>

#include "pillarflow/core.hpp"

namespace pillarflow {

/// Stopping parameters for the Krylov solvers. The iteration stops as soon
/// as either the absolute or the relative residual tolerance is met.
struct KrylovConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_iter = 1000;
  int restart = 500;
};

enum class StopReason { ResidualTolerance, HappyBreakdown, MaxIterations, ZeroRhs };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::ResidualTolerance: return "residual_tolerance";
    case StopReason::HappyBreakdown: return "happy_breakdown";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::ZeroRhs: return "zero_rhs";
  }
  return "unknown";
}

struct SolveReport {
  Vector x;
  int iterations = 0;  // total inner iterations across restarts
  std::vector<double> residual_history;
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIterations;
  double seconds = 0.0;
};

using ApplyFn = std::function<void(const Vector&, Vector&)>;
using ResidualFn = std::function<double(const Vector&)>;

/// Captures the Arnoldi basis of the last cycle, for orthogonality checks.
struct FgmresDebug {
  std::vector<Vector> basis;
};

/// Flexible GMRES with right preconditioning.
///
/// The preconditioner may change from one iteration to the next (hence the
/// stored Z basis). Orthogonalization is classical Gram-Schmidt applied
/// twice, so the Arnoldi basis stays orthogonal to ~1e-14 within a cycle.
///
/// Convergence is decided on an explicitly recomputed residual, never on the
/// Givens recurrence alone: once the recurrence estimate reaches the target,
/// the candidate solution is reconstructed and `true_residual` (default
/// ||b - A x||) is evaluated; the iteration continues if the recomputed value
/// is still above the target. This makes the reported final residual the
/// physical one even when the iterated operator differs from the residual
/// operator (as in the consistently augmented solves).
inline SolveReport fgmres(int n, const ApplyFn& apply_A, const ApplyFn& apply_P, const Vector& b,
                          const KrylovConfig& cfg = {}, const ResidualFn& true_residual = {},
                          FgmresDebug* debug = nullptr) {
  PF_REQUIRE(static_cast<int>(b.size()) == n, "fgmres: rhs size mismatch");
  PF_REQUIRE(cfg.abs_tol > 0 && cfg.rel_tol > 0, "fgmres: tolerances must be positive");
  PF_REQUIRE(cfg.restart >= 1 && cfg.max_iter >= 1, "fgmres: restart/max_iter must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.x.assign(n, 0.0);

  const double norm_b = norm2(b);
  const double target = std::max(cfg.abs_tol, cfg.rel_tol * norm_b);
  ResidualFn resid_fn = true_residual;
  Vector scratch(n);
  if (!resid_fn) {
    resid_fn = [&](const Vector& x) {
      apply_A(x, scratch);
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = b[i] - scratch[i];
        s += d * d;
      }
      return std::sqrt(s);
    };
  }

  if (norm_b == 0.0) {
    rep.converged = true;
    rep.stop_reason = StopReason::ZeroRhs;
    rep.residual_history.push_back(0.0);
    return rep;
  }

  const int m = cfg.restart;
  std::vector<Vector> V;  // orthonormal Arnoldi basis
  std::vector<Vector> Z;  // preconditioned vectors (flexible)
  std::vector<double> H((m + 1) * m, 0.0);  // column-major, lda = m+1
  std::vector<double> gs(m), sn(m), g(m + 1), y(m);
  Vector w(n), r(n);

  auto reconstruct = [&](const Vector& x0, int k, Vector& out) {
    // back substitution on the rotated Hessenberg, then out = x0 + Z y
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[j * (m + 1) + i] * y[j];
      y[i] = s / H[i * (m + 1) + i];
    }
    out = x0;
    for (int i = 0; i < k; ++i) axpy(y[i], Z[i], out);
  };

  Vector x = rep.x;
  bool done = false;
  while (!done) {
    apply_A(x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = norm2(r);
    if (beta <= target) {
      const double tr = resid_fn(x);
      rep.residual_history.push_back(tr);
      if (tr <= target) {
        rep.converged = true;
        rep.stop_reason = StopReason::ResidualTolerance;
        break;
      }
    }
    V.clear();
    Z.clear();
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    V.push_back(r);
    scale(V.back(), 1.0 / beta);

    bool checking = false;  // recurrence hit the target at least once this cycle
    int k = 0;              // columns completed in this cycle
    for (int j = 0; j < m; ++j) {
      ++rep.iterations;
      Z.emplace_back(n);
      if (apply_P)
        apply_P(V[j], Z[j]);
      else
        Z[j] = V[j];
      apply_A(Z[j], w);

      // classical Gram-Schmidt, two passes
      double* h = &H[j * (m + 1)];
      std::fill(h, h + m + 1, 0.0);
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const double c = dot(V[i], w);
          h[i] += c;
          axpy(-c, V[i], w);
        }
      }
      const double hnorm = norm2(w);
      h[j + 1] = hnorm;
      const bool breakdown = !(hnorm > 1e-14 * std::abs(g[0]) + 1e-300);
      if (!breakdown) {
        V.emplace_back(w);
        scale(V.back(), 1.0 / hnorm);
      }

      // previous rotations, then a new one to annihilate h[j+1]
      for (int i = 0; i < j; ++i) {
        const double t = gs[i] * h[i] + sn[i] * h[i + 1];
        h[i + 1] = -sn[i] * h[i] + gs[i] * h[i + 1];
        h[i] = t;
      }
      const double rho = std::hypot(h[j], h[j + 1]);
      gs[j] = rho == 0.0 ? 1.0 : h[j] / rho;
      sn[j] = rho == 0.0 ? 0.0 : h[j + 1] / rho;
      h[j] = rho;
      h[j + 1] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = gs[j] * g[j];
      k = j + 1;

      const double est = std::abs(g[j + 1]);
      rep.residual_history.push_back(est);

      if (est <= target || breakdown) checking = true;
      if (checking) {
        Vector cand;
        reconstruct(x, k, cand);
        const double tr = resid_fn(cand);
        if (tr <= target || breakdown) {
          rep.x = std::move(cand);
          rep.converged = true;
          rep.stop_reason = breakdown && tr > target ? StopReason::HappyBreakdown
                                                     : StopReason::ResidualTolerance;
          rep.residual_history.push_back(tr);
          done = true;
          break;
        }
      }
      if (rep.iterations >= cfg.max_iter) {
        Vector cand;
        reconstruct(x, k, cand);
        rep.x = std::move(cand);
        rep.residual_history.push_back(resid_fn(rep.x));
        rep.converged = false;
        rep.stop_reason = StopReason::MaxIterations;
        done = true;
        break;
      }
      if (breakdown) {  // exact subspace but residual still above target: restart
        break;
      }
    }
    if (!done) {
      if (k > 0) {
        Vector cand;
        reconstruct(x, k, cand);
        x = std::move(cand);
      }
      if (!rep.converged) rep.x = x;
    }
    if (debug) debug->basis = V;
  }
  if (debug && debug->basis.empty()) debug->basis = V;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace pillarflow

#endif  // PILLARFLOW_FGMRES_HPP
