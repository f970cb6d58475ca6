#include "pillarflow/fgmres.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

namespace pillarflow {
namespace {

ApplyFn dense_op(const Eigen::MatrixXd& a) {
  return [a](const Vector& x, Vector& y) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
    Eigen::VectorXd yv = a * xv;
    y.assign(yv.data(), yv.data() + yv.size());
  };
}

TEST(Fgmres, IdentityConvergesInOneIteration) {
  const int n = 10;
  Vector b(n);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& v : b) v = u(rng);
  const auto rep = fgmres(n, dense_op(Eigen::MatrixXd::Identity(n, n)), nullptr, b);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.iterations, 1);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(rep.x[i], b[i], 1e-12);
}

TEST(Fgmres, ExactPreconditionerOneIteration) {
  Eigen::MatrixXd a(2, 2);
  a << 2, 0, 0, 1;
  const Vector b{2.0, 1.0};
  const auto rep = fgmres(2, dense_op(a), dense_op(a.inverse()), b);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.iterations, 1);
  EXPECT_NEAR(rep.x[0], 1.0, 1e-12);
  EXPECT_NEAR(rep.x[1], 1.0, 1e-12);
}

TEST(Fgmres, SaddleFixtureMatchesDenseLu) {
  // [[I2, B^T], [B, 0]] with B = [1 1]
  Eigen::MatrixXd k(3, 3);
  k << 1, 0, 1, 0, 1, 1, 1, 1, 0;
  const Vector b{1.0, 2.0, 0.5};
  Eigen::Vector3d want = k.fullPivLu().solve(Eigen::Vector3d(1.0, 2.0, 0.5));
  const auto rep = fgmres(3, dense_op(k), nullptr, b);
  ASSERT_TRUE(rep.converged);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(rep.x[i], want(i), 1e-10);
}

TEST(Fgmres, ExactInversePreconditionerNeedsAtMostTwoIterations) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 12;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = u(rng);
    a += n * Eigen::MatrixXd::Identity(n, n);
    Vector b(n);
    for (double& v : b) v = u(rng);
    const auto rep = fgmres(n, dense_op(a), dense_op(a.inverse()), b);
    EXPECT_TRUE(rep.converged);
    EXPECT_LE(rep.iterations, 2);
  }
}

TEST(Fgmres, TrueResidualMatchesRecomputation) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 40;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  a += 2.0 * n * Eigen::MatrixXd::Identity(n, n);
  Vector b(n);
  for (double& v : b) v = u(rng);
  const auto rep = fgmres(n, dense_op(a), nullptr, b);
  ASSERT_TRUE(rep.converged);
  Eigen::Map<const Eigen::VectorXd> xv(rep.x.data(), n);
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), n);
  const double res = (bv - a * xv).norm();
  EXPECT_NEAR(rep.residual_history.back(), res, 1e-13 * (1 + res));
  EXPECT_LE(res, std::max(1e-10, 1e-8 * bv.norm()));
}

TEST(Fgmres, MaxIterReturnsNotConverged) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 50;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  a += 2.0 * n * Eigen::MatrixXd::Identity(n, n);
  Vector b(n, 1.0);
  KrylovConfig cfg;
  cfg.max_iter = 3;
  const auto rep = fgmres(n, dense_op(a), nullptr, b, cfg);
  EXPECT_FALSE(rep.converged);
  EXPECT_EQ(rep.stop_reason, StopReason::MaxIterations);
  EXPECT_EQ(rep.iterations, 3);
}

TEST(Fgmres, ArnoldiBasisOrthogonality) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 60;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  a += 1.5 * Eigen::MatrixXd::Identity(n, n);  // mildly conditioned: many iterations
  Vector b(n);
  for (double& v : b) v = u(rng);
  KrylovConfig cfg;
  cfg.restart = 100;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-12;
  FgmresDebug dbg;
  const auto rep = fgmres(n, dense_op(a), nullptr, b, cfg, nullptr, &dbg);
  ASSERT_GE(dbg.basis.size(), 5u);
  double max_offdiag = 0.0;
  for (std::size_t i = 0; i < dbg.basis.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      max_offdiag = std::max(max_offdiag, std::abs(dot(dbg.basis[i], dbg.basis[j])));
  EXPECT_LE(max_offdiag, 1e-10);
  EXPECT_TRUE(rep.converged);
}

TEST(Fgmres, ZeroRhs) {
  const auto rep = fgmres(4, dense_op(Eigen::MatrixXd::Identity(4, 4)), nullptr, Vector(4, 0.0));
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.iterations, 0);
  for (double v : rep.x) EXPECT_EQ(v, 0.0);
}

}  // namespace
}  // namespace pillarflow
