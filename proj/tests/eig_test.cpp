#include "pillarflow/eig.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

namespace pillarflow {
namespace {

VectorFn dense_apply(const Eigen::MatrixXd& a) {
  return [a](const Vector& x) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
    Eigen::VectorXd y = a * xv;
    return Vector(y.data(), y.data() + y.size());
  };
}

TEST(EigSmallest, DeflatedDiagonalPencil) {
  // S = diag(0, 2, 5), M = I, kernel spanned by e1
  const auto pinv = [](const Vector& x) { return Vector{0.0, x[1] / 2.0, x[2] / 5.0}; };
  const auto ident = [](const Vector& x) { return x; };
  const auto r = eig_smallest_pencil(3, pinv, ident, Vector{1.0, 0.0, 0.0});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.lambda, 2.0, 1e-10);
  // the deflated iterate stays orthogonal to the kernel
  EXPECT_NEAR(r.vector[0], 0.0, 1e-12);
}

TEST(EigSmallest, IdentityPencil) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 12;
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = u(rng);
  Eigen::MatrixXd m = r.transpose() * r + n * Eigen::MatrixXd::Identity(n, n);
  // S = M: S^-1 M = I
  const auto res =
      eig_smallest_pencil(n, [](const Vector& x) { return x; }, dense_apply(m), std::nullopt);
  ASSERT_TRUE(res.converged);
  EXPECT_NEAR(res.lambda, 1.0, 1e-10);
}

TEST(EigSmallest, RandomSpdPencilMatchesDenseSolver) {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 30;
  Eigen::MatrixXd rs(n, n), rm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rs(i, j) = u(rng);
      rm(i, j) = u(rng);
    }
  Eigen::MatrixXd s = rs.transpose() * rs + 0.5 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd m = rm.transpose() * rm + n * Eigen::MatrixXd::Identity(n, n);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(s, m);
  const double want = ges.eigenvalues()(0);

  const Eigen::MatrixXd sinv_m = s.fullPivLu().solve(m);
  EigConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_iter = 5000;
  const auto r = eig_smallest_pencil(n, dense_apply(sinv_m), dense_apply(m), std::nullopt, cfg);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.lambda, want, 1e-7 * std::abs(want));
  EXPECT_LE(r.residual, 10 * cfg.tol * r.lambda);  // eigenresidual contract
}

TEST(EigLargest, DiagonalPencil) {
  Eigen::MatrixXd s = Eigen::Vector2d(1.0, 4.0).asDiagonal();
  const auto r = eig_largest_pencil(2, dense_apply(s), [](const Vector& x) { return x; });
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.lambda, 4.0, 1e-8);
}

TEST(EigLargest, IdentityPencil) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 9;
  Eigen::MatrixXd rm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rm(i, j) = u(rng);
  Eigen::MatrixXd m = rm.transpose() * rm + n * Eigen::MatrixXd::Identity(n, n);
  const auto r =
      eig_largest_pencil(n, [](const Vector& x) { return x; }, dense_apply(m));
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.lambda, 1.0, 1e-10);
}

TEST(EigLargest, RandomSpdPencilMatchesDenseSolver) {
  std::mt19937 rng(710);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 25;
  Eigen::MatrixXd rs(n, n), rm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rs(i, j) = u(rng);
      rm(i, j) = u(rng);
    }
  Eigen::MatrixXd s = rs.transpose() * rs + Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd m = rm.transpose() * rm + n * Eigen::MatrixXd::Identity(n, n);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(s, m);
  const double want = ges.eigenvalues()(n - 1);
  const Eigen::MatrixXd minv_s = m.fullPivLu().solve(s);
  EigConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_iter = 20000;
  const auto r = eig_largest_pencil(n, dense_apply(minv_s), dense_apply(m), cfg);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.lambda, want, 1e-7 * want);
}

}  // namespace
}  // namespace pillarflow
