#ifndef PILLARFLOW_LU_HPP
#define PILLARFLOW_LU_HPP

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <memory>

#include "pillarflow/sparse.hpp"

namespace pillarflow {

namespace detail {

inline Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& m) {
  Eigen::SparseMatrix<double, Eigen::RowMajor, int> rm(m.rows(), m.cols());
  rm.resizeNonZeros(m.nnz());
  for (int r = 0; r <= m.rows(); ++r) rm.outerIndexPtr()[r] = static_cast<int>(m.row_ptr()[r]);
  std::copy(m.col_indices().begin(), m.col_indices().end(), rm.innerIndexPtr());
  std::copy(m.values().begin(), m.values().end(), rm.valuePtr());
  return Eigen::SparseMatrix<double>(rm);
}

}  // namespace detail

/// Sparse LU with partial pivoting and an AMD fill-reducing ordering.
/// Plays the role of the inner direct solver for all block inversions.
class LuFactorization {
 public:
  explicit LuFactorization(const SparseMatrix& m) : n_(m.rows()) {
    PF_REQUIRE(m.rows() == m.cols(), "lu_factor: matrix must be square, got ", m.rows(), "x",
               m.cols());
    auto a = detail::to_eigen(m);
    solver_ = std::make_unique<Solver>();
    solver_->isSymmetric(true);  // pattern hint; values are still pivoted
    solver_->analyzePattern(a);
    solver_->factorize(a);
    PF_CHECK(solver_->info() == Eigen::Success,
             "lu_factor: factorization failed (singular pivot): ", solver_->lastErrorMessage());
  }

  int size() const { return n_; }

  Vector solve(const Vector& b) const {
    PF_REQUIRE(static_cast<int>(b.size()) == n_, "lu_solve: rhs size ", b.size(), " != ", n_);
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), n_);
    Eigen::VectorXd x = solver_->solve(bv);
    PF_CHECK(solver_->info() == Eigen::Success, "lu_solve: solve failed");
    return Vector(x.data(), x.data() + n_);
  }

 private:
  using Solver = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::AMDOrdering<int>>;
  std::unique_ptr<Solver> solver_;
  int n_ = 0;
};

inline LuFactorization lu_factor(const SparseMatrix& m) { return LuFactorization(m); }
inline Vector lu_solve(const LuFactorization& f, const Vector& b) { return f.solve(b); }

/// LDL^T for symmetric positive definite blocks (A_gamma, pressure mass).
/// Lower fill and faster than the pivoted LU on the same pattern.
class SpdFactorization {
 public:
  explicit SpdFactorization(const SparseMatrix& m) : n_(m.rows()) {
    PF_REQUIRE(m.rows() == m.cols(), "spd_factor: matrix must be square");
    auto a = detail::to_eigen(m);
    solver_ = std::make_unique<Solver>();
    solver_->compute(a);
    PF_CHECK(solver_->info() == Eigen::Success, "spd_factor: factorization failed (not SPD?)");
  }

  int size() const { return n_; }

  Vector solve(const Vector& b) const {
    PF_REQUIRE(static_cast<int>(b.size()) == n_, "spd_solve: rhs size mismatch");
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), n_);
    Eigen::VectorXd x = solver_->solve(bv);
    PF_CHECK(solver_->info() == Eigen::Success, "spd_solve: solve failed");
    return Vector(x.data(), x.data() + n_);
  }

 private:
  using Solver = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;
  std::unique_ptr<Solver> solver_;
  int n_ = 0;
};

}  // namespace pillarflow

#endif  // PILLARFLOW_LU_HPP
