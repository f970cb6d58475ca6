#ifndef PILLARFLOW_SPARSE_HPP
#define PILLARFLOW_SPARSE_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "pillarflow/core.hpp"

namespace pillarflow {

/// One assembly contribution: value at (row, col). Duplicates are summed.
struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row and duplicates are merged at construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  SparseMatrix(int rows, int cols) : n_rows_(rows), n_cols_(cols), row_ptr_(rows + 1, 0) {}

  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> trip) {
    PF_REQUIRE(rows >= 0 && cols >= 0, "from_triplets: negative dimensions");
    for (const Triplet& t : trip) {
      PF_REQUIRE(t.row >= 0 && t.row < rows && t.col >= 0 && t.col < cols,
                 "from_triplets: entry (", t.row, ",", t.col, ") outside ", rows, "x", cols);
    }
    // stable: entries with equal (row, col) keep insertion order, so mirrored
    // element contributions sum in the same order and A stays bitwise symmetric
    std::stable_sort(trip.begin(), trip.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m(rows, cols);
    m.col_.reserve(trip.size());
    m.val_.reserve(trip.size());
    std::size_t i = 0;
    for (int r = 0; r < rows; ++r) {
      while (i < trip.size() && trip[i].row == r) {
        const int c = trip[i].col;
        double v = 0.0;
        while (i < trip.size() && trip[i].row == r && trip[i].col == c) v += trip[i++].value;
        m.col_.push_back(c);
        m.val_.push_back(v);
      }
      m.row_ptr_[r + 1] = static_cast<std::int64_t>(m.col_.size());
    }
    return m;
  }

  static SparseMatrix identity(int n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(t));
  }

  int rows() const { return n_rows_; }
  int cols() const { return n_cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(col_.size()); }

  std::int64_t row_begin(int r) const { return row_ptr_[r]; }
  std::int64_t row_end(int r) const { return row_ptr_[r + 1]; }
  int col_index(std::int64_t k) const { return col_[k]; }
  double value(std::int64_t k) const { return val_[k]; }
  double& value(std::int64_t k) { return val_[k]; }

  /// y = A x
  void multiply(const Vector& x, Vector& y) const {
    y.assign(n_rows_, 0.0);
    for (int r = 0; r < n_rows_; ++r) {
      double s = 0.0;
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += val_[k] * x[col_[k]];
      y[r] = s;
    }
  }

  Vector multiply(const Vector& x) const {
    Vector y;
    multiply(x, y);
    return y;
  }

  /// y += alpha * A^T x  (no allocation; y must have size cols())
  void multiply_transpose_add(const Vector& x, Vector& y, double alpha = 1.0) const {
    for (int r = 0; r < n_rows_; ++r) {
      const double xr = alpha * x[r];
      if (xr == 0.0) continue;
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_[k]] += val_[k] * xr;
    }
  }

  Vector multiply_transpose(const Vector& x) const {
    Vector y(n_cols_, 0.0);
    multiply_transpose_add(x, y);
    return y;
  }

  SparseMatrix transpose() const {
    SparseMatrix t(n_cols_, n_rows_);
    std::vector<std::int64_t> count(n_cols_ + 1, 0);
    for (int c : col_) ++count[c + 1];
    for (int c = 0; c < n_cols_; ++c) count[c + 1] += count[c];
    t.row_ptr_ = count;
    t.col_.resize(col_.size());
    t.val_.resize(val_.size());
    for (int r = 0; r < n_rows_; ++r) {
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        const std::int64_t pos = count[col_[k]]++;
        t.col_[pos] = r;
        t.val_[pos] = val_[k];
      }
    }
    return t;  // columns sorted because rows were scanned in order
  }

  /// this * B, with a dense accumulator over the result row.
  SparseMatrix multiply(const SparseMatrix& b) const {
    PF_REQUIRE(n_cols_ == b.n_rows_, "matmul: dimension mismatch");
    SparseMatrix c(n_rows_, b.n_cols_);
    std::vector<double> acc(b.n_cols_, 0.0);
    std::vector<int> touched;
    for (int r = 0; r < n_rows_; ++r) {
      touched.clear();
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        const int m = col_[k];
        const double v = val_[k];
        for (std::int64_t j = b.row_ptr_[m]; j < b.row_ptr_[m + 1]; ++j) {
          const int cc = b.col_[j];
          if (acc[cc] == 0.0 && v * b.val_[j] != 0.0) touched.push_back(cc);
          acc[cc] += v * b.val_[j];
        }
      }
      std::sort(touched.begin(), touched.end());
      for (int cc : touched) {
        c.col_.push_back(cc);
        c.val_.push_back(acc[cc]);
        acc[cc] = 0.0;
      }
      c.row_ptr_[r + 1] = static_cast<std::int64_t>(c.col_.size());
    }
    return c;
  }

  /// this + alpha * B (same dimensions, merged pattern).
  SparseMatrix add(const SparseMatrix& b, double alpha = 1.0) const {
    PF_REQUIRE(n_rows_ == b.n_rows_ && n_cols_ == b.n_cols_, "add: dimension mismatch");
    SparseMatrix c(n_rows_, n_cols_);
    c.col_.reserve(col_.size() + b.col_.size());
    c.val_.reserve(col_.size() + b.col_.size());
    for (int r = 0; r < n_rows_; ++r) {
      std::int64_t i = row_ptr_[r], j = b.row_ptr_[r];
      while (i < row_ptr_[r + 1] || j < b.row_ptr_[r + 1]) {
        int ci = i < row_ptr_[r + 1] ? col_[i] : n_cols_;
        int cj = j < b.row_ptr_[r + 1] ? b.col_[j] : n_cols_;
        if (ci < cj) {
          c.col_.push_back(ci);
          c.val_.push_back(val_[i++]);
        } else if (cj < ci) {
          c.col_.push_back(cj);
          c.val_.push_back(alpha * b.val_[j++]);
        } else {
          c.col_.push_back(ci);
          c.val_.push_back(val_[i++] + alpha * b.val_[j++]);
        }
      }
      c.row_ptr_[r + 1] = static_cast<std::int64_t>(c.col_.size());
    }
    return c;
  }

  /// Scale row r by s[r].
  void scale_rows(const Vector& s) {
    for (int r = 0; r < n_rows_; ++r)
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) val_[k] *= s[r];
  }

  Vector diagonal() const {
    Vector d(std::min(n_rows_, n_cols_), 0.0);
    for (int r = 0; r < static_cast<int>(d.size()); ++r)
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        if (col_[k] == r) d[r] = val_[k];
    return d;
  }

  double sum() const { return std::accumulate(val_.begin(), val_.end(), 0.0); }

  /// Submatrix keeping the listed rows and renumbering columns; entries whose
  /// column maps to -1 are dropped.
  SparseMatrix select(const std::vector<int>& rows_keep, const std::vector<int>& col_new_index,
                      int new_cols) const {
    SparseMatrix out(static_cast<int>(rows_keep.size()), new_cols);
    for (std::size_t rr = 0; rr < rows_keep.size(); ++rr) {
      const int r = rows_keep[rr];
      const std::int64_t start = static_cast<std::int64_t>(out.col_.size());
      bool sorted = true;
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        const int nc = col_new_index[col_[k]];
        if (nc >= 0) {
          if (!out.col_.empty() && static_cast<std::int64_t>(out.col_.size()) > start &&
              out.col_.back() > nc)
            sorted = false;
          out.col_.push_back(nc);
          out.val_.push_back(val_[k]);
        }
      }
      out.row_ptr_[rr + 1] = static_cast<std::int64_t>(out.col_.size());
      if (!sorted) {
        std::vector<std::pair<int, double>> tmp;
        for (std::int64_t k = start; k < out.row_ptr_[rr + 1]; ++k)
          tmp.push_back({out.col_[k], out.val_[k]});
        std::sort(tmp.begin(), tmp.end());
        for (std::int64_t k = start; k < out.row_ptr_[rr + 1]; ++k) {
          out.col_[k] = tmp[k - start].first;
          out.val_[k] = tmp[k - start].second;
        }
      }
    }
    return out;
  }

  void sort_rows() {
    std::vector<std::pair<int, double>> tmp;
    for (int r = 0; r < n_rows_; ++r) {
      tmp.clear();
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) tmp.push_back({col_[k], val_[k]});
      std::sort(tmp.begin(), tmp.end());
      std::int64_t k = row_ptr_[r];
      for (const auto& [c, v] : tmp) {
        col_[k] = c;
        val_[k] = v;
        ++k;
      }
    }
  }

  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_indices() const { return col_; }
  const std::vector<double>& values() const { return val_; }

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
};

/// gamma * B^T diag(Mp)^-1 B, assembled explicitly.
inline SparseMatrix graddiv_product(const SparseMatrix& b, const Vector& mp_diag, double gamma) {
  PF_REQUIRE(gamma >= 0.0, "graddiv_product: gamma must be nonnegative");
  if (gamma == 0.0) return SparseMatrix(b.cols(), b.cols());
  SparseMatrix bs = b;  // rows scaled by gamma / diag
  Vector s(mp_diag.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    PF_REQUIRE(mp_diag[i] > 0.0, "graddiv_product: nonpositive mass diagonal at ", i);
    s[i] = gamma / mp_diag[i];
  }
  bs.scale_rows(s);
  return b.transpose().multiply(bs);
}

// --- Matrix Market coordinate format (1-based) ---

inline void write_matrix_market(const SparseMatrix& m, const std::string& path) {
  std::ofstream os(path);
  PF_CHECK(os.good(), "write_matrix_market: cannot open ", path);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
  char buf[64];
  for (int r = 0; r < m.rows(); ++r) {
    for (std::int64_t k = m.row_begin(r); k < m.row_end(r); ++k) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", r + 1, m.col_index(k) + 1, m.value(k));
      os << buf;
    }
  }
  PF_CHECK(os.good(), "write_matrix_market: write failed for ", path);
}

inline SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream is(path);
  PF_CHECK(is.good(), "read_matrix_market: cannot open ", path);
  std::string line;
  PF_CHECK(static_cast<bool>(std::getline(is, line)), "read_matrix_market: empty file ", path);
  const bool symmetric = line.find("symmetric") != std::string::npos;
  PF_CHECK(line.rfind("%%MatrixMarket", 0) == 0 && line.find("coordinate") != std::string::npos,
           "read_matrix_market: unsupported banner in ", path, ": ", line);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line[0] != '%') break;
  }
  int rows = 0, cols = 0;
  long long nnz = 0;
  PF_CHECK(std::sscanf(line.c_str(), "%d %d %lld", &rows, &cols, &nnz) == 3,
           "read_matrix_market: bad size line ", lineno, " in ", path);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  for (long long i = 0; i < nnz; ++i) {
    PF_CHECK(static_cast<bool>(std::getline(is, line)), "read_matrix_market: truncated at entry ", i,
             " in ", path);
    ++lineno;
    int r, c;
    double v;
    PF_CHECK(std::sscanf(line.c_str(), "%d %d %lf", &r, &c, &v) == 3,
             "read_matrix_market: bad entry, line ", lineno, " in ", path);
    trip.push_back({r - 1, c - 1, v});
    if (symmetric && r != c) trip.push_back({c - 1, r - 1, v});
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(trip));
}

}  // namespace pillarflow

#endif  // PILLARFLOW_SPARSE_HPP
