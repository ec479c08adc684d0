#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ccx {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed-row matrix. Built from triplets; duplicates are summed and
/// column indices sorted within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets,
               bool symmetric = false);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  bool symmetric() const { return symmetric_; }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  double at(std::size_t i, std::size_t j) const;
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  double max_abs() const;
  /// Max-abs-row-sum norm.
  double norm_inf() const;
  /// max |M - M^T| over stored and mirrored entries.
  double symmetry_defect() const;

  SparseMatrix transpose() const;
  /// Keeps the rows and columns listed in `keep` (sorted), renumbered in order.
  SparseMatrix submatrix(std::span<const int> keep) const;

  Eigen::SparseMatrix<double> to_eigen() const;
  Eigen::MatrixXd to_dense() const;
  static SparseMatrix from_eigen(const Eigen::SparseMatrix<double>& m, bool symmetric);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool symmetric_ = false;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// MatrixMarket coordinate real general (1-based indices).
void write_matrix_market(std::ostream& os, const SparseMatrix& m);

}  // namespace ccx
