#include "ccx/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace ccx {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets,
                           bool symmetric)
    : rows_(rows), cols_(cols), symmetric_(symmetric) {
  for (const auto& t : triplets)
    if (t.row < 0 || static_cast<std::size_t>(t.row) >= rows || t.col < 0 ||
        static_cast<std::size_t>(t.col) >= cols)
      throw std::out_of_range("triplet index outside matrix shape");

  // Stable sort keeps the summation order fixed for equal (row, col).
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  row_ptr_.assign(rows + 1, 0);
  for (std::size_t i = 0; i < triplets.size();) {
    const Triplet& t = triplets[i];
    double sum = 0.0;
    std::size_t j = i;
    for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j)
      sum += triplets[j].value;
    col_idx_.push_back(t.col);
    values_.push_back(sum);
    ++row_ptr_[t.row + 1];
    i = j;
  }
  std::partial_sum(row_ptr_.begin(), row_ptr_.end(), row_ptr_.begin());
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, static_cast<int>(j));
  return (it != end && *it == static_cast<int>(j)) ? values_[it - col_idx_.begin()] : 0.0;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw std::invalid_argument("matrix-vector shape mismatch");
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[col_idx_[p]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += std::abs(values_[p]);
    m = std::max(m, s);
  }
  return m;
}

double SparseMatrix::symmetry_defect() const {
  if (rows_ != cols_) throw std::invalid_argument("symmetry_defect needs a square matrix");
  double d = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      d = std::max(d, std::abs(values_[p] - at(col_idx_[p], i)));
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      t.push_back({col_idx_[p], static_cast<int>(i), values_[p]});
  return SparseMatrix(cols_, rows_, std::move(t), symmetric_);
}

SparseMatrix SparseMatrix::submatrix(std::span<const int> keep) const {
  if (rows_ != cols_) throw std::invalid_argument("submatrix needs a square matrix");
  std::vector<int> map(rows_, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) map[keep[i]] = static_cast<int>(i);
  std::vector<Triplet> t;
  for (int i : keep)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      if (map[col_idx_[p]] >= 0) t.push_back({map[i], map[col_idx_[p]], values_[p]});
  return SparseMatrix(keep.size(), keep.size(), std::move(t), symmetric_);
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      t.emplace_back(static_cast<int>(i), col_idx_[p], values_[p]);
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) m(static_cast<Eigen::Index>(i), col_idx_[p]) = values_[p];
  return m;
}

SparseMatrix SparseMatrix::from_eigen(const Eigen::SparseMatrix<double>& m, bool symmetric) {
  std::vector<Triplet> t;
  for (int c = 0; c < m.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it)
      t.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
  return SparseMatrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), std::move(t), symmetric);
}

void write_matrix_market(std::ostream& os, const SparseMatrix& m) {
  const auto old_precision = os.precision(17);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto v = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (int p = rp[i]; p < rp[i + 1]; ++p) os << i + 1 << ' ' << ci[p] + 1 << ' ' << v[p] << '\n';
  os.precision(old_precision);
}

}  // namespace ccx
