#pragma once

#include <cstddef>
#include <vector>

namespace rowsample {

// Row-major dense matrix of doubles.  Entries must stay finite; construction
// and assignment from raw data validate this.  Zero-row matrices are allowed
// (they arise as empty row selections); the column count is always positive.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
  double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }

  void check_finite() const;  // throws std::invalid_argument on NaN/Inf

  static DenseMatrix identity(std::size_t n);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

// b^T * b, the n x n Gram matrix of the columns
DenseMatrix gram(const DenseMatrix& b);

std::vector<double> multiply_vec(const DenseMatrix& a,
                                 const std::vector<double>& x);
std::vector<double> multiply_transpose_vec(const DenseMatrix& a,
                                           const std::vector<double>& x);

double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);

// || a - b ||_F; shapes must match
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);

// || q^T q - I ||_F without forming the difference explicitly
double orthonormality_defect(const DenseMatrix& q);

std::vector<double> row_norms_squared(const DenseMatrix& a);

}  // namespace rowsample
