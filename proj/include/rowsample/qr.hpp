#pragma once

#include "rowsample/dense_matrix.hpp"
#include "rowsample/orthonormal.hpp"

namespace rowsample {

struct ThinQrResult {
  OrthonormalBasis q;  // m x n, orthonormal columns
  DenseMatrix r;       // n x n, upper triangular
};

// Householder thin QR of a tall matrix (rows >= cols).
ThinQrResult thin_qr(const DenseMatrix& a);

// Same factorization, R only; skips the Q accumulation and the basis checks.
DenseMatrix qr_r_only(const DenseMatrix& a);

// back substitution, r upper triangular; throws std::domain_error on a
// negligible pivot
std::vector<double> solve_upper(const DenseMatrix& r,
                                const std::vector<double>& b);

// forward substitution with r^T (r stays upper triangular in memory)
std::vector<double> solve_upper_transpose(const DenseMatrix& r,
                                          const std::vector<double>& b);

}  // namespace rowsample
