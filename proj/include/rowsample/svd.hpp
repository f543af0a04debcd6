#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rowsample/dense_matrix.hpp"

namespace rowsample {

// All singular values, non-increasing, non-negative.  Small well-conditioned
// problems go through an eigen-decomposition of the Gram matrix; that route
// is accepted only when its own output certifies sigma_min/sigma_max >= 1e-6,
// otherwise the computation falls back to bidiagonalization plus bisection.
std::vector<double> singular_values(const DenseMatrix& a);

// sigma_max / sigma_min for a tall full-rank matrix; empty when numerically
// rank deficient
std::optional<double> condition_number(const DenseMatrix& a);

// count of singular values above the cutoff; cutoff defaults to
// max(rows, cols) * ulp(sigma_max) when tol_override is zero
std::size_t numerical_rank(const DenseMatrix& a, double tol_override = 0.0);

// unit in the last place of a positive double
double ulp(double x);

}  // namespace rowsample
