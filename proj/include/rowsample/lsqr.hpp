#pragma once

#include <cstddef>
#include <vector>

#include "rowsample/dense_matrix.hpp"

namespace rowsample {

struct LsqrResult {
  std::vector<double> solution;
  std::size_t iterations;
  bool converged;                       // stopping test met before the cap
  double final_normal_residual;         // ||A^T r|| / (||A|| ||r||) estimate
  std::vector<double> normal_residuals; // the same estimate per iteration
};

// Least-squares min ||a x - b|| by Golub-Kahan bidiagonalization with QR
// updates.  When r_s is given it acts as a right preconditioner: the
// iteration runs on a r_s^-1 and the solution is mapped back, so a
// well-chosen r_s collapses the iteration count.  max_iter zero means 4n.
LsqrResult lsqr_solve(const DenseMatrix& a, const std::vector<double>& b,
                      const DenseMatrix* r_s = nullptr, double tol = 1e-10,
                      std::size_t max_iter = 0);

}  // namespace rowsample
