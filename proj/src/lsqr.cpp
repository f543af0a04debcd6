#include "rowsample/lsqr.hpp"

#include <cmath>
#include <stdexcept>

#include "rowsample/qr.hpp"

namespace rowsample {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void scale(std::vector<double>& v, double a) {
  for (double& x : v) x *= a;
}

}  // namespace

LsqrResult lsqr_solve(const DenseMatrix& a, const std::vector<double>& b,
                      const DenseMatrix* r_s, double tol,
                      std::size_t max_iter) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw std::invalid_argument("lsqr_solve: b size mismatch");
  if (r_s && (r_s->rows() != n || r_s->cols() != n))
    throw std::invalid_argument("lsqr_solve: preconditioner shape mismatch");
  if (max_iter == 0) max_iter = 4 * n;

  // operator in the preconditioned variable z (x = r_s^-1 z)
  auto apply = [&](const std::vector<double>& z) {
    if (!r_s) return multiply_vec(a, z);
    return multiply_vec(a, solve_upper(*r_s, z));
  };
  auto apply_t = [&](const std::vector<double>& u) {
    std::vector<double> v = multiply_transpose_vec(a, u);
    if (!r_s) return v;
    // (a r_s^-1)^T u = r_s^-T (a^T u)
    return solve_upper_transpose(*r_s, v);
  };

  LsqrResult res;
  res.solution.assign(n, 0.0);
  res.iterations = 0;
  res.converged = false;
  res.final_normal_residual = 0.0;

  std::vector<double> u(b);
  double beta = norm2(u);
  if (beta == 0.0) {
    res.converged = true;  // zero rhs, zero solution
    return res;
  }
  scale(u, 1.0 / beta);

  std::vector<double> v = apply_t(u);
  double alpha = norm2(v);
  if (alpha == 0.0) {
    res.converged = true;  // b orthogonal to the range
    return res;
  }
  scale(v, 1.0 / alpha);

  std::vector<double> w(v);
  std::vector<double> z(n, 0.0);
  double phibar = beta;
  double rhobar = alpha;
  double anorm2 = alpha * alpha;

  for (std::size_t it = 1; it <= max_iter; ++it) {
    // continue the bidiagonalization
    std::vector<double> u_next = apply(v);
    for (std::size_t i = 0; i < m; ++i) u_next[i] -= alpha * u[i];
    beta = norm2(u_next);
    if (beta > 0.0) {
      scale(u_next, 1.0 / beta);
      u = std::move(u_next);
    }
    anorm2 += beta * beta;

    std::vector<double> v_next = apply_t(u);
    for (std::size_t i = 0; i < n; ++i) v_next[i] -= beta * v[i];
    alpha = norm2(v_next);
    if (alpha > 0.0) {
      scale(v_next, 1.0 / alpha);
      v = std::move(v_next);
    }
    anorm2 += alpha * alpha;

    // one Givens step of the implicit QR on the bidiagonal system
    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;

    const double step = phi / rho;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] += step * w[i];
      w[i] = v[i] - (theta / rho) * w[i];
    }

    res.iterations = it;
    // ||A^T r|| = phibar * alpha * |c|; normalize by ||A||_F-ish and ||r||
    const double arnorm = phibar * alpha * std::abs(c);
    const double anorm = std::sqrt(anorm2);
    const double test =
        (phibar > 0.0 && anorm > 0.0) ? arnorm / (anorm * phibar) : 0.0;
    res.normal_residuals.push_back(test);
    res.final_normal_residual = test;
    if (test <= tol || alpha == 0.0 || beta == 0.0) {
      // exact breakdown of the bidiagonalization is also convergence
      res.converged = true;
      break;
    }
  }

  res.solution = r_s ? solve_upper(*r_s, z) : z;
  return res;
}

}  // namespace rowsample
