#include "rowsample/qr.hpp"

#include <cmath>
#include <stdexcept>

namespace rowsample {

namespace {

struct QrCore {
  DenseMatrix v;              // m x n reflector vectors (column k lives in rows k..m-1)
  std::vector<double> betas;  // scale per reflector
  DenseMatrix r;              // n x n upper triangular
};

QrCore qr_core(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) throw std::invalid_argument("thin_qr: matrix must be tall (rows >= cols)");

  DenseMatrix work = a;
  DenseMatrix v(m, n);
  std::vector<double> betas(n, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    double sigma = 0.0;
    for (std::size_t i = k + 1; i < m; ++i) sigma += work(i, k) * work(i, k);
    const double x0 = work(k, k);
    const double norm = std::sqrt(x0 * x0 + sigma);
    if (norm > 0.0) {
      const double v0 = x0 + std::copysign(norm, x0);
      const double vtv = v0 * v0 + sigma;
      const double beta = 2.0 / vtv;
      betas[k] = beta;
      v(k, k) = v0;
      for (std::size_t i = k + 1; i < m; ++i) v(i, k) = work(i, k);

      for (std::size_t j = k; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += v(i, k) * work(i, j);
        s *= beta;
        for (std::size_t i = k; i < m; ++i) work(i, j) -= s * v(i, k);
      }
    }
  }

  DenseMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) r(i, j) = work(i, j);
  return {std::move(v), std::move(betas), std::move(r)};
}

DenseMatrix accumulate_q(const QrCore& core, std::size_t m, std::size_t n) {
  // Q = H_0 H_1 ... H_{n-1} [I_n; 0], applied back to front
  DenseMatrix q(m, n);
  for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    if (core.betas[k] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += core.v(i, k) * q(i, j);
      s *= core.betas[k];
      for (std::size_t i = k; i < m; ++i) q(i, j) -= s * core.v(i, k);
    }
  }
  return q;
}

}  // namespace

ThinQrResult thin_qr(const DenseMatrix& a) {
  QrCore core = qr_core(a);
  DenseMatrix q = accumulate_q(core, a.rows(), a.cols());
  return {OrthonormalBasis(std::move(q)), std::move(core.r)};
}

DenseMatrix qr_r_only(const DenseMatrix& a) { return qr_core(a).r; }

std::vector<double> solve_upper(const DenseMatrix& r,
                                const std::vector<double>& b) {
  const std::size_t n = r.rows();
  if (r.cols() != n || b.size() != n)
    throw std::invalid_argument("solve_upper: dimension mismatch");
  std::vector<double> x(b);
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= r(i, j) * x[j];
    const double d = r(i, i);
    if (std::abs(d) < 1e-300)
      throw std::domain_error("solve_upper: negligible pivot");
    x[i] = s / d;
  }
  return x;
}

std::vector<double> solve_upper_transpose(const DenseMatrix& r,
                                          const std::vector<double>& b) {
  const std::size_t n = r.rows();
  if (r.cols() != n || b.size() != n)
    throw std::invalid_argument("solve_upper_transpose: dimension mismatch");
  std::vector<double> x(b);
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= r(j, i) * x[j];
    const double d = r(i, i);
    if (std::abs(d) < 1e-300)
      throw std::domain_error("solve_upper_transpose: negligible pivot");
    x[i] = s / d;
  }
  return x;
}

}  // namespace rowsample
