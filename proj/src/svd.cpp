#include "rowsample/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rowsample/qr.hpp"

namespace rowsample {

namespace {

// eigenvalues of a small symmetric matrix, descending (cyclic Jacobi)
std::vector<double> jacobi_sym_eigenvalues(DenseMatrix g) {
  const std::size_t n = g.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(g(i, i)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      scale = std::max(scale, std::abs(g(i, j)));
  if (scale == 0.0) return std::vector<double>(n, 0.0);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += g(i, j) * g(i, j);
    if (std::sqrt(off) <= 1e-15 * scale * n) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = g(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double theta = (g(q, q) - g(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double gkp = g(k, p), gkq = g(k, q);
          g(k, p) = c * gkp - s * gkq;
          g(k, q) = s * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double gpk = g(p, k), gqk = g(q, k);
          g(p, k) = c * gpk - s * gqk;
          g(q, k) = s * gpk + c * gqk;
        }
      }
    }
  }

  std::vector<double> lam(n);
  for (std::size_t i = 0; i < n; ++i) lam[i] = g(i, i);
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return lam;
}

// Golub-Kahan upper bidiagonalization of a square matrix; returns the
// diagonal d (n) and superdiagonal e (n-1)
void bidiagonalize(DenseMatrix a, std::vector<double>& d,
                   std::vector<double>& e) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  d.assign(n, 0.0);
  e.assign(n > 0 ? n - 1 : 0, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    // left reflector clears column k below the diagonal
    double sigma = 0.0;
    for (std::size_t i = k + 1; i < m; ++i) sigma += a(i, k) * a(i, k);
    const double x0 = a(k, k);
    const double norm = std::sqrt(x0 * x0 + sigma);
    if (norm > 0.0 && sigma > 0.0) {
      const double v0 = x0 + std::copysign(norm, x0);
      const double beta = 2.0 / (v0 * v0 + sigma);
      a(k, k) = v0;
      for (std::size_t j = k + 1; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i)
          s += (i == k ? v0 : a(i, k)) * a(i, j);
        s *= beta;
        for (std::size_t i = k; i < m; ++i)
          a(i, j) -= s * (i == k ? v0 : a(i, k));
      }
      d[k] = -std::copysign(norm, x0);
    } else {
      d[k] = x0;
    }

    if (k + 2 < n) {
      // right reflector clears row k beyond the superdiagonal
      double rsig = 0.0;
      for (std::size_t j = k + 2; j < n; ++j) rsig += a(k, j) * a(k, j);
      const double y0 = a(k, k + 1);
      const double rnorm = std::sqrt(y0 * y0 + rsig);
      if (rnorm > 0.0 && rsig > 0.0) {
        const double w0 = y0 + std::copysign(rnorm, y0);
        const double beta = 2.0 / (w0 * w0 + rsig);
        a(k, k + 1) = w0;
        for (std::size_t i = k + 1; i < m; ++i) {
          double s = 0.0;
          for (std::size_t j = k + 1; j < n; ++j)
            s += (j == k + 1 ? w0 : a(k, j)) * a(i, j);
          s *= beta;
          for (std::size_t j = k + 1; j < n; ++j)
            a(i, j) -= s * (j == k + 1 ? w0 : a(k, j));
        }
        e[k] = -std::copysign(rnorm, y0);
      } else {
        e[k] = y0;
      }
    } else if (k + 2 == n) {
      e[k] = a(k, k + 1);
    }
  }
}

// Eigenvalue count below x for the Golub-Kahan tridiagonal (zero diagonal,
// off-diagonals d1,e1,d2,e2,...); its positive eigenvalues are the singular
// values of the bidiagonal matrix.
int gk_count_below(const std::vector<double>& off, double x, double pivmin) {
  double t = -x;
  int cnt = (t < 0.0) ? 1 : 0;
  for (double b : off) {
    double denom = t;
    if (std::abs(denom) < pivmin) denom = (denom < 0.0) ? -pivmin : pivmin;
    t = -x - (b * b) / denom;
    if (t < 0.0) ++cnt;
  }
  return cnt;
}

std::vector<double> gk_singular_values(const std::vector<double>& d,
                                       const std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n == 0) return {};

  // interleave |d|,|e| into the tridiagonal off-diagonal sequence
  std::vector<double> off;
  off.reserve(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    off.push_back(std::abs(d[i]));
    if (i + 1 < n) off.push_back(std::abs(e[i]));
  }

  double maxb = 0.0;
  for (double b : off) maxb = std::max(maxb, b);
  if (maxb == 0.0) return std::vector<double>(n, 0.0);
  const double safmin = std::numeric_limits<double>::min();
  const double pivmin = safmin * std::max(1.0, maxb * maxb);

  // Gershgorin bound for the tridiagonal
  double ub = 0.0;
  const std::size_t dim = 2 * n;
  for (std::size_t i = 0; i < dim; ++i) {
    double s = 0.0;
    if (i > 0) s += off[i - 1];
    if (i < dim - 1) s += off[i];
    ub = std::max(ub, s);
  }
  ub = ub * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()) + pivmin;

  std::vector<double> sv(n, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    // j-th largest singular value = eigenvalue of ascending index 2n+1-j
    const int target = static_cast<int>(2 * n + 1 - j);
    double lo = 0.0, hi = ub;
    for (int iter = 0; iter < 120 && hi - lo > pivmin; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (gk_count_below(off, mid, pivmin) >= target)
        hi = mid;
      else
        lo = mid;
    }
    sv[j - 1] = 0.5 * (lo + hi);
  }
  return sv;
}

}  // namespace

double ulp(double x) {
  x = std::abs(x);
  return std::nextafter(x, std::numeric_limits<double>::infinity()) - x;
}

std::vector<double> singular_values(const DenseMatrix& a_in) {
  if (a_in.rows() == 0) return {};
  const bool wide = a_in.cols() > a_in.rows();
  const DenseMatrix a = wide ? transpose(a_in) : a_in;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  if (n <= 32) {
    std::vector<double> lam = jacobi_sym_eigenvalues(gram(a));
    const double lmax = std::max(lam.front(), 0.0);
    if (lmax == 0.0) return std::vector<double>(n, 0.0);
    const double lmin = lam.back();
    // self-certification: the squared ratio must stay clear of eps, or the
    // Gram route loses the small singular values to rounding
    if (lmin > 0.0 && lmin >= 1e-12 * lmax) {
      std::vector<double> sv(n);
      for (std::size_t i = 0; i < n; ++i) sv[i] = std::sqrt(std::max(lam[i], 0.0));
      return sv;
    }
  }

  DenseMatrix r = (m > n) ? qr_r_only(a) : a;
  std::vector<double> d, e;
  bidiagonalize(std::move(r), d, e);
  return gk_singular_values(d, e);
}

std::optional<double> condition_number(const DenseMatrix& a) {
  if (a.rows() < a.cols())
    throw std::invalid_argument("condition_number: matrix must be tall");
  const std::vector<double> sv = singular_values(a);
  if (sv.empty()) return std::nullopt;
  const double smax = sv.front();
  const double smin = sv.back();
  const double cutoff =
      static_cast<double>(std::max(a.rows(), a.cols())) * ulp(smax);
  if (smin <= cutoff) return std::nullopt;
  return std::max(smax / smin, 1.0);
}

std::size_t numerical_rank(const DenseMatrix& a, double tol_override) {
  const std::vector<double> sv = singular_values(a);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cutoff =
      tol_override > 0.0
          ? tol_override
          : static_cast<double>(std::max(a.rows(), a.cols())) * ulp(sv.front());
  std::size_t rank = 0;
  for (double s : sv)
    if (s > cutoff) ++rank;
  return rank;
}

}  // namespace rowsample
