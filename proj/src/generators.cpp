#include "rowsample/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rowsample/qr.hpp"

namespace rowsample {

namespace {

void check_mu_range(std::size_t m, std::size_t n, double mu) {
  if (m == 0 || n == 0 || n > m)
    throw std::invalid_argument("generator: need 1 <= n <= m");
  const double floor_mu = static_cast<double>(n) / static_cast<double>(m);
  if (mu < floor_mu * (1.0 - 1e-12))
    throw std::invalid_argument("generator: mu " + std::to_string(mu) +
                                " below the coherence floor n/m");
  if (mu > 1.0 + 1e-12)
    throw std::invalid_argument("generator: mu exceeds 1");
}

}  // namespace

LeverageProfile leverage_one_spike(std::size_t m, std::size_t n, double mu) {
  check_mu_range(m, n, mu);
  std::vector<double> scores(m, 0.0);
  scores[0] = mu;
  if (m > 1) {
    const double rest = (static_cast<double>(n) - mu) /
                        static_cast<double>(m - 1);
    for (std::size_t i = 1; i < m; ++i) scores[i] = rest;
  }
  return LeverageProfile(std::move(scores));
}

LeverageProfile leverage_many_zeros(std::size_t m, std::size_t n, double mu) {
  check_mu_range(m, n, mu);
  const double ms_real = std::ceil(static_cast<double>(n) / mu);
  const auto ms = static_cast<std::size_t>(ms_real);
  if (ms > m)
    throw std::invalid_argument(
        "leverage_many_zeros: ceil(n/mu) exceeds m, profile infeasible");
  std::vector<double> scores(m, 0.0);
  for (std::size_t i = 0; i + 1 < ms; ++i) scores[i] = mu;
  const double slack =
      std::max(0.0, static_cast<double>(n) -
                        static_cast<double>(ms - 1) * mu);
  scores[ms - 1] = slack;
  return LeverageProfile(std::move(scores));
}

namespace {

double dot_rows(const DenseMatrix& q, std::size_t i, std::size_t j) {
  const double* a = q.row_ptr(i);
  const double* b = q.row_ptr(j);
  double s = 0.0;
  for (std::size_t k = 0; k < q.cols(); ++k) s += a[k] * b[k];
  return s;
}

// rotate rows (i, j) so row i's squared norm becomes ell; ell must lie
// between the two current norms, which keeps the discriminant nonnegative up
// to rounding
void rotate_row_to(DenseMatrix& q, std::size_t i, std::size_t j, double ell) {
  const double a = dot_rows(q, i, i);
  const double b = dot_rows(q, j, j);
  const double g = dot_rows(q, i, j);

  double c, s;
  // (b - ell) t^2 + 2 g t + (a - ell) = 0 with t = tan(theta)
  const double disc = std::max(g * g - (b - ell) * (a - ell), 0.0);
  const double root = std::sqrt(disc);
  const double qq = -(g + std::copysign(root, g));

  double best_t = 0.0;
  bool have = false;
  if (qq != 0.0) {
    best_t = (a - ell) / qq;
    have = true;
  }
  if (b != ell) {
    const double t2 = qq / (b - ell);
    if (!have || std::abs(t2) < std::abs(best_t)) best_t = t2;
    have = true;
  }
  if (!have) {
    // degenerate: g = 0 and b = ell, so swapping the rows lands exactly
    c = 0.0;
    s = 1.0;
  } else {
    c = 1.0 / std::sqrt(1.0 + best_t * best_t);
    s = best_t * c;
  }

  double* ri = q.row_ptr(i);
  double* rj = q.row_ptr(j);
  for (std::size_t k = 0; k < q.cols(); ++k) {
    const double x = ri[k];
    const double y = rj[k];
    ri[k] = c * x + s * y;
    rj[k] = -s * x + c * y;
  }
}

}  // namespace

OrthonormalBasis generate_with_leverage(const LeverageProfile& profile,
                                        std::size_t n,
                                        std::optional<RngStream> mix,
                                        GivensStats* stats) {
  if (profile.n_implied() != n)
    throw std::invalid_argument(
        "generate_with_leverage: profile implies rank " +
        std::to_string(profile.n_implied()) + ", caller asked for " +
        std::to_string(n));
  const std::size_t m = profile.row_count();
  const std::vector<double>& raw = profile.scores();

  // Largest remaining target first.  Each step rotates the pair of live rows
  // whose norms bracket the target most tightly so one row lands exactly;
  // the remaining norms then still majorize the remaining targets, so a
  // bracketing pair exists at every step and at most m-1 rotations happen.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return raw[x] > raw[y]; });

  DenseMatrix q(m, n);
  std::vector<double> norm(m, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    q(k, k) = 1.0;
    norm[k] = 1.0;
  }

  const double kExactTol = 1e-12;
  std::vector<char> used(m, 0);
  std::vector<std::size_t> landing(m);  // caller row -> finished working row
  GivensStats local;

  for (std::size_t step = 0; step < m; ++step) {
    const std::size_t ci = order[step];
    const double t = raw[ci];

    // exact hits cost no rotation
    std::size_t best = m;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < m; ++w) {
      if (used[w]) continue;
      const double gap = std::abs(norm[w] - t);
      if (gap < best_gap) {
        best_gap = gap;
        best = w;
      }
    }
    if (best_gap <= kExactTol) {
      used[best] = 1;
      landing[ci] = best;
      continue;
    }

    // tightest bracketing pair: smallest live norm above t, largest below
    std::size_t hi = m, lo = m;
    for (std::size_t w = 0; w < m; ++w) {
      if (used[w]) continue;
      if (norm[w] >= t) {
        if (hi == m || norm[w] < norm[hi]) hi = w;
      } else {
        if (lo == m || norm[w] > norm[lo]) lo = w;
      }
    }
    if (hi == m || lo == m) {
      // all live norms on one side of t: rounding drift ate the bracket, so
      // land as close as the nearest row allows and let the exit check judge
      used[best] = 1;
      landing[ci] = best;
      continue;
    }

    rotate_row_to(q, hi, lo, t);
    ++local.rotations;
    norm[hi] = dot_rows(q, hi, hi);
    norm[lo] = dot_rows(q, lo, lo);
    used[hi] = 1;
    landing[ci] = hi;
  }

  DenseMatrix out(m, n);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < n; ++j) out(k, j) = q(landing[k], j);

  if (mix.has_value()) {
    // Haar rotation: QR of a Gaussian square matrix, sign-corrected
    RngStream rng = *mix;
    DenseMatrix gauss(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gauss(i, j) = rng.next_gaussian();
    ThinQrResult qr = thin_qr(gauss);
    DenseMatrix v = qr.q.matrix();
    for (std::size_t j = 0; j < n; ++j)
      if (qr.r(j, j) < 0.0)
        for (std::size_t i = 0; i < n; ++i) v(i, j) = -v(i, j);
    out = multiply(out, v);
  }

  OrthonormalBasis basis(std::move(out));

  double worst = 0.0;
  const std::vector<double>& got = basis.scores();
  for (std::size_t k = 0; k < m; ++k)
    worst = std::max(worst, std::abs(got[k] - raw[k]));
  local.max_row_error = worst;
  if (worst > 1e-10)
    throw std::logic_error(
        "generate_with_leverage: achieved scores off target by " +
        std::to_string(worst));
  if (stats) *stats = local;
  return basis;
}

OrthonormalBasis stacked_diagonal(std::size_t m, std::size_t n, double mu) {
  check_mu_range(m, n, mu);
  if (m == n) {
    if (std::abs(mu - 1.0) > 1e-12)
      throw std::invalid_argument(
          "stacked_diagonal: square case requires mu == 1");
    return OrthonormalBasis(DenseMatrix::identity(n));
  }
  if (m % n != 0)
    throw std::invalid_argument("stacked_diagonal: m must be a multiple of n");
  const std::size_t blocks = m / n;
  const double phi =
      std::sqrt((1.0 - mu) / static_cast<double>(blocks - 1));
  DenseMatrix q(m, n);
  const double top = std::sqrt(mu);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t j = 0; j < n; ++j)
      q(b * n + j, j) = (b == 0) ? top : phi;
  return OrthonormalBasis(std::move(q));
}

namespace {

bool is_pow2(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

OrthonormalBasis hadamard_structured(std::size_t m, std::size_t n, double mu) {
  if (!is_pow2(m) || !is_pow2(n) || n >= m)
    throw std::invalid_argument(
        "hadamard_structured: m and n must be powers of two with n < m");
  const double corner =
      static_cast<double>(n - 1) / static_cast<double>(m - 1);
  if (mu < corner - 1e-12 || mu > 1.0 + 1e-12)
    throw std::invalid_argument(
        "hadamard_structured: mu must lie in [(n-1)/(m-1), 1]");

  const double alpha2 = std::max(0.0, (mu - corner) / (1.0 - corner));
  const double alpha = std::sqrt(alpha2);
  const double beta = std::sqrt((1.0 - alpha2) / static_cast<double>(m - 1));

  // build the full blocks until they cover n columns, then stack truncated
  std::size_t size = 2;
  DenseMatrix d(2, 2, {alpha, -beta, beta, alpha});
  DenseMatrix b(2, 2, {-beta, beta, beta, beta});
  while (size < n) {
    const std::size_t s2 = size * 2;
    DenseMatrix dn(s2, s2), bn(s2, s2);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) {
        dn(i, j) = d(i, j);
        dn(i, j + size) = -b(i, j);
        dn(i + size, j) = b(i, j);
        dn(i + size, j + size) = d(i, j);
        bn(i, j) = -b(i, j);
        bn(i, j + size) = b(i, j);
        bn(i + size, j) = b(i, j);
        bn(i + size, j + size) = b(i, j);
      }
    d = std::move(dn);
    b = std::move(bn);
    size = s2;
  }

  DenseMatrix dc(size, n), bc(size, n);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dc(i, j) = d(i, j);
      bc(i, j) = b(i, j);
    }
  while (size < m) {
    const std::size_t s2 = size * 2;
    DenseMatrix dn(s2, n), bn(s2, n);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        dn(i, j) = dc(i, j);
        dn(i + size, j) = bc(i, j);
        bn(i, j) = -bc(i, j);
        bn(i + size, j) = bc(i, j);
      }
    dc = std::move(dn);
    bc = std::move(bn);
    size = s2;
  }

  OrthonormalBasis basis(std::move(dc));
  const double got = coherence(basis);
  const double tail =
      static_cast<double>(n) * (1.0 - mu) / static_cast<double>(m - n);
  const double expected = std::max(mu, tail);
  if (std::abs(got - expected) > 1e-12)
    throw std::logic_error("hadamard_structured: coherence came out as " +
                           std::to_string(got) + ", expected " +
                           std::to_string(expected));
  return basis;
}

}  // namespace rowsample
