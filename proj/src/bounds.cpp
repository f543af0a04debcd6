#include "rowsample/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rowsample {

namespace {

void check_mu(std::size_t m, std::size_t n, double mu) {
  if (m == 0 || n == 0 || n > m)
    throw std::invalid_argument("bounds: need 1 <= n <= m");
  const double floor_mu = static_cast<double>(n) / static_cast<double>(m);
  if (!(mu >= floor_mu * (1.0 - 1e-9)) || !(mu <= 1.0 + 1e-12))
    throw std::invalid_argument("bounds: coherence must lie in [n/m, 1], got " +
                                std::to_string(mu));
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("bounds: eps must lie in (0, 1)");
}

void check_delta(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("bounds: delta must lie in (0, 1)");
}

void check_tau(double mu, double tau) {
  if (!(tau >= mu * mu * (1.0 - 1e-9)) || !(tau <= mu * (1.0 + 1e-9)))
    throw std::invalid_argument("bounds: tau must lie in [mu^2, mu]");
}

}  // namespace

double chernoff_log_f(double x) {
  if (x < -1.0)
    throw std::domain_error("chernoff_f: argument below -1");
  if (x == -1.0) return -1.0;  // limit of x - (1+x) log(1+x)
  return x - (1.0 + x) * std::log1p(x);
}

double chernoff_f(double x) { return std::exp(chernoff_log_f(x)); }

double kappa_bound_from_epsilon(double eps) {
  check_eps(eps);
  return std::sqrt((1.0 + eps) / (1.0 - eps));
}

double epsilon_from_kappa(double kappa) {
  if (!(kappa > 1.0))
    throw std::invalid_argument("epsilon_from_kappa: kappa must exceed 1");
  const double k2 = kappa * kappa;
  return (k2 - 1.0) / (k2 + 1.0);
}

double chernoff_delta(std::size_t c, std::size_t m, double mu, std::size_t n,
                      double eps) {
  check_mu(m, n, mu);
  check_eps(eps);
  if (c == 0) throw std::invalid_argument("chernoff_delta: c must be positive");
  const double r = static_cast<double>(c) / (static_cast<double>(m) * mu);
  // each tail stays in log space until the final exp
  const double t_lower = std::exp(r * chernoff_log_f(-eps));
  const double t_upper = std::exp(r * chernoff_log_f(eps));
  return static_cast<double>(n) * (t_lower + t_upper);
}

std::optional<double> chernoff_epsilon(std::size_t c, std::size_t m, double mu,
                                       std::size_t n, double delta) {
  check_mu(m, n, mu);
  check_delta(delta);
  if (c == 0)
    throw std::invalid_argument("chernoff_epsilon: c must be positive");
  const double r = static_cast<double>(c) / (static_cast<double>(m) * mu);
  const double nn = static_cast<double>(n);

  // value at eps -> 1^-: f(-1) = e^-1, f(1) = e / 4
  const double at_one =
      nn * (std::exp(-r) + std::exp(r * (1.0 - 2.0 * std::log(2.0))));
  if (!(at_one < delta)) return std::nullopt;  // bound never dips below delta

  // delta(eps) decreases from 2n at eps = 0, so a unique crossing exists
  double lo = 0.0, hi = 1.0;
  double mid = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double val =
        nn * (std::exp(r * chernoff_log_f(-mid)) +
              std::exp(r * chernoff_log_f(mid)));
    // bisect to full precision in eps; an early exit on the delta residual
    // is too loose when the exponent rate c/(m mu) is large
    const double gap = delta - val;
    if (gap < 0.0)
      lo = mid;  // bound still above delta, push eps up
    else
      hi = mid;
  }
  return mid;
}

double chernoff_min_samples_raw(std::size_t m, double mu, std::size_t n,
                                double delta, double eps) {
  check_mu(m, n, mu);
  check_eps(eps);
  check_delta(delta);
  const double L = std::log(2.0 * static_cast<double>(n) / delta);
  return 3.0 * static_cast<double>(m) * mu * L / (eps * eps);
}

std::size_t chernoff_min_samples(std::size_t m, double mu, std::size_t n,
                                 double delta, double eps) {
  return static_cast<std::size_t>(
      std::ceil(chernoff_min_samples_raw(m, mu, n, delta, eps)));
}

std::size_t chernoff_min_samples_99(std::size_t m, double mu, std::size_t n) {
  check_mu(m, n, mu);
  const double v = 3.2 * static_cast<double>(m) * mu *
                   (std::log(2.0 * static_cast<double>(n)) + 4.7);
  return static_cast<std::size_t>(std::ceil(v));
}

std::optional<std::size_t> chernoff_onset(std::size_t m, double mu,
                                          std::size_t n, double delta,
                                          std::size_t c_cap) {
  check_mu(m, n, mu);
  check_delta(delta);
  if (c_cap == 0) throw std::invalid_argument("chernoff_onset: empty range");
  if (!chernoff_epsilon(c_cap, m, mu, n, delta).has_value())
    return std::nullopt;
  // root existence is monotone in c, so bisect on the predicate
  std::size_t lo = 1, hi = c_cap;  // invariant: no root at lo-1 side, root at hi
  if (chernoff_epsilon(1, m, mu, n, delta).has_value()) return std::size_t{1};
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (chernoff_epsilon(mid, m, mu, n, delta).has_value())
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double tau_bound(const LeverageProfile& profile) {
  const double mu = profile.coherence();
  if (mu <= 0.0)
    throw std::invalid_argument("tau_bound: coherence must be positive");
  const std::vector<double> sorted = profile.sorted_descending();
  const std::size_t m = sorted.size();
  std::size_t t = static_cast<std::size_t>(std::floor(1.0 / mu));
  if (t > m) t = m;
  double head = 0.0;
  for (std::size_t j = 0; j < t; ++j) head += sorted[j];
  // the remainder weight (1 - t mu) is nonnegative up to rounding
  const double leftover = std::max(0.0, 1.0 - static_cast<double>(t) * mu);
  const double next = (t < m) ? sorted[t] : 0.0;
  return mu * head + leftover * next;
}

double bernstein_delta(std::size_t c, std::size_t m, std::size_t n, double mu,
                       double tau, double eps) {
  check_mu(m, n, mu);
  check_tau(mu, tau);
  check_eps(eps);
  if (c == 0) throw std::invalid_argument("bernstein_delta: c must be positive");
  const double expo = -1.5 * static_cast<double>(c) * eps * eps /
                      (static_cast<double>(m) * (3.0 * tau + eps * mu));
  return 2.0 * static_cast<double>(n) * std::exp(expo);
}

double bernstein_epsilon(std::size_t c, std::size_t m, std::size_t n,
                         double mu, double tau, double delta) {
  check_mu(m, n, mu);
  check_tau(mu, tau);
  check_delta(delta);
  if (c == 0)
    throw std::invalid_argument("bernstein_epsilon: c must be positive");
  const double L = std::log(2.0 * static_cast<double>(n) / delta);
  const double md = static_cast<double>(m);
  const double cd = static_cast<double>(c);
  const double lin = L * md * mu;
  const double disc = lin * lin + 18.0 * cd * L * md * tau;
  return (lin + std::sqrt(disc)) / (3.0 * cd);
}

double bernstein_min_samples_raw(std::size_t m, std::size_t n, double mu,
                                 double tau, double delta, double eps) {
  check_mu(m, n, mu);
  check_tau(mu, tau);
  check_eps(eps);
  check_delta(delta);
  const double L = std::log(2.0 * static_cast<double>(n) / delta);
  return (2.0 / 3.0) * static_cast<double>(m) * (3.0 * tau + eps * mu) * L /
         (eps * eps);
}

std::size_t bernstein_min_samples(std::size_t m, std::size_t n, double mu,
                                  double tau, double delta, double eps) {
  return static_cast<std::size_t>(
      std::ceil(bernstein_min_samples_raw(m, n, mu, tau, delta, eps)));
}

std::size_t bernstein_min_samples_99(std::size_t m, std::size_t n, double mu,
                                     double tau) {
  check_mu(m, n, mu);
  check_tau(mu, tau);
  const double v = static_cast<double>(m) * (2.1 * tau + 0.7 * mu) *
                   (std::log(2.0 * static_cast<double>(n)) + 4.7);
  return static_cast<std::size_t>(std::ceil(v));
}

BoundComparison compare_bounds(std::size_t m, std::size_t n, double mu,
                               double tau, double delta, double eps) {
  const double b = bernstein_min_samples_raw(m, n, mu, tau, delta, eps);
  const double ch = chernoff_min_samples_raw(m, mu, n, delta, eps);
  if (b > ch * (1.0 + 1e-12))
    throw std::logic_error(
        "compare_bounds: leverage bound exceeded coherence bound");
  return {b, ch};
}

double scaled_norm_bound(const std::vector<double>& d, double norm_z,
                         double sigma_min_z, double mu_z) {
  if (d.empty()) throw std::invalid_argument("scaled_norm_bound: empty d");
  for (double v : d)
    if (!(v >= 0.0))
      throw std::invalid_argument("scaled_norm_bound: d entries must be >= 0");
  if (!(mu_z > 0.0))
    throw std::invalid_argument("scaled_norm_bound: mu_z must be positive");
  if (!(sigma_min_z > 0.0) || sigma_min_z > norm_z * (1.0 + 1e-12))
    throw std::invalid_argument(
        "scaled_norm_bound: need 0 < sigma_min_z <= norm_z");

  std::vector<double> sorted(d);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const std::size_t m = sorted.size();
  auto entry = [&](std::size_t j) {  // 1-based, zero beyond the list
    return (j >= 1 && j <= m) ? sorted[j - 1] : 0.0;
  };

  const double z2 = norm_z * norm_z;
  const std::size_t t =
      static_cast<std::size_t>(std::floor(sigma_min_z * sigma_min_z / mu_z));
  const double spill = z2 - static_cast<double>(t) * mu_z;

  double bound = 0.0;
  if (spill <= mu_z) {
    // top t entries carry mu_z each, the spill lands on entry t+1
    for (std::size_t j = 1; j <= std::min(t, m); ++j)
      bound += entry(j) * entry(j);
    bound = mu_z * bound + spill * entry(t + 1) * entry(t + 1);
  } else {
    // spill exceeds one row's budget: it pairs with the largest entry
    for (std::size_t j = 2; j <= std::min(t + 1, m); ++j)
      bound += entry(j) * entry(j);
    bound = mu_z * bound + spill * entry(1) * entry(1);
  }
  return bound;
}

BoundResult chernoff_result(std::size_t m, double mu, std::size_t n,
                            double delta, double eps) {
  const double raw = chernoff_min_samples_raw(m, mu, n, delta, eps);
  const auto c_min = static_cast<std::size_t>(std::ceil(raw));
  const double achieved =
      chernoff_delta(std::max<std::size_t>(c_min, 1), m, mu, n, eps);
  const bool informative = c_min <= m && delta < 1.0;
  return {TheoremTag::chernoff_coherence, eps,      achieved,
          kappa_bound_from_epsilon(eps),  c_min,    informative};
}

BoundResult bernstein_result(std::size_t m, std::size_t n, double mu,
                             double tau, double delta, double eps) {
  const double raw = bernstein_min_samples_raw(m, n, mu, tau, delta, eps);
  const auto c_min = static_cast<std::size_t>(std::ceil(raw));
  const double achieved =
      bernstein_delta(std::max<std::size_t>(c_min, 1), m, n, mu, tau, eps);
  const bool informative = c_min <= m && delta < 1.0;
  return {TheoremTag::bernstein_leverage, eps,      achieved,
          kappa_bound_from_epsilon(eps),  c_min,    informative};
}

}  // namespace rowsample
