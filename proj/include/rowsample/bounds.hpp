#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rowsample/orthonormal.hpp"

namespace rowsample {

enum class TheoremTag { chernoff_coherence, bernstein_leverage };

// One evaluated failure bound.  kappa_bound = sqrt((1+eps)/(1-eps)) when
// eps < 1; informative means the bound says something nontrivial (delta < 1,
// eps in (0,1), and any sample count fits the matrix).
struct BoundResult {
  TheoremTag theorem;
  double epsilon;
  double delta;
  double kappa_bound;
  std::optional<std::size_t> c_min;
  bool informative;
};

// f(x) = e^x (1+x)^-(1+x); defined for x >= -1 (limit 1/e at -1)
double chernoff_f(double x);

// log f, the form every bound evaluation actually uses
double chernoff_log_f(double x);

double kappa_bound_from_epsilon(double eps);
double epsilon_from_kappa(double kappa);

// failure probability n (f(-eps)^r + f(eps)^r), r = c/(m mu)
double chernoff_delta(std::size_t c, std::size_t m, double mu, std::size_t n,
                      double eps);

// the eps in (0,1) with chernoff_delta == delta, when a root exists
std::optional<double> chernoff_epsilon(std::size_t c, std::size_t m, double mu,
                                       std::size_t n, double delta);

// ceil(3 m mu ln(2n/delta) / eps^2)
std::size_t chernoff_min_samples(std::size_t m, double mu, std::size_t n,
                                 double delta, double eps);
double chernoff_min_samples_raw(std::size_t m, double mu, std::size_t n,
                                double delta, double eps);

// ceil(3.2 m mu (ln(2n) + 4.7)): the fixed eps = 99/101, delta = 0.01 form
std::size_t chernoff_min_samples_99(std::size_t m, double mu, std::size_t n);

// smallest c in [1, c_cap] whose failure bound dips below delta for some
// eps in (0,1); empty when even c_cap gives none
std::optional<std::size_t> chernoff_onset(std::size_t m, double mu,
                                          std::size_t n, double delta,
                                          std::size_t c_cap);

// sorted-prefix proxy for the scaled-basis spectral norm: with t = floor(1/mu)
// (capped at the row count), mu * sum of the t largest scores plus
// (1 - t mu) times the next one; lies in [mu^2, mu]
double tau_bound(const LeverageProfile& profile);

// failure probability 2n exp(-(3/2) c eps^2 / (m (3 tau + eps mu)))
double bernstein_delta(std::size_t c, std::size_t m, std::size_t n, double mu,
                       double tau, double eps);

// closed-form positive root of the delta equation in eps
double bernstein_epsilon(std::size_t c, std::size_t m, std::size_t n,
                         double mu, double tau, double delta);

// ceil((2/3) m (3 tau + eps mu) ln(2n/delta) / eps^2)
std::size_t bernstein_min_samples(std::size_t m, std::size_t n, double mu,
                                  double tau, double delta, double eps);
double bernstein_min_samples_raw(std::size_t m, std::size_t n, double mu,
                                 double tau, double delta, double eps);

// ceil(m (2.1 tau + 0.7 mu) (ln(2n) + 4.7))
std::size_t bernstein_min_samples_99(std::size_t m, std::size_t n, double mu,
                                     double tau);

struct BoundComparison {
  double bernstein_raw;
  double chernoff_raw;
};

// pre-ceiling sample counts of both bounds at the same target; the
// leverage-based count never exceeds the coherence-based one
BoundComparison compare_bounds(std::size_t m, std::size_t n, double mu,
                               double tau, double delta, double eps);

// Spectral-norm bound for diag(d) * Z from Z's summary numbers alone:
// t = floor(sigma_min_z^2 / mu_z) rows at the top of d, the remainder spills
// onto the next (or first) entry depending on which case applies.  d entries
// are the diagonal magnitudes; norm_z = ||Z||_2, mu_z = max squared row norm.
// Returns a bound on ||diag(d) Z||_2^2.
double scaled_norm_bound(const std::vector<double>& d, double norm_z,
                         double sigma_min_z, double mu_z);

BoundResult chernoff_result(std::size_t m, double mu, std::size_t n,
                            double delta, double eps);
BoundResult bernstein_result(std::size_t m, std::size_t n, double mu,
                             double tau, double delta, double eps);

}  // namespace rowsample
