#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rowsample/dense_matrix.hpp"
#include "rowsample/lsqr.hpp"
#include "rowsample/orthonormal.hpp"
#include "rowsample/precondition.hpp"
#include "rowsample/qr.hpp"
#include "rowsample/rng.hpp"
#include "rowsample/sampling.hpp"
#include "rowsample/svd.hpp"

using namespace rowsample;

namespace {

DenseMatrix gaussian_matrix(std::size_t m, std::size_t n, RngStream& rng) {
  DenseMatrix g(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.next_gaussian();
  return g;
}

// rows of a R^-1 via R^T x = a_i
DenseMatrix right_preconditioned(const DenseMatrix& a, const DenseMatrix& r) {
  DenseMatrix out(a.rows(), a.cols());
  std::vector<double> row(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) row[j] = a(i, j);
    const std::vector<double> x = solve_upper_transpose(r, row);
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = x[j];
  }
  return out;
}

DenseMatrix synth_geometric(std::size_t m, std::size_t n, double kappa,
                            RngStream& rng) {
  const DenseMatrix u = thin_qr(gaussian_matrix(m, n, rng)).q.matrix();
  const DenseMatrix v = thin_qr(gaussian_matrix(n, n, rng)).q.matrix();
  std::vector<double> sigma(n);
  for (std::size_t k = 0; k < n; ++k)
    sigma[k] = std::pow(kappa, -static_cast<double>(k) /
                                   std::max<double>(1.0, n - 1.0));
  DenseMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += u(i, k) * sigma[k] * v(j, k);
      a(i, j) = acc;
    }
  return a;
}

}  // namespace

TEST_CASE("sign-hadamard mixing basics") {
  // one row: the transform is just the sign
  DenseMatrix one(1, 1, {2.0});
  CHECK(apply_sign_hadamard(one, {-1.0})(0, 0) == -2.0);

  // a coordinate vector spreads evenly
  DenseMatrix e1(8, 1);
  e1(0, 0) = 1.0;
  const DenseMatrix spread = apply_sign_hadamard(e1, std::vector<double>(8, 1.0));
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(spread(i, 0) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-14));

  // the transform is orthogonal: norms are preserved and F^T F = I
  RngStream rng(60, 0);
  const DenseMatrix a = gaussian_matrix(16, 3, rng);
  const DenseMatrix mixed = random_sign_hadamard(a, rng);
  CHECK(frobenius_norm(mixed) == doctest::Approx(frobenius_norm(a)).epsilon(1e-12));

  const DenseMatrix f =
      apply_sign_hadamard(DenseMatrix::identity(8), random_signs(8, rng));
  CHECK(frobenius_distance(gram(f), DenseMatrix::identity(8)) <= 1e-12);

  DenseMatrix bad(3, 1, {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(apply_sign_hadamard(bad, std::vector<double>(3, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_sign_hadamard(e1, std::vector<double>(4, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("zero padding keeps the least-squares solution") {
  RngStream rng(61, 0);
  const DenseMatrix a = gaussian_matrix(5, 2, rng);
  const DenseMatrix padded = pad_rows_to_pow2(a);
  REQUIRE(padded.rows() == 8);
  REQUIRE(padded.cols() == 2);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(padded(i, j) == a(i, j));
  for (std::size_t i = 5; i < 8; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(padded(i, j) == 0.0);

  const DenseMatrix already = gaussian_matrix(8, 2, rng);
  CHECK(frobenius_distance(pad_rows_to_pow2(already), already) == 0.0);

  std::vector<double> b(5);
  for (double& x : b) x = rng.next_gaussian();
  const std::vector<double> bp = pad_vector_to_pow2(b);
  REQUIRE(bp.size() == 8);
  CHECK(bp[7] == 0.0);

  const std::vector<double> x0 = oracles::mgs_lstsq(a, b);
  const std::vector<double> x1 = oracles::mgs_lstsq(padded, bp);
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(x0[j] == doctest::Approx(x1[j]).epsilon(1e-10));
}

TEST_CASE("full sampling gives a perfect preconditioner") {
  RngStream rng(62, 0);
  const DenseMatrix a = gaussian_matrix(16, 3, rng);
  const DenseMatrix r =
      build_preconditioner(a, 16, SampleStrategy::without_replacement, rng);
  const double kappa = oracles::condition_oracle(right_preconditioned(a, r));
  CHECK(kappa == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sampled preconditioner keeps the condition number small") {
  RngStream setup(63, 0);
  const DenseMatrix a = gaussian_matrix(256, 4, setup);
  int good = 0;
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    RngStream rng(63, trial + 1);
    try {
      const DenseMatrix r =
          build_preconditioner(a, 64, SampleStrategy::without_replacement, rng);
      if (oracles::condition_oracle(right_preconditioned(a, r)) <= 10.0) ++good;
    } catch (const RankDeficientSample&) {
    }
  }
  CHECK(good >= 29);
}

TEST_CASE("mixing flattens a spiked column space") {
  RngStream rng(64, 0);
  DenseMatrix a(64, 2);
  a(0, 0) = 1.0;  // e1 lives in the column space
  for (std::size_t i = 0; i < 64; ++i) a(i, 1) = 1000.0 * rng.next_gaussian();

  const double mu_plain = coherence(thin_qr(a).q);
  CHECK(mu_plain == doctest::Approx(1.0).epsilon(1e-9));

  const DenseMatrix mixed = random_sign_hadamard(a, rng);
  const double mu_mixed = coherence(thin_qr(mixed).q);
  CHECK(mu_mixed < 0.5);
  CHECK(mu_mixed < mu_plain);

  const DenseMatrix r =
      build_preconditioner(a, 16, SampleStrategy::without_replacement, rng);
  CHECK(oracles::condition_oracle(right_preconditioned(a, r)) <= 10.0);
}

TEST_CASE("bernoulli draws can lose rank and the retry policy recovers") {
  RngStream setup(65, 0);
  const DenseMatrix a = gaussian_matrix(8, 2, setup);

  // some stream must produce fewer than two rows (probability ~0.37 each)
  bool saw_throw = false;
  for (std::uint64_t id = 0; id < 500 && !saw_throw; ++id) {
    RngStream rng(65, id + 1);
    try {
      build_preconditioner(a, 2, SampleStrategy::bernoulli, rng);
    } catch (const RankDeficientSample&) {
      saw_throw = true;
    }
  }
  CHECK(saw_throw);

  // a stream whose first attempt fails but a later one succeeds
  bool found_retry = false;
  for (std::uint64_t id = 0; id < 500 && !found_retry; ++id) {
    RngStream probe(66, id);
    bool fails[3] = {false, false, false};
    for (int k = 0; k < 3; ++k) {
      try {
        build_preconditioner(a, 2, SampleStrategy::bernoulli, probe);
      } catch (const RankDeficientSample&) {
        fails[k] = true;
      }
    }
    if (fails[0] && !(fails[1] && fails[2])) {
      RngStream rng(66, id);
      const PreconditionerResult res = build_preconditioner_with_retry(
          a, 2, SampleStrategy::bernoulli, rng, 3);
      CHECK(res.attempts >= 2);
      CHECK(res.attempts <= 3);
      CHECK(res.r.rows() == 2);
      found_retry = true;
    }
  }
  CHECK(found_retry);

  // a stream that fails three times in a row exhausts the budget
  bool found_exhaust = false;
  for (std::uint64_t id = 0; id < 2000 && !found_exhaust; ++id) {
    RngStream probe(67, id);
    int failures = 0;
    for (int k = 0; k < 3; ++k) {
      try {
        build_preconditioner(a, 2, SampleStrategy::bernoulli, probe);
      } catch (const RankDeficientSample&) {
        ++failures;
      }
    }
    if (failures == 3) {
      RngStream rng(67, id);
      CHECK_THROWS_AS(build_preconditioner_with_retry(
                          a, 2, SampleStrategy::bernoulli, rng, 3),
                      RankDeficientSample);
      found_exhaust = true;
    }
  }
  CHECK(found_exhaust);

  RngStream rng(68, 0);
  CHECK_THROWS_AS(build_preconditioner_with_retry(
                      a, 2, SampleStrategy::bernoulli, rng, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_preconditioner(a, 1, SampleStrategy::bernoulli, rng),
                  std::invalid_argument);
}

TEST_CASE("two kappa paths agree") {
  RngStream setup(70, 0);

  SUBCASE("full sampling makes both paths trivial") {
    const DenseMatrix a = gaussian_matrix(16, 3, setup);
    RngStream sel_rng(70, 1);
    const SampleSelection sel =
        draw_selection(SampleStrategy::without_replacement, 16, 16, sel_rng);
    RngStream rng(70, 2);
    const TwoPathKappa tk = lemma21_check(a, sel, rng);
    CHECK(tk.kappa_preconditioned == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(tk.kappa_sampled_basis == doctest::Approx(1.0).epsilon(1e-8));
  }

  SUBCASE("selection must target the padded row count") {
    const DenseMatrix a = gaussian_matrix(12, 3, setup);
    RngStream sel_rng(70, 3);
    const SampleSelection sel =
        draw_selection(SampleStrategy::without_replacement, 12, 4, sel_rng);
    RngStream rng(70, 4);
    CHECK_THROWS_AS(lemma21_check(a, sel, rng), std::invalid_argument);
  }

  SUBCASE("the check replays one sign draw from its stream") {
    DenseMatrix a(8, 3);
    for (std::size_t j = 0; j < 3; ++j) a(j, j) = 1.0;
    RngStream sel_rng(70, 5);
    const SampleSelection sel =
        draw_selection(SampleStrategy::without_replacement, 8, 4, sel_rng);

    RngStream rng(70, 6);
    const TwoPathKappa tk = lemma21_check(a, sel, rng);

    RngStream clone(70, 6);
    const std::vector<double> signs = random_signs(8, clone);
    const DenseMatrix mixed = apply_sign_hadamard(a, signs);
    const DenseMatrix r = qr_r_only(apply_selection(sel, mixed));
    const auto k1 = condition_number(right_preconditioned(a, r));
    const auto k2 =
        condition_number(apply_selection(sel, thin_qr(mixed).q.matrix()));
    REQUIRE(k1.has_value());
    REQUIRE(k2.has_value());
    CHECK(tk.kappa_preconditioned == doctest::Approx(*k1).epsilon(1e-13));
    CHECK(tk.kappa_sampled_basis == doctest::Approx(*k2).epsilon(1e-13));
    CHECK(tk.kappa_preconditioned ==
          doctest::Approx(tk.kappa_sampled_basis).epsilon(1e-10));
  }

  SUBCASE("agreement over random instances") {
    int ok = 0, skipped = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      RngStream gen(71, derive_stream_id(1, trial));
      const DenseMatrix a = gaussian_matrix(128, 3, gen);
      const SampleSelection sel = draw_selection(
          SampleStrategy::without_replacement, 128, 32, gen);
      try {
        const TwoPathKappa tk = lemma21_check(a, sel, gen);
        const double gap =
            std::fabs(tk.kappa_preconditioned - tk.kappa_sampled_basis) /
            tk.kappa_sampled_basis;
        if (gap <= 1e-8) ++ok;
      } catch (const RankDeficientSample&) {
        ++skipped;
      }
    }
    CHECK(skipped <= 5);
    CHECK(ok >= 95);
  }
}

TEST_CASE("lsqr on an orthonormal system converges immediately") {
  RngStream rng(72, 0);
  const DenseMatrix a = oracles::gaussian_basis(32, 4, rng);
  std::vector<double> x_true = {1.0, -2.0, 0.5, 3.0};
  const std::vector<double> b = multiply_vec(a, x_true);
  const LsqrResult res = lsqr_solve(a, b);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(res.solution[j] == doctest::Approx(x_true[j]).epsilon(1e-10));
}

TEST_CASE("lsqr breakdown cases converge with the zero solution") {
  DenseMatrix a(4, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;

  const LsqrResult zero_rhs = lsqr_solve(a, std::vector<double>(4, 0.0));
  CHECK(zero_rhs.converged);
  CHECK(zero_rhs.iterations == 0);
  CHECK(zero_rhs.solution == std::vector<double>(2, 0.0));

  // b orthogonal to the range of a
  std::vector<double> b = {0.0, 0.0, 1.0, -1.0};
  const LsqrResult perp = lsqr_solve(a, b);
  CHECK(perp.converged);
  CHECK(perp.iterations == 0);
  CHECK(perp.solution == std::vector<double>(2, 0.0));

  CHECK_THROWS_AS(lsqr_solve(a, std::vector<double>(3, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("preconditioning collapses the lsqr iteration count") {
  RngStream rng(73, 0);
  const std::size_t m = 512, n = 6;
  const DenseMatrix a = synth_geometric(m, n, 1e4, rng);

  std::vector<double> ones(n, 1.0);
  std::vector<double> b = multiply_vec(a, ones);
  double rms = 0.0;
  for (double v : b) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(m));
  for (double& v : b) v += 0.01 * rms * rng.next_gaussian();

  const DenseMatrix r =
      build_preconditioner(a, 64, SampleStrategy::without_replacement, rng);

  const LsqrResult pre = lsqr_solve(a, b, &r, 1e-10, 2000);
  const LsqrResult plain = lsqr_solve(a, b, nullptr, 1e-10, 2000);
  CHECK(pre.converged);
  CHECK(pre.iterations <= 25);
  CHECK(plain.iterations > pre.iterations);

  CHECK(pre.normal_residuals.size() == pre.iterations);
  CHECK(pre.normal_residuals.back() ==
        doctest::Approx(pre.final_normal_residual));
  CHECK(pre.final_normal_residual <= 1e-10);

  const std::vector<double> x_ref = oracles::mgs_lstsq(a, b);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    num += (pre.solution[j] - x_ref[j]) * (pre.solution[j] - x_ref[j]);
    den += x_ref[j] * x_ref[j];
  }
  CHECK(std::sqrt(num / den) <= 1e-8);
}
