#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rowsample/bounds.hpp"
#include "rowsample/generators.hpp"
#include "rowsample/orthonormal.hpp"

using namespace rowsample;

TEST_CASE("spike profile values") {
  const LeverageProfile p = leverage_one_spike(4, 2, 0.7);
  CHECK(p.scores()[0] == 0.7);
  for (int j = 1; j < 4; ++j)
    CHECK(p.scores()[j] == doctest::Approx(13.0 / 30.0).epsilon(1e-15));
  CHECK(p.n_implied() == 2);

  const LeverageProfile flat = leverage_one_spike(10, 2, 0.2);
  for (double s : flat.scores()) CHECK(s == doctest::Approx(0.2));

  CHECK_THROWS_AS(leverage_one_spike(4, 2, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(leverage_one_spike(4, 2, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(leverage_one_spike(2, 4, 0.9), std::invalid_argument);
}

TEST_CASE("many-zeros profile values") {
  const LeverageProfile p = leverage_many_zeros(4, 2, 0.8);
  CHECK(p.scores()[0] == 0.8);
  CHECK(p.scores()[1] == 0.8);
  CHECK(p.scores()[2] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(p.scores()[3] == 0.0);

  const LeverageProfile ones = leverage_many_zeros(5, 2, 1.0);
  CHECK(ones.scores()[0] == 1.0);
  CHECK(ones.scores()[1] == 1.0);
  CHECK(ones.scores()[2] == 0.0);

  CHECK_THROWS_AS(leverage_many_zeros(4, 2, 0.4), std::invalid_argument);
}

TEST_CASE("givens construction: square and single-column cases") {
  const OrthonormalBasis sq =
      generate_with_leverage(LeverageProfile({1.0, 1.0}), 2, std::nullopt);
  CHECK(frobenius_distance(sq.matrix(), DenseMatrix::identity(2)) == 0.0);

  GivensStats stats;
  const OrthonormalBasis col = generate_with_leverage(
      LeverageProfile({0.2, 0.3, 0.5}), 1, std::nullopt, &stats);
  CHECK(col.matrix()(0, 0) * col.matrix()(0, 0) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK(col.matrix()(1, 0) * col.matrix()(1, 0) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK(col.matrix()(2, 0) * col.matrix()(2, 0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stats.rotations <= 2);
  CHECK(stats.max_row_error <= 1e-10);
}

TEST_CASE("givens construction: desk-scale spike profile") {
  const std::size_t m = 10000, n = 5;
  const double mu = 1.5 * static_cast<double>(n) / static_cast<double>(m);
  GivensStats stats;
  const OrthonormalBasis q = generate_with_leverage(
      leverage_one_spike(m, n, mu), n, std::nullopt, &stats);
  CHECK(coherence(q) == doctest::Approx(mu).epsilon(1e-10));
  CHECK(stats.rotations <= m - 1);
  CHECK(q.ortho_defect() <= 1e-10 * std::sqrt(static_cast<double>(n)));

  double sum = 0.0;
  for (double s : q.scores()) sum += s;
  CHECK(sum == doctest::Approx(static_cast<double>(n)).epsilon(1e-10));
}

TEST_CASE("givens construction honors the caller's row order") {
  // deliberately unsorted targets
  const std::vector<double> targets = {0.9, 0.1, 0.35, 0.4, 0.25};
  const OrthonormalBasis q =
      generate_with_leverage(LeverageProfile(targets), 2, std::nullopt);
  for (std::size_t j = 0; j < targets.size(); ++j)
    CHECK(q.scores()[j] == doctest::Approx(targets[j]).epsilon(1e-10));
}

TEST_CASE("optional basis mix keeps scores and changes entries") {
  RngStream mix(51, 3);
  const std::vector<double> targets = {0.6, 0.55, 0.45, 0.25, 0.1, 0.05};
  const OrthonormalBasis plain =
      generate_with_leverage(LeverageProfile(targets), 2, std::nullopt);
  const OrthonormalBasis mixed =
      generate_with_leverage(LeverageProfile(targets), 2, mix);
  for (std::size_t j = 0; j < targets.size(); ++j)
    CHECK(mixed.scores()[j] == doctest::Approx(targets[j]).epsilon(1e-10));
  CHECK(frobenius_distance(plain.matrix(), mixed.matrix()) > 1e-3);
  CHECK(mixed.ortho_defect() <= 1e-12);
}

TEST_CASE("round trip over random feasible profiles") {
  RngStream rng(52, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.next_below(6);
    const std::size_t m = n + rng.next_below(120);
    const std::vector<double> targets = oracles::random_profile(m, n, rng);
    GivensStats stats;
    const OrthonormalBasis q = generate_with_leverage(
        LeverageProfile(targets), n, std::nullopt, &stats);
    CHECK(stats.rotations <= m - 1);
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      worst = std::max(worst, std::fabs(q.scores()[j] - targets[j]));
    CHECK(worst <= 1e-10);
    CHECK(q.ortho_defect() <= 1e-10 * std::sqrt(static_cast<double>(n)));

    // the generated matrix obeys its own tau bound
    CHECK(qtlq_norm(q) <=
          tau_bound(LeverageProfile(targets)) * (1.0 + 1e-10) + 1e-10);
  }
}

TEST_CASE("stacked diagonal family") {
  const OrthonormalBasis q = stacked_diagonal(10, 5, 0.5);
  CHECK(q.ortho_defect() <= 1e-15);
  for (double s : q.scores()) CHECK(s == doctest::Approx(0.5).epsilon(1e-14));

  const OrthonormalBasis tall = stacked_diagonal(20, 4, 0.9);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(tall.scores()[j] == doctest::Approx(0.9).epsilon(1e-14));
  for (std::size_t j = 4; j < 20; ++j)
    CHECK(tall.scores()[j] == doctest::Approx(0.025).epsilon(1e-12));

  const OrthonormalBasis square = stacked_diagonal(3, 3, 1.0);
  CHECK(frobenius_distance(square.matrix(), DenseMatrix::identity(3)) == 0.0);

  CHECK_THROWS_AS(stacked_diagonal(3, 3, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(stacked_diagonal(10, 4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(stacked_diagonal(10, 5, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(stacked_diagonal(10, 5, 1.1), std::invalid_argument);
}

TEST_CASE("hadamard-structured family") {
  const OrthonormalBasis two = hadamard_structured(2, 1, 0.7);
  CHECK(two.scores()[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(two.scores()[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(coherence(two) == doctest::Approx(0.7).epsilon(1e-12));

  const OrthonormalBasis q = hadamard_structured(16, 4, 0.5);
  CHECK(q.ortho_defect() <= 1e-12);
  CHECK(coherence(q) == doctest::Approx(0.5).epsilon(1e-12));
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(q.scores()[j] == doctest::Approx(0.5).epsilon(1e-12));
  // remaining rows share the complementary mass
  for (std::size_t j = 4; j < 16; ++j)
    CHECK(q.scores()[j] == doctest::Approx(4.0 * 0.5 / 12.0).epsilon(1e-12));

  // boundary coherence: alpha = 0, scores split into two flat groups
  const double corner = 3.0 / 15.0;
  const OrthonormalBasis flat = hadamard_structured(16, 4, corner);
  CHECK(coherence(flat) == doctest::Approx(4.0 / 15.0).epsilon(1e-12));

  CHECK_THROWS_AS(hadamard_structured(12, 4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(hadamard_structured(16, 16, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(hadamard_structured(16, 4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(hadamard_structured(16, 4, 1.2), std::invalid_argument);
}
