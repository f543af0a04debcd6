#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rowsample/dense_matrix.hpp"
#include "rowsample/matrix_io.hpp"
#include "rowsample/orthonormal.hpp"
#include "rowsample/qr.hpp"
#include "rowsample/rng.hpp"
#include "rowsample/svd.hpp"

using namespace rowsample;

namespace {

DenseMatrix random_matrix(std::size_t m, std::size_t n, RngStream& rng) {
  DenseMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.next_gaussian();
  return a;
}

}  // namespace

TEST_CASE("dense matrix construction and validation") {
  DenseMatrix z(2, 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(z(i, j) == 0.0);

  DenseMatrix a(2, 2, {1.0, 2.0, 3.0, 4.0});
  CHECK(a(1, 0) == 3.0);
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(DenseMatrix(1, 2, {1.0, std::nan("")}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DenseMatrix(1, 0), std::invalid_argument);

  const DenseMatrix id = DenseMatrix::identity(3);
  CHECK(id(1, 1) == 1.0);
  CHECK(id(0, 2) == 0.0);
  CHECK(orthonormality_defect(id) == 0.0);
}

TEST_CASE("matrix products against hand values") {
  const DenseMatrix a(2, 3, {1, 2, 3, 4, 5, 6});
  const DenseMatrix b(3, 2, {7, 8, 9, 10, 11, 12});
  const DenseMatrix ab = multiply(a, b);
  CHECK(ab.rows() == 2);
  CHECK(ab(0, 0) == 58.0);
  CHECK(ab(0, 1) == 64.0);
  CHECK(ab(1, 0) == 139.0);
  CHECK(ab(1, 1) == 154.0);

  const DenseMatrix at = transpose(a);
  CHECK(at.rows() == 3);
  CHECK(at(2, 1) == 6.0);

  const DenseMatrix g = gram(a);
  const DenseMatrix g2 = multiply(transpose(a), a);
  CHECK(frobenius_distance(g, g2) < 1e-13);

  const std::vector<double> x = {1.0, -1.0, 2.0};
  const std::vector<double> ax = multiply_vec(a, x);
  CHECK(ax[0] == doctest::Approx(5.0));
  CHECK(ax[1] == doctest::Approx(11.0));
  const std::vector<double> aty = multiply_transpose_vec(a, {1.0, 1.0});
  CHECK(aty[2] == doctest::Approx(9.0));

  CHECK(frobenius_norm(DenseMatrix(1, 2, {3.0, 4.0})) == doctest::Approx(5.0));
  CHECK(max_abs(a) == 6.0);
  const std::vector<double> rn = row_norms_squared(a);
  CHECK(rn[0] == doctest::Approx(14.0));
  CHECK(rn[1] == doctest::Approx(77.0));
}

TEST_CASE("matrix text round trip and input validation") {
  RngStream rng(11, 1);
  const DenseMatrix a = random_matrix(7, 3, rng);
  std::stringstream ss;
  write_matrix(ss, a);
  const DenseMatrix back = read_matrix(ss);
  REQUIRE(back.rows() == 7);
  REQUIRE(back.cols() == 3);
  // 17 significant digits reproduce binary64 exactly
  CHECK(frobenius_distance(a, back) == 0.0);

  auto reject = [](const std::string& text) {
    std::stringstream in(text);
    CHECK_THROWS_AS(read_matrix(in), std::runtime_error);
  };
  reject("");
  reject("2\n1 2\n");
  reject("2 2\n1 2\n3\n");
  reject("1 2\n1 nan\n");
  reject("-1 2\n");
  reject("1 1\nhello\n");
}

TEST_CASE("format_double survives a string round trip") {
  for (double v : {0.0, 1.0 / 3.0, -2.5e-17, 1e300, 0.1}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("householder qr reproduces the input") {
  RngStream rng(12, 1);
  const DenseMatrix a = random_matrix(40, 8, rng);
  const ThinQrResult qr = thin_qr(a);
  CHECK(qr.q.rows() == 40);
  CHECK(qr.q.cols() == 8);
  CHECK(qr.r.rows() == 8);
  CHECK(qr.q.ortho_defect() < 1e-13);
  for (std::size_t i = 1; i < 8; ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(qr.r(i, j) == 0.0);
  const DenseMatrix recon = multiply(qr.q.matrix(), qr.r);
  CHECK(frobenius_distance(recon, a) < 1e-12 * frobenius_norm(a));

  // r-only path carries the same singular values as a
  const DenseMatrix r = qr_r_only(a);
  const std::vector<double> sa = oracles::jacobi_singular_values(a);
  const std::vector<double> sr = oracles::jacobi_singular_values(r);
  for (std::size_t k = 0; k < sa.size(); ++k)
    CHECK(sr[k] == doctest::Approx(sa[k]).epsilon(1e-10));
}

TEST_CASE("triangular solves") {
  const DenseMatrix r(3, 3, {2, 1, -1, 0, 3, 2, 0, 0, 4});
  const std::vector<double> x = {1.0, -2.0, 0.5};
  std::vector<double> rx(3, 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) rx[i] += r(i, j) * x[j];
  const std::vector<double> got = solve_upper(r, rx);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(got[i] == doctest::Approx(x[i]).epsilon(1e-14));

  std::vector<double> rtx(3, 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) rtx[j] += r(i, j) * x[i];
  const std::vector<double> got_t = solve_upper_transpose(r, rtx);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(got_t[i] == doctest::Approx(x[i]).epsilon(1e-14));

  const DenseMatrix singular(2, 2, {1, 1, 0, 0});
  CHECK_THROWS_AS(solve_upper(singular, {1.0, 1.0}), std::domain_error);
}

TEST_CASE("singular values: known matrices") {
  const DenseMatrix d(2, 2, {3, 0, 0, 4});
  const std::vector<double> s = singular_values(d);
  CHECK(s[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(3.0).epsilon(1e-14));

  // rank-one outer product
  const std::vector<double> u = {1, 2, 2};  // norm 3
  const std::vector<double> v = {3, 4};     // norm 5
  DenseMatrix outer(3, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) outer(i, j) = u[i] * v[j];
  const std::vector<double> so = singular_values(outer);
  CHECK(so[0] == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(so[1] < 1e-12);
}

TEST_CASE("singular values match the jacobi oracle") {
  RngStream rng(13, 1);
  const std::pair<std::size_t, std::size_t> shapes[] = {
      {20, 6}, {6, 20}, {40, 36}, {33, 33}};  // last two skip the gram path
  for (auto [m, n] : shapes) {
    const DenseMatrix a = random_matrix(m, n, rng);
    const std::vector<double> lib = singular_values(a);
    const std::vector<double> ref = oracles::jacobi_singular_values(a);
    REQUIRE(lib.size() == ref.size());
    for (std::size_t k = 0; k < lib.size(); ++k)
      CHECK(lib[k] == doctest::Approx(ref[k]).epsilon(1e-9));
  }
}

TEST_CASE("ill-conditioned input leaves the gram fast path") {
  RngStream rng(14, 1);
  const DenseMatrix q = oracles::gaussian_basis(20, 4, rng);
  DenseMatrix a(20, 4);
  const double scales[4] = {1.0, 1e-2, 1e-5, 1e-8};
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = q(i, j) * scales[j];
  const std::vector<double> lib = singular_values(a);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(lib[k] == doctest::Approx(scales[k]).epsilon(1e-6));

  const auto kappa = condition_number(a);
  REQUIRE(kappa.has_value());
  CHECK(*kappa == doctest::Approx(1e8).epsilon(1e-5));
}

TEST_CASE("condition number and numerical rank") {
  RngStream rng(15, 1);
  const DenseMatrix q = oracles::gaussian_basis(30, 5, rng);
  const auto k = condition_number(q);
  REQUIRE(k.has_value());
  CHECK(*k == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(*k >= 1.0);

  DenseMatrix dup(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    dup(i, 0) = static_cast<double>(i + 1);
    dup(i, 1) = 2.0 * static_cast<double>(i + 1);
  }
  CHECK_FALSE(condition_number(dup).has_value());
  CHECK(numerical_rank(dup) == 1);

  CHECK_THROWS_AS(condition_number(DenseMatrix(2, 3, {1, 0, 0, 0, 1, 0})),
                  std::invalid_argument);

  const DenseMatrix a = random_matrix(8, 3, rng);
  CHECK(numerical_rank(a) == 3);
  CHECK(numerical_rank(a, 2.0 * oracles::jacobi_singular_values(a)[0]) == 0);
  CHECK(ulp(1.0) > 0.0);
  CHECK(ulp(1.0) < 1e-15);
}

TEST_CASE("orthonormal basis validation and scores") {
  RngStream rng(16, 1);
  const DenseMatrix q = oracles::gaussian_basis(25, 4, rng);
  const OrthonormalBasis basis{q};
  double sum = 0.0;
  for (double s : basis.scores()) sum += s;
  CHECK(sum == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(coherence(basis) >= 4.0 / 25.0);
  CHECK(coherence(basis) <= 1.0 + 1e-12);

  CHECK_THROWS_AS(OrthonormalBasis{random_matrix(6, 3, rng)},
                  std::invalid_argument);
  CHECK_THROWS_AS(OrthonormalBasis{DenseMatrix(2, 3, {1, 0, 0, 0, 1, 0})},
                  std::invalid_argument);
}

TEST_CASE("leverage profile validation") {
  const LeverageProfile p({0.5, 0.75, 0.5, 0.25});
  CHECK(p.n_implied() == 2);
  CHECK(p.coherence() == 0.75);
  CHECK(p.row_count() == 4);
  const std::vector<double> sorted = p.sorted_descending();
  CHECK(sorted.front() == 0.75);
  CHECK(sorted.back() == 0.25);

  CHECK_THROWS_AS(LeverageProfile({-0.1, 1.0, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(LeverageProfile({1.2, 0.8}), std::invalid_argument);
  CHECK_THROWS_AS(LeverageProfile({0.4, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(LeverageProfile(std::vector<double>{}),
                  std::invalid_argument);
  CHECK_NOTHROW(LeverageProfile({0.7, 0.7, 0.6}));  // valid: sums to 2
}

TEST_CASE("scaled norm of a basis never exceeds its tau bound") {
  RngStream rng(17, 1);
  const DenseMatrix q = oracles::gaussian_basis(40, 3, rng);
  const OrthonormalBasis basis{q};
  const double norm = qtlq_norm(basis);
  CHECK(norm <= coherence(basis) + 1e-12);
  CHECK(norm >= 0.0);
}

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    all_equal = all_equal && (va == b.next_u64());
    any_diff = any_diff || (va != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff);

  RngStream u(1, 2);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next_unit();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(u.next_below(17) < 17);
  }

  RngStream g(3, 4);
  double mean = 0.0, var = 0.0;
  const int ng = 20000;
  for (int i = 0; i < ng; ++i) {
    const double x = g.next_gaussian();
    mean += x;
    var += x * x;
  }
  mean /= ng;
  var = var / ng - mean * mean;
  CHECK(std::fabs(mean) < 0.05);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));

  CHECK(derive_stream_id(1, 2, 3) != derive_stream_id(1, 2, 4));
  CHECK(derive_stream_id(1, 2) == derive_stream_id(1, 2, 0));
}
