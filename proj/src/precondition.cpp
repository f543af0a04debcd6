#include "rowsample/precondition.hpp"

#include <cmath>
#include <stdexcept>

#include "rowsample/qr.hpp"
#include "rowsample/svd.hpp"

namespace rowsample {

namespace {

bool is_pow2(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

void fwht_columns(DenseMatrix& a) {
  const std::size_t m = a.rows();
  if (!is_pow2(m))
    throw std::invalid_argument("fwht_columns: row count must be a power of two");
  const std::size_t n = a.cols();
  for (std::size_t len = 1; len < m; len <<= 1) {
    for (std::size_t i = 0; i < m; i += 2 * len) {
      for (std::size_t j = i; j < i + len; ++j) {
        double* hi = a.row_ptr(j);
        double* lo = a.row_ptr(j + len);
        for (std::size_t k = 0; k < n; ++k) {
          const double x = hi[k];
          const double y = lo[k];
          hi[k] = x + y;
          lo[k] = x - y;
        }
      }
    }
  }
}

std::vector<double> random_signs(std::size_t m, RngStream& rng) {
  std::vector<double> s(m);
  for (std::size_t i = 0; i < m; ++i) s[i] = rng.next_sign() ? -1.0 : 1.0;
  return s;
}

DenseMatrix apply_sign_hadamard(const DenseMatrix& a,
                                const std::vector<double>& signs) {
  if (signs.size() != a.rows())
    throw std::invalid_argument("apply_sign_hadamard: sign count mismatch");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double* row = out.row_ptr(i);
    for (std::size_t j = 0; j < out.cols(); ++j) row[j] *= signs[i];
  }
  fwht_columns(out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(out.rows()));
  for (double& v : out.data()) v *= scale;
  return out;
}

DenseMatrix random_sign_hadamard(const DenseMatrix& a, RngStream& rng) {
  return apply_sign_hadamard(a, random_signs(a.rows(), rng));
}

DenseMatrix pad_rows_to_pow2(const DenseMatrix& a) {
  std::size_t m = 1;
  while (m < a.rows()) m <<= 1;
  if (m == a.rows()) return a;
  DenseMatrix out(m, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

std::vector<double> pad_vector_to_pow2(const std::vector<double>& b) {
  std::size_t m = 1;
  while (m < b.size()) m <<= 1;
  std::vector<double> out(b);
  out.resize(m, 0.0);
  return out;
}

DenseMatrix build_preconditioner(const DenseMatrix& a, std::size_t c,
                                 SampleStrategy strategy, RngStream& rng) {
  const std::size_t n = a.cols();
  if (c < n)
    throw std::invalid_argument("build_preconditioner: need c >= cols");
  const DenseMatrix padded = pad_rows_to_pow2(a);
  const DenseMatrix mixed = random_sign_hadamard(padded, rng);
  const SampleSelection sel = draw_selection(strategy, mixed.rows(), c, rng);
  const DenseMatrix block = apply_selection(sel, mixed);
  if (block.rows() < n || numerical_rank(block) < n)
    throw RankDeficientSample(
        "build_preconditioner: sampled block lost rank (drew " +
        std::to_string(block.rows()) + " rows)");
  return qr_r_only(block);
}

PreconditionerResult build_preconditioner_with_retry(const DenseMatrix& a,
                                                     std::size_t c,
                                                     SampleStrategy strategy,
                                                     RngStream& rng,
                                                     std::size_t budget) {
  if (budget == 0)
    throw std::invalid_argument("build_preconditioner_with_retry: zero budget");
  for (std::size_t attempt = 1;; ++attempt) {
    try {
      return {build_preconditioner(a, c, strategy, rng), attempt};
    } catch (const RankDeficientSample&) {
      if (attempt == budget) throw;
    }
  }
}

TwoPathKappa lemma21_check(const DenseMatrix& a, const SampleSelection& sel,
                           RngStream& rng) {
  const std::size_t n = a.cols();
  const DenseMatrix padded = pad_rows_to_pow2(a);
  if (sel.source_rows != padded.rows())
    throw std::invalid_argument(
        "lemma21_check: selection drawn for a different (padded) row count");
  const DenseMatrix mixed = random_sign_hadamard(padded, rng);

  // path one: R factor of the sampled block, applied to a as a right
  // preconditioner
  const DenseMatrix block = apply_selection(sel, mixed);
  if (block.rows() < n || numerical_rank(block) < n)
    throw RankDeficientSample("lemma21_check: sampled block lost rank");
  const DenseMatrix r = qr_r_only(block);
  DenseMatrix precond(a.rows(), n);
  {
    std::vector<double> row(n);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < n; ++j) row[j] = a(i, j);
      // x^T R = a_i^T  <=>  R^T x = a_i
      const std::vector<double> x = solve_upper_transpose(r, row);
      for (std::size_t j = 0; j < n; ++j) precond(i, j) = x[j];
    }
  }
  const auto k1 = condition_number(precond);

  // path two: the same selection applied to the orthonormal basis of the
  // mixed matrix
  const ThinQrResult qr = thin_qr(mixed);
  const DenseMatrix sq = apply_selection(sel, qr.q.matrix());
  const auto k2 = condition_number(sq);

  if (!k1 || !k2)
    throw RankDeficientSample("lemma21_check: rank deficiency in a path");
  return {*k1, *k2};
}

}  // namespace rowsample
