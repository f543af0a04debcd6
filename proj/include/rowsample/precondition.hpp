#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rowsample/dense_matrix.hpp"
#include "rowsample/rng.hpp"
#include "rowsample/sampling.hpp"

namespace rowsample {

// sampled rows happened to be numerically rank deficient; drawing a fresh
// selection usually clears it
struct RankDeficientSample : std::runtime_error {
  explicit RankDeficientSample(const std::string& what)
      : std::runtime_error(what) {}
};

// in-place Walsh-Hadamard transform of every column (unnormalized butterflies);
// the row count must be a power of two
void fwht_columns(DenseMatrix& a);

std::vector<double> random_signs(std::size_t m, RngStream& rng);

// (1/sqrt(m)) H diag(signs) a: an orthogonal mixing transform
DenseMatrix apply_sign_hadamard(const DenseMatrix& a,
                                const std::vector<double>& signs);

DenseMatrix random_sign_hadamard(const DenseMatrix& a, RngStream& rng);

// appends zero rows up to the next power of two (least-squares problems keep
// their solution under zero padding)
DenseMatrix pad_rows_to_pow2(const DenseMatrix& a);
std::vector<double> pad_vector_to_pow2(const std::vector<double>& b);

// One attempt: mix a with a fresh sign pattern, sample c rows with the given
// strategy, and return the R factor of the sampled block.  Throws
// RankDeficientSample when the sampled block loses rank; the caller owns the
// retry policy.  Non-power-of-two inputs are zero padded internally.
DenseMatrix build_preconditioner(const DenseMatrix& a, std::size_t c,
                                 SampleStrategy strategy, RngStream& rng);

struct PreconditionerResult {
  DenseMatrix r;
  std::size_t attempts;
};

PreconditionerResult build_preconditioner_with_retry(const DenseMatrix& a,
                                                     std::size_t c,
                                                     SampleStrategy strategy,
                                                     RngStream& rng,
                                                     std::size_t budget = 3);

struct TwoPathKappa {
  double kappa_preconditioned;  // cond(a r^-1)
  double kappa_sampled_basis;   // cond(s q) for q the basis of the mixed a
};

// Evaluates both sides of the preconditioner identity for one sign pattern
// and one fixed selection: cond(a R^-1) computed through the R factor of the
// sampled mixed block, against cond(S Q) computed from the orthonormal basis
// of the mixed matrix.  The two agree to rounding.
TwoPathKappa lemma21_check(const DenseMatrix& a, const SampleSelection& sel,
                           RngStream& rng);

}  // namespace rowsample
