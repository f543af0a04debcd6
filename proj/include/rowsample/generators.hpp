#pragma once

#include <cstddef>
#include <optional>

#include "rowsample/orthonormal.hpp"
#include "rowsample/rng.hpp"

namespace rowsample {

// one row at mu, the remaining n - mu spread evenly; feasible for
// mu in [n/m, 1]
LeverageProfile leverage_one_spike(std::size_t m, std::size_t n, double mu);

// ceil(n/mu) nonzero rows: all at mu except one remainder entry, the rest of
// the profile is exactly zero
LeverageProfile leverage_many_zeros(std::size_t m, std::size_t n, double mu);

struct GivensStats {
  std::size_t rotations = 0;
  double max_row_error = 0.0;  // worst |row norm^2 - target| on exit
};

// Basis with the prescribed leverage scores, built from [I_n; 0] by plane
// rotations that fix one row's norm per step (at most m-1 of them).  The
// optional mix right-multiplies by a Haar-random n x n rotation, which keeps
// every row norm; stats, when given, reports the rotation count.
OrthonormalBasis generate_with_leverage(const LeverageProfile& profile,
                                        std::size_t n,
                                        std::optional<RngStream> mix,
                                        GivensStats* stats = nullptr);

// m/n copies of scaled identity blocks stacked vertically; the top block
// carries mu, the others share the remainder.  Requires n | m with at least
// two blocks, or m == n with mu == 1.
OrthonormalBasis stacked_diagonal(std::size_t m, std::size_t n, double mu);

// First n columns of a recursively built m x m orthogonal matrix whose
// off-diagonal entries all share one magnitude.  Requires m a power of two,
// n < m a power of two, and mu >= (n-1)/(m-1) so the diagonal weight exists;
// the first n rows carry score mu and the rest n(1-mu)/(m-n) each, so the
// coherence equals mu exactly when mu >= n/m.
OrthonormalBasis hadamard_structured(std::size_t m, std::size_t n, double mu);

}  // namespace rowsample
