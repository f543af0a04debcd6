#pragma once

#include <cstddef>
#include <vector>

#include "rowsample/dense_matrix.hpp"

namespace rowsample {

// Tall matrix with orthonormal columns.  Construction measures
// || q^T q - I ||_F and rejects anything above 1e-10 * sqrt(n); row norms
// (the leverage scores) are computed once and cached.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(DenseMatrix q);

  const DenseMatrix& matrix() const { return q_; }
  std::size_t rows() const { return q_.rows(); }
  std::size_t cols() const { return q_.cols(); }
  double ortho_defect() const { return defect_; }
  const std::vector<double>& scores() const { return scores_; }

 private:
  DenseMatrix q_;
  double defect_;
  std::vector<double> scores_;
};

// Row norms squared of some orthonormal basis: every score is in [0, 1] and
// they sum to the (implied) column count.
class LeverageProfile {
 public:
  explicit LeverageProfile(std::vector<double> scores);

  const std::vector<double>& scores() const { return scores_; }
  std::size_t row_count() const { return scores_.size(); }
  std::size_t n_implied() const { return n_implied_; }
  double coherence() const { return coherence_; }

  std::vector<double> sorted_descending() const;

 private:
  std::vector<double> scores_;
  std::size_t n_implied_;
  double coherence_;
};

LeverageProfile leverage_scores(const OrthonormalBasis& q);

// largest leverage score; lies in [n/m, 1]
double coherence(const OrthonormalBasis& q);

// || q^T L q ||_2 where L = diag of q's own leverage scores; equals the
// squared largest singular value of diag(sqrt(l)) q and sits in
// [coherence^2, coherence]
double qtlq_norm(const OrthonormalBasis& q);

}  // namespace rowsample
