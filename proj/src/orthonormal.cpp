#include "rowsample/orthonormal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rowsample/svd.hpp"

namespace rowsample {

OrthonormalBasis::OrthonormalBasis(DenseMatrix q) : q_(std::move(q)) {
  const std::size_t m = q_.rows();
  const std::size_t n = q_.cols();
  if (m < n)
    throw std::invalid_argument("OrthonormalBasis: need rows >= cols");
  defect_ = orthonormality_defect(q_);
  const double tol = 1e-10 * std::sqrt(static_cast<double>(n));
  if (!(defect_ <= tol))
    throw std::invalid_argument(
        "OrthonormalBasis: columns not orthonormal (defect " +
        std::to_string(defect_) + ")");
  scores_ = row_norms_squared(q_);
}

LeverageProfile::LeverageProfile(std::vector<double> scores)
    : scores_(std::move(scores)) {
  if (scores_.empty())
    throw std::invalid_argument("LeverageProfile: no scores");
  double sum = 0.0;
  double mx = 0.0;
  for (double s : scores_) {
    if (!(s >= 0.0))
      throw std::invalid_argument("LeverageProfile: negative score");
    if (s > 1.0 + 1e-10)
      throw std::invalid_argument("LeverageProfile: score " +
                                  std::to_string(s) + " exceeds 1");
    sum += s;
    mx = std::max(mx, s);
  }
  const double rounded = std::round(sum);
  if (rounded < 1.0)
    throw std::invalid_argument("LeverageProfile: scores sum below 1");
  if (std::abs(sum - rounded) > 1e-8 * rounded)
    throw std::invalid_argument(
        "LeverageProfile: scores sum to " + std::to_string(sum) +
        ", not within 1e-8 of an integer");
  n_implied_ = static_cast<std::size_t>(rounded);
  if (n_implied_ > scores_.size())
    throw std::invalid_argument("LeverageProfile: implied rank exceeds rows");
  coherence_ = mx;
  // max >= mean holds for exact arithmetic; allow a whisker for rounding
  const double mean = sum / static_cast<double>(scores_.size());
  if (mx < mean * (1.0 - 1e-9))
    throw std::invalid_argument("LeverageProfile: max below mean");
}

std::vector<double> LeverageProfile::sorted_descending() const {
  std::vector<double> s(scores_);
  std::sort(s.begin(), s.end(), std::greater<double>());
  return s;
}

LeverageProfile leverage_scores(const OrthonormalBasis& q) {
  return LeverageProfile(q.scores());
}

double coherence(const OrthonormalBasis& q) {
  double mx = 0.0;
  for (double s : q.scores()) mx = std::max(mx, s);
  return mx;
}

double qtlq_norm(const OrthonormalBasis& q) {
  // || q^T L q ||_2 = sigma_max(diag(sqrt(l)) q)^2
  const DenseMatrix& m = q.matrix();
  DenseMatrix scaled(m.rows(), m.cols());
  const std::vector<double>& l = q.scores();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double w = std::sqrt(std::max(l[i], 0.0));
    for (std::size_t j = 0; j < m.cols(); ++j) scaled(i, j) = w * m(i, j);
  }
  const std::vector<double> sv = singular_values(scaled);
  const double smax = sv.empty() ? 0.0 : sv.front();
  return smax * smax;
}

}  // namespace rowsample
