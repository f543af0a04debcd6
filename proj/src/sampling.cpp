#include "rowsample/sampling.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rowsample/matrix_io.hpp"

namespace rowsample {

const char* strategy_name(SampleStrategy s) {
  switch (s) {
    case SampleStrategy::without_replacement: return "without_replacement";
    case SampleStrategy::with_replacement: return "with_replacement";
    case SampleStrategy::bernoulli: return "bernoulli";
    case SampleStrategy::binomial_without: return "binomial_without";
  }
  throw std::logic_error("strategy_name: unknown strategy");
}

SampleStrategy strategy_from_name(const std::string& name) {
  if (name == "without_replacement" || name == "without")
    return SampleStrategy::without_replacement;
  if (name == "with_replacement" || name == "with")
    return SampleStrategy::with_replacement;
  if (name == "bernoulli") return SampleStrategy::bernoulli;
  if (name == "binomial_without" || name == "binomial")
    return SampleStrategy::binomial_without;
  throw std::invalid_argument("unknown sampling strategy: " + name);
}

namespace {

void check_args(std::size_t m, std::size_t c, bool allow_c_above_m) {
  if (m == 0) throw std::invalid_argument("sampling: m must be positive");
  if (c == 0) throw std::invalid_argument("sampling: c must be positive");
  if (!allow_c_above_m && c > m)
    throw std::invalid_argument("sampling: c must not exceed m");
}

// c distinct uniform indices out of m, as the prefix of a partial shuffle
std::vector<std::size_t> distinct_uniform(std::size_t m, std::size_t c,
                                          RngStream& rng) {
  std::vector<std::size_t> pool(m);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < c; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.next_below(m - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(c);
  return pool;
}

}  // namespace

SampleSelection sample_without_replacement(std::size_t m, std::size_t c,
                                           RngStream& rng) {
  check_args(m, c, false);
  return {SampleStrategy::without_replacement, m, distinct_uniform(m, c, rng),
          std::sqrt(static_cast<double>(m) / static_cast<double>(c))};
}

SampleSelection sample_with_replacement(std::size_t m, std::size_t c,
                                        RngStream& rng) {
  check_args(m, c, true);
  std::vector<std::size_t> idx(c);
  for (std::size_t i = 0; i < c; ++i)
    idx[i] = static_cast<std::size_t>(rng.next_below(m));
  return {SampleStrategy::with_replacement, m, std::move(idx),
          std::sqrt(static_cast<double>(m) / static_cast<double>(c))};
}

SampleSelection sample_bernoulli(std::size_t m, std::size_t c,
                                 RngStream& rng) {
  check_args(m, c, false);
  const double gamma = static_cast<double>(c) / static_cast<double>(m);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < m; ++i)
    if (rng.next_unit() < gamma) idx.push_back(i);
  // weight uses the requested c; the realized count fluctuates around it
  return {SampleStrategy::bernoulli, m, std::move(idx),
          std::sqrt(static_cast<double>(m) / static_cast<double>(c))};
}

SampleSelection sample_binomial_without(std::size_t m, std::size_t c,
                                        RngStream& rng) {
  check_args(m, c, false);
  const double gamma = static_cast<double>(c) / static_cast<double>(m);
  // K as a sum of m Bernoulli draws keeps the exact law at any scale
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (rng.next_unit() < gamma) ++k;
  std::vector<std::size_t> idx =
      (k == 0) ? std::vector<std::size_t>{} : distinct_uniform(m, k, rng);
  const double weight =
      (k == 0) ? 0.0
               : std::sqrt(static_cast<double>(m) / static_cast<double>(k));
  return {SampleStrategy::binomial_without, m, std::move(idx), weight};
}

SampleSelection draw_selection(SampleStrategy s, std::size_t m, std::size_t c,
                               RngStream& rng) {
  switch (s) {
    case SampleStrategy::without_replacement:
      return sample_without_replacement(m, c, rng);
    case SampleStrategy::with_replacement:
      return sample_with_replacement(m, c, rng);
    case SampleStrategy::bernoulli:
      return sample_bernoulli(m, c, rng);
    case SampleStrategy::binomial_without:
      return sample_binomial_without(m, c, rng);
  }
  throw std::logic_error("draw_selection: unknown strategy");
}

DenseMatrix apply_selection(const SampleSelection& sel, const DenseMatrix& a) {
  if (a.rows() != sel.source_rows)
    throw std::invalid_argument(
        "apply_selection: selection drawn for a different row count");
  DenseMatrix out(sel.indices.size(), a.cols());
  for (std::size_t i = 0; i < sel.indices.size(); ++i) {
    const std::size_t src = sel.indices[i];
    if (src >= a.rows())
      throw std::out_of_range("apply_selection: index out of range");
    for (std::size_t j = 0; j < a.cols(); ++j)
      out(i, j) = sel.weight * a(src, j);
  }
  return out;
}

std::string selection_csv_line(const SampleSelection& sel, std::uint64_t seed,
                               std::uint64_t stream_id) {
  std::string line = strategy_name(sel.strategy);
  line += ',';
  line += std::to_string(seed);
  line += ',';
  line += std::to_string(stream_id);
  line += ',';
  line += format_double(sel.weight);
  line += ",\"";
  for (std::size_t i = 0; i < sel.indices.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(sel.indices[i]);
  }
  line += '"';
  return line;
}

}  // namespace rowsample
