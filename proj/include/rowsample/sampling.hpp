#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rowsample/dense_matrix.hpp"
#include "rowsample/rng.hpp"

namespace rowsample {

enum class SampleStrategy {
  without_replacement,
  with_replacement,
  bernoulli,
  binomial_without,
};

const char* strategy_name(SampleStrategy s);
SampleStrategy strategy_from_name(const std::string& name);

// One realized row selection.  `indices` lists the chosen source rows (a
// multiset for with-replacement); `weight` is the common scale applied to
// every kept row so the sampled map is an expectation-preserving sketch.
struct SampleSelection {
  SampleStrategy strategy;
  std::size_t source_rows;
  std::vector<std::size_t> indices;
  double weight;
};

// c distinct uniform rows (random prefix of a Fisher-Yates shuffle);
// requires 1 <= c <= m; weight sqrt(m/c)
SampleSelection sample_without_replacement(std::size_t m, std::size_t c,
                                           RngStream& rng);

// c iid uniform rows, duplicates kept; c may exceed m; weight sqrt(m/c)
SampleSelection sample_with_replacement(std::size_t m, std::size_t c,
                                        RngStream& rng);

// each row kept independently with probability c/m; weight sqrt(m/c) uses
// the requested c, not the realized count; requires c <= m
SampleSelection sample_bernoulli(std::size_t m, std::size_t c, RngStream& rng);

// draw K ~ Binomial(m, c/m), then K distinct uniform rows; weight is the
// realized sqrt(m/K) (selection may be empty when K = 0)
SampleSelection sample_binomial_without(std::size_t m, std::size_t c,
                                        RngStream& rng);

SampleSelection draw_selection(SampleStrategy s, std::size_t m, std::size_t c,
                               RngStream& rng);

// rows of a at the selected indices, scaled by the selection weight; an
// empty selection yields a 0 x n matrix
DenseMatrix apply_selection(const SampleSelection& sel, const DenseMatrix& a);

// one CSV record: strategy,seed,stream,weight,"i1 i2 ..."
std::string selection_csv_line(const SampleSelection& sel, std::uint64_t seed,
                               std::uint64_t stream_id);

}  // namespace rowsample
