#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rowsample/bounds.hpp"
#include "rowsample/orthonormal.hpp"
#include "rowsample/sampling.hpp"

namespace rowsample {

// configuration asks for a coherence no basis of that shape can have, or an
// otherwise unsatisfiable experiment
struct InfeasibleConfig : std::runtime_error {
  explicit InfeasibleConfig(const std::string& what)
      : std::runtime_error(what) {}
};

struct ExperimentConfig {
  std::size_t m = 4096;
  std::size_t n = 5;
  std::string family = "givens-spike";  // givens-spike | givens-zeros |
                                        // stacked | hadamard
  double mu_factor = 1.5;               // coherence as a multiple of n/m
  std::optional<double> mu_absolute;    // overrides mu_factor when set
  std::vector<SampleStrategy> strategies = {
      SampleStrategy::without_replacement, SampleStrategy::with_replacement,
      SampleStrategy::bernoulli};
  std::vector<std::size_t> c_grid;  // empty: 25-point geometric [n, m]
  std::size_t trials_per_c = 30;
  double delta = 0.01;
  std::uint64_t seed = 20240817;
  std::string out_dir = ".";

  double mu() const {
    if (mu_absolute) return *mu_absolute;
    return mu_factor * static_cast<double>(n) / static_cast<double>(m);
  }
};

struct TrialRecord {
  SampleStrategy strategy;
  std::size_t c;
  std::size_t trial;
  std::size_t realized_rows;
  bool full_rank;
  std::optional<double> kappa;  // present iff full_rank; >= 1
};

// rounded geometric progression from lo to hi, deduplicated, both ends kept
std::vector<std::size_t> geometric_grid(std::size_t lo, std::size_t hi,
                                        std::size_t points);

// the basis a config asks for (generated once, shared by every strategy)
OrthonormalBasis build_config_basis(const ExperimentConfig& config);

// full sweep: every strategy x grid point x trial, deterministic per-trial
// streams derived from (seed, strategy, c, trial)
std::vector<TrialRecord> run_sweep(const ExperimentConfig& config);

std::string records_csv(const std::vector<TrialRecord>& records);

struct BoundCurvePoint {
  std::size_t c;
  double kappa_bound;
};

// kappa bound per grid point, only where the failure target is met
std::vector<BoundCurvePoint> bound_curve(const ExperimentConfig& config,
                                         const std::vector<std::size_t>& grid);

struct OverlaySvg {
  std::string svg;
  bool curve_present;  // false: bound never evaluable, a warning is drawn
};

// log-x scatter of per-trial condition numbers with the bound overlaid
OverlaySvg overlay_bound(const std::vector<TrialRecord>& records,
                         SampleStrategy strategy,
                         const std::vector<BoundCurvePoint>& curve,
                         const std::string& title);

// bar panel of rank-deficiency percentages; only grid points with at least
// one deficient trial appear.  Empty string when nothing failed.
std::string deficiency_svg(const std::vector<TrialRecord>& records,
                           SampleStrategy strategy, const std::string& title);

struct SummaryRow {
  SampleStrategy strategy;
  std::size_t c;
  std::size_t trials;
  std::size_t deficient;
  std::optional<double> median_kappa;  // over full-rank trials
};

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

struct ReferenceTables {
  std::string onset_csv;       // per coherence: first informative c
  std::string spike_csv;       // sample counts on one-spike profiles
  std::string zeros_csv;       // sample counts on many-zeros profiles
};

// the three bound tables at the reference scale m = 10^4, n = 5, delta = .01
ReferenceTables make_tables();

// key=value config text (one pair per line, '#' comments); unknown keys
// throw, values trimmed
ExperimentConfig parse_config_text(const std::string& text,
                                   const ExperimentConfig& base = {});
ExperimentConfig parse_config_file(const std::string& path,
                                   const ExperimentConfig& base = {});

// run_sweep + all artifacts (records.csv, summary.csv, tables/, plots/)
// under config.out_dir; returns the records
std::vector<TrialRecord> run_sweep_with_outputs(const ExperimentConfig& config);

}  // namespace rowsample
