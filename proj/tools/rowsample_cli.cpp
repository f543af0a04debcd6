// Command-line driver: basis generation, bound tables, the preconditioning
// demo, and the sampling sweep.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rowsample/bounds.hpp"
#include "rowsample/generators.hpp"
#include "rowsample/harness.hpp"
#include "rowsample/lsqr.hpp"
#include "rowsample/matrix_io.hpp"
#include "rowsample/precondition.hpp"
#include "rowsample/qr.hpp"
#include "rowsample/rng.hpp"
#include "rowsample/sampling.hpp"
#include "rowsample/svd.hpp"

namespace {

using namespace rowsample;

LeverageProfile profile_from_file(const std::string& path) {
  const DenseMatrix m = read_matrix_file(path);
  if (m.cols() != 1 && m.rows() != 1)
    throw std::runtime_error("profile file must be a single row or column");
  std::vector<double> scores;
  scores.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) scores.push_back(m(i, j));
  return LeverageProfile(std::move(scores));
}

int cmd_generate(const std::string& family, const std::string& profile,
                 std::size_t m, std::size_t n, double mu,
                 const std::optional<std::uint64_t>& seed,
                 const std::string& out) {
  OrthonormalBasis basis = [&] {
    if (family == "stacked") return stacked_diagonal(m, n, mu);
    if (family == "hadamard") return hadamard_structured(m, n, mu);
    if (family != "givens")
      throw std::runtime_error("unknown family: " + family);
    LeverageProfile targets = [&] {
      if (profile == "spike") return leverage_one_spike(m, n, mu);
      if (profile == "zeros") return leverage_many_zeros(m, n, mu);
      return profile_from_file(profile);
    }();
    std::optional<RngStream> mix;
    if (seed) mix.emplace(*seed, derive_stream_id(1, 0, 0));
    return generate_with_leverage(targets, targets.n_implied(), mix);
  }();
  write_matrix_file(out, basis.matrix());
  std::cerr << "wrote " << basis.matrix().rows() << "x"
            << basis.matrix().cols() << " basis, coherence "
            << format_double(coherence(basis)) << "\n";
  return 0;
}

void print_bound_row(const BoundResult& r) {
  std::string line = (r.theorem == TheoremTag::chernoff_coherence)
                         ? std::string("coherence")
                         : std::string("leverage");
  line += ',';
  line += format_double(r.delta);
  line += ',';
  line += format_double(r.epsilon);
  line += ',';
  line += format_double(r.kappa_bound);
  line += ',';
  if (r.c_min) line += std::to_string(*r.c_min);
  line += ',';
  line += r.informative ? '1' : '0';
  std::fputs((line + "\n").c_str(), stdout);
}

int cmd_bounds(std::size_t m, std::size_t n, std::optional<double> mu_opt,
               const std::string& profile_path, double delta,
               std::optional<double> eps_opt, std::optional<double> kappa_opt) {
  double mu, tau;
  if (!profile_path.empty()) {
    const LeverageProfile p = profile_from_file(profile_path);
    m = p.row_count();
    n = p.n_implied();
    mu = p.coherence();
    tau = tau_bound(p);
  } else {
    if (!mu_opt) throw std::runtime_error("need --mu or --profile");
    mu = *mu_opt;
    tau = mu;  // without a full profile the mixed moment is only bounded by mu
  }
  const double eps = eps_opt ? *eps_opt
                     : kappa_opt ? epsilon_from_kappa(*kappa_opt)
                                 : 99.0 / 101.0;
  std::printf("# m=%zu n=%zu mu=%s tau=%s delta=%s eps=%s\n", m, n,
              format_double(mu).c_str(), format_double(tau).c_str(),
              format_double(delta).c_str(), format_double(eps).c_str());
  std::printf("theorem,delta,epsilon,kappa_bound,c_min,informative\n");
  print_bound_row(chernoff_result(m, mu, n, delta, eps));
  print_bound_row(bernstein_result(m, n, mu, tau, delta, eps));
  return 0;
}

// kappa(a * r^-1) computed row by row through the triangular solve
double kappa_right_preconditioned(const DenseMatrix& a, const DenseMatrix& r) {
  DenseMatrix x(a.rows(), a.cols());
  std::vector<double> row(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) row[j] = a(i, j);
    const std::vector<double> s = solve_upper_transpose(r, row);
    for (std::size_t j = 0; j < a.cols(); ++j) x(i, j) = s[j];
  }
  const std::optional<double> k = condition_number(x);
  if (!k) throw RankDeficientSample("preconditioned matrix lost rank");
  return *k;
}

DenseMatrix synth_matrix(std::size_t m, std::size_t n, double kappa,
                         RngStream& rng) {
  if (kappa < 1.0) throw std::runtime_error("--kappa must be >= 1");
  DenseMatrix gu(m, n), gv(n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) gu(i, j) = rng.next_gaussian();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gv(i, j) = rng.next_gaussian();
  const DenseMatrix u = thin_qr(gu).q.matrix();
  const DenseMatrix v = thin_qr(gv).q.matrix();
  std::vector<double> sigma(n);
  for (std::size_t k = 0; k < n; ++k)
    sigma[k] = std::pow(kappa, -static_cast<double>(k) /
                                   std::max<double>(1.0, n - 1.0));
  DenseMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += u(i, k) * sigma[k] * v(j, k);
      a(i, j) = acc;
    }
  return a;
}

int cmd_demo(std::size_t m, std::size_t n, std::size_t c,
             const std::string& strategy_str, std::uint64_t seed,
             std::size_t trials, double kappa, double tol,
             std::size_t max_iter) {
  const SampleStrategy strategy = strategy_from_name(strategy_str);
  RngStream setup(seed, derive_stream_id(7, 0, 0));
  const DenseMatrix a = synth_matrix(m, n, kappa, setup);

  std::vector<double> b(m);
  {
    std::vector<double> ones(n, 1.0);
    b = multiply_vec(a, ones);
    double scale = 0.0;
    for (double v : b) scale += v * v;
    scale = 0.01 * std::sqrt(scale / static_cast<double>(m));
    for (double& v : b) v += scale * setup.next_gaussian();
  }

  const DenseMatrix ap = pad_rows_to_pow2(a);
  std::printf(
      "trial,rank_ok,kappa_precond,kappa_sq,lsqr_iters_precond,"
      "lsqr_iters_plain\n");
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RngStream rng(seed, derive_stream_id(8, c, trial));
    const std::vector<double> signs = random_signs(ap.rows(), rng);
    const DenseMatrix mixed = apply_sign_hadamard(ap, signs);
    const SampleSelection sel = draw_selection(strategy, ap.rows(), c, rng);
    const DenseMatrix block = apply_selection(sel, mixed);

    if (block.rows() < n || numerical_rank(block) < n) {
      std::printf("%zu,0,,,,\n", trial);
      continue;
    }
    const DenseMatrix r = qr_r_only(block);
    const double kp = kappa_right_preconditioned(a, r);
    const DenseMatrix sq = apply_selection(sel, thin_qr(mixed).q.matrix());
    const std::optional<double> ks = condition_number(sq);

    const LsqrResult pre = lsqr_solve(a, b, &r, tol, max_iter);
    const LsqrResult plain = lsqr_solve(a, b, nullptr, tol, max_iter);
    std::printf("%zu,1,%s,%s,%zu,%zu\n", trial, format_double(kp).c_str(),
                ks ? format_double(*ks).c_str() : "",
                pre.iterations, plain.iterations);
  }
  return 0;
}

int cmd_rank(const std::string& in, double tol) {
  const DenseMatrix a = read_matrix_file(in);
  const std::vector<double> sv = singular_values(a);
  const std::size_t rank = numerical_rank(a, tol);
  std::printf("rank,kappa,sigma_max,sigma_min\n");
  std::string kappa_str;
  if (a.rows() >= a.cols()) {
    const std::optional<double> k = condition_number(a);
    if (k) kappa_str = format_double(*k);
  }
  std::printf("%zu,%s,%s,%s\n", rank, kappa_str.c_str(),
              sv.empty() ? "" : format_double(sv.front()).c_str(),
              sv.empty() ? "" : format_double(sv.back()).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"row sampling of orthonormal matrices: generators, bounds, "
               "preconditioning demo, experiment sweep"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "build an orthonormal basis with "
                                             "prescribed leverage scores");
  std::size_t g_m = 4096, g_n = 5;
  double g_mu = 0.01;
  std::string g_family = "givens", g_profile = "spike", g_out;
  std::optional<std::uint64_t> g_seed;
  gen->add_option("--m", g_m, "row count");
  gen->add_option("--n", g_n, "column count");
  gen->add_option("--mu", g_mu, "target coherence");
  gen->add_option("--family", g_family, "givens|stacked|hadamard");
  gen->add_option("--profile", g_profile,
                  "spike|zeros|<score file> (givens family)");
  gen->add_option("--seed", g_seed,
                  "apply a random basis mix with this seed (default: none)");
  gen->add_option("--out", g_out, "output matrix file")->required();

  // bounds
  auto* bnd = app.add_subcommand(
      "bounds", "minimum sample counts from both tail bounds");
  std::size_t b_m = 10000, b_n = 5;
  std::optional<double> b_mu, b_eps, b_kappa;
  std::string b_profile;
  double b_delta = 0.01;
  bnd->add_option("--m", b_m, "row count");
  bnd->add_option("--n", b_n, "column count");
  bnd->add_option("--mu", b_mu, "coherence (tau falls back to mu)");
  bnd->add_option("--profile", b_profile, "score file (sets m, n, mu, tau)");
  bnd->add_option("--delta", b_delta, "failure probability target");
  auto* be = bnd->add_option("--eps", b_eps, "distortion target in (0,1)");
  bnd->add_option("--kappa", b_kappa, "condition number target (> 1)")
      ->excludes(be);

  // precondition-demo
  auto* dem = app.add_subcommand(
      "precondition-demo",
      "mix, sample, QR precondition, and solve least squares");
  std::size_t d_m = 512, d_n = 6, d_c = 64, d_trials = 10, d_maxit = 2000;
  double d_kappa = 1e4, d_tol = 1e-10;
  std::string d_strategy = "without";
  std::uint64_t d_seed = 1;
  dem->add_option("--m", d_m, "row count");
  dem->add_option("--n", d_n, "column count");
  dem->add_option("--c", d_c, "sample count");
  dem->add_option("--strategy", d_strategy,
                  "without|with|bernoulli|binomial");
  dem->add_option("--seed", d_seed, "seed");
  dem->add_option("--trials", d_trials, "trial count");
  dem->add_option("--kappa", d_kappa, "condition number of the test matrix");
  dem->add_option("--tol", d_tol, "normal-equations stopping tolerance");
  dem->add_option("--max-iter", d_maxit, "iteration cap per solve");

  // sweep
  auto* swp = app.add_subcommand("sweep", "condition-number sweep over sample "
                                          "counts; writes CSV and SVG");
  std::string s_config, s_out_dir, s_family, s_strategies, s_grid;
  std::optional<std::size_t> s_m, s_n, s_trials, s_cmin, s_cmax, s_cpts;
  std::optional<double> s_mu, s_mu_factor, s_delta;
  std::optional<std::uint64_t> s_seed;
  swp->add_option("--config", s_config, "key=value config file");
  swp->add_option("--out-dir", s_out_dir, "output directory");
  swp->add_option("--m", s_m, "row count");
  swp->add_option("--n", s_n, "column count");
  swp->add_option("--family", s_family,
                  "givens-spike|givens-zeros|stacked|hadamard");
  swp->add_option("--mu", s_mu, "absolute coherence");
  swp->add_option("--mu-factor", s_mu_factor, "coherence as multiple of n/m");
  swp->add_option("--strategies", s_strategies, "comma-separated list");
  swp->add_option("--trials", s_trials, "trials per sample count");
  swp->add_option("--delta", s_delta, "failure target for the bound curve");
  swp->add_option("--seed", s_seed, "seed");
  swp->add_option("--c-min", s_cmin, "grid start");
  swp->add_option("--c-max", s_cmax, "grid end");
  swp->add_option("--c-points", s_cpts, "grid size");
  swp->add_option("--c-grid", s_grid, "explicit comma-separated grid");

  // rank
  auto* rnk = app.add_subcommand("rank", "numerical rank and condition number "
                                         "of a matrix file");
  std::string r_in;
  double r_tol = 0.0;
  rnk->add_option("--in", r_in, "matrix file")->required();
  rnk->add_option("--tol", r_tol, "singular value cutoff (default: relative "
                                  "to the largest)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(g_family, g_profile, g_m, g_n, g_mu, g_seed, g_out);
    if (bnd->parsed())
      return cmd_bounds(b_m, b_n, b_mu, b_profile, b_delta, b_eps, b_kappa);
    if (dem->parsed())
      return cmd_demo(d_m, d_n, d_c, d_strategy, d_seed, d_trials, d_kappa,
                      d_tol, d_maxit);
    if (rnk->parsed()) return cmd_rank(r_in, r_tol);
    if (swp->parsed()) {
      rowsample::ExperimentConfig cfg;
      if (!s_config.empty()) cfg = rowsample::parse_config_file(s_config);
      std::string overrides;
      auto add = [&overrides](const std::string& k, const std::string& v) {
        overrides += k + "=" + v + "\n";
      };
      if (s_m) add("m", std::to_string(*s_m));
      if (s_n) add("n", std::to_string(*s_n));
      if (!s_family.empty()) add("family", s_family);
      if (s_mu) add("mu", rowsample::format_double(*s_mu));
      if (s_mu_factor) add("mu_factor", rowsample::format_double(*s_mu_factor));
      if (!s_strategies.empty()) add("strategies", s_strategies);
      if (s_trials) add("trials", std::to_string(*s_trials));
      if (s_delta) add("delta", rowsample::format_double(*s_delta));
      if (s_seed) add("seed", std::to_string(*s_seed));
      if (s_cmin) add("c_min", std::to_string(*s_cmin));
      if (s_cmax) add("c_max", std::to_string(*s_cmax));
      if (s_cpts) add("c_points", std::to_string(*s_cpts));
      if (!s_grid.empty()) add("c_grid", s_grid);
      if (!s_out_dir.empty()) add("out_dir", s_out_dir);
      cfg = rowsample::parse_config_text(overrides, cfg);
      rowsample::run_sweep_with_outputs(cfg);
      return 0;
    }
  } catch (const rowsample::InfeasibleConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return swp->parsed() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
