#include "rowsample/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rowsample/generators.hpp"
#include "rowsample/matrix_io.hpp"
#include "rowsample/svd.hpp"

namespace rowsample {

std::vector<std::size_t> geometric_grid(std::size_t lo, std::size_t hi,
                                        std::size_t points) {
  if (lo == 0 || hi < lo || points == 0)
    throw std::invalid_argument("geometric_grid: bad range");
  std::vector<std::size_t> grid;
  if (points == 1 || lo == hi) {
    grid.push_back(lo);
    if (hi != lo) grid.push_back(hi);
    return grid;
  }
  const double ratio = std::pow(static_cast<double>(hi) / static_cast<double>(lo),
                                1.0 / static_cast<double>(points - 1));
  double value = static_cast<double>(lo);
  for (std::size_t k = 0; k < points; ++k) {
    auto c = static_cast<std::size_t>(std::llround(value));
    c = std::min(std::max(c, lo), hi);
    if (grid.empty() || grid.back() != c) grid.push_back(c);
    value *= ratio;
  }
  if (grid.back() != hi) grid.push_back(hi);
  return grid;
}

OrthonormalBasis build_config_basis(const ExperimentConfig& config) {
  const double mu = config.mu();
  try {
    if (config.family == "givens-spike") {
      return generate_with_leverage(
          leverage_one_spike(config.m, config.n, mu), config.n, std::nullopt);
    }
    if (config.family == "givens-zeros") {
      return generate_with_leverage(
          leverage_many_zeros(config.m, config.n, mu), config.n, std::nullopt);
    }
    if (config.family == "stacked")
      return stacked_diagonal(config.m, config.n, mu);
    if (config.family == "hadamard")
      return hadamard_structured(config.m, config.n, mu);
  } catch (const std::invalid_argument& e) {
    throw InfeasibleConfig(std::string("infeasible configuration: ") +
                           e.what());
  }
  throw InfeasibleConfig("unknown basis family: " + config.family);
}

namespace {

std::vector<std::size_t> effective_grid(const ExperimentConfig& config) {
  std::vector<std::size_t> grid = config.c_grid;
  if (grid.empty()) grid = geometric_grid(config.n, config.m, 25);
  for (std::size_t c : grid) {
    if (c < config.n)
      throw InfeasibleConfig("grid point below the column count");
    if (c > config.m)
      throw InfeasibleConfig("grid point above the row count");
  }
  return grid;
}

}  // namespace

std::vector<TrialRecord> run_sweep(const ExperimentConfig& config) {
  const std::vector<std::size_t> grid = effective_grid(config);
  if (config.strategies.empty())
    throw InfeasibleConfig("no sampling strategies requested");
  const OrthonormalBasis basis = build_config_basis(config);

  std::vector<TrialRecord> records;
  records.reserve(config.strategies.size() * grid.size() *
                  config.trials_per_c);
  for (std::size_t si = 0; si < config.strategies.size(); ++si) {
    const SampleStrategy strategy = config.strategies[si];
    for (const std::size_t c : grid) {
      for (std::size_t trial = 0; trial < config.trials_per_c; ++trial) {
        RngStream rng(config.seed, derive_stream_id(si + 1, c, trial));
        const SampleSelection sel = draw_selection(strategy, config.m, c, rng);
        TrialRecord rec;
        rec.strategy = strategy;
        rec.c = c;
        rec.trial = trial;
        rec.realized_rows = sel.indices.size();
        if (sel.indices.size() < config.n) {
          rec.full_rank = false;
        } else {
          const DenseMatrix sq = apply_selection(sel, basis.matrix());
          rec.kappa = condition_number(sq);
          rec.full_rank = rec.kappa.has_value();
        }
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::string out = "strategy,c,trial,realized_rows,full_rank,kappa\n";
  for (const TrialRecord& r : records) {
    out += strategy_name(r.strategy);
    out += ',';
    out += std::to_string(r.c);
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.realized_rows);
    out += ',';
    out += r.full_rank ? '1' : '0';
    out += ',';
    if (r.kappa) out += format_double(*r.kappa);
    out += '\n';
  }
  return out;
}

std::vector<BoundCurvePoint> bound_curve(const ExperimentConfig& config,
                                         const std::vector<std::size_t>& grid) {
  std::vector<BoundCurvePoint> curve;
  const double mu = config.mu();
  for (const std::size_t c : grid) {
    const std::optional<double> eps =
        chernoff_epsilon(c, config.m, mu, config.n, config.delta);
    if (eps && *eps > 0.0 && *eps < 1.0)
      curve.push_back({c, kappa_bound_from_epsilon(*eps)});
  }
  return curve;
}

namespace {

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

constexpr double kPlotW = 720.0, kPlotH = 480.0;
constexpr double kMarL = 70.0, kMarR = 24.0, kMarT = 44.0, kMarB = 56.0;
constexpr double kKappaCap = 10.0;

double map_x(double c, double lo, double hi) {
  const double t = (std::log10(c) - std::log10(lo)) /
                   std::max(std::log10(hi) - std::log10(lo), 1e-12);
  return kMarL + t * (kPlotW - kMarL - kMarR);
}

double map_y(double kappa) {
  const double t = (std::min(kappa, kKappaCap) - 1.0) / (kKappaCap - 1.0);
  return kPlotH - kMarB - t * (kPlotH - kMarT - kMarB);
}

void svg_header(std::string& s, const std::string& title) {
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
       "viewBox=\"0 0 720 480\">\n";
  s += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  s += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">" + title + "</text>\n";
}

void svg_axes(std::string& s, double clo, double chi, const std::string& ylab) {
  s += "<line x1=\"" + fmt_coord(kMarL) + "\" y1=\"" + fmt_coord(kPlotH - kMarB) +
       "\" x2=\"" + fmt_coord(kPlotW - kMarR) + "\" y2=\"" +
       fmt_coord(kPlotH - kMarB) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt_coord(kMarL) + "\" y1=\"" + fmt_coord(kMarT) +
       "\" x2=\"" + fmt_coord(kMarL) + "\" y2=\"" + fmt_coord(kPlotH - kMarB) +
       "\" stroke=\"black\"/>\n";
  // decade ticks on x
  for (double d = std::ceil(std::log10(clo)); d <= std::log10(chi) + 1e-9; d += 1.0) {
    const double c = std::pow(10.0, d);
    if (c < clo * 0.999 || c > chi * 1.001) continue;
    const double x = map_x(c, clo, chi);
    s += "<line x1=\"" + fmt_coord(x) + "\" y1=\"" + fmt_coord(kPlotH - kMarB) +
         "\" x2=\"" + fmt_coord(x) + "\" y2=\"" + fmt_coord(kPlotH - kMarB + 6) +
         "\" stroke=\"black\"/>\n";
    char lab[32];
    std::snprintf(lab, sizeof(lab), "%g", c);
    s += "<text x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(kPlotH - kMarB + 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         lab + "</text>\n";
  }
  s += "<text x=\"" + fmt_coord((kMarL + kPlotW - kMarR) / 2) + "\" y=\"" +
       fmt_coord(kPlotH - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       "sample count c (log scale)</text>\n";
  // integer ticks on y
  for (int k = 1; k <= static_cast<int>(kKappaCap); ++k) {
    const double y = map_y(k);
    s += "<line x1=\"" + fmt_coord(kMarL - 6) + "\" y1=\"" + fmt_coord(y) +
         "\" x2=\"" + fmt_coord(kMarL) + "\" y2=\"" + fmt_coord(y) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt_coord(kMarL - 10) + "\" y=\"" + fmt_coord(y + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         std::to_string(k) + "</text>\n";
  }
  s += "<text x=\"16\" y=\"" + fmt_coord((kMarT + kPlotH - kMarB) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 16 " +
       fmt_coord((kMarT + kPlotH - kMarB) / 2) + ")\">" + ylab + "</text>\n";
}

}  // namespace

OverlaySvg overlay_bound(const std::vector<TrialRecord>& records,
                         SampleStrategy strategy,
                         const std::vector<BoundCurvePoint>& curve,
                         const std::string& title) {
  double clo = 0.0, chi = 0.0;
  for (const TrialRecord& r : records) {
    if (r.strategy != strategy) continue;
    const double c = static_cast<double>(r.c);
    if (clo == 0.0 || c < clo) clo = c;
    if (c > chi) chi = c;
  }
  if (clo == 0.0) throw std::invalid_argument("overlay_bound: no records");

  std::string s;
  svg_header(s, title);
  svg_axes(s, clo, chi, "condition number");

  for (const TrialRecord& r : records) {
    if (r.strategy != strategy || !r.kappa) continue;
    const double x = map_x(static_cast<double>(r.c), clo, chi);
    if (*r.kappa > kKappaCap) {
      // clipped marker at the top edge
      s += "<path d=\"M" + fmt_coord(x - 4) + " " + fmt_coord(map_y(kKappaCap) + 5)
           + " L" + fmt_coord(x + 4) + " " + fmt_coord(map_y(kKappaCap) + 5) +
           " L" + fmt_coord(x) + " " + fmt_coord(map_y(kKappaCap) - 3) +
           " Z\" fill=\"#d95f02\" opacity=\"0.7\"/>\n";
    } else {
      s += "<circle cx=\"" + fmt_coord(x) + "\" cy=\"" + fmt_coord(map_y(*r.kappa))
           + "\" r=\"2.4\" fill=\"#1f78b4\" opacity=\"0.45\"/>\n";
    }
  }

  const bool curve_present = !curve.empty();
  if (curve_present) {
    std::string pts;
    for (const BoundCurvePoint& p : curve) {
      if (p.kappa_bound > kKappaCap) continue;  // enters the panel from above
      if (!pts.empty()) pts += ' ';
      pts += fmt_coord(map_x(static_cast<double>(p.c), clo, chi)) + "," +
             fmt_coord(map_y(p.kappa_bound));
    }
    if (!pts.empty())
      s += "<polyline points=\"" + pts +
           "\" fill=\"none\" stroke=\"#e31a1c\" stroke-width=\"1.8\"/>\n";
    s += "<text x=\"" + fmt_coord(kPlotW - kMarR) + "\" y=\"" +
         fmt_coord(kMarT - 6) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
         "fill=\"#e31a1c\">guarantee curve</text>\n";
  } else {
    s += "<text x=\"" + fmt_coord((kMarL + kPlotW - kMarR) / 2) + "\" y=\"" +
         fmt_coord((kMarT + kPlotH - kMarB) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "fill=\"#b15928\">failure target not reachable on this grid; "
         "no guarantee curve</text>\n";
  }
  s += "</svg>\n";
  return {std::move(s), curve_present};
}

std::string deficiency_svg(const std::vector<TrialRecord>& records,
                           SampleStrategy strategy, const std::string& title) {
  // gather percentages per c, keeping only grid points with failures
  std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>> agg;
  for (const TrialRecord& r : records) {
    if (r.strategy != strategy) continue;
    auto it = std::find_if(agg.begin(), agg.end(),
                           [&](const auto& e) { return e.first == r.c; });
    if (it == agg.end()) {
      agg.push_back({r.c, {0, 0}});
      it = std::prev(agg.end());
    }
    it->second.first += r.full_rank ? 0 : 1;
    it->second.second += 1;
  }
  std::vector<std::pair<double, double>> bars;  // (c, percent)
  for (const auto& e : agg)
    if (e.second.first > 0)
      bars.push_back({static_cast<double>(e.first),
                      100.0 * static_cast<double>(e.second.first) /
                          static_cast<double>(e.second.second)});
  if (bars.empty()) return "";

  std::string s;
  svg_header(s, title);
  double pmax = 0.0;
  for (const auto& b : bars) pmax = std::max(pmax, b.second);
  pmax = std::max(pmax, 1.0);

  const double x0 = kMarL, x1 = kPlotW - kMarR;
  const double y0 = kPlotH - kMarB, y1 = kMarT;
  s += "<line x1=\"" + fmt_coord(x0) + "\" y1=\"" + fmt_coord(y0) + "\" x2=\"" +
       fmt_coord(x1) + "\" y2=\"" + fmt_coord(y0) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt_coord(x0) + "\" y1=\"" + fmt_coord(y1) + "\" x2=\"" +
       fmt_coord(x0) + "\" y2=\"" + fmt_coord(y0) + "\" stroke=\"black\"/>\n";
  const double bw = (x1 - x0) / static_cast<double>(bars.size());
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = (bars[i].second / pmax) * (y0 - y1);
    s += "<rect x=\"" + fmt_coord(x0 + bw * i + bw * 0.15) + "\" y=\"" +
         fmt_coord(y0 - h) + "\" width=\"" + fmt_coord(bw * 0.7) +
         "\" height=\"" + fmt_coord(h) + "\" fill=\"#6a3d9a\" opacity=\"0.8\"/>\n";
    char lab[32];
    std::snprintf(lab, sizeof(lab), "%g", bars[i].first);
    s += "<text x=\"" + fmt_coord(x0 + bw * (i + 0.5)) + "\" y=\"" +
         fmt_coord(y0 + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         lab + "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.1f%%", bars[i].second);
    s += "<text x=\"" + fmt_coord(x0 + bw * (i + 0.5)) + "\" y=\"" +
         fmt_coord(y0 - h - 5) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
         lab + "</text>\n";
  }
  s += "<text x=\"" + fmt_coord((x0 + x1) / 2) + "\" y=\"" + fmt_coord(kPlotH - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       "sample count c (only points with failures)</text>\n";
  s += "</svg>\n";
  return s;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  std::vector<SummaryRow> rows;
  for (const TrialRecord& r : records) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& s) {
      return s.strategy == r.strategy && s.c == r.c;
    });
    if (it == rows.end()) {
      rows.push_back({r.strategy, r.c, 0, 0, std::nullopt});
      it = std::prev(rows.end());
    }
    it->trials += 1;
    if (!r.full_rank) it->deficient += 1;
  }
  for (SummaryRow& s : rows) {
    std::vector<double> ks;
    for (const TrialRecord& r : records)
      if (r.strategy == s.strategy && r.c == s.c && r.kappa)
        ks.push_back(*r.kappa);
    if (!ks.empty()) {
      std::sort(ks.begin(), ks.end());
      const std::size_t h = ks.size() / 2;
      s.median_kappa = (ks.size() % 2) ? ks[h] : 0.5 * (ks[h - 1] + ks[h]);
    }
  }
  return rows;
}

ReferenceTables make_tables() {
  const std::size_t m = 10000, n = 5;
  const double delta = 0.01;
  const double eps0 = 99.0 / 101.0;
  const double unit = static_cast<double>(n) / static_cast<double>(m);

  std::string onset = "mu_factor,onset_c,fixed_form_c,fixed_form_fits\n";
  for (const double f : {1.0, 1.5, 15.0}) {
    const double mu = f * unit;
    const std::optional<std::size_t> c0 = chernoff_onset(m, mu, n, delta, m);
    const std::size_t c99 = chernoff_min_samples_99(m, mu, n);
    onset += format_double(f);
    onset += ',';
    onset += c0 ? std::to_string(*c0) : "";
    onset += ',';
    onset += std::to_string(c99);
    onset += ',';
    onset += (c99 <= m) ? '1' : '0';
    onset += '\n';
  }

  const std::vector<double> factors = {1, 5, 10, 15, 20, 25, 50, 100};

  std::string spike = "mu_factor,coherence_c,leverage_c,tau_factor\n";
  for (const double f : factors) {
    const double mu = f * unit;
    const LeverageProfile profile = leverage_one_spike(m, n, mu);
    const double tau = tau_bound(profile);
    spike += format_double(f);
    spike += ',';
    spike += std::to_string(chernoff_min_samples(m, mu, n, delta, eps0));
    spike += ',';
    spike += std::to_string(bernstein_min_samples(m, n, mu, tau, delta, eps0));
    spike += ',';
    spike += format_double(tau / unit);
    spike += '\n';
  }

  std::string zeros = "mu_factor,coherence_c,leverage_c,tau_factor\n";
  for (const double f : factors) {
    const double mu = f * unit;
    const LeverageProfile profile = leverage_many_zeros(m, n, mu);
    const double tau = tau_bound(profile);
    zeros += format_double(f);
    zeros += ',';
    zeros += std::to_string(chernoff_min_samples(m, mu, n, delta, eps0));
    zeros += ',';
    zeros += std::to_string(bernstein_min_samples(m, n, mu, tau, delta, eps0));
    zeros += ',';
    zeros += format_double(tau / unit);
    zeros += '\n';
  }

  return {std::move(onset), std::move(spike), std::move(zeros)};
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(trim(part));
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  std::optional<std::size_t> c_min, c_max, c_points;

  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got '" + line +
                                  "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) throw std::invalid_argument("config: empty value for " + key);

    if (key == "m") cfg.m = std::stoull(val);
    else if (key == "n") cfg.n = std::stoull(val);
    else if (key == "family") cfg.family = val;
    else if (key == "mu") cfg.mu_absolute = std::stod(val);
    else if (key == "mu_factor") { cfg.mu_factor = std::stod(val); cfg.mu_absolute.reset(); }
    else if (key == "trials") cfg.trials_per_c = std::stoull(val);
    else if (key == "delta") cfg.delta = std::stod(val);
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "out_dir") cfg.out_dir = val;
    else if (key == "c_min") c_min = std::stoull(val);
    else if (key == "c_max") c_max = std::stoull(val);
    else if (key == "c_points") c_points = std::stoull(val);
    else if (key == "c_grid") {
      cfg.c_grid.clear();
      for (const std::string& p : split(val, ','))
        cfg.c_grid.push_back(std::stoull(p));
    } else if (key == "strategies") {
      cfg.strategies.clear();
      for (const std::string& p : split(val, ','))
        cfg.strategies.push_back(strategy_from_name(p));
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }

  if (c_min || c_max || c_points) {
    const std::size_t lo = c_min.value_or(cfg.n);
    const std::size_t hi = c_max.value_or(cfg.m);
    const std::size_t pts = c_points.value_or(25);
    cfg.c_grid = geometric_grid(lo, hi, pts);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path,
                                   const ExperimentConfig& base) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str(), base);
}

std::vector<TrialRecord> run_sweep_with_outputs(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const fs::path out(config.out_dir);
  fs::create_directories(out / "tables");
  fs::create_directories(out / "plots");

  const std::vector<TrialRecord> records = run_sweep(config);

  {
    std::ofstream f(out / "records.csv");
    f << records_csv(records);
  }
  {
    std::ofstream f(out / "summary.csv");
    f << "strategy,c,trials,deficient,median_kappa\n";
    for (const SummaryRow& s : summarize(records)) {
      f << strategy_name(s.strategy) << ',' << s.c << ',' << s.trials << ','
        << s.deficient << ',';
      if (s.median_kappa) f << format_double(*s.median_kappa);
      f << '\n';
    }
  }

  const ReferenceTables tables = make_tables();
  { std::ofstream f(out / "tables" / "onset.csv"); f << tables.onset_csv; }
  { std::ofstream f(out / "tables" / "spike.csv"); f << tables.spike_csv; }
  { std::ofstream f(out / "tables" / "zeros.csv"); f << tables.zeros_csv; }

  const std::vector<std::size_t> grid = [&] {
    std::vector<std::size_t> g;
    for (const TrialRecord& r : records)
      if (g.empty() || g.back() != r.c) {
        if (std::find(g.begin(), g.end(), r.c) == g.end()) g.push_back(r.c);
      }
    std::sort(g.begin(), g.end());
    return g;
  }();
  const std::vector<BoundCurvePoint> curve = bound_curve(config, grid);

  for (const SampleStrategy s : config.strategies) {
    const std::string name = strategy_name(s);
    const OverlaySvg overlay = overlay_bound(
        records, s, curve, "condition numbers, " + name + " sampling");
    {
      std::ofstream f(out / "plots" / ("kappa_" + name + ".svg"));
      f << overlay.svg;
    }
    if (!overlay.curve_present)
      std::cerr << "note: guarantee curve not evaluable for " << name
                << " on this grid\n";
    const std::string dsvg = deficiency_svg(
        records, s, "rank-deficiency rate, " + name + " sampling");
    if (!dsvg.empty()) {
      std::ofstream f(out / "plots" / ("deficiency_" + name + ".svg"));
      f << dsvg;
    }
  }
  return records;
}

}  // namespace rowsample
