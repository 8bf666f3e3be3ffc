#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hessdamp/algorithms.hpp"
#include "hessdamp/dynamics.hpp"
#include "hessdamp/problem.hpp"
#include "hessdamp/prox.hpp"

namespace hessdamp {

// ---------------------------------------------------------------------------
// Rates and oscillations

enum class RateMode { poly, linear };

struct RateReport {
  double slope = 0.0;
  double intercept = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double residual = 0.0;  // RMS of the log-fit
  int points = 0;
  int oscillation_count = 0;
};

/// Least squares of log(value) against log(x) (poly) or x (linear) over
/// lo <= x <= hi. Needs at least 10 points; nonpositive values are an error.
RateReport rate_fit(const std::vector<double>& x, const std::vector<double>& value, RateMode mode, double lo,
                    double hi);

/// Number of strict interior local maxima.
int oscillation_count(const std::vector<double>& series);

// ---------------------------------------------------------------------------
// CSV and SVG

struct CsvRow {
  long index = 0;
  double t = 0.0;
  double f_gap = 0.0;
  double grad_norm = 0.0;
  double energy = 0.0;
};

std::vector<CsvRow> rows_from_trace(const Trace& trace);
std::vector<CsvRow> rows_from_trajectory(const std::vector<TrajectorySample>& samples);

/// Header `index,t,f_gap,grad_norm,energy`, %.17g, LF endings.
std::string csv_string(const std::vector<CsvRow>& rows);
void emit_csv(const std::vector<CsvRow>& rows, const std::string& path);
std::vector<CsvRow> parse_csv_string(const std::string& text);
std::vector<CsvRow> parse_csv(const std::string& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string xlabel = "k";
  std::string ylabel = "f - min f";
  bool log_x = true;
  bool log_y = true;
};

std::string svg_string(const std::vector<PlotSeries>& series, const PlotOptions& opts);
void emit_svg(const std::vector<PlotSeries>& series, const PlotOptions& opts, const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// ---------------------------------------------------------------------------
// Random instances

/// mt19937_64 with explicit transforms so instances do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  /// (0, 1), 53 random bits
  double uniform();
  /// Box-Muller
  double normal();
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct RlsInstance {
  std::string kind;
  Mat A;
  Vec y;
  ProxFriendlyFunction reg;
  Vec x_true;
};

// Regularizer weights are reg_scale times the dual norm of A^T y (the smallest weight with
// solution zero). The defaults are small on purpose: the composite problem then stays
// ill-conditioned and the sublinear regime lasts for thousands of iterations instead of
// collapsing into fast local linear convergence.

/// Standard normal A with unit rows, k-sparse +-1 truth, y = A x + 0.01 noise.
RlsInstance make_lasso(int m, int n, int sparsity, std::uint64_t seed, double reg_scale = 1e-4);
RlsInstance make_group_lasso(int m, int n, int group_size, int active_groups, std::uint64_t seed,
                             double reg_scale = 1e-5);
/// Piecewise constant truth with `jumps` breakpoints.
RlsInstance make_tv(int m, int n, int jumps, std::uint64_t seed, double reg_scale = 1e-7);
/// N x N matrix of rank r observed through m random projections.
RlsInstance make_nuclear(int N, int rank, int m, std::uint64_t seed, double reg_scale = 1e-5);

// ---------------------------------------------------------------------------
// Experiment configuration

struct ProblemConfig {
  std::string type;  // quadratic | lasso | group-lasso | tv-denoise | nuclear
  std::vector<double> eigenvalues;
  std::optional<double> basis_angle;  // 2-D rotation of the eigenbasis
  std::vector<double> x0;
  int m = 0, n = 0, sparsity = 0, group_size = 0, active_groups = 0, jumps = 0, N = 0, rank = 0;
  std::uint64_t seed = 0;
  double reg_scale = 0.0;  // 0 keeps the generator default
  bool operator==(const ProblemConfig&) const = default;
};

struct AlgorithmConfig {
  std::string type;  // igahd | fista | ipahd-sc | igahd-sc | din-avd | dyn-sc
  double alpha = 3.0;
  double beta = 0.0;
  double beta_exp = 0.0;  // din-avd: beta(t) = beta t^beta_exp
  double b = 1.0;
  double b_exp = 0.0;  // din-avd: b(t) = b t^b_exp
  double s = 0.0;      // 0 means 1/L (0.99/|A|^2 in the RLS metric)
  double mu = 0.0;
  double t0 = 1.0;
  double tol = 1e-10;
  bool unchecked = false;
  bool operator==(const AlgorithmConfig&) const = default;
};

struct OutputSpec {
  std::string kind;  // csv | svg | report
  std::string path;
  bool operator==(const OutputSpec&) const = default;
};

struct ExperimentConfig {
  std::string name;
  ProblemConfig problem;
  AlgorithmConfig algorithm;
  std::optional<long> iterations;
  std::optional<double> time;
  std::vector<OutputSpec> outputs;
  std::uint64_t seed = 0;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict parser: unknown keys and missing required keys throw ConfigError with a JSON path.
ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

struct RunResult {
  std::vector<CsvRow> rows;
  RateReport rate;
  std::vector<std::string> written;
};

/// Checks hypotheses without running; throws ConfigError on violation.
void validate_config(const ExperimentConfig& cfg);
/// Runs and writes the requested outputs under outdir.
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& outdir);

// ---------------------------------------------------------------------------
// Pinned reproductions

struct Fig1Result {
  std::vector<TrajectorySample> avd, din_avd;  // beta = 0 and beta = 1
  int osc_avd = 0, osc_din = 0;
};
/// f = (x1^2 + 1000 x2^2)/2, alpha = 3.1, x(1) = (1,1), v(1) = 0, samples every 1e-3 on [1, 30].
Fig1Result run_fig1(double dt = 1e-3, double T = 30.0);

struct Fig2Case {
  std::string label;
  DampedSystemSpec spec;
  std::vector<TrajectorySample> samples;
  bool growth_ok = false;       // G2 and G3 on every sample
  double max_certificate = 0;   // max delta(t) f_gap(t) / E(t0)
  RateReport rate;              // f_gap on [10, 100]
};
/// The four coefficient cases with alpha = 5 on f = (x1 + x2)^2 / 2, x(2) = (1,1), v(2) = 0, T = 100.
std::vector<Fig2Case> run_fig2(double T = 100.0);

struct RlsResult {
  std::string kind;
  RlsInstance instance;
  ReferenceOptimum reference;
  Trace igahd, fista;
  RateReport rate_igahd, rate_fista;
  int osc_igahd = 0, osc_fista = 0;  // first 500 iterations
};
/// kind: l1 | group | tv | nuclear. alpha = 3, beta = 0.5, metric step 0.99/|A|^2, 2000 iterations.
RlsResult run_rls(const std::string& kind, int iterations = 2000);
RlsInstance pinned_rls_instance(const std::string& kind);

/// Writes CSV/SVG/report files for a reproduce target; returns the written paths.
std::vector<std::string> reproduce(const std::string& target, const std::string& outdir);
const std::vector<std::string>& reproduce_targets();

/// HESSDAMP_OUT when set, otherwise the fallback.
std::string output_dir(const std::string& fallback);

}  // namespace hessdamp
