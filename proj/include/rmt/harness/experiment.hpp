#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmt/harness/config.hpp"
#include "rmt/laws.hpp"
#include "rmt/spectra.hpp"

namespace rmt::harness {

struct RunOptions {
  int threads = 1;
  /// Wall-clock time goes into the report only when asked, so that reports
  /// stay byte-identical across reruns by default.
  bool record_runtime = false;
};

/// A law tabulated on a grid, as written to law.csv.
struct LawGrid {
  std::vector<double> x;
  std::vector<double> density;
  std::vector<double> cdf;
};

/// The limit law a configuration is compared against.
struct Prediction {
  std::string family = "none";  // mp | sc | genmp | none
  std::string basis = "none";   // smooth_kernel | nonsmooth_kernel | semicircle | explicit | none
  CdfFunction cdf;              // empty when family == "none"
  LawGrid grid;
  std::map<std::string, double> params;
  std::optional<double> mean;  // mean of the law
  double solver_max_residual = 0.0;
  int solver_max_iterations = 0;
};

/// Total over kernel variants: every configuration maps to exactly one family.
/// Throws SolverFailure / InversionQualityError from the generalized-MP path.
Prediction predict_law(const ExperimentConfig& config);

/// alpha_p used to centre E in the semi-high-dimensional regime.
Estimate config_alpha_p(const ExperimentConfig& config);

struct W2Pair {
  int i = 0;
  int j = 0;
  double w2 = 0.0;
};

struct ComparisonReport {
  ExperimentConfig config;
  std::string status = "ok";  // ok | solver_failure | inversion_quality
  std::string message;
  std::string prediction = "none";
  std::string basis = "none";
  std::vector<double> per_trial_ks;
  std::optional<double> pooled_ks;
  std::vector<W2Pair> w2_pairs;
  std::map<std::string, double> law_params;
  double solver_max_residual = 0.0;
  int solver_max_iterations = 0;
  double pooled_mean = 0.0;
  double pooled_min = 0.0;
  double pooled_max = 0.0;
  std::optional<double> runtime_seconds;
  /// Additional comparisons (e.g. KS against alternative scales).
  std::map<std::string, double> supplementary;
};

struct ExperimentResult {
  ComparisonReport report;
  std::vector<EmpiricalSpectrum> trials;
  EmpiricalSpectrum pooled;
  Histogram histogram;
  LawGrid law;
};

/// Spectrum of M (proportional) or E (semi_high_dim) for each trial; trial t
/// uses seed derive_seed(master_seed, t). Results are ordered by trial index
/// whatever the thread count.
std::vector<EmpiricalSpectrum> simulate_trials(const ExperimentConfig& config, int threads = 1);

/// Simulates, pools and compares. Solver and inversion failures are recorded
/// in the report (status != "ok") rather than thrown.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// histogram.csv, law.csv and report.json under `directory` (created).
void write_artifacts(const ExperimentResult& result, const std::string& directory);

/// 0 for status ok, 3 for solver or inversion failures.
int exit_code(const ComparisonReport& report);

std::string report_to_json(const ComparisonReport& report);
ComparisonReport report_from_json(const std::string& text);

// Figures ----------------------------------------------------------------------------------

struct FigureOptions {
  int p = 200;
  int n = 500;
  double sigma = 1.0;
  int trials = 5;
  std::uint64_t seed = 20240601;
  int histogram_bins = 60;
  std::string out_dir;  // empty: nothing written
  RunOptions run;
};

struct FigurePanel {
  std::string label;
  ExperimentResult result;
  std::map<std::string, double> metrics;
};

/// Indicator kernel at r(beta) for each beta (+inf gives the full graph),
/// compared with the generalized MP law; MP(p/n, sigma^2) written as overlay.
std::vector<FigurePanel> figure1(const FigureOptions& options,
                                 std::vector<double> betas = {-0.1, 0.1, 0.3,
                                                              std::numeric_limits<double>::infinity()});

/// Gaussian kernel for each tau, compared with MP(p/n, alpha^2 sigma^2);
/// MP(p/n, sigma^2) and MP(p/n, alpha sigma^2) reported alongside.
std::vector<FigurePanel> figure2(const FigureOptions& options,
                                 std::vector<double> taus = {0.4, 0.7, 1.0, 1.3});

struct SemicircleOptions {
  int p = 400;
  int n = 20000;
  double sigma = 1.0;
  int trials = 3;
  std::uint64_t seed = 20240601;
  KernelConfig kernel{"indicator", std::nullopt, std::nullopt, std::nullopt, 0.0};
  int histogram_bins = 60;
  std::string out_dir;
  RunOptions run;
};

/// E = sqrt(n/p)(M - alpha_p sigma^2 I) against SC with w = beta_p sigma^2.
/// Throws std::invalid_argument when p^2 <= n.
ExperimentResult semicircle_experiment(const SemicircleOptions& options);

// Reduction diagnostics --------------------------------------------------------------------

struct DiagnosticsOptions {
  std::vector<std::pair<int, int>> sizes{{100, 250}, {200, 500}, {400, 1000}};
  KernelConfig kernel{"indicator", std::nullopt, std::nullopt, 0.1, std::nullopt};
  double sigma = 1.0;
  int seeds = 10;
  std::uint64_t master_seed = 20240601;
  int mc_conditional = 2000;
  std::string out_dir;
  RunOptions run;
};

struct DiagnosticsRow {
  int p = 0;
  int n = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double w2_m_mbar = 0.0;            // W2 between the spectra of M and M-bar
  double max_xi_prime_over_n = 0.0;  // max_i |sum_{j != i} (K_ij - xi_i)| / n
  double hoeffding_bound = 0.0;      // sqrt(6 log n / n)
  double xax_hs = 0.0;               // |X A X^T / n^2|_HS / sqrt(p)
};

struct DiagnosticsSummary {
  int p = 0;
  int n = 0;
  double median_w2 = 0.0;
  double median_xi_prime = 0.0;
  double median_xax_hs = 0.0;
  double fraction_within_bound = 0.0;
};

struct DiagnosticsResult {
  std::vector<DiagnosticsRow> rows;
  std::vector<DiagnosticsSummary> summaries;
  bool w2_decreasing = false;
  bool xi_prime_decreasing = false;
  double fraction_within_bound = 0.0;
  std::string verdict;
};

DiagnosticsResult diagnostics_reductions(const DiagnosticsOptions& options);

}  // namespace rmt::harness
