// Command-line front end for the random-matrix laboratory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmt/harness/artifacts.hpp"
#include "rmt/harness/experiment.hpp"

namespace {

using namespace rmt;
using namespace rmt::harness;

constexpr int kExitInvalidConfig = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitCheckBreach = 4;

constexpr double kMpThreshold = 0.08;
constexpr double kGeneralizedThreshold = 0.10;
constexpr double kMeanTolerance = 0.05;

struct Globals {
  int threads = 1;
  bool check = false;
  bool record_runtime = false;

  RunOptions run() const { return {threads, record_runtime}; }
};

void print_report(const std::string& label, const ComparisonReport& r) {
  std::printf("%-12s prediction=%-5s status=%s", label.c_str(), r.prediction.c_str(), r.status.c_str());
  if (r.pooled_ks) std::printf(" pooled_ks=%.4f", *r.pooled_ks);
  std::printf(" mean=%.5f max=%.5f", r.pooled_mean, r.pooled_max);
  if (r.runtime_seconds) std::printf(" runtime=%.2fs", *r.runtime_seconds);
  std::printf("\n");
  if (!r.message.empty()) std::printf("  %s\n", r.message.c_str());
}

int status_code(bool solver_failed, bool breached, bool check) {
  if (solver_failed) return kExitSolverFailure;
  if (check && breached) return kExitCheckBreach;
  return 0;
}

bool ks_breached(const ComparisonReport& r) {
  if (!r.pooled_ks) return false;
  const double limit = r.prediction == "genmp" ? kGeneralizedThreshold : kMpThreshold;
  return *r.pooled_ks > limit;
}

int run_simulate(const Globals& g, const std::string& config_path, const std::string& out) {
  auto config = load_config(config_path);
  if (!out.empty()) config.output_dir = out;
  const auto start = std::chrono::steady_clock::now();
  const auto result = run_experiment(config, g.run());
  write_artifacts(result, config.output_dir);
  print_report("simulate", result.report);
  std::printf("wall time %.2fs, artifacts in %s\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(),
              config.output_dir.c_str());
  return status_code(result.report.status != "ok", ks_breached(result.report), g.check);
}

int run_figure1(const Globals& g, FigureOptions o, const std::vector<double>& betas) {
  o.run = g.run();
  const auto panels = figure1(o, betas);
  bool failed = false;
  bool breached = false;
  for (const auto& panel : panels) {
    const auto& r = panel.result.report;
    print_report(panel.label, r);
    failed = failed || r.status != "ok";
    breached = breached || ks_breached(r);
    if (panel.metrics.count("predicted_mean")) {
      const double ratio = r.pooled_mean / panel.metrics.at("predicted_mean");
      std::printf("  mean / (sigma^2 E[zeta]) = %.4f\n", ratio);
      breached = breached || std::abs(ratio - 1.0) > kMeanTolerance;
    }
  }
  return status_code(failed, breached, g.check);
}

int run_figure2(const Globals& g, FigureOptions o, const std::vector<double>& taus) {
  o.run = g.run();
  const auto panels = figure2(o, taus);
  bool failed = false;
  bool breached = false;
  for (const auto& panel : panels) {
    const auto& r = panel.result.report;
    print_report(panel.label, r);
    std::printf("  alpha=%.6f ks(alpha scale)=%.4f ks(sample covariance)=%.4f\n", panel.metrics.at("alpha"),
                panel.metrics.count("pooled_ks_alpha_scale") ? panel.metrics.at("pooled_ks_alpha_scale") : NAN,
                panel.metrics.count("pooled_ks_sample_covariance")
                    ? panel.metrics.at("pooled_ks_sample_covariance")
                    : NAN);
    failed = failed || r.status != "ok";
    breached = breached || ks_breached(r);
  }
  return status_code(failed, breached, g.check);
}

int run_semicircle(const Globals& g, SemicircleOptions o) {
  o.run = g.run();
  const auto result = semicircle_experiment(o);
  print_report("semicircle", result.report);
  return status_code(result.report.status != "ok", ks_breached(result.report), g.check);
}

int run_diagnostics(const Globals& g, DiagnosticsOptions o) {
  o.run = g.run();
  const auto result = diagnostics_reductions(o);
  for (const auto& s : result.summaries)
    std::printf("p=%-4d n=%-5d median W2=%.5f median max|xi'|/n=%.5f median |XAX'|=%.5f within bound=%.2f\n",
                s.p, s.n, s.median_w2, s.median_xi_prime, s.median_xax_hs, s.fraction_within_bound);
  std::printf("verdict: %s\n", result.verdict.c_str());
  const bool breached = !result.w2_decreasing || result.fraction_within_bound < 0.95;
  return status_code(false, breached, g.check);
}

struct LawOptions {
  std::string type = "mp";
  double c = 0.4;
  double scale = 1.0;
  double variance = 1.0;
  double sigma = 1.0;
  double z_alpha = 0.0;
  std::optional<double> x_lo;
  std::optional<double> x_hi;
  int points = 600;
  std::string out = "law.csv";
};

int run_law(const LawOptions& o) {
  ExperimentConfig config;
  config.sigma = o.sigma;
  config.law.type = o.type;
  config.law.c = o.c;
  config.stieltjes.points = o.points;
  config.stieltjes.x_lo = o.x_lo;
  config.stieltjes.x_hi = o.x_hi;
  if (o.type == "mp") {
    config.law.scale = o.scale;
  } else if (o.type == "sc") {
    config.regime = Regime::semi_high_dim;
    config.law.variance = o.variance;
  } else if (o.type == "genmp") {
    config.law.z_alpha = o.z_alpha;
  } else {
    throw ConfigError("law --type must be mp, sc or genmp");
  }
  const auto prediction = predict_law(config);
  write_law_csv(prediction.grid, o.out);
  std::printf("%s law on %zu points, trapezoid mass %.6f, written to %s\n", o.type.c_str(),
              prediction.grid.x.size(), trapezoid_mass(prediction.grid), o.out.c_str());
  return 0;
}

void add_figure_options(CLI::App* cmd, FigureOptions& o) {
  cmd->add_option("--p", o.p, "Dimension");
  cmd->add_option("--n", o.n, "Sample size");
  cmd->add_option("--sigma", o.sigma, "Entry standard deviation");
  cmd->add_option("--trials", o.trials, "Pooled trials");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--bins", o.histogram_bins, "Histogram bins");
  cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of kernelized truncated covariance matrices"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads for trial-level parallelism")->check(CLI::PositiveNumber);
  app.add_flag("--check", g.check, "Apply acceptance thresholds; exit 4 on breach");
  app.add_flag("--record-runtime", g.record_runtime, "Store wall-clock time in report.json");

  std::string config_path;
  std::string simulate_out;
  auto* simulate = app.add_subcommand("simulate", "Run an experiment from a config file");
  simulate->add_option("--config", config_path, "Config file (key = value)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", simulate_out, "Override output_dir");

  FigureOptions fig1;
  fig1.out_dir = "rmt_out";
  std::vector<double> betas{-0.1, 0.1, 0.3, std::numeric_limits<double>::infinity()};
  auto* figure1_cmd = app.add_subcommand("figure1", "Indicator kernel at several radii");
  add_figure_options(figure1_cmd, fig1);
  figure1_cmd->add_option("--betas", betas, "Radius parameters (inf for the full graph)");

  FigureOptions fig2;
  fig2.out_dir = "rmt_out";
  std::vector<double> taus{0.4, 0.7, 1.0, 1.3};
  auto* figure2_cmd = app.add_subcommand("figure2", "Gaussian kernel at several bandwidths");
  add_figure_options(figure2_cmd, fig2);
  figure2_cmd->add_option("--taus", taus, "Bandwidths");

  SemicircleOptions sc;
  sc.out_dir = "rmt_out";
  std::optional<double> sc_radius, sc_beta, sc_z_alpha, sc_tau;
  auto* semicircle_cmd = app.add_subcommand("semicircle", "Semi-high-dimensional regime (p^2 > n)");
  semicircle_cmd->add_option("--p", sc.p, "Dimension");
  semicircle_cmd->add_option("--n", sc.n, "Sample size");
  semicircle_cmd->add_option("--sigma", sc.sigma, "Entry standard deviation");
  semicircle_cmd->add_option("--trials", sc.trials, "Pooled trials");
  semicircle_cmd->add_option("--seed", sc.seed, "Master seed");
  semicircle_cmd->add_option("--kernel", sc.kernel.variant, "constant | indicator | gaussian");
  semicircle_cmd->add_option("--radius", sc_radius, "Indicator radius");
  semicircle_cmd->add_option("--beta", sc_beta, "Indicator radius parameter beta");
  semicircle_cmd->add_option("--z-alpha", sc_z_alpha, "Indicator threshold z_alpha");
  semicircle_cmd->add_option("--tau", sc_tau, "Gaussian bandwidth");
  semicircle_cmd->add_option("--out", sc.out_dir, "Output directory")->capture_default_str();

  DiagnosticsOptions diag;
  diag.out_dir = "rmt_out/diagnostics";
  std::optional<double> diag_beta, diag_z_alpha;
  std::string diag_kernel = "indicator";
  auto* diagnostics_cmd = app.add_subcommand("diagnostics", "Reduction gaps over increasing sizes");
  diagnostics_cmd->add_option("--kernel", diag_kernel, "constant | indicator");
  diagnostics_cmd->add_option("--beta", diag_beta, "Indicator radius parameter beta");
  diagnostics_cmd->add_option("--z-alpha", diag_z_alpha, "Indicator threshold z_alpha");
  diagnostics_cmd->add_option("--sigma", diag.sigma, "Entry standard deviation");
  diagnostics_cmd->add_option("--seeds", diag.seeds, "Replicates per size");
  diagnostics_cmd->add_option("--seed", diag.master_seed, "Master seed");
  diagnostics_cmd->add_option("--mc-conditional", diag.mc_conditional, "Draws per conditional mean");
  diagnostics_cmd->add_option("--out", diag.out_dir, "Output directory")->capture_default_str();

  LawOptions law;
  auto* law_cmd = app.add_subcommand("law", "Tabulate a limit law without simulation");
  law_cmd->add_option("--type", law.type, "mp | sc | genmp")->check(CLI::IsMember({"mp", "sc", "genmp"}));
  law_cmd->add_option("--c", law.c, "Aspect ratio p/n");
  law_cmd->add_option("--scale", law.scale, "MP scale");
  law_cmd->add_option("--variance", law.variance, "Semicircle variance");
  law_cmd->add_option("--sigma", law.sigma, "Entry standard deviation (genmp)");
  law_cmd->add_option("--z-alpha", law.z_alpha, "Indicator threshold for the genmp zeta law");
  law_cmd->add_option("--x-lo", law.x_lo, "Grid start");
  law_cmd->add_option("--x-hi", law.x_hi, "Grid end");
  law_cmd->add_option("--points", law.points, "Grid points");
  law_cmd->add_option("--out", law.out, "Output CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (*simulate) return run_simulate(g, config_path, simulate_out);
    if (*figure1_cmd) return run_figure1(g, fig1, betas);
    if (*figure2_cmd) return run_figure2(g, fig2, taus);
    if (*semicircle_cmd) {
      sc.kernel.radius = sc_radius;
      sc.kernel.beta = sc_beta;
      sc.kernel.tau = sc_tau;
      sc.kernel.z_alpha = sc_z_alpha;
      if (sc.kernel.variant == "indicator" && !sc_radius && !sc_beta && !sc_z_alpha) sc.kernel.z_alpha = 0.0;
      return run_semicircle(g, sc);
    }
    if (*diagnostics_cmd) {
      diag.kernel = KernelConfig{diag_kernel, std::nullopt, std::nullopt, diag_beta, diag_z_alpha};
      if (diag_kernel == "indicator" && !diag_beta && !diag_z_alpha) diag.kernel.beta = 0.1;
      return run_diagnostics(g, diag);
    }
    if (*law_cmd) return run_law(law);
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const InversionQualityError& e) {
    std::cerr << "inversion failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
