#include "rmt/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <memory>
#include <thread>

#include "rmt/harness/artifacts.hpp"
#include "rmt/random.hpp"

namespace rmt::harness {

namespace {

// Auxiliary streams live far above any trial index.
constexpr std::uint64_t kAuxStream = 1ULL << 40;

template <typename Body>
void parallel_for(int count, int threads, Body&& body) {
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

LawGrid tabulate(const std::vector<double>& xs, const std::function<double(double)>& density,
                 const CdfFunction& cdf) {
  LawGrid grid;
  grid.x = xs;
  for (double x : xs) {
    grid.density.push_back(density(x));
    grid.cdf.push_back(cdf(x));
  }
  return grid;
}

std::vector<double> grid_for(const ExperimentConfig& config, double lo, double hi) {
  return linspace(config.stieltjes.x_lo.value_or(lo), config.stieltjes.x_hi.value_or(hi),
                  config.stieltjes.points);
}

Prediction mp_prediction(const ExperimentConfig& config, const MPLaw& law) {
  Prediction pred;
  pred.family = "mp";
  pred.cdf = [law](double x) { return law.cdf(x); };
  const double b = law.upper_edge();
  pred.grid = tabulate(grid_for(config, -0.05 * b, 1.1 * b), [law](double x) { return law.density(x); },
                       pred.cdf);
  pred.mean = law.scale;
  pred.params["c"] = law.c;
  pred.params["scale"] = law.scale;
  pred.params["lower_edge"] = law.lower_edge();
  pred.params["upper_edge"] = b;
  return pred;
}

Prediction sc_prediction(const ExperimentConfig& config, const SCLaw& law) {
  Prediction pred;
  pred.family = "sc";
  pred.cdf = [law](double x) { return law.cdf(x); };
  const double r = law.radius();
  pred.grid = tabulate(grid_for(config, -1.1 * r, 1.1 * r), [law](double x) { return law.density(x); },
                       pred.cdf);
  pred.mean = 0.0;
  pred.params["variance"] = law.variance;
  pred.params["radius"] = r;
  return pred;
}

ZetaDistribution config_zeta(const ExperimentConfig& config, const KernelSpec& kernel,
                             std::map<std::string, double>& params) {
  if (config.law.z_alpha) {
    params["z_alpha"] = *config.law.z_alpha;
    return zeta_indicator(*config.law.z_alpha);
  }
  if (!kernel.is_indicator())
    throw ConfigError("config: genmp prediction needs an indicator kernel or law.z_alpha");
  const double radius = std::get<KernelSpec::Indicator>(kernel.variant()).radius;
  const double z = indicator_z_alpha(radius, config.p, config.sigma);
  params["z_alpha"] = z;
  params["radius"] = radius;
  if (config.entry_law == EntryLaw::gaussian) return zeta_indicator(z);

  // Other entry laws: step profile at the standardized threshold.
  const auto moments = d_moments(Discrepancy::squared_difference, config.entry_law, config.sigma,
                                 config.mc_samples, derive_seed(config.master_seed, kAuxStream + 2));
  const double p = config.p;
  const double t0 = (radius * radius - p * moments.m1) / std::sqrt(p * moments.m2);
  params["d_m1"] = moments.m1;
  params["d_m2"] = moments.m2;
  params["d_m2_1"] = moments.m2_1;
  params["d_m2_2"] = moments.m2_2;
  params["threshold"] = t0;
  return zeta_general([t0](double t) { return t <= t0 ? 1.0 : 0.0; }, moments);
}

Prediction genmp_prediction(const ExperimentConfig& config, const KernelSpec& kernel, double c) {
  Prediction pred;
  pred.family = "genmp";
  const auto zeta = config_zeta(config, kernel, pred.params);
  const double sigma = config.sigma;
  const double b = sigma * sigma * zeta.max_value() * std::pow(1.0 + std::sqrt(c), 2);
  const auto xs = grid_for(config, -0.05 * b, 1.1 * b);

  const GeneralizedMPLaw law{c, sigma, zeta, {}};
  auto stats = std::make_shared<std::pair<double, int>>(0.0, 0);
  StieltjesFunction s_fn = [law, stats](Complex z) {
    const auto point = solve_nonsmooth_stieltjes(z, law.c, law.sigma, law.zeta, law.options);
    stats->first = std::max(stats->first, point.residual);
    stats->second = std::max(stats->second, point.iterations);
    return point.s;
  };
  const auto inversion = stieltjes_invert_refined(s_fn, xs, config.stieltjes.v_schedule);
  const double atom = c > 1.0 ? estimate_atom_at_zero(s_fn) : 0.0;
  auto cdf = std::make_shared<GeneralizedMpCdf>(generalized_mp_cdf(xs, inversion.density, atom));

  pred.cdf = [cdf](double x) { return (*cdf)(x); };
  pred.grid.x = xs;
  pred.grid.density = inversion.density;
  for (double x : xs) pred.grid.cdf.push_back((*cdf)(x));
  pred.mean = sigma * sigma * zeta.mean();
  pred.solver_max_residual = stats->first;
  pred.solver_max_iterations = stats->second;
  pred.params["c"] = c;
  pred.params["sigma"] = sigma;
  pred.params["zeta_mean"] = zeta.mean();
  pred.params["zeta_max"] = zeta.max_value();
  pred.params["v"] = inversion.v;
  pred.params["inversion_stability"] = inversion.stability;
  pred.params["raw_mass"] = cdf->raw_mass();
  pred.params["atom"] = atom;
  return pred;
}

// alpha in the smooth-kernel limit law: exact for constant and full-graph
// kernels, the p -> infinity limit for the Gaussian kernel, alpha_p otherwise.
double smooth_alpha(const ExperimentConfig& config, const KernelSpec& kernel) {
  if (kernel.is_constant()) return 1.0;
  if (kernel.is_gaussian())
    return gaussian_kernel_alpha_limit(config.sigma, std::get<KernelSpec::Gaussian>(kernel.variant()).tau);
  return config_alpha_p(config).value;
}

bool full_graph(const KernelSpec& kernel) {
  return kernel.is_indicator() && std::isinf(std::get<KernelSpec::Indicator>(kernel.variant()).radius);
}

}  // namespace

Estimate config_alpha_p(const ExperimentConfig& config) {
  return alpha_p(make_kernel(config), config.entry_law, config.sigma, config.mc_samples,
                 derive_seed(config.master_seed, kAuxStream));
}

Prediction predict_law(const ExperimentConfig& config) {
  config.validate();
  const KernelSpec kernel = make_kernel(config);
  const double c = config.law.c.value_or(static_cast<double>(config.p) / config.n);
  const bool semi = config.regime == Regime::semi_high_dim;

  std::string family = config.law.type;
  std::string basis = "explicit";
  if (family == "auto") {
    if (semi) {
      family = "sc";
      basis = "semicircle";
    } else if (kernel.is_indicator() && !full_graph(kernel)) {
      family = "genmp";
      basis = "nonsmooth_kernel";
    } else {
      family = "mp";
      basis = "smooth_kernel";
    }
  }

  Prediction pred;
  if (family == "none") {
    pred.basis = "none";
    return pred;
  }
  if (family == "mp") {
    const double alpha = smooth_alpha(config, kernel);
    const double power = config.law.smooth_scale == "alpha" ? 1.0 : 2.0;
    const double scale = config.law.scale.value_or(std::pow(alpha, power) * config.sigma * config.sigma);
    pred = mp_prediction(config, MPLaw(c, scale));
    pred.params["alpha"] = alpha;
  } else if (family == "sc") {
    double variance;
    if (config.law.variance) {
      variance = *config.law.variance;
    } else {
      const auto beta_sq = beta_p_sq(kernel, config.entry_law, config.sigma, config.mc_samples,
                                     derive_seed(config.master_seed, kAuxStream + 1));
      const double s2 = config.sigma * config.sigma;
      variance = beta_sq.value * s2 * s2;
      pred.params["beta_p_sq"] = beta_sq.value;
      pred.params["beta_p_sq_se"] = beta_sq.std_error;
    }
    auto sc = sc_prediction(config, SCLaw(variance));
    sc.params.insert(pred.params.begin(), pred.params.end());
    pred = std::move(sc);
    if (semi) {
      const auto a = config_alpha_p(config);
      pred.params["alpha_p"] = a.value;
      pred.params["alpha_p_se"] = a.std_error;
    }
  } else {
    pred = genmp_prediction(config, kernel, c);
  }
  pred.basis = basis;
  if (kernel.is_gaussian()) pred.params["tau"] = std::get<KernelSpec::Gaussian>(kernel.variant()).tau;
  if (config.kernel.beta) pred.params["beta"] = *config.kernel.beta;
  return pred;
}

std::vector<EmpiricalSpectrum> simulate_trials(const ExperimentConfig& config, int threads) {
  config.validate();
  const KernelSpec kernel = make_kernel(config);
  const bool semi = config.regime == Regime::semi_high_dim;
  const double alpha = semi ? config_alpha_p(config).value : 0.0;
  std::vector<EmpiricalSpectrum> out(config.trials);
  parallel_for(config.trials, threads, [&](int t) {
    const auto seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(t));
    const auto x = sample_data_matrix(config.p, config.n, config.entry_law, config.sigma, seed);
    Matrix m = truncated_covariance(x, kernel);
    if (semi) m = normalized_matrix_E(m, config.n, alpha, config.sigma);
    out[t] = esd(symmetric_eigenvalues(m), SpectrumSource{config.p, config.n, kernel.tag(), seed});
  });
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  ExperimentResult result;
  auto& report = result.report;
  report.config = config;

  result.trials = simulate_trials(config, options.threads);
  result.pooled = pool(result.trials);
  result.histogram = histogram(result.pooled, config.histogram_bins);
  report.pooled_mean = result.pooled.mean();
  report.pooled_min = result.pooled.min();
  report.pooled_max = result.pooled.max();
  for (int i = 0; i < config.trials; ++i)
    for (int j = i + 1; j < config.trials; ++j)
      report.w2_pairs.push_back({i, j, wasserstein2(result.trials[i], result.trials[j])});

  Prediction pred;
  try {
    pred = predict_law(config);
  } catch (const SolverFailure& e) {
    report.status = "solver_failure";
    report.message = e.what();
    report.solver_max_residual = e.residual();
    report.solver_max_iterations = e.iterations();
  } catch (const InversionQualityError& e) {
    report.status = "inversion_quality";
    report.message = e.what();
  }

  if (report.status == "ok") {
    report.prediction = pred.family;
    report.basis = pred.basis;
    report.law_params = pred.params;
    report.solver_max_residual = pred.solver_max_residual;
    report.solver_max_iterations = pred.solver_max_iterations;
    result.law = pred.grid;
    if (pred.cdf) {
      for (const auto& trial : result.trials) report.per_trial_ks.push_back(ks_distance(trial, pred.cdf));
      report.pooled_ks = ks_distance(result.pooled, pred.cdf);
    }
    if (pred.mean) report.supplementary["predicted_mean"] = *pred.mean;

    // Smooth kernels: the same comparison at the other candidate scales.
    const KernelSpec kernel = make_kernel(config);
    if (pred.family == "mp" && kernel.is_gaussian() && !config.law.scale) {
      const double alpha = pred.params.at("alpha");
      const double c = pred.params.at("c");
      const double s2 = config.sigma * config.sigma;
      const MPLaw by_alpha(c, alpha * s2);
      const MPLaw by_alpha_sq(c, alpha * alpha * s2);
      const MPLaw sample_cov(c, s2);
      report.supplementary["pooled_ks_alpha_scale"] =
          ks_distance(result.pooled, [&](double x) { return by_alpha.cdf(x); });
      report.supplementary["pooled_ks_alpha_squared_scale"] =
          ks_distance(result.pooled, [&](double x) { return by_alpha_sq.cdf(x); });
      report.supplementary["pooled_ks_sample_covariance"] =
          ks_distance(result.pooled, [&](double x) { return sample_cov.cdf(x); });
    }
  }

  if (options.record_runtime)
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

int exit_code(const ComparisonReport& report) { return report.status == "ok" ? 0 : 3; }

// Figures ----------------------------------------------------------------------------------

namespace {

ExperimentConfig figure_config(const FigureOptions& o) {
  ExperimentConfig c;
  c.p = o.p;
  c.n = o.n;
  c.sigma = o.sigma;
  c.trials = o.trials;
  c.master_seed = o.seed;
  c.histogram_bins = o.histogram_bins;
  return c;
}

std::string label_for(const std::string& prefix, double value) { return prefix + "_" + format_double(value); }

}  // namespace

std::vector<FigurePanel> figure1(const FigureOptions& options, std::vector<double> betas) {
  std::vector<FigurePanel> panels;
  const auto root = std::filesystem::path(options.out_dir) / "figure1";
  const double c = static_cast<double>(options.p) / options.n;
  const MPLaw reference(c, options.sigma * options.sigma);
  for (double beta : betas) {
    auto config = figure_config(options);
    config.kernel.variant = "indicator";
    config.kernel.beta = beta;
    FigurePanel panel;
    panel.label = label_for("beta", beta);
    config.output_dir = (root / panel.label).string();
    panel.result = run_experiment(config, options.run);
    const auto& r = panel.result.report;
    panel.metrics["beta"] = beta;
    panel.metrics["z_alpha"] = beta_to_z_alpha(beta, options.p);
    panel.metrics["pooled_mean"] = r.pooled_mean;
    if (r.pooled_ks) panel.metrics["pooled_ks"] = *r.pooled_ks;
    if (r.supplementary.count("predicted_mean"))
      panel.metrics["predicted_mean"] = r.supplementary.at("predicted_mean");
    panel.metrics["ks_vs_sample_covariance_law"] =
        ks_distance(panel.result.pooled, [&](double x) { return reference.cdf(x); });
    if (!options.out_dir.empty()) write_artifacts(panel.result, config.output_dir);
    panels.push_back(std::move(panel));
  }
  if (!options.out_dir.empty()) {
    const double b = reference.upper_edge();
    write_law_csv(tabulate(linspace(-0.05 * b, 1.1 * b, 600), [&](double x) { return reference.density(x); },
                           [&](double x) { return reference.cdf(x); }),
                  (root / "mp_overlay.csv").string());
    write_summary_json(panels, (root / "summary.json").string());
  }
  return panels;
}

std::vector<FigurePanel> figure2(const FigureOptions& options, std::vector<double> taus) {
  std::vector<FigurePanel> panels;
  const auto root = std::filesystem::path(options.out_dir) / "figure2";
  const double c = static_cast<double>(options.p) / options.n;
  const double s2 = options.sigma * options.sigma;
  for (double tau : taus) {
    auto config = figure_config(options);
    config.kernel.variant = "gaussian";
    config.kernel.tau = tau;
    FigurePanel panel;
    panel.label = label_for("tau", tau);
    config.output_dir = (root / panel.label).string();
    panel.result = run_experiment(config, options.run);
    const auto& r = panel.result.report;
    const double alpha = gaussian_kernel_alpha_limit(options.sigma, tau);
    panel.metrics["tau"] = tau;
    panel.metrics["alpha"] = alpha;
    panel.metrics["alpha_p"] = config_alpha_p(config).value;
    if (r.pooled_ks) panel.metrics["pooled_ks"] = *r.pooled_ks;
    for (const auto& [key, value] : r.supplementary) panel.metrics[key] = value;
    panel.metrics["pooled_max"] = r.pooled_max;
    panel.metrics["edge_alpha_squared_scale"] = MPLaw(c, alpha * alpha * s2).upper_edge();
    panel.metrics["edge_alpha_scale"] = MPLaw(c, alpha * s2).upper_edge();
    if (!options.out_dir.empty()) {
      write_artifacts(panel.result, config.output_dir);
      for (const auto& [name, scale] : {std::pair{"mp_sample_covariance.csv", s2},
                                         std::pair{"mp_alpha_scale.csv", alpha * s2}}) {
        const MPLaw law(c, scale);
        const double b = law.upper_edge();
        write_law_csv(tabulate(linspace(-0.05 * b, 1.1 * b, 600), [&](double x) { return law.density(x); },
                               [&](double x) { return law.cdf(x); }),
                      (std::filesystem::path(config.output_dir) / name).string());
      }
    }
    panels.push_back(std::move(panel));
  }
  if (!options.out_dir.empty()) write_summary_json(panels, (root / "summary.json").string());
  return panels;
}

ExperimentResult semicircle_experiment(const SemicircleOptions& options) {
  require(static_cast<long long>(options.p) * options.p > options.n,
          "semicircle_experiment: needs p^2 > n");
  ExperimentConfig config;
  config.regime = Regime::semi_high_dim;
  config.p = options.p;
  config.n = options.n;
  config.sigma = options.sigma;
  config.kernel = options.kernel;
  config.trials = options.trials;
  config.master_seed = options.seed;
  config.histogram_bins = options.histogram_bins;
  config.output_dir = (std::filesystem::path(options.out_dir) / "semicircle").string();
  auto result = run_experiment(config, options.run);

  // The closed-form transform should solve w^2 s^2 + z s + 1 = 0.
  if (result.report.status == "ok" && result.report.law_params.count("variance")) {
    const SCLaw law(result.report.law_params.at("variance"));
    double residual = 0.0;
    for (double x : linspace(-1.5 * law.radius(), 1.5 * law.radius(), 301)) {
      const Complex z(x, 1e-2);
      const Complex s = law.stieltjes(z);
      residual = std::max(residual, std::abs(law.variance * s * s + z * s + 1.0));
    }
    result.report.supplementary["sc_stieltjes_residual"] = residual;
  }
  if (!options.out_dir.empty()) write_artifacts(result, config.output_dir);
  return result;
}

DiagnosticsResult diagnostics_reductions(const DiagnosticsOptions& options) {
  require(!options.sizes.empty(), "diagnostics_reductions: no sizes");
  require(options.seeds >= 1, "diagnostics_reductions: seeds must be at least 1");
  const int per_size = options.seeds;
  const int total = static_cast<int>(options.sizes.size()) * per_size;
  DiagnosticsResult out;
  out.rows.resize(total);

  parallel_for(total, options.run.threads, [&](int k) {
    const int size_index = k / per_size;
    const int replicate = k % per_size;
    const auto [p, n] = options.sizes[size_index];
    ExperimentConfig config;
    config.p = p;
    config.n = n;
    config.sigma = options.sigma;
    config.kernel = options.kernel;
    const KernelSpec kernel = make_kernel(config);
    const auto seed = derive_seed(derive_seed(options.master_seed, size_index), replicate);
    const auto x = sample_data_matrix(p, n, EntryLaw::gaussian, options.sigma, seed);
    const auto graph = build_graph_matrices(x, kernel);
    const Matrix m = truncated_covariance_rayleigh(x, graph);
    const auto bar = xi_bar_matrix(x, kernel, options.mc_conditional, derive_seed(seed, 1));

    DiagnosticsRow row;
    row.p = p;
    row.n = n;
    row.replicate = replicate;
    row.seed = seed;
    row.w2_m_mbar = wasserstein2(esd(symmetric_eigenvalues(m)), esd(symmetric_eigenvalues(bar.m_bar)));
    const Vector xi_prime = graph.degree - (n - 1.0) * bar.xi;
    row.max_xi_prime_over_n = xi_prime.cwiseAbs().maxCoeff() / n;
    row.hoeffding_bound = std::sqrt(6.0 * std::log(static_cast<double>(n)) / n);
    const Matrix xax = x.entries * graph.adjacency * x.entries.transpose() / (double(n) * n);
    row.xax_hs = xax.norm() / std::sqrt(static_cast<double>(p));
    out.rows[k] = row;
  });

  int within_total = 0;
  for (std::size_t s = 0; s < options.sizes.size(); ++s) {
    std::vector<double> w2, xi, xax;
    int within = 0;
    for (int r = 0; r < per_size; ++r) {
      const auto& row = out.rows[s * per_size + r];
      w2.push_back(row.w2_m_mbar);
      xi.push_back(row.max_xi_prime_over_n);
      xax.push_back(row.xax_hs);
      if (row.max_xi_prime_over_n <= row.hoeffding_bound) ++within;
    }
    within_total += within;
    out.summaries.push_back({options.sizes[s].first, options.sizes[s].second, median(w2), median(xi),
                             median(xax), static_cast<double>(within) / per_size});
  }
  out.fraction_within_bound = static_cast<double>(within_total) / total;
  out.w2_decreasing = true;
  out.xi_prime_decreasing = true;
  for (std::size_t s = 1; s < out.summaries.size(); ++s) {
    out.w2_decreasing = out.w2_decreasing && out.summaries[s].median_w2 < out.summaries[s - 1].median_w2;
    out.xi_prime_decreasing =
        out.xi_prime_decreasing && out.summaries[s].median_xi_prime < out.summaries[s - 1].median_xi_prime;
  }
  out.verdict = out.w2_decreasing && out.xi_prime_decreasing ? "decreasing" : "not decreasing";
  if (!options.out_dir.empty()) write_diagnostics_csv(out, options.out_dir);
  return out;
}

}  // namespace rmt::harness
