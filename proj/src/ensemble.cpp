#include "rmt/ensemble.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>

#include "rmt/numerics.hpp"

namespace rmt {

std::string_view to_string(EntryLaw law) {
  switch (law) {
    case EntryLaw::gaussian: return "gaussian";
    case EntryLaw::rademacher: return "rademacher";
    case EntryLaw::uniform_centered: return "uniform_centered";
  }
  return "unknown";
}

EntryLaw parse_entry_law(std::string_view name) {
  if (name == "gaussian") return EntryLaw::gaussian;
  if (name == "rademacher") return EntryLaw::rademacher;
  if (name == "uniform_centered") return EntryLaw::uniform_centered;
  throw std::invalid_argument("unknown entry law: " + std::string(name));
}

void fill_entries(Eigen::Ref<Matrix> out, EntryLaw law, double sigma, Engine& engine) {
  switch (law) {
    case EntryLaw::gaussian: {
      std::normal_distribution<double> dist(0.0, sigma);
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = dist(engine);
      break;
    }
    case EntryLaw::rademacher: {
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = (engine() >> 63) ? sigma : -sigma;
      break;
    }
    case EntryLaw::uniform_centered: {
      const double half_width = std::sqrt(3.0) * sigma;
      std::uniform_real_distribution<double> dist(-half_width, half_width);
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = dist(engine);
      break;
    }
  }
}

DataMatrix sample_data_matrix(int p, int n, EntryLaw law, double sigma, std::uint64_t seed) {
  require(p >= 1, "sample_data_matrix: p must be positive");
  require(n >= 1, "sample_data_matrix: n must be positive");
  require(sigma > 0.0 && std::isfinite(sigma), "sample_data_matrix: sigma must be positive");
  DataMatrix x;
  x.entries.resize(p, n);
  x.law = law;
  x.sigma = sigma;
  x.seed = seed;
  auto engine = make_engine(seed);
  fill_entries(x.entries, law, sigma, engine);
  return x;
}

// KernelSpec ------------------------------------------------------------------------

KernelSpec KernelSpec::constant(int p) {
  require(p >= 1, "kernel dimension must be positive");
  KernelSpec k(p, Constant{});
  k.alpha = 1.0;
  k.beta_sq = 1.0;
  k.lipschitz = 0.0;
  return k;
}

KernelSpec KernelSpec::indicator(int p, double radius) {
  require(p >= 1, "kernel dimension must be positive");
  require(radius >= 0.0, "indicator kernel radius must be non-negative");
  return KernelSpec(p, Indicator{radius});
}

KernelSpec KernelSpec::indicator_from_beta(int p, double beta, double sigma) {
  require(sigma > 0.0, "sigma must be positive");
  require(beta >= -2.0, "beta must be at least -2");
  if (std::isinf(beta)) return indicator(p, std::numeric_limits<double>::infinity());
  return indicator(p, std::sqrt((2.0 + beta) * sigma * sigma * p));
}

KernelSpec KernelSpec::indicator_from_z_alpha(int p, double z_alpha, double sigma) {
  require(sigma > 0.0, "sigma must be positive");
  if (std::isinf(z_alpha) && z_alpha > 0) return indicator(p, std::numeric_limits<double>::infinity());
  const double r2 = (2.0 * p + 2.0 * std::sqrt(2.0 * p) * z_alpha) * sigma * sigma;
  require(r2 >= 0.0, "z_alpha too negative: squared radius would be negative");
  return indicator(p, std::sqrt(r2));
}

KernelSpec KernelSpec::gaussian(int p, double tau) {
  require(p >= 1, "kernel dimension must be positive");
  require(tau > 0.0, "gaussian kernel bandwidth must be positive");
  KernelSpec k(p, Gaussian{tau});
  // Slope of 1 - exp(-r^2 / (2 p tau^2)) peaks at r = tau sqrt(p).
  k.lipschitz = std::exp(-0.5) / (std::sqrt(static_cast<double>(p)) * tau);
  return k;
}

KernelSpec KernelSpec::custom(int p, Custom fn) {
  require(p >= 1, "kernel dimension must be positive");
  require(static_cast<bool>(fn.fn), "custom kernel needs a function");
  return KernelSpec(p, std::move(fn));
}

std::string KernelSpec::tag() const {
  struct Visitor {
    std::string operator()(const Constant&) const { return "constant"; }
    std::string operator()(const Indicator&) const { return "indicator"; }
    std::string operator()(const Gaussian&) const { return "gaussian"; }
    std::string operator()(const Custom& c) const { return c.name; }
  };
  return std::visit(Visitor{}, variant_);
}

double KernelSpec::from_squared_distance(double squared_distance) const {
  if (is_constant()) return 1.0;
  if (const auto* ind = std::get_if<Indicator>(&variant_)) {
    if (std::isinf(ind->radius)) return 1.0;
    return squared_distance <= ind->radius * ind->radius ? 1.0 : 0.0;
  }
  if (const auto* g = std::get_if<Gaussian>(&variant_)) {
    return -std::expm1(-squared_distance / (2.0 * dimension_ * g->tau * g->tau));
  }
  throw std::logic_error("from_squared_distance: custom kernels are not radial");
}

double KernelSpec::operator()(const Eigen::Ref<const Vector>& x,
                              const Eigen::Ref<const Vector>& y) const {
  if (const auto* c = std::get_if<Custom>(&variant_)) {
    const double value = c->fn(x, y);
    if (!(value >= 0.0 && value <= 1.0))
      throw ContractViolation("custom kernel '" + c->name + "' returned a value outside [0, 1]");
    return value;
  }
  if (is_constant()) return 1.0;
  return from_squared_distance((x - y).squaredNorm());
}

double indicator_z_alpha(double radius, int p, double sigma) {
  return (radius * radius / (2.0 * sigma * sigma) - p) / std::sqrt(2.0 * p);
}

double beta_to_z_alpha(double beta, int p) {
  return beta * std::sqrt(static_cast<double>(p)) / (2.0 * std::numbers::sqrt2);
}

// Graph matrices ----------------------------------------------------------------------

GraphMatrices build_graph_matrices(const DataMatrix& x, const KernelSpec& kernel) {
  require(kernel.dimension() == x.p(), "build_graph_matrices: kernel dimension differs from p");
  const auto n = x.n();
  GraphMatrices g;
  g.adjacency = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double k = kernel(x.entries.col(i), x.entries.col(j));
      g.adjacency(i, j) = k;
      g.adjacency(j, i) = k;
    }
  }
  g.degree = g.adjacency.rowwise().sum();
  g.laplacian = laplacian_from_adjacency(g.adjacency);
  return g;
}

// Truncated covariance ---------------------------------------------------------------------

Matrix truncated_covariance_direct(const DataMatrix& x, const KernelSpec& kernel) {
  require(kernel.dimension() == x.p(), "truncated_covariance_direct: kernel dimension differs from p");
  const auto p = x.p();
  const auto n = x.n();
  Matrix m = Matrix::Zero(p, p);
  Vector diff(p);
  // The (i, j) and (j, i) terms coincide, so 1/(2n^2) over ordered pairs is
  // 1/n^2 over i < j.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double k = kernel(x.entries.col(i), x.entries.col(j));
      if (k == 0.0) continue;
      diff = x.entries.col(i) - x.entries.col(j);
      m.selfadjointView<Eigen::Lower>().rankUpdate(diff, k);
    }
  }
  m = m.selfadjointView<Eigen::Lower>();
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  return m / nn;
}

Matrix truncated_covariance_rayleigh(const DataMatrix& x, const GraphMatrices& graph) {
  require(graph.laplacian.rows() == x.n(), "truncated_covariance_rayleigh: graph size differs from n");
  return truncated_covariance_rayleigh(x.entries, graph.laplacian);
}

Matrix truncated_covariance(const DataMatrix& x, const KernelSpec& kernel, int block_size) {
  require(kernel.dimension() == x.p(), "truncated_covariance: kernel dimension differs from p");
  require(block_size >= 1, "truncated_covariance: block size must be positive");
  const auto& data = x.entries;
  const auto p = x.p();
  const auto n = x.n();
  const double nn = static_cast<double>(n) * static_cast<double>(n);

  if (kernel.is_constant()) {
    // L = nI - J.
    const Vector row_sum = data.rowwise().sum();
    Matrix m = static_cast<double>(n) * (data * data.transpose()) - row_sum * row_sum.transpose();
    m /= nn;
    return 0.5 * (m + m.transpose());
  }

  const Vector squared_norms = data.colwise().squaredNorm().transpose();
  Vector degree(n);
  Matrix accumulated = Matrix::Zero(p, p);
  Matrix block;
  Matrix block_times_xt;
  for (Eigen::Index start = 0; start < n; start += block_size) {
    const auto rows = std::min<Eigen::Index>(block_size, n - start);
    block.resize(rows, n);
    if (kernel.radial()) {
      block.noalias() = data.middleCols(start, rows).transpose() * data;
      for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
          const double d2 =
              std::max(0.0, squared_norms(start + r) + squared_norms(c) - 2.0 * block(r, c));
          block(r, c) = kernel.from_squared_distance(d2);
        }
      }
    } else {
      for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
          block(r, c) = kernel(data.col(start + r), data.col(c));
    }
    for (Eigen::Index r = 0; r < rows; ++r) block(r, start + r) = 0.0;
    degree.segment(start, rows) = block.rowwise().sum();
    block_times_xt.noalias() = block * data.transpose();
    accumulated.noalias() += data.middleCols(start, rows) * block_times_xt;
  }
  Matrix m = data * degree.asDiagonal() * data.transpose() - accumulated;
  m /= nn;
  return 0.5 * (m + m.transpose());
}

// Kernel moments ----------------------------------------------------------------------------

Estimate kernel_moment_monte_carlo(const KernelSpec& kernel, int power, EntryLaw law, double sigma,
                                   int mc_samples, std::uint64_t seed) {
  require(mc_samples >= 1, "Monte Carlo needs at least one sample");
  require(sigma > 0.0, "sigma must be positive");
  const int p = kernel.dimension();
  auto engine = make_engine(seed);
  Matrix pair(p, 2);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < mc_samples; ++k) {
    fill_entries(pair, law, sigma, engine);
    const double value = std::pow(kernel(pair.col(0), pair.col(1)), power);
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / mc_samples;
  const double var = mc_samples > 1 ? std::max(0.0, (sum_sq - mc_samples * mean * mean) / (mc_samples - 1)) : 0.0;
  return {mean, std::sqrt(var / mc_samples), false};
}

Estimate alpha_p(const KernelSpec& kernel, EntryLaw law, double sigma, int mc_samples,
                 std::uint64_t seed) {
  require(sigma > 0.0, "alpha_p: sigma must be positive");
  const double p = kernel.dimension();
  if (kernel.is_constant()) return {1.0, 0.0, true};
  if (law == EntryLaw::gaussian) {
    if (const auto* ind = std::get_if<KernelSpec::Indicator>(&kernel.variant())) {
      if (std::isinf(ind->radius)) return {1.0, 0.0, true};
      // |X_1 - X_2|^2 / (2 sigma^2) ~ chi^2_p.
      return {chi_square_cdf(ind->radius * ind->radius / (2.0 * sigma * sigma), p), 0.0, true};
    }
    if (const auto* g = std::get_if<KernelSpec::Gaussian>(&kernel.variant())) {
      const double s = sigma * sigma / (p * g->tau * g->tau);
      return {-std::expm1(-0.5 * p * std::log1p(2.0 * s)), 0.0, true};
    }
  }
  if (kernel.alpha) return {*kernel.alpha, 0.0, true};
  return kernel_moment_monte_carlo(kernel, 1, law, sigma, mc_samples, seed);
}

Estimate beta_p_sq(const KernelSpec& kernel, EntryLaw law, double sigma, int mc_samples,
                   std::uint64_t seed) {
  require(sigma > 0.0, "beta_p_sq: sigma must be positive");
  const double p = kernel.dimension();
  if (kernel.is_constant()) return {1.0, 0.0, true};
  // K^2 = K for a 0/1 kernel.
  if (kernel.is_indicator()) return alpha_p(kernel, law, sigma, mc_samples, seed);
  if (law == EntryLaw::gaussian) {
    if (const auto* g = std::get_if<KernelSpec::Gaussian>(&kernel.variant())) {
      // E(1 - e^{-tQ})^2 with the chi-square MGF E e^{-tQ} = (1 + 2s)^{-p/2}.
      const double s = sigma * sigma / (p * g->tau * g->tau);
      const double once = std::exp(-0.5 * p * std::log1p(2.0 * s));
      const double twice = std::exp(-0.5 * p * std::log1p(4.0 * s));
      return {1.0 - 2.0 * once + twice, 0.0, true};
    }
  }
  if (kernel.beta_sq) return {*kernel.beta_sq, 0.0, true};
  return kernel_moment_monte_carlo(kernel, 2, law, sigma, mc_samples, seed);
}

double gaussian_kernel_alpha_limit(double sigma, double tau) {
  return -std::expm1(-sigma * sigma / (tau * tau));
}

// Normalization ---------------------------------------------------------------------------

Matrix normalized_matrix_E(const Matrix& m, Eigen::Index n, double alpha_p, double sigma) {
  require(m.rows() == m.cols(), "normalized_matrix_E: M must be square");
  require(n >= 1, "normalized_matrix_E: n must be positive");
  const auto p = m.rows();
  if (p * p <= n)
    std::clog << "warning: normalized_matrix_E outside the semi-high-dimensional regime (p^2 <= n)\n";
  Matrix e = m;
  e.diagonal().array() -= alpha_p * sigma * sigma;
  return std::sqrt(static_cast<double>(n) / static_cast<double>(p)) * e;
}

Matrix normalized_matrix_E(const DataMatrix& x, const KernelSpec& kernel, double alpha_p,
                           double sigma) {
  return normalized_matrix_E(truncated_covariance(x, kernel), x.n(), alpha_p, sigma);
}

// Reduction diagnostics ---------------------------------------------------------------------

XiBar xi_bar_matrix(const DataMatrix& x, const KernelSpec& kernel, int mc_conditional,
                    std::uint64_t seed) {
  require(kernel.dimension() == x.p(), "xi_bar_matrix: kernel dimension differs from p");
  require(mc_conditional >= 100, "xi_bar_matrix: mc_conditional must be at least 100");
  const auto n = x.n();
  XiBar out;
  if (kernel.is_constant()) {
    out.xi = Vector::Ones(n);
  } else {
    Matrix fresh(x.p(), mc_conditional);
    auto engine = make_engine(seed);
    fill_entries(fresh, x.law, x.sigma, engine);
    Matrix values(n, mc_conditional);
    if (kernel.radial()) {
      const Vector gx = x.entries.colwise().squaredNorm().transpose();
      const Vector gv = fresh.colwise().squaredNorm().transpose();
      values.noalias() = x.entries.transpose() * fresh;
      for (Eigen::Index k = 0; k < mc_conditional; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
          values(i, k) = kernel.from_squared_distance(std::max(0.0, gx(i) + gv(k) - 2.0 * values(i, k)));
    } else {
      for (Eigen::Index k = 0; k < mc_conditional; ++k)
        for (Eigen::Index i = 0; i < n; ++i) values(i, k) = kernel(x.entries.col(i), fresh.col(k));
    }
    out.xi = values.rowwise().mean();
  }
  Matrix m = x.entries * out.xi.asDiagonal() * x.entries.transpose() / static_cast<double>(n);
  out.m_bar = 0.5 * (m + m.transpose());
  return out;
}

// Regimes ---------------------------------------------------------------------------------------

std::string_view to_string(Regime regime) {
  return regime == Regime::proportional ? "proportional" : "semi_high_dim";
}

Regime parse_regime(std::string_view name) {
  if (name == "proportional") return Regime::proportional;
  if (name == "semi_high_dim") return Regime::semi_high_dim;
  throw std::invalid_argument("unknown regime: " + std::string(name));
}

bool regime_satisfied(Regime regime, int p, int n, double target_c) {
  if (p < 1 || n < 1) return false;
  if (regime == Regime::semi_high_dim)
    return static_cast<long long>(p) * p > static_cast<long long>(n);
  const double ratio = static_cast<double>(p) / n;
  return std::abs(ratio - target_c) <= 0.1 * target_c;
}

}  // namespace rmt
