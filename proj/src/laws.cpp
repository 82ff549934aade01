#include "rmt/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rmt/numerics.hpp"

namespace rmt {

// MP ---------------------------------------------------------------------------------------

MPLaw::MPLaw(double c_, double scale_) : c(c_), scale(scale_) {
  require(c > 0.0 && std::isfinite(c), "MPLaw: c must be positive");
  require(scale > 0.0 && std::isfinite(scale), "MPLaw: scale must be positive");
}

double MPLaw::lower_edge() const {
  const double t = 1.0 - std::sqrt(c);
  return scale * t * t;
}

double MPLaw::upper_edge() const {
  const double t = 1.0 + std::sqrt(c);
  return scale * t * t;
}

double MPLaw::density(double x) const {
  const double a = lower_edge();
  const double b = upper_edge();
  if (x <= a || x >= b) return 0.0;
  return std::sqrt((b - x) * (x - a)) / (2.0 * std::numbers::pi * scale * c * x);
}

double MPLaw::cdf(double x) const {
  const double a = lower_edge();
  const double b = upper_edge();
  const double point_mass = (x >= 0.0) ? atom() : 0.0;
  if (x >= b) return 1.0;
  if (x <= a) return point_mass;
  // x = mid - half cos(theta) turns sqrt((b - x)(x - a)) dx into half^2 sin^2(theta) dtheta.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double theta_x = std::acos(std::clamp((mid - x) / half, -1.0, 1.0));
  const double norm = 2.0 * std::numbers::pi * scale * c;
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double xt = mid - half * std::cos(theta);
    return half * half * s * s / (norm * xt);
  };
  const auto result = integrate_adaptive(integrand, 0.0, theta_x, 1e-13, 1e-13, 4);
  return std::clamp(point_mass + result.value, 0.0, 1.0);
}

Complex MPLaw::stieltjes(Complex z) const {
  const double a = lower_edge();
  const double b = upper_edge();
  // sqrt(z - a) sqrt(z - b) has its cut on [a, b] and grows like z.
  const Complex root = std::sqrt(z - a) * std::sqrt(z - b);
  return (scale * (1.0 - c) - z + root) / (2.0 * c * scale * z);
}

double mp_density(const MPLaw& law, double x) { return law.density(x); }
double mp_cdf(const MPLaw& law, double x) { return law.cdf(x); }
Complex mp_stieltjes(const MPLaw& law, Complex z) { return law.stieltjes(z); }

// SC ------------------------------------------------------------------------------------------

SCLaw::SCLaw(double variance_) : variance(variance_) {
  require(variance > 0.0 && std::isfinite(variance), "SCLaw: variance must be positive");
}

double SCLaw::radius() const { return 2.0 * std::sqrt(variance); }

double SCLaw::density(double x) const {
  const double r = radius();
  if (std::abs(x) >= r) return 0.0;
  return std::sqrt(r * r - x * x) / (2.0 * std::numbers::pi * variance);
}

double SCLaw::cdf(double x) const {
  const double r = radius();
  if (x <= -r) return 0.0;
  if (x >= r) return 1.0;
  const double u = x / r;
  return std::clamp(0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi, 0.0, 1.0);
}

Complex sqrt_upper(Complex w) {
  Complex root = std::sqrt(w);
  if (root.imag() < 0.0) root = -root;
  return root;
}

Complex SCLaw::stieltjes(Complex z) const {
  require(z.imag() > 0.0, "sc_stieltjes: z must lie in the upper half-plane");
  return (-z + sqrt_upper(z * z - 4.0 * variance)) / (2.0 * variance);
}

double sc_density(const SCLaw& law, double x) { return law.density(x); }
double sc_cdf(const SCLaw& law, double x) { return law.cdf(x); }
Complex sc_stieltjes(const SCLaw& law, Complex z) { return law.stieltjes(z); }

// Zeta ----------------------------------------------------------------------------------------

ZetaDistribution::ZetaDistribution(std::vector<double> values, std::vector<double> weights,
                                   ZetaProvenance provenance, std::string description)
    : values_(std::move(values)),
      weights_(std::move(weights)),
      provenance_(provenance),
      description_(std::move(description)) {
  require(!values_.empty() && values_.size() == weights_.size(),
          "ZetaDistribution: need matching non-empty values and weights");
  double total = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    double& v = values_[k];
    if (v < 0.0 && v > -1e-12) v = 0.0;
    if (v > 1.0 && v < 1.0 + 1e-12) v = 1.0;
    require(v >= 0.0 && v <= 1.0, "ZetaDistribution: atom outside [0, 1]");
    require(weights_[k] >= 0.0, "ZetaDistribution: negative weight");
    total += weights_[k];
  }
  require(std::abs(total - 1.0) <= 1e-9, "ZetaDistribution: weights must sum to one");
  for (double& w : weights_) w /= total;
}

ZetaDistribution ZetaDistribution::point_mass(double value) {
  return ZetaDistribution({value}, {1.0}, ZetaProvenance::point_mass, "point mass");
}

ZetaDistribution ZetaDistribution::from_samples(std::vector<double> samples, std::string description) {
  require(!samples.empty(), "ZetaDistribution::from_samples: no samples");
  std::vector<double> weights(samples.size(), 1.0 / static_cast<double>(samples.size()));
  return ZetaDistribution(std::move(samples), std::move(weights), ZetaProvenance::monte_carlo,
                          std::move(description));
}

double ZetaDistribution::moment(int k) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) sum += weights_[i] * std::pow(values_[i], k);
  return sum;
}

double ZetaDistribution::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

ZetaDistribution zeta_indicator(double z_alpha, int n_atoms) {
  require(n_atoms >= 16, "zeta_indicator: need at least 16 atoms");
  const auto rule = gauss_hermite(n_atoms);
  std::vector<double> values(rule.nodes.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    values[k] = normal_cdf((rule.nodes[k] + 2.0 * z_alpha) / std::sqrt(3.0));
  return ZetaDistribution(std::move(values), rule.weights, ZetaProvenance::closed_form_indicator,
                          "indicator z_alpha=" + std::to_string(z_alpha));
}

// d moments ------------------------------------------------------------------------------------

std::string_view to_string(Discrepancy d) {
  return d == Discrepancy::squared_difference ? "squared_difference" : "absolute_difference";
}

double evaluate(Discrepancy d, double x, double y) {
  const double t = x - y;
  return d == Discrepancy::squared_difference ? t * t : std::abs(t);
}

void DMoments::validate() const {
  require(m2 > 0.0, "DMoments: m2 must be positive");
  require(m2_1 >= 0.0 && m2_2 >= 0.0, "DMoments: variance components must be non-negative");
}

DMoments d_moments_monte_carlo(Discrepancy d, EntryLaw law, double sigma, int mc_samples,
                               std::uint64_t seed) {
  require(sigma > 0.0, "d_moments: sigma must be positive");
  require(mc_samples >= 4, "d_moments: need at least 4 samples");
  const int outer = std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(mc_samples)))));
  const int inner = std::max(2, mc_samples / outer);
  auto engine = make_engine(seed);
  Matrix first(1, outer);
  Matrix second(1, inner);
  fill_entries(first, law, sigma, engine);

  std::vector<double> cond_mean(outer), cond_var(outer), cond_abs3(outer);
  std::vector<double> values(static_cast<std::size_t>(outer) * inner);
  for (int k = 0; k < outer; ++k) {
    fill_entries(second, law, sigma, engine);
    double sum = 0.0;
    for (int j = 0; j < inner; ++j) {
      const double v = evaluate(d, first(0, k), second(0, j));
      values[static_cast<std::size_t>(k) * inner + j] = v;
      sum += v;
    }
    const double mean = sum / inner;
    double ss = 0.0;
    double abs3 = 0.0;
    for (int j = 0; j < inner; ++j) {
      const double dev = values[static_cast<std::size_t>(k) * inner + j] - mean;
      ss += dev * dev;
      abs3 += std::abs(dev * dev * dev);
    }
    cond_mean[k] = mean;
    cond_var[k] = ss / (inner - 1);
    cond_abs3[k] = abs3 / inner;
  }

  auto mean_of = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  auto se_of = [](const std::vector<double>& v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) / static_cast<double>(v.size()));
  };

  DMoments out;
  out.m1 = mean_of(cond_mean);
  out.m1_se = se_of(cond_mean, out.m1);
  out.m2_2 = mean_of(cond_var);
  out.m2_2_se = se_of(cond_var, out.m2_2);

  std::vector<double> centered_sq(outer);
  for (int k = 0; k < outer; ++k) centered_sq[k] = (cond_mean[k] - out.m1) * (cond_mean[k] - out.m1);
  // The spread of the estimated conditional means carries inner noise m2_2 / inner.
  const double raw_between = std::accumulate(centered_sq.begin(), centered_sq.end(), 0.0) / (outer - 1);
  out.m2_1 = std::max(0.0, raw_between - out.m2_2 / inner);
  out.m2_1_se = se_of(centered_sq, mean_of(centered_sq));

  std::vector<double> group_total(outer);
  for (int k = 0; k < outer; ++k) {
    double ss = 0.0;
    for (int j = 0; j < inner; ++j) {
      const double dev = values[static_cast<std::size_t>(k) * inner + j] - out.m1;
      ss += dev * dev;
    }
    group_total[k] = ss / inner;
  }
  const double total_count = static_cast<double>(outer) * inner;
  out.m2 = mean_of(group_total) * total_count / (total_count - 1.0);
  out.m2_se = se_of(group_total, mean_of(group_total));
  out.m3 = mean_of(cond_abs3);
  out.closed_form = false;
  out.validate();
  return out;
}

DMoments d_moments(Discrepancy d, EntryLaw law, double sigma, int mc_samples, std::uint64_t seed) {
  require(sigma > 0.0, "d_moments: sigma must be positive");
  if (d == Discrepancy::squared_difference && law == EntryLaw::gaussian) {
    const double s2 = sigma * sigma;
    DMoments out;
    out.m1 = 2.0 * s2;
    out.m2 = 8.0 * s2 * s2;
    out.m2_1 = 2.0 * s2 * s2;
    out.m2_2 = 6.0 * s2 * s2;
    // d - E[d | W1] = sigma^2 (b^2 - 2ab - 1) for standard a, b.
    const auto rule = gauss_hermite(64);
    double m3 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double a = rule.nodes[i];
        const double b = rule.nodes[j];
        m3 += rule.weights[i] * rule.weights[j] * std::pow(std::abs(b * b - 2.0 * a * b - 1.0), 3);
      }
    out.m3 = m3 * s2 * s2 * s2;
    out.closed_form = true;
    return out;
  }
  return d_moments_monte_carlo(d, law, sigma, mc_samples, seed);
}

ZetaDistribution zeta_general(const std::function<double(double)>& phi_tilde,
                              const DMoments& moments, int n_outer, int n_inner) {
  moments.validate();
  require(n_outer >= 1 && n_inner >= 1, "zeta_general: node counts must be positive");
  const double a = std::sqrt(moments.m2_1 / moments.m2);
  const double b = std::sqrt(moments.m2_2 / moments.m2);
  auto checked = [&](double t) {
    const double value = phi_tilde(t);
    if (!(value >= 0.0 && value <= 1.0))
      throw ContractViolation("zeta_general: phi_tilde returned a value outside [0, 1]");
    return value;
  };
  const auto outer = gauss_hermite(n_outer);
  std::vector<double> values(outer.nodes.size());
  constexpr double tail = 10.0;  // N(0,1) mass beyond 10 is ~1.5e-23
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double shift = a * outer.nodes[k];
    if (b == 0.0) {
      values[k] = checked(shift);
      continue;
    }
    auto integrand = [&](double t) { return checked(shift + b * t) * normal_pdf(t); };
    const auto r = integrate_adaptive(integrand, -tail, tail, 1e-13, 0.0, n_inner, 20000);
    values[k] = std::clamp(r.value, 0.0, 1.0);
  }
  return ZetaDistribution(std::move(values), outer.weights, ZetaProvenance::quadrature,
                          "quadrature " + std::to_string(n_outer) + "x" + std::to_string(n_inner));
}

std::vector<double> linspace(double lo, double hi, int points) {
  require(points >= 2, "linspace: need at least two points");
  std::vector<double> xs(points);
  const double step = (hi - lo) / (points - 1);
  for (int k = 0; k < points; ++k) xs[k] = lo + k * step;
  xs.back() = hi;
  return xs;
}

}  // namespace rmt
