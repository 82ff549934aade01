#include <algorithm>
#include <cmath>
#include <numbers>

#include "rmt/laws.hpp"

namespace rmt {

namespace {

struct FixedPointTerms {
  Complex g;        // E[sigma^2 zeta / (1 + c sigma^2 zeta s)]
  Complex g_prime;  // d/ds of E[sigma^2 s zeta / (1 + c sigma^2 s zeta)]
};

FixedPointTerms terms(Complex s, double c, double sigma, const ZetaDistribution& zeta) {
  const double s2 = sigma * sigma;
  Complex g = 0.0;
  Complex g_prime = 0.0;
  const auto& values = zeta.values();
  const auto& weights = zeta.weights();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double a = s2 * values[k];
    const Complex denom = 1.0 + c * a * s;
    g += weights[k] * a / denom;
    g_prime += weights[k] * a / (denom * denom);
  }
  return {g, g_prime};
}

// F(s) = 1 + z s - s g(s); zero at the solution.
Complex residual_value(Complex s, Complex z, const FixedPointTerms& t) { return 1.0 + z * s - s * t.g; }

StieltjesPoint iterate(Complex z, double c, double sigma, const ZetaDistribution& zeta,
                       Complex start, double damping, const StieltjesOptions& options) {
  Complex s = start;
  double residual = std::abs(residual_value(s, z, terms(s, c, sigma, zeta)));
  for (int it = 1; it <= options.max_iterations; ++it) {
    const auto t = terms(s, c, sigma, zeta);
    const Complex mapped = 1.0 / (-z + t.g);
    const Complex next = (1.0 - damping) * s + damping * mapped;
    const double step = std::abs(next - s);
    s = next;
    residual = std::abs(residual_value(s, z, terms(s, c, sigma, zeta)));
    if (residual <= options.tolerance && s.imag() > 0.0) return {s, it, residual};

    // Newton polishing once the iterates settle.
    if (step < 1e-4 * (1.0 + std::abs(s))) {
      Complex candidate = s;
      double best = residual;
      for (int k = 0; k < 30; ++k) {
        const auto tc = terms(candidate, c, sigma, zeta);
        const Complex f = residual_value(candidate, z, tc);
        const Complex df = z - tc.g_prime;
        if (df == 0.0) break;
        const Complex trial = candidate - f / df;
        if (!(trial.imag() > 0.0) || !std::isfinite(trial.real())) break;
        const double r = std::abs(residual_value(trial, z, terms(trial, c, sigma, zeta)));
        if (r >= best && best > options.tolerance) break;
        candidate = trial;
        best = r;
        if (best <= options.tolerance * 1e-3) break;
      }
      if (best <= options.tolerance && candidate.imag() > 0.0) return {candidate, it, best};
    }
  }
  return {s, options.max_iterations, residual};
}

}  // namespace

double generalized_mp_residual(Complex s, Complex z, double c, double sigma,
                               const ZetaDistribution& zeta) {
  return std::abs(residual_value(s, z, terms(s, c, sigma, zeta)));
}

StieltjesPoint solve_nonsmooth_stieltjes(Complex z, double c, double sigma,
                                         const ZetaDistribution& zeta,
                                         const StieltjesOptions& options) {
  require(z.imag() > 0.0, "solve_nonsmooth_stieltjes: z must lie in the upper half-plane");
  require(c > 0.0, "solve_nonsmooth_stieltjes: c must be positive");
  require(sigma > 0.0, "solve_nonsmooth_stieltjes: sigma must be positive");
  require(options.damping > 0.0 && options.damping <= 1.0, "damping must lie in (0, 1]");
  const Complex start = options.init.value_or(Complex(0.0, 1.0) / (1.0 + std::abs(z)));
  require(start.imag() > 0.0, "solve_nonsmooth_stieltjes: initial point must lie in C+");

  StieltjesPoint best{start, 0, std::numeric_limits<double>::infinity()};
  int total_iterations = 0;
  for (double damping : {options.damping, 0.25, 0.1}) {
    if (damping > options.damping) continue;
    auto point = iterate(z, c, sigma, zeta, start, damping, options);
    total_iterations += point.iterations;
    if (point.residual <= options.tolerance && point.s.imag() > 0.0) {
      point.iterations = total_iterations;
      return point;
    }
    if (point.residual < best.residual) best = point;
  }
  throw SolverFailure("Stieltjes fixed point did not converge at z = (" + std::to_string(z.real()) +
                          ", " + std::to_string(z.imag()) + "), residual " +
                          std::to_string(best.residual),
                      best.residual, total_iterations);
}

double StieltjesSolution::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

int StieltjesSolution::max_iterations() const {
  return iterations.empty() ? 0 : *std::max_element(iterations.begin(), iterations.end());
}

StieltjesSolution solve_stieltjes_grid(const std::vector<double>& xs, double v, double c,
                                       double sigma, const ZetaDistribution& zeta,
                                       const StieltjesOptions& options) {
  require(v > 0.0, "solve_stieltjes_grid: v must be positive");
  StieltjesSolution out;
  out.grid.reserve(xs.size());
  for (double x : xs) {
    const Complex z(x, v);
    const auto point = solve_nonsmooth_stieltjes(z, c, sigma, zeta, options);
    out.grid.push_back(z);
    out.values.push_back(point.s);
    out.iterations.push_back(point.iterations);
    out.residuals.push_back(point.residual);
  }
  return out;
}

Complex GeneralizedMPLaw::stieltjes(Complex z) const {
  return solve_nonsmooth_stieltjes(z, c, sigma, zeta, options).s;
}

// Inversion ----------------------------------------------------------------------------

std::vector<double> stieltjes_invert(const StieltjesFunction& s_fn, const std::vector<double>& xs,
                                     double v) {
  require(v > 0.0, "stieltjes_invert: v must be positive");
  std::vector<double> density(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double f = s_fn(Complex(xs[k], v)).imag() / std::numbers::pi;
    if (f < -1e-8) throw InversionQualityError("stieltjes_invert: negative density");
    density[k] = std::max(f, 0.0);
  }
  return density;
}

InversionResult stieltjes_invert_refined(const StieltjesFunction& s_fn,
                                         const std::vector<double>& xs,
                                         std::vector<double> v_schedule) {
  require(!v_schedule.empty(), "stieltjes_invert_refined: empty v schedule");
  std::sort(v_schedule.begin(), v_schedule.end(), std::greater<>());
  InversionResult out;
  out.xs = xs;
  std::vector<double> previous;
  double previous_v = 0.0;
  for (double v : v_schedule) {
    auto current = stieltjes_invert(s_fn, xs, v);
    if (!previous.empty()) {
      double diff = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) diff = std::max(diff, std::abs(current[k] - previous[k]));
      out.stability = diff * v / (previous_v - v);
    }
    previous = std::move(current);
    previous_v = v;
  }
  out.density = std::move(previous);
  out.v = previous_v;
  return out;
}

double estimate_atom_at_zero(const StieltjesFunction& s_fn, double v) {
  require(v > 0.0, "estimate_atom_at_zero: v must be positive");
  return std::clamp(v * s_fn(Complex(0.0, v)).imag(), 0.0, 1.0);
}

// CDF from a density grid --------------------------------------------------------------------

GeneralizedMpCdf::GeneralizedMpCdf(std::vector<double> xs, const std::vector<double>& density,
                                   double atom_at_zero)
    : xs_(std::move(xs)), atom_(atom_at_zero), raw_mass_(0.0), correction_(1.0) {
  require(xs_.size() >= 2 && xs_.size() == density.size(),
          "generalized_mp_cdf: grid and density sizes differ");
  require(atom_ >= 0.0 && atom_ <= 1.0, "generalized_mp_cdf: atom must lie in [0, 1]");
  cumulative_.assign(xs_.size(), 0.0);
  for (std::size_t k = 1; k < xs_.size(); ++k) {
    require(xs_[k] > xs_[k - 1], "generalized_mp_cdf: grid must be ascending");
    require(density[k] >= 0.0 && density[k - 1] >= 0.0, "generalized_mp_cdf: negative density");
    cumulative_[k] = cumulative_[k - 1] + 0.5 * (density[k] + density[k - 1]) * (xs_[k] - xs_[k - 1]);
  }
  const double continuous = cumulative_.back();
  raw_mass_ = continuous + atom_;
  if (raw_mass_ < 0.9 || raw_mass_ > 1.1)
    throw InversionQualityError("generalized_mp_cdf: total mass " + std::to_string(raw_mass_) +
                                " outside [0.9, 1.1]");
  if (continuous > 0.0) correction_ = (1.0 - atom_) / continuous;
}

double GeneralizedMpCdf::operator()(double x) const {
  const double point_mass = x >= 0.0 ? atom_ : 0.0;
  if (x < xs_.front()) return point_mass;
  if (x >= xs_.back()) return std::min(1.0, point_mass + correction_ * cumulative_.back());
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const auto k = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double t = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
  const double cont = cumulative_[k] + t * (cumulative_[k + 1] - cumulative_[k]);
  return std::clamp(point_mass + correction_ * cont, 0.0, 1.0);
}

GeneralizedMpCdf generalized_mp_cdf(std::vector<double> xs, const std::vector<double>& density,
                                    double atom_at_zero) {
  return GeneralizedMpCdf(std::move(xs), density, atom_at_zero);
}

}  // namespace rmt
