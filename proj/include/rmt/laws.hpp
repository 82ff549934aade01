#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rmt/common.hpp"
#include "rmt/ensemble.hpp"

namespace rmt {

// Marchenko–Pastur ------------------------------------------------------------------

/// MP(c, scale): limit ESD of (1/n) X X^T with p/n -> c and entry variance `scale`.
struct MPLaw {
  double c = 1.0;
  double scale = 1.0;

  MPLaw() = default;
  MPLaw(double c_, double scale_);

  double lower_edge() const;
  double upper_edge() const;
  /// Mass at zero, 1 - 1/c when c > 1.
  double atom() const { return c > 1.0 ? 1.0 - 1.0 / c : 0.0; }

  /// Continuous part of the law; integrates to min(1, 1/c).
  double density(double x) const;
  /// Atom plus adaptive Gauss–Kronrod integral of the density.
  double cdf(double x) const;
  /// Closed form; root of c s^2 z scale + (z + c scale - scale) s + 1 = 0 in C+.
  Complex stieltjes(Complex z) const;
};

double mp_density(const MPLaw& law, double x);
double mp_cdf(const MPLaw& law, double x);
Complex mp_stieltjes(const MPLaw& law, Complex z);

// Semicircle -----------------------------------------------------------------------

/// SC with variance w^2, supported on [-2w, 2w].
struct SCLaw {
  double variance = 1.0;

  SCLaw() = default;
  explicit SCLaw(double variance_);
  static SCLaw from_scale(double w) { return SCLaw(w * w); }

  double radius() const;
  double density(double x) const;
  double cdf(double x) const;
  /// (-z + sqrt(z^2 - 4 w^2)) / (2 w^2), square root taken in the upper half-plane.
  Complex stieltjes(Complex z) const;
};

double sc_density(const SCLaw& law, double x);
double sc_cdf(const SCLaw& law, double x);
Complex sc_stieltjes(const SCLaw& law, Complex z);

/// The root of w in the closed upper half-plane.
Complex sqrt_upper(Complex w);

// The zeta distribution ----------------------------------------------------------------

enum class ZetaProvenance { point_mass, closed_form_indicator, quadrature, monte_carlo };

/// Law of the limiting conditional kernel mean, as weighted atoms in [0, 1].
class ZetaDistribution {
 public:
  ZetaDistribution(std::vector<double> values, std::vector<double> weights,
                   ZetaProvenance provenance, std::string description = {});

  static ZetaDistribution point_mass(double value);
  /// Equal weights on observed values (e.g. conditional Monte-Carlo estimates).
  static ZetaDistribution from_samples(std::vector<double> samples, std::string description = {});

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  ZetaProvenance provenance() const { return provenance_; }
  const std::string& description() const { return description_; }

  double moment(int k) const;
  double mean() const { return moment(1); }
  double max_value() const;

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
  ZetaProvenance provenance_;
  std::string description_;
};

/// Indicator-kernel limit: zeta = Phi((Z + 2 z_alpha) / sqrt(3)), Z ~ N(0, 1),
/// discretized with an `n_atoms`-point Gauss–Hermite rule.
ZetaDistribution zeta_indicator(double z_alpha, int n_atoms = 64);

// Moments of the coordinate discrepancy d --------------------------------------------------

enum class Discrepancy { squared_difference, absolute_difference };

std::string_view to_string(Discrepancy d);
double evaluate(Discrepancy d, double x, double y);

/// m1 = E d, m2 = Var d, m2_1 = Var E[d | W1], m2_2 = E Var(d | W1) for
/// d = d(W1, W2) with W1, W2 i.i.d. entries. m3 is E|d - E[d | W1]|^3 and is
/// diagnostic only.
struct DMoments {
  double m1 = 0.0;
  double m2 = 0.0;
  double m2_1 = 0.0;
  double m2_2 = 0.0;
  std::optional<double> m3;
  // Standard errors, zero for closed forms.
  double m1_se = 0.0;
  double m2_se = 0.0;
  double m2_1_se = 0.0;
  double m2_2_se = 0.0;
  bool closed_form = false;

  void validate() const;
};

/// Closed form for (x - y)^2 with Gaussian entries: (2s, 8s^2, 2s^2, 6s^2),
/// s = sigma^2. Otherwise nested Monte Carlo.
DMoments d_moments(Discrepancy d, EntryLaw law, double sigma, int mc_samples, std::uint64_t seed);

/// Nested Monte Carlo (outer over W1, inner over W2), about sqrt(mc_samples)
/// draws at each level.
DMoments d_moments_monte_carlo(Discrepancy d, EntryLaw law, double sigma, int mc_samples,
                               std::uint64_t seed);

/// zeta = E_{Z2} phi(sqrt(m2_1/m2) Z1 + sqrt(m2_2/m2) Z2). Outer expectation:
/// Gauss–Hermite with `n_outer` nodes. Inner expectation: adaptive
/// Gauss–Kronrod against the normal density, starting from `n_inner` panels,
/// so step-shaped phi are resolved to ~1e-12.
ZetaDistribution zeta_general(const std::function<double(double)>& phi_tilde,
                              const DMoments& moments, int n_outer = 64, int n_inner = 64);

// Stieltjes fixed point -----------------------------------------------------------------

struct StieltjesOptions {
  double damping = 0.5;
  double tolerance = 1e-10;
  int max_iterations = 10000;
  std::optional<Complex> init;  // default i / (1 + |z|)
};

struct StieltjesPoint {
  Complex s;
  int iterations = 0;
  double residual = 0.0;
};

/// |1 + z s - E[sigma^2 s zeta / (1 + c sigma^2 s zeta)]|.
double generalized_mp_residual(Complex s, Complex z, double c, double sigma,
                               const ZetaDistribution& zeta);

/// Unique root in C+ of 1 + z s = E[sigma^2 s zeta / (1 + c sigma^2 s zeta)].
/// Damped iteration s <- (1 - eta) s + eta / (-z + E[sigma^2 zeta / (1 + c sigma^2 zeta s)])
/// with Newton polishing near the root; retries with eta = 0.25, 0.1 on stagnation.
StieltjesPoint solve_nonsmooth_stieltjes(Complex z, double c, double sigma,
                                         const ZetaDistribution& zeta,
                                         const StieltjesOptions& options = {});

struct StieltjesSolution {
  std::vector<Complex> grid;
  std::vector<Complex> values;
  std::vector<int> iterations;
  std::vector<double> residuals;

  double max_residual() const;
  int max_iterations() const;
};

/// Solves on x + iv for every x, each point from a cold start.
StieltjesSolution solve_stieltjes_grid(const std::vector<double>& xs, double v, double c,
                                       double sigma, const ZetaDistribution& zeta,
                                       const StieltjesOptions& options = {});

/// Generalized MP law as a callable Stieltjes transform.
struct GeneralizedMPLaw {
  double c;
  double sigma;
  ZetaDistribution zeta;
  StieltjesOptions options;

  Complex stieltjes(Complex z) const;
};

// Inversion ----------------------------------------------------------------------------

using StieltjesFunction = std::function<Complex(Complex)>;

/// f(x) = Im s(x + iv) / pi on the grid.
std::vector<double> stieltjes_invert(const StieltjesFunction& s_fn, const std::vector<double>& xs,
                                     double v);

struct InversionResult {
  std::vector<double> xs;
  std::vector<double> density;  // at the smallest v
  double v = 0.0;
  /// Richardson estimate of the remaining smoothing error at the smallest v:
  /// max_x |f_v - f_v'| v / (v' - v) for the next larger v'.
  double stability = 0.0;
};

InversionResult stieltjes_invert_refined(const StieltjesFunction& s_fn,
                                         const std::vector<double>& xs,
                                         std::vector<double> v_schedule = {1e-1, 1e-2, 1e-3});

/// v Im s(iv): mass of the atom at zero as v -> 0. Reported, not certified.
double estimate_atom_at_zero(const StieltjesFunction& s_fn, double v = 1e-4);

/// Monotone CDF from a density on a grid (trapezoid) plus an atom at zero.
class GeneralizedMpCdf {
 public:
  GeneralizedMpCdf(std::vector<double> xs, const std::vector<double>& density, double atom_at_zero);

  double operator()(double x) const;
  /// Trapezoid mass of the density plus the atom, before renormalization.
  double raw_mass() const { return raw_mass_; }
  /// Factor applied to the continuous part so total mass is one.
  double correction() const { return correction_; }

 private:
  std::vector<double> xs_;
  std::vector<double> cumulative_;
  double atom_;
  double raw_mass_;
  double correction_;
};

/// Raw mass within [0.9, 1.1] is renormalized to one; outside, throws
/// InversionQualityError.
GeneralizedMpCdf generalized_mp_cdf(std::vector<double> xs, const std::vector<double>& density,
                                    double atom_at_zero);

std::vector<double> linspace(double lo, double hi, int points);

}  // namespace rmt
