#pragma once

#include <functional>
#include <vector>

namespace rmt {

// Special functions ---------------------------------------------------------

double normal_cdf(double x);
double normal_pdf(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// CDF of the chi-square law with `dof` degrees of freedom.
double chi_square_cdf(double x, double dof);

// Quadrature ----------------------------------------------------------------

/// Nodes and weights of a quadrature rule. Weights of the Gaussian-measure
/// rules are normalized to sum to one, so `sum w_k f(x_k)` approximates E f(Z).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Hermite rule for Z ~ N(0, 1) (probabilists' weight exp(-x^2/2)),
/// computed with the Golub–Welsch eigenvalue method.
QuadratureRule gauss_hermite(int n);

/// Gauss–Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Globally adaptive 7/15-point Gauss–Kronrod integration of f over [a, b].
/// The interval starts split into `initial_panels` pieces; the panel with the
/// largest error estimate is bisected until the total estimate drops below
/// max(abs_tol, rel_tol * |value|) or `max_panels` is reached.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol = 1e-12, double rel_tol = 1e-12,
                                     int initial_panels = 1, int max_panels = 4000);

}  // namespace rmt
