#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rmt/numerics.hpp"
#include "rmt/random.hpp"

namespace rmt {
namespace {

TEST(NormalCdf, ReferenceValues) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-14);
  EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145707, 1e-15);
  EXPECT_NEAR(normal_cdf(-8.0), 6.22096057427178e-16, 1e-28);
  EXPECT_NEAR(normal_pdf(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-16);
}

TEST(ChiSquare, ClosedFormsForSmallDegrees) {
  // dof 2: 1 - exp(-x/2). dof 1: erf(sqrt(x/2)).
  for (double x : {0.1, 1.0, 2.0, 7.5, 30.0}) {
    EXPECT_NEAR(chi_square_cdf(x, 2.0), 1.0 - std::exp(-x / 2.0), 1e-14) << x;
    EXPECT_NEAR(chi_square_cdf(x, 1.0), std::erf(std::sqrt(x / 2.0)), 1e-14) << x;
  }
  EXPECT_EQ(chi_square_cdf(0.0, 5.0), 0.0);
}

TEST(ChiSquare, LargeDegreesNearMedian) {
  // dof 4: 1 - exp(-x/2)(1 + x/2); and the median of chi^2_k tends to k(1 - 2/(9k))^3.
  for (double x : {0.5, 4.0, 12.0}) EXPECT_NEAR(chi_square_cdf(x, 4.0), 1.0 - std::exp(-x / 2) * (1 + x / 2), 1e-14);
  const double k = 2000.0;
  EXPECT_NEAR(chi_square_cdf(k * std::pow(1.0 - 2.0 / (9.0 * k), 3), k), 0.5, 1e-4);
}

TEST(GaussHermite, ReproducesNormalMoments) {
  const auto rule = gauss_hermite(32);
  double m0 = 0, m2 = 0, m4 = 0, m6 = 0, m3 = 0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double x = rule.nodes[k];
    const double w = rule.weights[k];
    m0 += w;
    m2 += w * x * x;
    m3 += w * x * x * x;
    m4 += w * std::pow(x, 4);
    m6 += w * std::pow(x, 6);
  }
  EXPECT_NEAR(m0, 1.0, 1e-14);
  EXPECT_NEAR(m2, 1.0, 1e-12);
  EXPECT_NEAR(m3, 0.0, 1e-12);
  EXPECT_NEAR(m4, 3.0, 1e-11);
  EXPECT_NEAR(m6, 15.0, 1e-10);
}

TEST(GaussHermite, NodesSymmetric) {
  const auto rule = gauss_hermite(17);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const auto j = rule.nodes.size() - 1 - k;
    EXPECT_NEAR(rule.nodes[k], -rule.nodes[j], 1e-13);
    EXPECT_NEAR(rule.weights[k], rule.weights[j], 1e-15);
  }
}

TEST(GaussLegendre, ExactForPolynomials) {
  const auto rule = gauss_legendre(10);
  // Exact up to degree 19.
  for (int degree = 0; degree <= 19; ++degree) {
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * std::pow(rule.nodes[k], degree);
    const double exact = degree % 2 ? 0.0 : 2.0 / (degree + 1);
    EXPECT_NEAR(sum, exact, 1e-13) << degree;
  }
}

TEST(IntegrateAdaptive, SmoothAndSingularIntegrands) {
  EXPECT_NEAR(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0).value, std::exp(1.0) - 1.0, 1e-14);
  // Integrable endpoint singularity.
  EXPECT_NEAR(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12, 1, 20000).value,
              2.0, 1e-8);
  // Step function.
  const auto step = integrate_adaptive([](double x) { return x < 0.3 ? 1.0 : 0.0; }, 0.0, 1.0);
  EXPECT_NEAR(step.value, 0.3, 1e-10);
  EXPECT_GT(step.panels, 1);
  // Empty interval.
  EXPECT_EQ(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0).value, 0.0);
}

TEST(Random, DerivedSeedsAreDistinctAndStable) {
  static_assert(derive_seed(1, 0) == derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  auto a = make_engine(42);
  auto b = make_engine(42);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a(), b());
}

}  // namespace
}  // namespace rmt
