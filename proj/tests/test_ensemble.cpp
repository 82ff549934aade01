#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rmt/ensemble.hpp"
#include "rmt/numerics.hpp"
#include "rmt/spectra.hpp"

namespace rmt {
namespace {

double relative_hs(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

Matrix centered_sample_covariance(const Matrix& x) {
  const Vector mean = x.rowwise().mean();
  const Matrix centered = x.colwise() - mean;
  return centered * centered.transpose() / static_cast<double>(x.cols());
}

// Pair-by-pair reference for (1/2n^2) sum_{i,j} K(X_i, X_j)(X_i - X_j)(X_i - X_j)^T.
Matrix brute_force_m(const Matrix& x, const KernelSpec& kernel) {
  const auto n = x.cols();
  Matrix m = Matrix::Zero(x.rows(), x.rows());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vector d = x.col(i) - x.col(j);
      m += kernel(x.col(i), x.col(j)) * d * d.transpose();
    }
  return m / (2.0 * n * n);
}

std::vector<KernelSpec> kernel_zoo(int p) {
  std::vector<KernelSpec> zoo{KernelSpec::constant(p), KernelSpec::indicator_from_z_alpha(p, 0.3, 1.0),
                              KernelSpec::gaussian(p, 0.8)};
  zoo.push_back(KernelSpec::custom(
      p, {[](const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
            return 1.0 / (1.0 + (a - b).cwiseAbs().sum());
          },
          "laplace"}));
  return zoo;
}

// Data matrix --------------------------------------------------------------------------

TEST(SampleDataMatrix, Deterministic) {
  const auto a = sample_data_matrix(2, 2, EntryLaw::gaussian, 1.0, 7);
  const auto b = sample_data_matrix(2, 2, EntryLaw::gaussian, 1.0, 7);
  EXPECT_EQ(a.entries, b.entries);
  EXPECT_EQ(a.p(), 2);
  EXPECT_EQ(a.n(), 2);
  const auto c = sample_data_matrix(2, 2, EntryLaw::gaussian, 1.0, 8);
  EXPECT_NE(a.entries, c.entries);
}

TEST(SampleDataMatrix, GaussianCentered) {
  const auto x = sample_data_matrix(200, 500, EntryLaw::gaussian, 1.0, 11);
  EXPECT_LT(std::abs(x.entries.mean()), 4.0 / std::sqrt(200.0 * 500.0));
}

TEST(SampleDataMatrix, RademacherVariance) {
  // Entries are +-1, so x^2 = 1 exactly and the sample variance is 1 - mean^2;
  // the mean has standard error 1/sqrt(pn) = 1e-3.
  const auto x = sample_data_matrix(1000, 1000, EntryLaw::rademacher, 1.0, 12);
  const double mean = x.entries.mean();
  const double var = x.entries.array().square().mean() - mean * mean;
  EXPECT_GE(var, 0.99);
  EXPECT_LE(var, 1.01);
  EXPECT_TRUE((x.entries.array().abs() == 1.0).all());
}

TEST(SampleDataMatrix, EntryLawsHaveVarianceSigmaSquared) {
  // Var(x^2) = mu4 - sigma^4: 2 sigma^4 (gaussian), 0 (rademacher), 0.8 sigma^4 (uniform).
  const double sigma = 1.7;
  const double s4 = std::pow(sigma, 4);
  const int p = 300, n = 400;
  const double count = p * n;
  for (auto [law, excess] : {std::pair{EntryLaw::gaussian, 2.0}, std::pair{EntryLaw::rademacher, 0.0},
                             std::pair{EntryLaw::uniform_centered, 0.8}}) {
    const auto x = sample_data_matrix(p, n, law, sigma, 13);
    const double mean = x.entries.mean();
    const double second = x.entries.array().square().mean();
    EXPECT_LT(std::abs(mean), 4.0 * sigma / std::sqrt(count)) << to_string(law);
    const double se = std::sqrt(excess * s4 / count) + 1e-12;
    EXPECT_LT(std::abs(second - sigma * sigma), 4.0 * se + 1e-12) << to_string(law);
  }
  const auto u = sample_data_matrix(50, 50, EntryLaw::uniform_centered, sigma, 1);
  EXPECT_LE(u.entries.cwiseAbs().maxCoeff(), std::sqrt(3.0) * sigma);
}

TEST(SampleDataMatrix, InvalidArguments) {
  EXPECT_THROW(sample_data_matrix(0, 3, EntryLaw::gaussian, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(sample_data_matrix(3, 0, EntryLaw::gaussian, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(sample_data_matrix(3, 3, EntryLaw::gaussian, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(parse_entry_law("cauchy"), std::invalid_argument);
  EXPECT_EQ(parse_entry_law("uniform_centered"), EntryLaw::uniform_centered);
}

// Kernels ------------------------------------------------------------------------------

TEST(Kernel, SymmetricAndInUnitInterval) {
  const auto x = sample_data_matrix(8, 30, EntryLaw::gaussian, 1.0, 3);
  for (const auto& k : kernel_zoo(8))
    for (int i = 0; i < 30; ++i)
      for (int j = 0; j < 30; ++j) {
        const double v = k(x.entries.col(i), x.entries.col(j));
        EXPECT_EQ(v, k(x.entries.col(j), x.entries.col(i))) << k.tag();
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
}

TEST(Kernel, CustomOutOfRangeIsContractViolation) {
  const auto bad = KernelSpec::custom(2, {[](const Eigen::Ref<const Vector>&, const Eigen::Ref<const Vector>&) {
                                            return 1.5;
                                          },
                                          "bad"});
  const Vector v = Vector::Zero(2);
  EXPECT_THROW(bad(v, v), ContractViolation);
}

TEST(Kernel, RadiusParametrizations) {
  const int p = 200;
  const double sigma = 1.3;
  for (double beta : {-0.1, 0.1, 0.3}) {
    const auto k = KernelSpec::indicator_from_beta(p, beta, sigma);
    const double r = std::get<KernelSpec::Indicator>(k.variant()).radius;
    EXPECT_NEAR(r * r, (2.0 + beta) * sigma * sigma * p, 1e-9);
    const double z = beta * std::sqrt(static_cast<double>(p)) / (2.0 * std::sqrt(2.0));
    EXPECT_NEAR(beta_to_z_alpha(beta, p), z, 1e-14);
    EXPECT_NEAR(indicator_z_alpha(r, p, sigma), z, 1e-10);
    const auto kz = KernelSpec::indicator_from_z_alpha(p, z, sigma);
    EXPECT_NEAR(std::get<KernelSpec::Indicator>(kz.variant()).radius, r, 1e-10);
  }
  const auto full = KernelSpec::indicator_from_beta(p, std::numeric_limits<double>::infinity(), 1.0);
  EXPECT_TRUE(std::isinf(std::get<KernelSpec::Indicator>(full.variant()).radius));
}

TEST(Kernel, GaussianLipschitzMetadata) {
  const auto k = KernelSpec::gaussian(50, 0.7);
  ASSERT_TRUE(k.lipschitz.has_value());
  EXPECT_NEAR(*k.lipschitz, 1.0 / (std::sqrt(std::exp(1.0)) * std::sqrt(50.0) * 0.7), 1e-15);
  // Empirical slope of r -> 1 - exp(-r^2 / (2 p tau^2)) stays below it.
  double slope = 0.0;
  for (double r = 0.0; r < 30.0; r += 0.01)
    slope = std::max(slope, (k.from_squared_distance((r + 0.01) * (r + 0.01)) - k.from_squared_distance(r * r)) / 0.01);
  EXPECT_LE(slope, *k.lipschitz * (1.0 + 1e-6));
  EXPECT_GT(slope, 0.99 * *k.lipschitz);
}

// Graph matrices -----------------------------------------------------------------------

TEST(GraphMatrices, ConstantKernelCompleteGraph) {
  const auto x = sample_data_matrix(4, 3, EntryLaw::gaussian, 1.0, 5);
  const auto g = build_graph_matrices(x, KernelSpec::constant(4));
  const Matrix j = Matrix::Ones(3, 3);
  const Matrix id = Matrix::Identity(3, 3);
  EXPECT_EQ(g.adjacency, j - id);
  EXPECT_EQ(g.laplacian, 3.0 * id - j);
}

TEST(GraphMatrices, ZeroRadiusEmptyGraph) {
  const auto x = sample_data_matrix(4, 6, EntryLaw::gaussian, 1.0, 5);
  const auto g = build_graph_matrices(x, KernelSpec::indicator(4, 0.0));
  EXPECT_TRUE(g.adjacency.isZero(0.0));
  EXPECT_TRUE(g.laplacian.isZero(0.0));
}

TEST(GraphMatrices, GaussianLaplacianIdentity) {
  const auto x = sample_data_matrix(5, 4, EntryLaw::gaussian, 1.0, 9);
  const auto g = build_graph_matrices(x, KernelSpec::gaussian(5, 1.0));
  const Vector row_sums = g.laplacian.rowwise().sum();
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(row_sums(i), 0.0, 1e-15);
  EXPECT_EQ(g.adjacency, g.adjacency.transpose());
  EXPECT_TRUE((g.adjacency.diagonal().array() == 0.0).all());
  EXPECT_EQ(g.degree_matrix(), Matrix(g.adjacency.rowwise().sum().asDiagonal()));
  const auto eig = symmetric_eigenvalues(g.laplacian);
  EXPECT_GE(eig.front(), -1e-8 * 4);
}

TEST(GraphMatrices, DimensionMismatch) {
  const auto x = sample_data_matrix(4, 6, EntryLaw::gaussian, 1.0, 5);
  EXPECT_THROW(build_graph_matrices(x, KernelSpec::constant(5)), std::invalid_argument);
  EXPECT_THROW(truncated_covariance_direct(x, KernelSpec::constant(5)), std::invalid_argument);
  EXPECT_THROW(truncated_covariance(x, KernelSpec::gaussian(3, 1.0)), std::invalid_argument);
}

// Truncated covariance -------------------------------------------------------------------

TEST(TruncatedCovariance, ConstantKernelIsSampleCovariance) {
  const auto x = sample_data_matrix(6, 25, EntryLaw::gaussian, 1.0, 21);
  const Matrix m = truncated_covariance_direct(x, KernelSpec::constant(6));
  EXPECT_LT(relative_hs(m, centered_sample_covariance(x.entries)), 1e-12);
}

TEST(TruncatedCovariance, SingleSampleIsZero) {
  const auto x = sample_data_matrix(3, 1, EntryLaw::gaussian, 1.0, 2);
  for (const auto& k : kernel_zoo(3)) {
    EXPECT_TRUE(truncated_covariance_direct(x, k).isZero(0.0)) << k.tag();
    EXPECT_TRUE(truncated_covariance(x, k).isZero(0.0)) << k.tag();
  }
}

TEST(TruncatedCovariance, DirectMatchesDoubleLoop) {
  const auto x = sample_data_matrix(3, 4, EntryLaw::gaussian, 1.0, 31);
  const auto k = KernelSpec::indicator(3, 2.2);
  EXPECT_LT(relative_hs(truncated_covariance_direct(x, k), brute_force_m(x.entries, k)), 1e-12);
}

TEST(TruncatedCovariance, RayleighMatchesDirectSmall) {
  const auto x = sample_data_matrix(3, 5, EntryLaw::gaussian, 1.0, 32);
  const auto k = KernelSpec::constant(3);
  EXPECT_LT(relative_hs(truncated_covariance_rayleigh(x, build_graph_matrices(x, k)),
                        truncated_covariance_direct(x, k)),
            1e-12);
}

TEST(TruncatedCovariance, RayleighMatchesDirectIndicator) {
  const auto x = sample_data_matrix(50, 100, EntryLaw::gaussian, 1.0, 33);
  const auto k = KernelSpec::indicator_from_z_alpha(50, 0.0, 1.0);
  EXPECT_LT(relative_hs(truncated_covariance_rayleigh(x, build_graph_matrices(x, k)),
                        brute_force_m(x.entries, k)),
            1e-10);
}

TEST(TruncatedCovariance, ZeroLaplacianGivesZero) {
  const auto x = sample_data_matrix(4, 7, EntryLaw::gaussian, 1.0, 34);
  EXPECT_TRUE(truncated_covariance_rayleigh(x.entries, Matrix::Zero(7, 7)).isZero(0.0));
}

TEST(TruncatedCovariance, AllRoutesAgreeAcrossKernelsAndBlocks) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    const int p = 2 + static_cast<int>(rng() % 12);
    const int n = 2 + static_cast<int>(rng() % 40);
    const auto law = static_cast<EntryLaw>(rng() % 3);
    const auto x = sample_data_matrix(p, n, law, 0.5 + (rng() % 100) / 50.0, rng());
    for (const auto& k : kernel_zoo(p)) {
      const Matrix direct = truncated_covariance_direct(x, k);
      EXPECT_LT(relative_hs(direct, brute_force_m(x.entries, k)), 1e-12);
      EXPECT_LT(relative_hs(truncated_covariance_rayleigh(x, build_graph_matrices(x, k)), direct), 1e-10);
      for (int block : {1, 3, 256})
        EXPECT_LT(relative_hs(truncated_covariance(x, k, block), direct), 1e-10) << k.tag() << " block " << block;
    }
  }
}

TEST(TruncatedCovariance, PositiveSemiDefinite) {
  for (const auto& k : kernel_zoo(20)) {
    const auto x = sample_data_matrix(20, 15, EntryLaw::gaussian, 1.0, 41);
    const Matrix m = truncated_covariance(x, k);
    const auto eig = symmetric_eigenvalues(m);
    EXPECT_GE(eig.front(), -1e-8 * std::max(std::abs(eig.front()), std::abs(eig.back()))) << k.tag();
  }
}

TEST(TruncatedCovariance, DiagonalOfAdjacencyIsIrrelevant) {
  const auto x = sample_data_matrix(6, 10, EntryLaw::gaussian, 1.0, 42);
  const auto g = build_graph_matrices(x, KernelSpec::gaussian(6, 1.0));
  Matrix a = g.adjacency;
  a.diagonal().setConstant(0.7);
  // D - A with the diagonal kept equals the zero-diagonal Laplacian.
  const Matrix l_kept = Matrix(a.rowwise().sum().asDiagonal()) - a;
  EXPECT_LT((l_kept - g.laplacian).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(laplacian_from_adjacency(a), g.laplacian);
  EXPECT_LT(relative_hs(truncated_covariance_rayleigh(x.entries, l_kept), truncated_covariance_rayleigh(x, g)),
            1e-14);
}

TEST(TruncatedCovariance, ConstantKernelRank) {
  const auto x = sample_data_matrix(10, 5, EntryLaw::gaussian, 1.0, 43);
  const Matrix m = truncated_covariance(x, KernelSpec::constant(10));
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-10);
  EXPECT_LE(lu.rank(), 4);
}

TEST(TruncatedCovariance, ScalingByTScalesEigenvalues) {
  const auto x = sample_data_matrix(8, 20, EntryLaw::gaussian, 1.0, 44);
  DataMatrix scaled = x;
  const double t = 2.5;
  scaled.entries *= t;
  const auto e1 = symmetric_eigenvalues(truncated_covariance(x, KernelSpec::constant(8)));
  const auto e2 = symmetric_eigenvalues(truncated_covariance(scaled, KernelSpec::constant(8)));
  for (std::size_t k = 0; k < e1.size(); ++k) EXPECT_NEAR(e2[k], t * t * e1[k], 1e-12 * t * t * e1.back());
}

TEST(TruncatedCovariance, PureFunction) {
  const auto x = sample_data_matrix(12, 30, EntryLaw::gaussian, 1.0, 45);
  const auto k = KernelSpec::indicator_from_z_alpha(12, 0.2, 1.0);
  EXPECT_EQ(truncated_covariance(x, k), truncated_covariance(x, k));
  EXPECT_EQ(truncated_covariance_direct(x, k), truncated_covariance_direct(x, k));
}

// Kernel moments ------------------------------------------------------------------------

// Independent Monte-Carlo oracle: E K(X1, X2)^power with Gaussian entries.
std::pair<double, double> oracle_moment(const KernelSpec& k, int power, double sigma, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  const int p = k.dimension();
  Vector a(p), b(p);
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < p; ++i) {
      a(i) = normal(rng);
      b(i) = normal(rng);
    }
    const double v = std::pow(k(a, b), power);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  return {mean, std::sqrt((sum_sq / samples - mean * mean) / samples)};
}

TEST(AlphaP, ConstantKernel) {
  const auto a = alpha_p(KernelSpec::constant(10), EntryLaw::gaussian, 1.0, 1, 1);
  EXPECT_EQ(a.value, 1.0);
  EXPECT_TRUE(a.closed_form);
}

TEST(AlphaP, GaussianKernelClosedForm) {
  const auto k = KernelSpec::gaussian(200, 1.0);
  const auto a = alpha_p(k, EntryLaw::gaussian, 1.0, 1, 1);
  const double expected = 1.0 - std::pow(1.0 + 2.0 / 200.0, -100.0);
  EXPECT_NEAR(a.value, expected, 1e-14);
  EXPECT_NEAR(a.value, 0.630289, 1e-6);
  const auto [mc, se] = oracle_moment(k, 1, 1.0, 200000, 5);
  EXPECT_LT(std::abs(mc - a.value), 3.0 * se);
}

TEST(AlphaP, IndicatorHalfAtZeroThreshold) {
  const auto a = alpha_p(KernelSpec::indicator_from_z_alpha(2000, 0.0, 1.0), EntryLaw::gaussian, 1.0, 1, 1);
  EXPECT_LT(std::abs(a.value - 0.5), 0.02);
  EXPECT_TRUE(a.closed_form);
}

TEST(AlphaP, IndicatorClosedFormMatchesMonteCarlo) {
  const auto k = KernelSpec::indicator_from_z_alpha(30, 0.4, 1.5);
  const auto a = alpha_p(k, EntryLaw::gaussian, 1.5, 1, 1);
  const auto [mc, se] = oracle_moment(k, 1, 1.5, 200000, 6);
  EXPECT_LT(std::abs(mc - a.value), 3.0 * se);
}

TEST(AlphaP, MonteCarloForOtherLaws) {
  const auto k = KernelSpec::gaussian(20, 1.0);
  const auto a = alpha_p(k, EntryLaw::rademacher, 1.0, 100000, 3);
  EXPECT_FALSE(a.closed_form);
  EXPECT_GT(a.std_error, 0.0);
  // Close to the Gaussian-entry value for moderate p.
  EXPECT_NEAR(a.value, alpha_p(k, EntryLaw::gaussian, 1.0, 1, 1).value, 0.02);
}

TEST(BetaPSq, IndicatorEqualsAlpha) {
  const auto k = KernelSpec::indicator_from_z_alpha(100, 0.3, 1.0);
  EXPECT_EQ(beta_p_sq(k, EntryLaw::gaussian, 1.0, 1, 1).value, alpha_p(k, EntryLaw::gaussian, 1.0, 1, 1).value);
  EXPECT_EQ(beta_p_sq(KernelSpec::constant(5), EntryLaw::gaussian, 1.0, 1, 1).value, 1.0);
}

TEST(BetaPSq, GaussianKernelAgreesWithMonteCarlo) {
  const auto k = KernelSpec::gaussian(200, 1.0);
  const auto mc = kernel_moment_monte_carlo(k, 2, EntryLaw::gaussian, 1.0, 1000000, 17);
  EXPECT_LT(mc.std_error, 1e-3);
  const auto closed = beta_p_sq(k, EntryLaw::gaussian, 1.0, 1, 1);
  EXPECT_LT(std::abs(closed.value - mc.value), 3.0 * mc.std_error);
  const auto [oracle, se] = oracle_moment(k, 2, 1.0, 100000, 18);
  EXPECT_LT(std::abs(closed.value - oracle), 3.0 * se);
}

// E and M-bar --------------------------------------------------------------------------------

TEST(NormalizedE, VanishesAtAlphaSigmaSquaredIdentity) {
  const Matrix m = 0.3 * 4.0 * Matrix::Identity(5, 5);
  EXPECT_TRUE(normalized_matrix_E(m, 100, 0.3, 2.0).isZero(1e-15));
}

TEST(NormalizedE, ConstantKernelReduction) {
  const auto x = sample_data_matrix(10, 60, EntryLaw::gaussian, 1.0, 51);
  const Matrix e = normalized_matrix_E(x, KernelSpec::constant(10), 1.0, 1.0);
  const Matrix expected =
      std::sqrt(60.0 / 10.0) * (centered_sample_covariance(x.entries) - Matrix::Identity(10, 10));
  EXPECT_LT((e - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(XiBar, ConstantKernel) {
  const auto x = sample_data_matrix(6, 12, EntryLaw::gaussian, 1.0, 52);
  const auto bar = xi_bar_matrix(x, KernelSpec::constant(6), 100, 1);
  EXPECT_TRUE((bar.xi.array() == 1.0).all());
  EXPECT_LT(relative_hs(bar.m_bar, x.entries * x.entries.transpose() / 12.0), 1e-14);
  EXPECT_THROW(xi_bar_matrix(x, KernelSpec::constant(6), 99, 1), std::invalid_argument);
}

TEST(XiBar, ConditionalMeansMatchNoncentralOracle) {
  // For the indicator kernel, xi_i = P(|X_i - V|^2 <= r^2 | X_i); check against
  // a direct Monte-Carlo estimate with fresh draws for a few samples.
  const int p = 20;
  const auto x = sample_data_matrix(p, 5, EntryLaw::gaussian, 1.0, 53);
  const auto k = KernelSpec::indicator_from_z_alpha(p, 0.0, 1.0);
  const auto bar = xi_bar_matrix(x, k, 4000, 54);
  std::mt19937_64 rng(55);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 5; ++i) {
    int hits = 0;
    const int draws = 20000;
    Vector v(p);
    for (int s = 0; s < draws; ++s) {
      for (int d = 0; d < p; ++d) v(d) = normal(rng);
      hits += k(x.entries.col(i), v) > 0.5;
    }
    const double q = static_cast<double>(hits) / draws;
    const double se = std::sqrt(q * (1 - q) / draws + q * (1 - q) / 4000) + 1e-3;
    EXPECT_LT(std::abs(bar.xi(i) - q), 4.0 * se) << i;
  }
}

TEST(XiBar, WassersteinGapShrinksWithSize) {
  const auto median_gap = [](int p, int n) {
    double total = 0.0;
    for (int s = 0; s < 20; ++s) {
      const auto seed = derive_seed(600 + p, s);
      const auto x = sample_data_matrix(p, n, EntryLaw::gaussian, 1.0, seed);
      const auto k = KernelSpec::indicator_from_z_alpha(p, 0.0, 1.0);
      const Matrix m = truncated_covariance(x, k);
      const auto bar = xi_bar_matrix(x, k, 2000, seed + 1);
      total += wasserstein2(esd(symmetric_eigenvalues(m)), esd(symmetric_eigenvalues(bar.m_bar)));
    }
    return total / 20.0;
  };
  EXPECT_LT(median_gap(200, 400), median_gap(100, 200));
}

TEST(XiBar, XiPrimeShrinksLikeHoeffding) {
  std::vector<double> values;
  for (int n : {200, 800, 3200}) {
    const int p = 50;
    const auto x = sample_data_matrix(p, n, EntryLaw::gaussian, 1.0, derive_seed(77, n));
    const auto k = KernelSpec::indicator_from_z_alpha(p, 0.0, 1.0);
    const auto g = build_graph_matrices(x, k);
    // Conditional Monte-Carlo noise must stay below the quantity itself.
    const auto bar = xi_bar_matrix(x, k, 16 * n, derive_seed(78, n));
    const double value = (g.degree - (n - 1.0) * bar.xi).cwiseAbs().maxCoeff() / n;
    EXPECT_LE(value, std::sqrt(6.0 * std::log(n) / n)) << n;
    values.push_back(value);
  }
  EXPECT_GT(values[0], values[1]);
  EXPECT_GT(values[1], values[2]);
}

TEST(Regime, Conditions) {
  EXPECT_TRUE(regime_satisfied(Regime::proportional, 200, 500, 0.4));
  EXPECT_FALSE(regime_satisfied(Regime::proportional, 200, 500, 0.5));
  EXPECT_TRUE(regime_satisfied(Regime::semi_high_dim, 400, 20000));
  EXPECT_FALSE(regime_satisfied(Regime::semi_high_dim, 100, 10000));
  EXPECT_EQ(parse_regime("semi_high_dim"), Regime::semi_high_dim);
  EXPECT_THROW(parse_regime("other"), std::invalid_argument);
}

}  // namespace
}  // namespace rmt
