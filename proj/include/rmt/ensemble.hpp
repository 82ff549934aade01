#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "rmt/common.hpp"
#include "rmt/random.hpp"

namespace rmt {

// Entry laws ------------------------------------------------------------------

/// Centered laws for the i.i.d. entries of the data matrix. Each is scaled to
/// variance sigma^2.
enum class EntryLaw { gaussian, rademacher, uniform_centered };

std::string_view to_string(EntryLaw law);
EntryLaw parse_entry_law(std::string_view name);

/// Fills `out` with i.i.d. draws of `law` at scale sigma.
void fill_entries(Eigen::Ref<Matrix> out, EntryLaw law, double sigma, Engine& engine);

/// The p x n data matrix X; column j is the sample X_j.
struct DataMatrix {
  Matrix entries;
  EntryLaw law = EntryLaw::gaussian;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  Eigen::Index p() const { return entries.rows(); }
  Eigen::Index n() const { return entries.cols(); }
};

/// Deterministic in (p, n, law, sigma, seed).
DataMatrix sample_data_matrix(int p, int n, EntryLaw law, double sigma, std::uint64_t seed);

// Kernels ---------------------------------------------------------------------

/// Symmetric kernel K_p : R^p x R^p -> [0, 1].
class KernelSpec {
 public:
  struct Constant {};
  /// K(x, y) = 1{|x - y| <= radius}; radius may be +inf.
  struct Indicator {
    double radius;
  };
  /// K(x, y) = 1 - exp(-|x - y|^2 / (2 p tau^2)).
  struct Gaussian {
    double tau;
  };
  struct Custom {
    std::function<double(const Eigen::Ref<const Vector>&, const Eigen::Ref<const Vector>&)> fn;
    std::string name = "custom";
  };
  using Variant = std::variant<Constant, Indicator, Gaussian, Custom>;

  static KernelSpec constant(int p);
  static KernelSpec indicator(int p, double radius);
  /// Radius r = sqrt((2 + beta) sigma^2 p); beta = +inf gives the full graph.
  static KernelSpec indicator_from_beta(int p, double beta, double sigma);
  /// Radius r^2 = (2p + 2 sqrt(2p) z_alpha) sigma^2.
  static KernelSpec indicator_from_z_alpha(int p, double z_alpha, double sigma);
  static KernelSpec gaussian(int p, double tau);
  static KernelSpec custom(int p, Custom fn);

  const Variant& variant() const { return variant_; }
  int dimension() const { return dimension_; }
  std::string tag() const;

  bool is_constant() const { return std::holds_alternative<Constant>(variant_); }
  bool is_indicator() const { return std::holds_alternative<Indicator>(variant_); }
  bool is_gaussian() const { return std::holds_alternative<Gaussian>(variant_); }
  bool is_custom() const { return std::holds_alternative<Custom>(variant_); }

  /// True when K(x, y) depends on |x - y|^2 only.
  bool radial() const { return !is_custom(); }

  double operator()(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const;
  /// Only valid for radial kernels.
  double from_squared_distance(double squared_distance) const;

  // Optional closed-form metadata.
  std::optional<double> alpha;
  std::optional<double> beta_sq;
  std::optional<double> lipschitz;

 private:
  KernelSpec(int p, Variant v) : variant_(std::move(v)), dimension_(p) {}
  Variant variant_;
  int dimension_;
};

/// Standardized threshold of an indicator kernel, z = (r^2/(2 sigma^2) - p) / sqrt(2p).
double indicator_z_alpha(double radius, int p, double sigma);
/// The beta -> z_alpha conversion for r(beta) = sqrt((2 + beta) sigma^2 p).
double beta_to_z_alpha(double beta, int p);

// Graph matrices -----------------------------------------------------------------

/// Weighted random geometric graph on the samples: zero-diagonal adjacency,
/// degrees and Laplacian L = D - A.
struct GraphMatrices {
  Matrix adjacency;
  Vector degree;
  Matrix laplacian;

  Matrix degree_matrix() const { return degree.asDiagonal(); }
};

/// L = diag(A 1) - A after zeroing the diagonal of A.
template <typename Derived>
Matrix laplacian_from_adjacency(const Eigen::MatrixBase<Derived>& adjacency) {
  require(adjacency.rows() == adjacency.cols(), "laplacian_from_adjacency: adjacency must be square");
  Matrix a = adjacency;
  a.diagonal().setZero();
  Matrix l = -a;
  l.diagonal() = a.rowwise().sum();
  return l;
}

GraphMatrices build_graph_matrices(const DataMatrix& x, const KernelSpec& kernel);

// Truncated covariance ------------------------------------------------------------

/// M = (1 / 2n^2) sum_{i,j} K(X_i, X_j) (X_i - X_j)(X_i - X_j)^T, summed pair by pair.
Matrix truncated_covariance_direct(const DataMatrix& x, const KernelSpec& kernel);

/// M = X L X^T / n^2 for any data matrix and Laplacian.
template <typename DerivedX, typename DerivedL>
Matrix truncated_covariance_rayleigh(const Eigen::MatrixBase<DerivedX>& x,
                                     const Eigen::MatrixBase<DerivedL>& laplacian) {
  require(laplacian.rows() == x.cols() && laplacian.cols() == x.cols(),
          "truncated_covariance_rayleigh: Laplacian must be n x n");
  const double n = static_cast<double>(x.cols());
  Matrix m = (x * laplacian * x.transpose()) / (n * n);
  return 0.5 * (m + m.transpose());
}

Matrix truncated_covariance_rayleigh(const DataMatrix& x, const GraphMatrices& graph);

/// Same matrix as the two routes above, streaming row blocks of A so memory
/// stays O(block * n). Radial kernels use Gram-matrix distances.
Matrix truncated_covariance(const DataMatrix& x, const KernelSpec& kernel, int block_size = 256);

// Kernel moments -----------------------------------------------------------------------

/// alpha_p = E K(X_1, X_2). Closed forms: constant kernel; Gaussian and
/// indicator kernels with Gaussian entries. Otherwise Monte Carlo over
/// `mc_samples` independent pairs.
Estimate alpha_p(const KernelSpec& kernel, EntryLaw law, double sigma, int mc_samples,
                 std::uint64_t seed);

/// beta_p^2 = E K(X_1, X_2)^2. Indicator: equals alpha_p. Gaussian kernel with
/// Gaussian entries: 1 - 2(1 + 2s)^{-p/2} + (1 + 4s)^{-p/2}, s = sigma^2/(p tau^2).
Estimate beta_p_sq(const KernelSpec& kernel, EntryLaw law, double sigma, int mc_samples,
                   std::uint64_t seed);

/// Plain Monte-Carlo mean of K^power over independent pairs.
Estimate kernel_moment_monte_carlo(const KernelSpec& kernel, int power, EntryLaw law, double sigma,
                                   int mc_samples, std::uint64_t seed);

/// Limit of alpha_p for the Gaussian kernel: 1 - exp(-sigma^2 / tau^2).
double gaussian_kernel_alpha_limit(double sigma, double tau);

// Semi-high-dimensional normalization ---------------------------------------------------

/// E = sqrt(n/p) (M - alpha_p sigma^2 I).
Matrix normalized_matrix_E(const Matrix& m, Eigen::Index n, double alpha_p, double sigma);
Matrix normalized_matrix_E(const DataMatrix& x, const KernelSpec& kernel, double alpha_p,
                           double sigma);

// Reduction diagnostics -------------------------------------------------------------------

struct XiBar {
  Vector xi;    // estimates of E[K(X_i, V) | X_i]
  Matrix m_bar;  // (1/n) sum xi_i X_i X_i^T
};

/// Conditional Monte Carlo for xi_i with `mc_conditional` fresh copies V_k of
/// X_1 (shared across i), then M-bar. Constant kernel gives xi = 1 exactly.
XiBar xi_bar_matrix(const DataMatrix& x, const KernelSpec& kernel, int mc_conditional,
                    std::uint64_t seed);

// Regimes -------------------------------------------------------------------------------

enum class Regime { proportional, semi_high_dim };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view name);

/// Proportional: p/n within 10% of `target_c`. Semi-high-dimensional: p^2 > n.
bool regime_satisfied(Regime regime, int p, int n, double target_c = 0.0);

}  // namespace rmt
