#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmt/common.hpp"

namespace rmt {

/// Ascending eigenvalues of a real symmetric matrix. The input must be
/// symmetric to 1e-10 relative to its largest entry; it is symmetrized before
/// the solve. Eigenvectors are not formed.
template <typename Derived>
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& s) {
  require(s.rows() == s.cols(), "symmetric_eigenvalues: matrix must be square");
  if (s.rows() == 0) return {};
  const Matrix dense = s;
  const double scale = std::max(1.0, dense.cwiseAbs().maxCoeff());
  require((dense - dense.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          "symmetric_eigenvalues: matrix is not symmetric");
  const Matrix sym = 0.5 * (dense + dense.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric_eigenvalues: no convergence");
  const Vector& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

struct SpectrumSource {
  int p = 0;
  int n = 0;
  std::string kernel;
  std::uint64_t seed = 0;
};

/// Uniform probability measure on a list of eigenvalues.
class EmpiricalSpectrum {
 public:
  EmpiricalSpectrum() = default;
  explicit EmpiricalSpectrum(std::vector<double> eigenvalues, SpectrumSource source = {});

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  std::size_t size() const { return eigenvalues_.size(); }
  const SpectrumSource& source() const { return source_; }

  /// F(x) = #{lambda_i <= x} / size.
  double cdf(double x) const;
  double mean() const;
  double min() const { return eigenvalues_.front(); }
  double max() const { return eigenvalues_.back(); }

 private:
  std::vector<double> eigenvalues_;
  SpectrumSource source_;
};

/// Throws on an empty list.
EmpiricalSpectrum esd(std::vector<double> eigenvalues, SpectrumSource source = {});

/// Concatenation of several spectra (the ESD of their block-diagonal sum).
EmpiricalSpectrum pool(const std::vector<EmpiricalSpectrum>& spectra);

using CdfFunction = std::function<double(double)>;

/// sup_x |F_emp(x) - G(x)| for a nondecreasing G, evaluated on both sides of
/// every jump of F_emp (exact for a step function against a monotone CDF).
double ks_distance(const EmpiricalSpectrum& spectrum, const CdfFunction& law_cdf);

/// W2 between two equal-size spectra: sorted eigenvalues paired in order.
double wasserstein2(const EmpiricalSpectrum& a, const EmpiricalSpectrum& b);

/// |S1 - S2|_HS / sqrt(n); bounds wasserstein2 of the two spectra.
template <typename D1, typename D2>
double hoffman_wielandt_bound(const Eigen::MatrixBase<D1>& s1, const Eigen::MatrixBase<D2>& s2) {
  require(s1.rows() == s2.rows() && s1.cols() == s2.cols() && s1.rows() == s1.cols(),
          "hoffman_wielandt_bound: matrices must be square of equal size");
  return (s1 - s2).norm() / std::sqrt(static_cast<double>(s1.rows()));
}

struct Histogram {
  std::vector<double> bin_edges;  // size bins + 1
  std::vector<double> densities;  // size bins

  double total_mass() const;
};

/// Density-normalized histogram. Default range is [min - d, max + d] with d
/// one percent of the spread. Values outside an explicit range are dropped.
Histogram histogram(const EmpiricalSpectrum& spectrum, int bins,
                    std::optional<std::pair<double, double>> range = std::nullopt);

}  // namespace rmt
