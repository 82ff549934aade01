#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rmt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Raised when the Stieltjes fixed-point iteration does not reach its residual
/// tolerance. Carries the last residual so callers can report it.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Raised when a numerically inverted density has too little or too much mass
/// to be trusted as a probability law.
class InversionQualityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user-supplied function broke its documented contract (e.g. a kernel
/// profile that leaves [0, 1]).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Monte-Carlo or closed-form estimate of a scalar.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for closed forms
  bool closed_form = false;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace rmt
