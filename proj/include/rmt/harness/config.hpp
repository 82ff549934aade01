#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmt/ensemble.hpp"

namespace rmt::harness {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Kernel choice as it appears in a config file. Indicator kernels take
/// exactly one of radius, beta or z_alpha; beta may be infinite.
struct KernelConfig {
  std::string variant = "constant";  // constant | indicator | gaussian
  std::optional<double> radius;
  std::optional<double> tau;
  std::optional<double> beta;
  std::optional<double> z_alpha;
};

/// Which limit law the pooled spectrum is compared against.
struct LawConfig {
  std::string type = "auto";  // auto | mp | sc | genmp | none
  // Explicit parameters; unset values fall back to the automatic choice.
  std::optional<double> c;
  std::optional<double> scale;     // mp
  std::optional<double> variance;  // sc
  std::optional<double> z_alpha;   // genmp with the indicator zeta
  // Scale of the smooth-kernel MP prediction: alpha_squared or alpha.
  std::string smooth_scale = "alpha_squared";
};

struct StieltjesGridConfig {
  std::optional<double> x_lo;
  std::optional<double> x_hi;
  int points = 600;
  std::vector<double> v_schedule{1e-1, 1e-2, 1e-3};
};

struct ExperimentConfig {
  Regime regime = Regime::proportional;
  int p = 200;
  int n = 500;
  EntryLaw entry_law = EntryLaw::gaussian;
  double sigma = 1.0;
  KernelConfig kernel;
  int trials = 5;
  std::uint64_t master_seed = 20240601;
  LawConfig law;
  int histogram_bins = 60;
  StieltjesGridConfig stieltjes;
  int mc_samples = 200000;
  std::string output_dir = "rmt_out";

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// ignored; a `[section]` line prefixes the keys that follow with `section.`.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Every field as `key = value`, doubles at 17 significant digits, so that
/// parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const ExperimentConfig& config);

/// Kernel for dimension config.p.
KernelSpec make_kernel(const ExperimentConfig& config);

/// Shortest text that parses back to the same double ("inf", "-inf" allowed).
std::string format_double(double value);
double parse_double(const std::string& text);

}  // namespace rmt::harness
