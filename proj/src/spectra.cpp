#include "rmt/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rmt {

EmpiricalSpectrum::EmpiricalSpectrum(std::vector<double> eigenvalues, SpectrumSource source)
    : eigenvalues_(std::move(eigenvalues)), source_(std::move(source)) {
  require(!eigenvalues_.empty(), "empirical spectrum needs at least one eigenvalue");
  for (double v : eigenvalues_) require(std::isfinite(v), "empirical spectrum: non-finite eigenvalue");
  std::sort(eigenvalues_.begin(), eigenvalues_.end());
}

double EmpiricalSpectrum::cdf(double x) const {
  const auto it = std::upper_bound(eigenvalues_.begin(), eigenvalues_.end(), x);
  return static_cast<double>(it - eigenvalues_.begin()) / static_cast<double>(eigenvalues_.size());
}

double EmpiricalSpectrum::mean() const {
  return std::accumulate(eigenvalues_.begin(), eigenvalues_.end(), 0.0) /
         static_cast<double>(eigenvalues_.size());
}

EmpiricalSpectrum esd(std::vector<double> eigenvalues, SpectrumSource source) {
  return EmpiricalSpectrum(std::move(eigenvalues), std::move(source));
}

EmpiricalSpectrum pool(const std::vector<EmpiricalSpectrum>& spectra) {
  require(!spectra.empty(), "pool: no spectra");
  std::vector<double> all;
  for (const auto& s : spectra) all.insert(all.end(), s.eigenvalues().begin(), s.eigenvalues().end());
  return EmpiricalSpectrum(std::move(all), spectra.front().source());
}

double ks_distance(const EmpiricalSpectrum& spectrum, const CdfFunction& law_cdf) {
  const auto& values = spectrum.eigenvalues();
  const double m = static_cast<double>(values.size());
  double sup = 0.0;
  std::size_t k = 0;
  while (k < values.size()) {
    std::size_t next = k;
    while (next < values.size() && values[next] == values[k]) ++next;
    const double x = values[k];
    const double below = static_cast<double>(k) / m;
    const double at = static_cast<double>(next) / m;
    const double g_left = law_cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    const double g_at = law_cdf(x);
    sup = std::max({sup, std::abs(below - g_left), std::abs(at - g_at)});
    k = next;
  }
  return std::min(sup, 1.0);
}

double wasserstein2(const EmpiricalSpectrum& a, const EmpiricalSpectrum& b) {
  require(a.size() == b.size(), "wasserstein2: spectra must have equal length");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.eigenvalues()[i] - b.eigenvalues()[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

double Histogram::total_mass() const {
  double mass = 0.0;
  for (std::size_t k = 0; k < densities.size(); ++k)
    mass += densities[k] * (bin_edges[k + 1] - bin_edges[k]);
  return mass;
}

Histogram histogram(const EmpiricalSpectrum& spectrum, int bins,
                    std::optional<std::pair<double, double>> range) {
  require(bins >= 1, "histogram: bins must be at least 1");
  double lo;
  double hi;
  if (range) {
    std::tie(lo, hi) = *range;
    require(hi > lo, "histogram: empty range");
  } else {
    const double spread = spectrum.max() - spectrum.min();
    const double pad = spread > 0.0 ? 0.01 * spread : 0.5;
    lo = spectrum.min() - pad;
    hi = spectrum.max() + pad;
  }
  Histogram h;
  h.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / bins;
  for (int k = 0; k <= bins; ++k) h.bin_edges[k] = lo + k * width;
  h.bin_edges[bins] = hi;
  std::vector<double> counts(bins, 0.0);
  double inside = 0.0;
  for (double v : spectrum.eigenvalues()) {
    if (v < lo || v > hi) continue;
    auto k = static_cast<int>((v - lo) / width);
    k = std::clamp(k, 0, bins - 1);
    counts[k] += 1.0;
    inside += 1.0;
  }
  h.densities.resize(bins);
  for (int k = 0; k < bins; ++k) {
    const double w = h.bin_edges[k + 1] - h.bin_edges[k];
    h.densities[k] = inside > 0.0 ? counts[k] / (inside * w) : 0.0;
  }
  return h;
}

}  // namespace rmt
