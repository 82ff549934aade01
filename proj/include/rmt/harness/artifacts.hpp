#pragma once

#include <string>
#include <vector>

#include "rmt/harness/experiment.hpp"

namespace rmt::harness {

/// Columns bin_left, bin_right, density.
void write_histogram_csv(const Histogram& histogram, const std::string& path);
/// Columns x, density, cdf.
void write_law_csv(const LawGrid& grid, const std::string& path);
void write_text(const std::string& path, const std::string& content);

/// Label and metrics of every panel.
void write_summary_json(const std::vector<FigurePanel>& panels, const std::string& path);

/// diagnostics.csv (one row per run), diagnostics_summary.csv (per size) and
/// diagnostics_verdict.json under `directory`.
void write_diagnostics_csv(const DiagnosticsResult& result, const std::string& directory);

/// Trapezoid mass of a tabulated density.
double trapezoid_mass(const LawGrid& grid);

}  // namespace rmt::harness
