#include "rmt/harness/artifacts.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rmt::harness {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const std::map<std::string, double>& values) {
  json out = json::object();
  for (const auto& [key, value] : values) out[key] = number_or_null(value);
  return out;
}

std::map<std::string, double> map_from_json(const json& j) {
  std::map<std::string, double> out;
  for (const auto& [key, value] : j.items())
    out[key] = value.is_null() ? std::nan("") : value.get<double>();
  return out;
}

json config_to_json(const ExperimentConfig& config) {
  json out = json::object();
  std::stringstream ss(serialize_config(config));
  std::string line;
  while (std::getline(ss, line)) {
    const auto eq = line.find(" = ");
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  std::string text;
  for (const auto& [key, value] : j.items()) text += key + " = " + value.get<std::string>() + "\n";
  return parse_config(text);
}

}  // namespace

void write_text(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

void write_histogram_csv(const Histogram& histogram, const std::string& path) {
  std::string text = "bin_left,bin_right,density\n";
  for (std::size_t k = 0; k < histogram.densities.size(); ++k)
    text += format_double(histogram.bin_edges[k]) + "," + format_double(histogram.bin_edges[k + 1]) + "," +
            format_double(histogram.densities[k]) + "\n";
  write_text(path, text);
}

void write_law_csv(const LawGrid& grid, const std::string& path) {
  std::string text = "x,density,cdf\n";
  for (std::size_t k = 0; k < grid.x.size(); ++k)
    text += format_double(grid.x[k]) + "," + format_double(grid.density[k]) + "," + format_double(grid.cdf[k]) +
            "\n";
  write_text(path, text);
}

double trapezoid_mass(const LawGrid& grid) {
  double mass = 0.0;
  for (std::size_t k = 1; k < grid.x.size(); ++k)
    mass += 0.5 * (grid.density[k] + grid.density[k - 1]) * (grid.x[k] - grid.x[k - 1]);
  return mass;
}

std::string report_to_json(const ComparisonReport& r) {
  json j;
  j["config"] = config_to_json(r.config);
  j["status"] = r.status;
  j["message"] = r.message;
  j["prediction"] = r.prediction;
  j["basis"] = r.basis;
  j["per_trial_ks"] = r.per_trial_ks;
  j["pooled_ks"] = r.pooled_ks ? json(*r.pooled_ks) : json(nullptr);
  j["w2_pairs"] = json::array();
  for (const auto& pair : r.w2_pairs) j["w2_pairs"].push_back({{"i", pair.i}, {"j", pair.j}, {"w2", pair.w2}});
  j["law_params"] = to_json(r.law_params);
  j["solver"] = {{"max_residual", r.solver_max_residual}, {"max_iters", r.solver_max_iterations}};
  j["pooled_mean"] = r.pooled_mean;
  j["pooled_min"] = r.pooled_min;
  j["pooled_max"] = r.pooled_max;
  j["runtime_seconds"] = r.runtime_seconds ? json(*r.runtime_seconds) : json(nullptr);
  j["supplementary"] = to_json(r.supplementary);
  return j.dump(2) + "\n";
}

ComparisonReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  ComparisonReport r;
  r.config = config_from_json(j.at("config"));
  r.status = j.at("status").get<std::string>();
  r.message = j.at("message").get<std::string>();
  r.prediction = j.at("prediction").get<std::string>();
  r.basis = j.at("basis").get<std::string>();
  r.per_trial_ks = j.at("per_trial_ks").get<std::vector<double>>();
  if (!j.at("pooled_ks").is_null()) r.pooled_ks = j.at("pooled_ks").get<double>();
  for (const auto& pair : j.at("w2_pairs"))
    r.w2_pairs.push_back({pair.at("i").get<int>(), pair.at("j").get<int>(), pair.at("w2").get<double>()});
  r.law_params = map_from_json(j.at("law_params"));
  r.solver_max_residual = j.at("solver").at("max_residual").get<double>();
  r.solver_max_iterations = j.at("solver").at("max_iters").get<int>();
  r.pooled_mean = j.at("pooled_mean").get<double>();
  r.pooled_min = j.at("pooled_min").get<double>();
  r.pooled_max = j.at("pooled_max").get<double>();
  if (!j.at("runtime_seconds").is_null()) r.runtime_seconds = j.at("runtime_seconds").get<double>();
  r.supplementary = map_from_json(j.at("supplementary"));
  return r;
}

void write_artifacts(const ExperimentResult& result, const std::string& directory) {
  const std::filesystem::path dir(directory);
  std::filesystem::create_directories(dir);
  write_histogram_csv(result.histogram, (dir / "histogram.csv").string());
  write_law_csv(result.law, (dir / "law.csv").string());
  write_text((dir / "report.json").string(), report_to_json(result.report));
}

void write_summary_json(const std::vector<FigurePanel>& panels, const std::string& path) {
  json j = json::array();
  for (const auto& panel : panels)
    j.push_back({{"label", panel.label}, {"status", panel.result.report.status}, {"metrics", to_json(panel.metrics)}});
  write_text(path, j.dump(2) + "\n");
}

void write_diagnostics_csv(const DiagnosticsResult& result, const std::string& directory) {
  const std::filesystem::path dir(directory);
  std::string rows = "p,n,replicate,seed,w2_m_mbar,max_xi_prime_over_n,hoeffding_bound,xax_hs\n";
  for (const auto& r : result.rows)
    rows += std::to_string(r.p) + "," + std::to_string(r.n) + "," + std::to_string(r.replicate) + "," +
            std::to_string(r.seed) + "," + format_double(r.w2_m_mbar) + "," +
            format_double(r.max_xi_prime_over_n) + "," + format_double(r.hoeffding_bound) + "," +
            format_double(r.xax_hs) + "\n";
  write_text((dir / "diagnostics.csv").string(), rows);

  std::string summary = "p,n,median_w2,median_xi_prime,median_xax_hs,fraction_within_bound\n";
  for (const auto& s : result.summaries)
    summary += std::to_string(s.p) + "," + std::to_string(s.n) + "," + format_double(s.median_w2) + "," +
               format_double(s.median_xi_prime) + "," + format_double(s.median_xax_hs) + "," +
               format_double(s.fraction_within_bound) + "\n";
  write_text((dir / "diagnostics_summary.csv").string(), summary);

  const json verdict = {{"verdict", result.verdict},
                        {"w2_decreasing", result.w2_decreasing},
                        {"xi_prime_decreasing", result.xi_prime_decreasing},
                        {"fraction_within_bound", result.fraction_within_bound}};
  write_text((dir / "diagnostics_verdict.json").string(), verdict.dump(2) + "\n");
}

}  // namespace rmt::harness
