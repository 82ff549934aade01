#include "rmt/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace rmt::harness {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& text) {
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
  if (out.empty()) throw ConfigError("config: '" + key + "' expects a comma-separated list");
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const std::string t = trim(text);
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && t.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end)
    throw std::invalid_argument("not a number: '" + text + "'");
  return value;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (p < 2 || n < 2) fail("p and n must be at least 2");
  if (trials < 1) fail("trials must be at least 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("sigma must be positive");
  if (histogram_bins < 1) fail("histogram.bins must be at least 1");
  if (mc_samples < 1) fail("mc_samples must be at least 1");
  if (stieltjes.points < 2) fail("stieltjes.points must be at least 2");
  if (stieltjes.v_schedule.empty()) fail("stieltjes.v_schedule must not be empty");
  for (double v : stieltjes.v_schedule)
    if (!(v > 0.0)) fail("stieltjes.v_schedule entries must be positive");
  if (stieltjes.x_lo && stieltjes.x_hi && !(*stieltjes.x_hi > *stieltjes.x_lo))
    fail("stieltjes.x_hi must exceed stieltjes.x_lo");
  if (regime == Regime::semi_high_dim && static_cast<long long>(p) * p <= n)
    fail("semi_high_dim regime needs p^2 > n");

  const auto& k = kernel;
  if (k.variant == "constant") {
    if (k.radius || k.tau || k.beta || k.z_alpha) fail("constant kernel takes no parameters");
  } else if (k.variant == "indicator") {
    const int given = (k.radius ? 1 : 0) + (k.beta ? 1 : 0) + (k.z_alpha ? 1 : 0);
    if (given != 1) fail("indicator kernel needs exactly one of kernel.radius, kernel.beta, kernel.z_alpha");
    if (k.tau) fail("indicator kernel does not take kernel.tau");
    if (k.radius && !(*k.radius >= 0.0)) fail("kernel.radius must be non-negative");
    if (k.beta && !(*k.beta >= -2.0)) fail("kernel.beta must be at least -2");
    if (k.z_alpha && std::isnan(*k.z_alpha)) fail("kernel.z_alpha is NaN");
  } else if (k.variant == "gaussian") {
    if (!k.tau || !(*k.tau > 0.0) || !std::isfinite(*k.tau)) fail("gaussian kernel needs kernel.tau > 0");
    if (k.radius || k.beta || k.z_alpha) fail("gaussian kernel takes only kernel.tau");
  } else {
    fail("unknown kernel.variant '" + k.variant + "'");
  }

  if (law.type != "auto" && law.type != "mp" && law.type != "sc" && law.type != "genmp" &&
      law.type != "none")
    fail("unknown law.type '" + law.type + "'");
  if (law.smooth_scale != "alpha_squared" && law.smooth_scale != "alpha")
    fail("law.smooth_scale must be alpha_squared or alpha");
  if (law.c && !(*law.c > 0.0)) fail("law.c must be positive");
  if (law.scale && !(*law.scale > 0.0)) fail("law.scale must be positive");
  if (law.variance && !(*law.variance > 0.0)) fail("law.variance must be positive");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::map<std::string, std::string> entries;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!section.empty()) key = section + "." + key;
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    if (!entries.emplace(key, value).second) throw ConfigError("config: duplicate key '" + key + "'");
  }

  for (const auto& [key, value] : entries) {
    try {
      if (key == "regime") c.regime = parse_regime(value);
      else if (key == "p") c.p = parse_integer<int>(key, value);
      else if (key == "n") c.n = parse_integer<int>(key, value);
      else if (key == "entry_law") c.entry_law = parse_entry_law(value);
      else if (key == "sigma") c.sigma = parse_real(key, value);
      else if (key == "kernel.variant") c.kernel.variant = value;
      else if (key == "kernel.radius") c.kernel.radius = parse_real(key, value);
      else if (key == "kernel.tau") c.kernel.tau = parse_real(key, value);
      else if (key == "kernel.beta") c.kernel.beta = parse_real(key, value);
      else if (key == "kernel.z_alpha") c.kernel.z_alpha = parse_real(key, value);
      else if (key == "trials") c.trials = parse_integer<int>(key, value);
      else if (key == "master_seed") c.master_seed = parse_integer<std::uint64_t>(key, value);
      else if (key == "histogram.bins") c.histogram_bins = parse_integer<int>(key, value);
      else if (key == "stieltjes.x_lo") c.stieltjes.x_lo = parse_real(key, value);
      else if (key == "stieltjes.x_hi") c.stieltjes.x_hi = parse_real(key, value);
      else if (key == "stieltjes.points") c.stieltjes.points = parse_integer<int>(key, value);
      else if (key == "stieltjes.v_schedule") c.stieltjes.v_schedule = parse_list(key, value);
      else if (key == "output_dir") c.output_dir = value;
      else if (key == "mc_samples") c.mc_samples = parse_integer<int>(key, value);
      else if (key == "law.type") c.law.type = value;
      else if (key == "law.c") c.law.c = parse_real(key, value);
      else if (key == "law.scale") c.law.scale = parse_real(key, value);
      else if (key == "law.variance") c.law.variance = parse_real(key, value);
      else if (key == "law.z_alpha") c.law.z_alpha = parse_real(key, value);
      else if (key == "law.smooth_scale") c.law.smooth_scale = value;
      else throw ConfigError("config: unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto put = [&out](const std::string& key, const std::string& value) { out << key << " = " << value << '\n'; };
  auto put_opt = [&](const std::string& key, const std::optional<double>& v) {
    if (v) put(key, format_double(*v));
  };
  put("regime", std::string(to_string(c.regime)));
  put("p", std::to_string(c.p));
  put("n", std::to_string(c.n));
  put("entry_law", std::string(to_string(c.entry_law)));
  put("sigma", format_double(c.sigma));
  put("kernel.variant", c.kernel.variant);
  put_opt("kernel.radius", c.kernel.radius);
  put_opt("kernel.tau", c.kernel.tau);
  put_opt("kernel.beta", c.kernel.beta);
  put_opt("kernel.z_alpha", c.kernel.z_alpha);
  put("trials", std::to_string(c.trials));
  put("master_seed", std::to_string(c.master_seed));
  put("law.type", c.law.type);
  put_opt("law.c", c.law.c);
  put_opt("law.scale", c.law.scale);
  put_opt("law.variance", c.law.variance);
  put_opt("law.z_alpha", c.law.z_alpha);
  put("law.smooth_scale", c.law.smooth_scale);
  put("histogram.bins", std::to_string(c.histogram_bins));
  put_opt("stieltjes.x_lo", c.stieltjes.x_lo);
  put_opt("stieltjes.x_hi", c.stieltjes.x_hi);
  put("stieltjes.points", std::to_string(c.stieltjes.points));
  std::string schedule;
  for (std::size_t k = 0; k < c.stieltjes.v_schedule.size(); ++k)
    schedule += (k ? ", " : "") + format_double(c.stieltjes.v_schedule[k]);
  put("stieltjes.v_schedule", schedule);
  put("mc_samples", std::to_string(c.mc_samples));
  put("output_dir", c.output_dir);
  return out.str();
}

KernelSpec make_kernel(const ExperimentConfig& config) {
  config.validate();
  const auto& k = config.kernel;
  if (k.variant == "constant") return KernelSpec::constant(config.p);
  if (k.variant == "gaussian") return KernelSpec::gaussian(config.p, *k.tau);
  if (k.radius) return KernelSpec::indicator(config.p, *k.radius);
  if (k.beta) return KernelSpec::indicator_from_beta(config.p, *k.beta, config.sigma);
  return KernelSpec::indicator_from_z_alpha(config.p, *k.z_alpha, config.sigma);
}

}  // namespace rmt::harness
