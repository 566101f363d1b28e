#include "adpdtc/error.hpp"
#include "adpdtc/pulseq.hpp"
#include "adpdtc_cli/cli.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

namespace adpdtc::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double finite_value(const std::string& text, const char* what) {
  double v = 0.0;
  try {
    v = pulseq::parse_value(text).to_double();
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad ") + what + " '" + text + "': " + e.what());
  }
  if (!std::isfinite(v)) throw UsageError(std::string("non-finite ") + what + " '" + text + "'");
  return v;
}

std::int64_t integer(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw UsageError("expected an integer, got '" + text + "'");
  }
  if (used != text.size()) throw UsageError("expected an integer, got '" + text + "'");
  return v;
}

}  // namespace

double parse_time(const std::string& text) {
  const double v = finite_value(text, "time");
  if (v < 0.0) throw UsageError("negative time '" + text + "'");
  return v;
}

double parse_angle(const std::string& text) { return finite_value(text, "angle"); }

std::vector<double> parse_grid(const std::string& text, double (*element)(const std::string&)) {
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("grid must be a:b:n, got '" + text + "'");
    const double a = element(parts[0]);
    const double b = element(parts[1]);
    const std::int64_t n = integer(parts[2]);
    if (n < 1) throw UsageError("grid needs at least one point");
    if (n == 1) return {a};
    std::vector<double> out;
    for (std::int64_t i = 0; i < n; ++i) out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(element(p));
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

analysis::Window parse_window(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError("window must be a:b, got '" + text + "'");
  analysis::Window w{integer(parts[0]), integer(parts[1])};
  if (w.start < 1 || w.end < w.start) throw UsageError("window needs 1 <= a <= b, got '" + text + "'");
  return w;
}

std::pair<std::int64_t, std::int64_t> parse_count_range(const std::string& text) {
  const auto parts = split(text, ':');
  std::pair<std::int64_t, std::int64_t> r;
  if (parts.size() == 1) {
    r = {0, integer(parts[0])};
  } else if (parts.size() == 2) {
    r = {integer(parts[0]), integer(parts[1])};
  } else {
    throw UsageError("range must be a:b, got '" + text + "'");
  }
  if (r.first < 0 || r.second < r.first) throw UsageError("range needs 0 <= a <= b, got '" + text + "'");
  return r;
}

lattice::Orientation parse_orientation(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("orientation must be THETA,PHI in degrees, got '" + text + "'");
  lattice::Orientation o;
  try {
    std::size_t u1 = 0, u2 = 0;
    o.theta_deg = std::stod(parts[0], &u1);
    o.phi_deg = std::stod(parts[1], &u2);
    if (u1 != parts[0].size() || u2 != parts[1].size()) throw std::invalid_argument("trailing text");
  } catch (const std::exception&) {
    throw UsageError("orientation must be THETA,PHI in degrees, got '" + text + "'");
  }
  try {
    o.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return o;
}

std::vector<std::string> config_tokens(const nlohmann::json& config) {
  if (!config.is_object()) throw UsageError("config file must hold a flat JSON object");
  auto scalar = [](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw UsageError("config values must be scalars, arrays of scalars or string maps");
  };
  std::vector<std::string> out;
  for (const auto& [key, value] : config.items()) {
    if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + scalar(v);
      out.push_back("--" + key + "=" + joined);
    } else if (value.is_object()) {
      for (const auto& [k, v] : value.items()) out.push_back("--" + key + "=" + k + "=" + scalar(v));
    } else {
      out.push_back("--" + key + "=" + scalar(value));
    }
  }
  return out;
}

}  // namespace adpdtc::cli
