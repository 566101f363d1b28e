#pragma once

#include "adpdtc/analysis.hpp"
#include "adpdtc/lattice.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adpdtc::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

/// Bad flag value or flag combination.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fit or solver did not converge.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Literals: "392.5us", "0.4ms", "2s", "1.04pi", "pi/2", plain SI numbers.
double parse_time(const std::string& text);
double parse_angle(const std::string& text);

/// "a:b:n" (n points, inclusive), "a,b,c", or a single value.
std::vector<double> parse_grid(const std::string& text, double (*element)(const std::string&));

/// "a:b" inclusive cycle range.
analysis::Window parse_window(const std::string& text);
/// "a:b" or "b" (meaning 0:b).
std::pair<std::int64_t, std::int64_t> parse_count_range(const std::string& text);
/// "THETA,PHI" in degrees.
lattice::Orientation parse_orientation(const std::string& text);

/// Flat JSON object -> "--key=value" tokens. Arrays are joined with ',',
/// objects become one "--key=k=v" per entry.
std::vector<std::string> config_tokens(const nlohmann::json& config);

/// Entry point minus the program name; args[0] is the subcommand.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace adpdtc::cli
