#pragma once

#include "adpdtc/analysis.hpp"
#include "adpdtc/signal.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace adpdtc::io {

/// Round-trip exact formatting (%.17g).
std::string format_number(double x);

void write_time_series_csv(std::ostream& os, const TimeSeries& ts);        // t_s,value
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum);       // freq_Hz,re,im
void write_discrete_csv(std::ostream& os, const DiscreteSignal& signal);   // N,t_s,S
void write_f_curve_csv(std::ostream& os, const std::vector<double>& thetas, const std::vector<double>& f);

struct BoundaryRow {
  double tau;
  double left;
  double right;
  double cutoff;
};
void write_boundary_csv(std::ostream& os, const std::vector<BoundaryRow>& rows);

/// Reads `N,t_s,S` rows. N must increase by one from row to row; period and
/// offset are recovered from the time column.
DiscreteSignal read_discrete_csv(std::istream& is);
/// Reads `t_s,value` rows on a uniform grid (relative spacing error < 1e-6).
TimeSeries read_time_series_csv(std::istream& is);
/// Reads `theta_rad,f` rows.
std::pair<std::vector<double>, std::vector<double>> read_f_curve_csv(std::istream& is);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace adpdtc::io
