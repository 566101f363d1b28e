#include "adpdtc/series_io.hpp"

#include "adpdtc/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace adpdtc::io {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_time_series_csv(std::ostream& os, const TimeSeries& ts) {
  os << "t_s,value\n";
  for (std::size_t k = 0; k < ts.size(); ++k) os << format_number(ts.time(k)) << ',' << format_number(ts.values[k]) << '\n';
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum) {
  os << "freq_Hz,re,im\n";
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    os << format_number(spectrum.frequencies[k]) << ',' << format_number(spectrum.amplitudes[k].real()) << ','
       << format_number(spectrum.amplitudes[k].imag()) << '\n';
  }
}

void write_discrete_csv(std::ostream& os, const DiscreteSignal& signal) {
  os << "N,t_s,S\n";
  for (std::size_t k = 0; k < signal.size(); ++k) {
    os << signal.n(k) << ',' << format_number(signal.time(k)) << ',' << format_number(signal.values[k]) << '\n';
  }
}

void write_f_curve_csv(std::ostream& os, const std::vector<double>& thetas, const std::vector<double>& f) {
  if (thetas.size() != f.size()) throw InvalidArgument("theta and f columns differ in length");
  os << "theta_rad,f\n";
  for (std::size_t k = 0; k < f.size(); ++k) os << format_number(thetas[k]) << ',' << format_number(f[k]) << '\n';
}

void write_boundary_csv(std::ostream& os, const std::vector<BoundaryRow>& rows) {
  os << "tau_s,theta_left,theta_right,cutoff\n";
  for (const auto& r : rows) {
    os << format_number(r.tau) << ',' << format_number(r.left) << ',' << format_number(r.right) << ','
       << format_number(r.cutoff) << '\n';
  }
}

namespace {

// Numeric rows of a CSV; a non-numeric first line is taken as the header.
std::vector<std::vector<double>> read_rows(std::istream& is, std::size_t columns) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        numeric = false;
        break;
      }
      while (*end == ' ' || *end == '\t') ++end;
      if (*end != '\0') {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw IoError("non-numeric CSV row at line " + std::to_string(lineno));
    }
    if (row.size() < columns) throw IoError("CSV line " + std::to_string(lineno) + " has too few columns");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("CSV has no data rows");
  return rows;
}

}  // namespace

DiscreteSignal read_discrete_csv(std::istream& is) {
  const auto rows = read_rows(is, 3);
  DiscreteSignal out;
  out.first_n = static_cast<std::int64_t>(std::llround(rows[0][0]));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (std::llround(rows[k][0]) != out.first_n + static_cast<std::int64_t>(k)) {
      throw IoError("N column must increase by one per row");
    }
    out.values.push_back(rows[k][2]);
  }
  if (rows.size() > 1) out.period = (rows.back()[1] - rows[0][1]) / static_cast<double>(rows.size() - 1);
  out.t_offset = rows[0][1] - static_cast<double>(out.first_n) * out.period;
  return out;
}

TimeSeries read_time_series_csv(std::istream& is) {
  const auto rows = read_rows(is, 2);
  TimeSeries out;
  out.t0 = rows[0][0];
  if (rows.size() > 1) out.dt = (rows.back()[0] - rows[0][0]) / static_cast<double>(rows.size() - 1);
  if (rows.size() > 1 && !(out.dt > 0.0)) throw IoError("time column must increase");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (std::abs(rows[k][0] - out.time(k)) > 1e-6 * out.dt) throw IoError("time column is not uniformly spaced");
    out.values.push_back(rows[k][1]);
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> read_f_curve_csv(std::istream& is) {
  const auto rows = read_rows(is, 2);
  std::pair<std::vector<double>, std::vector<double>> out;
  for (const auto& r : rows) {
    out.first.push_back(r[0]);
    out.second.push_back(r[1]);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace adpdtc::io
