#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace adpdtc {

/// Uniformly sampled real signal; sample k sits at t0 + k*dt.
struct TimeSeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
};

/// Complex spectrum on a uniform frequency grid (Hz), ordered from most
/// negative to most positive frequency.
struct Spectrum {
  std::vector<double> frequencies;
  std::vector<std::complex<double>> amplitudes;

  std::size_t size() const { return frequencies.size(); }
};

/// Real samples at arbitrary (increasing) times.
struct SampledSignal {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
};

/// Stroboscopic signal S(N) for N = first_n, first_n + 1, ...; sample k is
/// taken at t_offset + N * period.
struct DiscreteSignal {
  std::int64_t first_n = 1;
  double period = 0.0;
  double t_offset = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::int64_t n(std::size_t k) const { return first_n + static_cast<std::int64_t>(k); }
  double time(std::size_t k) const { return t_offset + static_cast<double>(n(k)) * period; }
};

}  // namespace adpdtc
