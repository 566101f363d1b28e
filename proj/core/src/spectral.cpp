#include "adpdtc/analysis.hpp"
#include "adpdtc/constants.hpp"
#include "adpdtc/error.hpp"
#include "adpdtc/fft.hpp"

#include <cmath>
#include <limits>

namespace adpdtc::analysis {

std::vector<std::complex<double>> dft(const DiscreteSignal& sig, const Window& window) {
  if (window.length() < 1) throw InvalidArgument("empty DFT window");
  const std::int64_t last = sig.first_n + static_cast<std::int64_t>(sig.size()) - 1;
  if (window.start < sig.first_n || window.end > last) throw InvalidArgument("DFT window outside the signal");
  fft::cvec buf(static_cast<std::size_t>(window.length()));
  for (std::int64_t n = window.start; n <= window.end; ++n) {
    buf[static_cast<std::size_t>(n - window.start)] = sig.values[static_cast<std::size_t>(n - sig.first_n)];
  }
  return fft::forward(buf);
}

std::vector<std::complex<double>> dft(const std::vector<double>& values, const Window& window) {
  DiscreteSignal sig;
  sig.values = values;
  return dft(sig, window);
}

std::vector<double> normalized_frequencies(std::size_t window_length) {
  std::vector<double> out(window_length);
  for (std::size_t k = 0; k < window_length; ++k) out[k] = static_cast<double>(k) / static_cast<double>(window_length);
  return out;
}

double crystalline_fraction(const DiscreteSignal& sig, const Window& window) {
  if (window.length() % 2 != 0) throw InvalidArgument("odd window length: nu = 1/2 is not on the DFT grid");
  const auto spec = dft(sig, window);
  double total = 0.0;
  for (const auto& z : spec) total += std::norm(z);
  if (!(total > 0.0)) throw DegenerateSpectrum("signal has no spectral power in the window");
  return std::norm(spec[spec.size() / 2]) / total;
}

double crystalline_fraction(const std::vector<double>& values, const Window& window) {
  DiscreteSignal sig;
  sig.values = values;
  return crystalline_fraction(sig, window);
}

Boundary w_tau_line(double w_rad_per_s, double tau) {
  return {kPi - w_rad_per_s * tau, kPi + w_rad_per_s * tau};
}

double lorentzian_nstar(double theta, const WindowModel& model) {
  const double x = theta / kPi - 1.0;
  const double w2 = model.width * model.width;
  return model.n0 * w2 / (x * x + w2);
}

std::vector<double> window_effect_model(const std::vector<double>& thetas, const Window& window,
                                        const WindowModel& model) {
  if (model.length < 2) throw InvalidArgument("model length must be >= 2");
  if (window.start < 1 || window.end > model.length || window.length() < 1) {
    throw InvalidArgument("window outside 1..length");
  }
  std::vector<double> out;
  out.reserve(thetas.size());
  std::vector<double> s(static_cast<std::size_t>(model.length));
  for (double theta : thetas) {
    const double nstar = lorentzian_nstar(theta, model);
    for (std::int64_t n = 1; n <= model.length; ++n) {
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      s[static_cast<std::size_t>(n - 1)] = std::isinf(nstar) ? sign : sign * std::exp(-static_cast<double>(n) / nstar);
    }
    out.push_back(crystalline_fraction(s, window));
  }
  return out;
}

std::optional<double> time_to_fraction(const DiscreteSignal& sig, double level) {
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (std::abs(sig.values[k]) < level) return sig.time(k);
  }
  return std::nullopt;
}

}  // namespace adpdtc::analysis
