#include "adpdtc/lineshape.hpp"

#include "adpdtc/error.hpp"
#include "adpdtc/fft.hpp"

#include <algorithm>
#include <cmath>

namespace adpdtc::lineshape {

TimeSeries ising_fid(const std::vector<IsingCoupling>& couplings, bool like_spin_scaling, double dt,
                     std::size_t n_samples) {
  if (n_samples < 2) throw InvalidArgument("ising_fid needs at least two samples");
  if (!(dt > 0.0)) throw InvalidArgument("ising_fid needs dt > 0");
  for (const auto& c : couplings) {
    if (c.twice_spin != 1 && c.twice_spin != 2) throw InvalidArgument("only spin-1/2 and spin-1 partners are supported");
    if (!std::isfinite(c.b)) throw InvalidArgument("non-finite coupling");
  }

  TimeSeries out;
  out.t0 = 0.0;
  out.dt = dt;
  out.values.assign(n_samples, 1.0);
  const double half_scale = like_spin_scaling ? 1.5 : 1.0;
  for (std::size_t k = 1; k < n_samples; ++k) {
    const double t = dt * static_cast<double>(k);
    double prod = 1.0;
    for (const auto& c : couplings) {
      if (c.twice_spin == 1) {
        prod *= std::cos(half_scale * c.b * t);
      } else {
        prod *= (2.0 * std::cos(2.0 * c.b * t) + 1.0) / 3.0;
      }
    }
    out.values[k] = prod;
  }
  return out;
}

namespace {

void check_same_grid(const std::vector<TimeSeries>& series) {
  if (series.empty()) throw InvalidArgument("need at least one series");
  const auto& ref = series.front();
  for (const auto& s : series) {
    if (s.size() != ref.size() || s.dt != ref.dt || s.t0 != ref.t0) {
      throw InvalidArgument("time series grids differ");
    }
  }
}

}  // namespace

TimeSeries average(const std::vector<TimeSeries>& series) {
  check_same_grid(series);
  TimeSeries out = series.front();
  for (std::size_t i = 1; i < series.size(); ++i)
    for (std::size_t k = 0; k < out.size(); ++k) out.values[k] += series[i].values[k];
  for (auto& v : out.values) v /= static_cast<double>(series.size());
  return out;
}

TimeSeries four_origin_average(const std::vector<TimeSeries>& per_origin) {
  if (per_origin.size() != 4) throw InvalidArgument("four_origin_average expects exactly four series");
  return average(per_origin);
}

TimeSeries combine(const std::vector<TimeSeries>& signals) {
  check_same_grid(signals);
  TimeSeries out = signals.front();
  for (std::size_t i = 1; i < signals.size(); ++i)
    for (std::size_t k = 0; k < out.size(); ++k) out.values[k] *= signals[i].values[k];
  return out;
}

Spectrum spectrum(const TimeSeries& s, std::size_t zero_fill_factor) {
  if (zero_fill_factor < 1) throw InvalidArgument("zero_fill_factor must be >= 1");
  if (s.size() < 1) throw InvalidArgument("empty time series");
  if (s.t0 != 0.0) throw InvalidArgument("line-shape spectra expect series starting at t = 0");
  const std::size_t nz = s.size() * zero_fill_factor;
  const std::size_t len = 2 * nz - 1;

  fft::cvec buf(len, 0.0);
  for (std::size_t j = 0; j < s.size(); ++j) {
    buf[j] = s.values[j];
    if (j > 0) buf[len - j] = s.values[j];
  }
  const fft::cvec f = fft::forward(buf);

  Spectrum sp;
  sp.frequencies.resize(len);
  sp.amplitudes.resize(len);
  const double dnu = 1.0 / (static_cast<double>(len) * s.dt);
  const long half = static_cast<long>(nz) - 1;
  for (long m = -half; m <= half; ++m) {
    const std::size_t i = static_cast<std::size_t>(m + half);
    const std::size_t bin = static_cast<std::size_t>((m + static_cast<long>(len)) % static_cast<long>(len));
    sp.frequencies[i] = static_cast<double>(m) * dnu;
    sp.amplitudes[i] = f[bin] * s.dt;
  }
  return sp;
}

Spectrum gaussian_broaden(const Spectrum& sp, double fwhm_hz) {
  if (!(fwhm_hz >= 0.0)) throw InvalidArgument("fwhm must be >= 0");
  if (fwhm_hz == 0.0 || sp.size() < 2) return sp;

  const std::size_t len = sp.size();
  const double dnu = sp.frequencies[1] - sp.frequencies[0];
  if (!(dnu > 0.0)) throw InvalidArgument("spectrum grid must be increasing");
  std::size_t zero = 0;
  for (std::size_t i = 1; i < len; ++i)
    if (std::abs(sp.frequencies[i]) < std::abs(sp.frequencies[zero])) zero = i;
  if (std::abs(sp.frequencies[zero]) > 1e-6 * dnu) throw InvalidArgument("spectrum grid must contain 0 Hz");

  const long L = static_cast<long>(len);
  auto bin_of = [&](std::size_t i) {
    const long m = static_cast<long>(i) - static_cast<long>(zero);
    return static_cast<std::size_t>(((m % L) + L) % L);
  };

  fft::cvec buf(len);
  for (std::size_t i = 0; i < len; ++i) buf[bin_of(i)] = sp.amplitudes[i];
  fft::cvec t = fft::inverse(buf);

  const double dt = 1.0 / (static_cast<double>(len) * dnu);
  const double sigma_nu = fwhm_hz / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double sigma_t = 1.0 / (kTwoPi * sigma_nu);
  for (long j = 0; j < L; ++j) {
    const long jj = j <= L / 2 ? j : j - L;
    const double tj = static_cast<double>(jj) * dt;
    t[static_cast<std::size_t>(j)] *= std::exp(-tj * tj / (2.0 * sigma_t * sigma_t)) / static_cast<double>(len);
  }
  const fft::cvec f = fft::forward(t);

  Spectrum out = sp;
  for (std::size_t i = 0; i < len; ++i) out.amplitudes[i] = f[bin_of(i)];
  return out;
}

double rms_width(const Spectrum& sp) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const double re = sp.amplitudes[i].real();
    num += sp.frequencies[i] * sp.frequencies[i] * re;
    den += re;
  }
  if (!(den > 0.0)) throw DegenerateSpectrum("spectrum has non-positive total weight");
  if (num < 0.0) throw DegenerateSpectrum("spectrum has negative second moment");
  return std::sqrt(num / den);
}

std::vector<IsingCoupling> ising_couplings(const lattice::CouplingTable& table, Interaction which) {
  using lattice::SiteKind;
  std::vector<IsingCoupling> out;
  for (const auto& e : table.entries) {
    switch (which) {
      case Interaction::PP:
        if (e.kind == SiteKind::Phosphorus) out.push_back({e.b, 1});
        break;
      case Interaction::PH:
        if (e.kind == SiteKind::AmmoniumProton || e.kind == SiteKind::AcidProton) out.push_back({e.b, 1});
        break;
      case Interaction::PN:
        if (e.kind == SiteKind::Nitrogen) out.push_back({e.b, 2});
        break;
    }
  }
  return out;
}

LineshapeResult simulate(const lattice::UnitCell& cell, const LineshapeOptions& options) {
  if (options.interactions.empty()) throw InvalidArgument("select at least one interaction");
  options.orientation.validate();

  std::vector<TimeSeries> per_origin;
  for (int o = 0; o < static_cast<int>(cell.phosphorus.size()); ++o) {
    const auto table = lattice::coupling_table(lattice::build_cluster(cell, o, options.radius), options.orientation);
    std::vector<TimeSeries> factors;
    for (Interaction which : options.interactions) {
      factors.push_back(ising_fid(ising_couplings(table, which), which == Interaction::PP, options.dt,
                                  options.n_samples));
    }
    per_origin.push_back(combine(factors));
  }

  LineshapeResult result;
  result.fid = average(per_origin);
  result.rms_width_hz = rms_width(spectrum(result.fid, 1));
  result.spectrum = gaussian_broaden(spectrum(result.fid, options.zero_fill), options.broaden_fwhm_hz);
  return result;
}

double rms_coupling(const lattice::UnitCell& cell, double radius, const lattice::Orientation& orientation,
                    Interaction which) {
  double acc = 0.0;
  const int n = static_cast<int>(cell.phosphorus.size());
  for (int o = 0; o < n; ++o) {
    const auto table = lattice::coupling_table(lattice::build_cluster(cell, o, radius), orientation);
    for (const auto& c : ising_couplings(table, which)) acc += c.b * c.b;
  }
  return std::sqrt(acc / n);
}

double predicted_width_hz(Interaction which, double b_rms) {
  double factor = 1.0;
  switch (which) {
    case Interaction::PP:
      factor = 1.5;
      break;
    case Interaction::PH:
      factor = 1.0;
      break;
    case Interaction::PN:
      factor = 2.0 * std::sqrt(2.0 / 3.0);
      break;
  }
  return factor * b_rms / kTwoPi;
}

Interaction interaction_from_string(const std::string& name) {
  if (name == "PP") return Interaction::PP;
  if (name == "PH") return Interaction::PH;
  if (name == "PN") return Interaction::PN;
  throw InvalidArgument("unknown interaction '" + name + "' (expected PP, PH or PN)");
}

std::string to_string(Interaction which) {
  switch (which) {
    case Interaction::PP:
      return "PP";
    case Interaction::PH:
      return "PH";
    case Interaction::PN:
      return "PN";
  }
  return "?";
}

}  // namespace adpdtc::lineshape
