#include "adpdtc/analysis.hpp"
#include "adpdtc/constants.hpp"
#include "adpdtc/error.hpp"
#include "fit_internal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace adpdtc::analysis {

namespace {

double interpolate(const TimeSeries& s, double t) {
  const double x = (t - s.t0) / s.dt;
  const double last = static_cast<double>(s.size() - 1);
  if (x < -1e-9 || x > last + 1e-9) throw InvalidArgument("divisor series does not cover t/2");
  const double xc = std::clamp(x, 0.0, last);
  const auto i = static_cast<std::size_t>(std::floor(xc));
  if (i + 1 >= s.size()) return s.values.back();
  const double frac = xc - static_cast<double>(i);
  return s.values[i] * (1.0 - frac) + s.values[i + 1] * frac;
}

}  // namespace

SampledSignal nutation_correct(const TimeSeries& nutation, const TimeSeries& hahn, double floor_fraction) {
  if (nutation.size() == 0 || hahn.size() == 0) throw InvalidArgument("empty series");
  if (!(hahn.dt > 0.0) || !(nutation.dt > 0.0)) throw InvalidArgument("series need dt > 0");
  if (!(floor_fraction >= 0.0)) throw InvalidArgument("floor fraction must be >= 0");
  const double floor = floor_fraction * std::abs(hahn.values.front());
  SampledSignal out;
  for (std::size_t k = 0; k < nutation.size(); ++k) {
    const double t = nutation.time(k);
    const double d = interpolate(hahn, t / 2.0);
    if (std::abs(d) < floor || d == 0.0) continue;
    out.times.push_back(t);
    out.values.push_back(nutation.values[k] / d);
  }
  return out;
}

double two_gaussian_signal(double t, const std::vector<GaussianComponent>& components) {
  double acc = 0.0;
  for (const auto& c : components) {
    acc += c.amplitude * std::cos(kTwoPi * c.nu * t) * std::exp(-2.0 * kPi * kPi * c.sigma * c.sigma * t * t);
  }
  return acc;
}

H1Fit fit_h1_distribution(const SampledSignal& sig, std::size_t histogram_bins, std::uint64_t seed) {
  const int m = static_cast<int>(sig.size());
  if (m < 8 || sig.values.size() != sig.times.size()) throw InvalidArgument("need at least eight samples");
  if (histogram_bins < 3) throw InvalidArgument("need at least three histogram bins");
  const auto& t = sig.times;
  const auto& y = sig.values;

  // Dominant frequency by projection scan.
  double min_dt = std::numeric_limits<double>::infinity();
  for (int i = 1; i < m; ++i) min_dt = std::min(min_dt, t[i] - t[i - 1]);
  if (!(min_dt > 0.0)) throw InvalidArgument("sample times must increase");
  const double nu_max = 0.5 / min_dt;
  double nu0 = 0.0;
  double best = -1.0;
  constexpr int kScan = 4000;
  for (int k = 1; k <= kScan; ++k) {
    const double nu = nu_max * k / kScan;
    std::complex<double> acc = 0.0;
    for (int i = 0; i < m; ++i) acc += y[i] * std::polar(1.0, -kTwoPi * nu * t[i]);
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      nu0 = nu;
    }
  }
  const double amp0 = std::abs(y.front()) > 0.0 ? y.front() : 1.0;
  // Envelope half-life from the running maximum of |y| over one period.
  double t_half = t.back();
  const double period = 1.0 / nu0;
  for (int i = 0; i < m; ++i) {
    double env = 0.0;
    for (int j = i; j < m && t[j] - t[i] <= period; ++j) env = std::max(env, std::abs(y[j]));
    if (env < 0.5 * std::abs(amp0)) {
      t_half = t[i];
      break;
    }
  }
  const double sigma0 = std::sqrt(std::log(2.0) / (2.0 * kPi * kPi)) / std::max(t_half, min_dt);

  detail::LeastSquaresProblem prob;
  prob.parameters = 6;  // (A, nu, ln sigma) x 2
  prob.values = m;
  prob.residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& f) {
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int k = 0; k < 2; ++k) {
        const double s = std::exp(q(3 * k + 2));
        acc += q(3 * k) * std::cos(kTwoPi * q(3 * k + 1) * t[i]) * std::exp(-2.0 * kPi * kPi * s * s * t[i] * t[i]);
      }
      f(i) = acc - y[i];
    }
  };
  prob.jacobian = [&](const Eigen::VectorXd& q, Eigen::MatrixXd& j) {
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < 2; ++k) {
        const double a = q(3 * k);
        const double nu = q(3 * k + 1);
        const double s = std::exp(q(3 * k + 2));
        const double e = std::exp(-2.0 * kPi * kPi * s * s * t[i] * t[i]);
        const double c = std::cos(kTwoPi * nu * t[i]);
        j(i, 3 * k) = c * e;
        j(i, 3 * k + 1) = -a * e * kTwoPi * t[i] * std::sin(kTwoPi * nu * t[i]);
        j(i, 3 * k + 2) = -a * c * e * 4.0 * kPi * kPi * s * s * t[i] * t[i];
      }
    }
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> split(0.5, 0.95);
  std::uniform_real_distribution<double> dnu(-0.1, 0.1);
  std::uniform_real_distribution<double> ls(std::log(0.3), std::log(3.0));
  const double ls0 = std::log(sigma0);
  std::vector<Eigen::VectorXd> starts;
  auto add = [&](double a1, double n1, double s1, double a2, double n2, double s2) {
    Eigen::VectorXd v(6);
    v << a1, n1, s1, a2, n2, s2;
    starts.push_back(v);
  };
  add(0.8 * amp0, nu0, ls0, 0.2 * amp0, 0.97 * nu0, ls0 + std::log(2.0));
  add(0.5 * amp0, nu0, ls0, 0.5 * amp0, 1.03 * nu0, ls0);
  while (starts.size() < 8) {
    const double f = split(rng);
    add(f * amp0, nu0 * (1.0 + 0.2 * dnu(rng)), ls0 + ls(rng), (1.0 - f) * amp0, nu0 * (1.0 + dnu(rng)), ls0 + ls(rng));
  }

  H1Fit fit;
  const auto res = detail::multi_start(prob, starts, fit.report);
  for (int k = 0; k < 2; ++k) fit.components.push_back({res.x(3 * k), res.x(3 * k + 1), std::exp(res.x(3 * k + 2))});
  std::sort(fit.components.begin(), fit.components.end(),
            [](const auto& a, const auto& b) { return std::abs(a.amplitude) > std::abs(b.amplitude); });
  auto& c0 = fit.components[0];
  auto& c1 = fit.components[1];
  const double sig_scale = std::max(c0.sigma, c1.sigma);
  if (std::abs(c0.nu - c1.nu) < 1e-3 * sig_scale + 1e-9 * std::abs(c0.nu) &&
      std::abs(c0.sigma - c1.sigma) < 1e-3 * sig_scale) {
    c0.amplitude += c1.amplitude;
    c1.amplitude = 0.0;
  }

  // Frequency density of the fitted components and the implied angle errors.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : fit.components) {
    if (c.amplitude <= 0.0) continue;
    lo = std::min(lo, c.nu - 4.0 * c.sigma);
    hi = std::max(hi, c.nu + 4.0 * c.sigma);
  }
  if (!std::isfinite(lo)) throw DegenerateSpectrum("fitted components have no positive weight");
  std::vector<double> nus(histogram_bins), dens(histogram_bins);
  double total = 0.0;
  std::size_t ipeak = 0;
  for (std::size_t i = 0; i < histogram_bins; ++i) {
    nus[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(histogram_bins - 1);
    double d = 0.0;
    for (const auto& c : fit.components) {
      if (c.amplitude <= 0.0) continue;
      const double u = (nus[i] - c.nu) / c.sigma;
      d += c.amplitude / (c.sigma * std::sqrt(kTwoPi)) * std::exp(-0.5 * u * u);
    }
    dens[i] = d;
    total += d;
    if (d > dens[ipeak]) ipeak = i;
  }
  fit.nu_peak = nus[ipeak];
  for (std::size_t i = 0; i < histogram_bins; ++i) {
    fit.epsilon.points.emplace_back(kPi * (nus[i] / fit.nu_peak - 1.0), dens[i] / total);
  }
  return fit;
}

}  // namespace adpdtc::analysis
