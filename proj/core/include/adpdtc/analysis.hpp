#pragma once

#include "adpdtc/signal.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace adpdtc::analysis {

/// Inclusive range of cycle numbers N (1-based in the usual S(1..M) case).
struct Window {
  std::int64_t start = 1;
  std::int64_t end = 128;

  std::int64_t length() const { return end - start + 1; }
};

/// S(k/M_w) = sum_{N=start}^{end} S(N) exp(-2 pi i k (N - start) / M_w).
std::vector<std::complex<double>> dft(const DiscreteSignal& sig, const Window& window);
/// Convenience: values are S(1), S(2), ...
std::vector<std::complex<double>> dft(const std::vector<double>& values, const Window& window);

/// nu~_k = k / M_w, k = 0..M_w-1.
std::vector<double> normalized_frequencies(std::size_t window_length);

/// |S(1/2)|^2 / sum |S(nu~)|^2 over every bin including DC.
/// Odd window lengths put 1/2 off-grid and throw InvalidArgument.
double crystalline_fraction(const DiscreteSignal& sig, const Window& window);
double crystalline_fraction(const std::vector<double>& values, const Window& window);

// ---- fitting ----------------------------------------------------------------

struct FitReport {
  bool converged = false;
  double residual = 0.0;  // sum of squared residuals of the best start
  int iterations = 0;     // function evaluations of the best start
  int starts = 0;
};

struct GaussianFit {
  double amplitude = 0.0;
  double center = 0.0;
  double sigma = 0.0;
  FitReport report;
};

struct SuperGaussianFit {
  double amplitude = 0.0;
  double center = 0.0;
  double sigma = 0.0;
  double p = 2.0;
  FitReport report;
};

/// A exp(-(x - x0)^2 / (2 sigma^2)).
double gaussian(double x, double amplitude, double center, double sigma);
/// A exp(-(|x - x0| / sigma)^p / 2).
double super_gaussian(double x, double amplitude, double center, double sigma, double p);

inline constexpr std::uint64_t kDefaultSeed = 20240601;

GaussianFit fit_gaussian(const std::vector<double>& x, const std::vector<double>& y,
                         std::uint64_t seed = kDefaultSeed);
/// Center held fixed (normally from a prior Gaussian fit).
SuperGaussianFit fit_super_gaussian(const std::vector<double>& x, const std::vector<double>& y, double center,
                                    std::uint64_t seed = kDefaultSeed);

struct Boundary {
  double left;
  double right;
};

/// Where the fitted curve equals `cutoff`: x0 -/+ sigma (2 ln(A/cutoff))^{1/p}.
/// No boundary when A <= cutoff.
std::optional<Boundary> boundary_extract(double amplitude, double center, double sigma, double p, double cutoff);
std::optional<Boundary> boundary_extract(const GaussianFit& fit, double cutoff);
std::optional<Boundary> boundary_extract(const SuperGaussianFit& fit, double cutoff);

/// |theta - pi| = W tau comparison line; W in rad/s.
Boundary w_tau_line(double w_rad_per_s, double tau);

// ---- closed-form decay models -----------------------------------------------

double product_of_cosines(double epsilon, std::int64_t n);
/// [cos^2(d) cos(eps) - sin^2(d)]^N for flanking transient rotations d.
double phase_transient_model(double epsilon, double transient_angle, std::int64_t n);

struct AngleDistribution {
  std::vector<std::pair<double, double>> points;  // (epsilon_i, p_i)

  /// Throws InvalidArgument unless the weights are >= 0 and sum to 1 within 1e-9.
  void validate() const;
};

/// sum_i p_i cos^N(eps_i + offset).
double inhomogeneity_model(const AngleDistribution& dist, double epsilon_offset, std::int64_t n);

// ---- H1 inhomogeneity -------------------------------------------------------

/// nutation(t) / hahn(t/2), with hahn linearly interpolated. Samples whose
/// divisor is smaller than floor_fraction * |hahn(0)| are dropped.
SampledSignal nutation_correct(const TimeSeries& nutation, const TimeSeries& hahn, double floor_fraction = 0.02);

struct GaussianComponent {
  double amplitude;
  double nu;     // Hz
  double sigma;  // Hz
};

/// sum_k A_k cos(2 pi nu_k t) exp(-2 pi^2 sigma_k^2 t^2).
double two_gaussian_signal(double t, const std::vector<GaussianComponent>& components);

struct H1Fit {
  std::vector<GaussianComponent> components;  // two entries, larger amplitude first
  double nu_peak = 0.0;
  AngleDistribution epsilon;  // eps_i = pi (nu_i / nu_peak - 1)
  FitReport report;
};

H1Fit fit_h1_distribution(const SampledSignal& corrected, std::size_t histogram_bins = 41,
                          std::uint64_t seed = kDefaultSeed);

// ---- window-size model ------------------------------------------------------

struct WindowModel {
  double n0 = 125.0;       // N* at theta = pi
  double width = 0.04;     // Lorentzian half width in theta / pi
  std::int64_t length = 128;
};

/// N*(theta) = n0 width^2 / ((theta/pi - 1)^2 + width^2).
double lorentzian_nstar(double theta, const WindowModel& model = {});

/// f(theta) for S(N) = (-1)^N exp(-N / N*(theta)), N = 1..length.
std::vector<double> window_effect_model(const std::vector<double>& thetas, const Window& window,
                                        const WindowModel& model = {});

// ---- misc -------------------------------------------------------------------

/// Time of the first sample with |S| < level, or nothing if it never drops.
std::optional<double> time_to_fraction(const DiscreteSignal& sig, double level = 0.5);

}  // namespace adpdtc::analysis
