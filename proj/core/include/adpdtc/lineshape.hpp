#pragma once

#include "adpdtc/lattice.hpp"
#include "adpdtc/signal.hpp"

#include <cstddef>
#include <vector>

namespace adpdtc::lineshape {

struct IsingCoupling {
  double b;        // rad/s
  int twice_spin;  // 1 or 2
};

/// S(t) = prod_j F_j(t) sampled at t = k dt, k = 0..n_samples-1.
/// Spin-1/2 partners contribute cos(b t), or cos(3/2 b t) with
/// like_spin_scaling; spin-1 partners contribute (2 cos(2 b t) + 1) / 3.
TimeSeries ising_fid(const std::vector<IsingCoupling>& couplings, bool like_spin_scaling, double dt,
                     std::size_t n_samples);

/// Pointwise mean; all inputs must share t0, dt and length.
TimeSeries average(const std::vector<TimeSeries>& series);
TimeSeries four_origin_average(const std::vector<TimeSeries>& per_origin);

/// Pointwise product.
TimeSeries combine(const std::vector<TimeSeries>& signals);

/// Spectrum of the even extension S(-t) = S(t). The series (sampled from
/// t = 0) is zero-filled to n * zero_fill_factor points; the extension has odd
/// length L = 2 n' - 1 and the frequency grid is m / (L dt), symmetric about
/// 0. Amplitudes carry the dt factor so the integral of Re over frequency
/// approximates S(0).
Spectrum spectrum(const TimeSeries& s, std::size_t zero_fill_factor = 1);

/// Convolution with a unit-area Gaussian of the given FWHM (Hz), carried out
/// as time-domain multiplication.
Spectrum gaussian_broaden(const Spectrum& sp, double fwhm_hz);

/// sqrt(sum nu^2 Re / sum Re), Hz.
double rms_width(const Spectrum& sp);

enum class Interaction { PP, PH, PN };

struct LineshapeOptions {
  lattice::Orientation orientation{60.0, 0.0};
  double radius = 20.25;
  std::vector<Interaction> interactions{Interaction::PP, Interaction::PH, Interaction::PN};
  double dt = 5e-6;
  std::size_t n_samples = 4096;
  std::size_t zero_fill = 1;
  double broaden_fwhm_hz = 0.0;
};

struct LineshapeResult {
  TimeSeries fid;         // origin-averaged product of the selected factors
  Spectrum spectrum;      // after optional broadening, with zero fill
  double rms_width_hz;    // unbroadened, no zero fill
};

/// Full lattice line shape: for each of the four 31P origins the selected
/// interaction factors are multiplied, then the four products are averaged.
LineshapeResult simulate(const lattice::UnitCell& cell, const LineshapeOptions& options);

/// Per-interaction couplings of one coupling table in IsingCoupling form.
std::vector<IsingCoupling> ising_couplings(const lattice::CouplingTable& table, Interaction which);

/// sqrt(mean over the four origins of sum_j b_j^2), rad/s.
double rms_coupling(const lattice::UnitCell& cell, double radius, const lattice::Orientation& orientation,
                    Interaction which);

/// Predicted rms width (Hz) from rms_coupling: 3/2 b for PP, b for PH,
/// 2 sqrt(2/3) b for PN.
double predicted_width_hz(Interaction which, double b_rms);

Interaction interaction_from_string(const std::string& name);
std::string to_string(Interaction which);

}  // namespace adpdtc::lineshape
