#pragma once

#include <complex>
#include <string>
#include <vector>

namespace adpdtc::fft {

using cvec = std::vector<std::complex<double>>;

// Unnormalised DFTs: forward uses exp(-2 pi i k n / L), inverse exp(+...).
// Thin wrappers over FFTW; plan creation is serialised internally so these
// may be called from any thread.
cvec forward(const cvec& x);
cvec inverse(const cvec& x);

/// Version string of the FFT backend, for provenance records.
std::string library_version();

}  // namespace adpdtc::fft
