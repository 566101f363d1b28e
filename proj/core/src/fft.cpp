#include "adpdtc/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace adpdtc::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

cvec run(const cvec& x, int sign) {
  const int n = static_cast<int>(x.size());
  cvec out(x.size());
  if (n == 0) return out;
  cvec in = x;  // FFTW may clobber input during planning
  auto* pin = reinterpret_cast<fftw_complex*>(in.data());
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, pin, pout, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

cvec forward(const cvec& x) { return run(x, FFTW_FORWARD); }
cvec inverse(const cvec& x) { return run(x, FFTW_BACKWARD); }

std::string library_version() { return fftw_version; }

}  // namespace adpdtc::fft
