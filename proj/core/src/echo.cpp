#include "adpdtc/error.hpp"
#include "adpdtc/quantum.hpp"

#include <cmath>
#include <cstdio>

namespace adpdtc::quantum {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

EchoResult run_dtc_echo(const SpinSystem& sys, const EchoOptions& o, EngineOptions engine_options) {
  if (o.n_forward < 0 || o.n_reverse_max < 0) throw InvalidArgument("echo counts must be >= 0");
  if (!(o.t_p > 0.0)) throw InvalidArgument("t_p must be positive");
  const double tau = o.finite_short_pulses ? o.period - o.t_p : o.period;
  if (!(tau > 0.0)) throw InvalidArgument("cycle period too short for the pulse length");

  std::map<std::string, std::string> params{{"theta", num(o.theta)},
                                            {"tau", num(tau)},
                                            {"t_p", num(o.t_p)},
                                            {"N", std::to_string(o.n_forward)},
                                            {"Nprime", std::to_string(o.n_reverse_max)}};
  pulseq::Bindings bind{{"theta", pulseq::Value::real(o.theta)},
                        {"tau", pulseq::Value::real(tau)},
                        {"t_p", pulseq::Value::real(o.t_p)}};
  if (o.omega1_long) {
    if (!(*o.omega1_long > 0.0)) throw InvalidArgument("omega1_long must be positive");
    params["Phi"] = num(*o.omega1_long * 2.0 * tau);
    bind["Phi"] = pulseq::Value::real(*o.omega1_long * 2.0 * tau);
  }

  EchoResult result;
  result.program = pulseq::builtin("dtc_echo", params);
  const auto mode = o.finite_short_pulses ? pulseq::PulseMode::Finite : pulseq::PulseMode::Hybrid;
  const auto parts = pulseq::expand_parts(result.program, bind, mode);

  engine_options.include_zero = true;
  Engine engine(sys, engine_options);
  if (!o.ideal_reversal) {
    result.signal = engine.run(parts, o.n_reverse_max);
  } else {
    // Long pulse replaced by W exp(+i H tau) W^dag, W = exp(+i pi/2 I_x):
    // the reversal block then undoes one forward cycle exactly.
    const Operator w = engine.subspace_rotation(kPi / 2.0, 0.0);
    pulseq::Timeline short_pulse{parts.block.front()};
    std::vector<Operator> pro, blk, epi;
    for (std::size_t s = 0; s < engine.sector_count(); ++s) {
      pro.push_back(engine.timeline_propagator(s, parts.prologue));
      epi.push_back(engine.timeline_propagator(s, parts.epilogue));
      blk.push_back(w * engine.free_propagator(s, -tau) * w.adjoint() * engine.timeline_propagator(s, short_pulse));
    }
    result.signal = engine.run_propagators(pro, blk, epi, o.n_reverse_max);
    result.signal.period = pulseq::total_duration(parts.block);
    result.signal.t_offset = pulseq::total_duration(parts.prologue) + pulseq::total_duration(parts.epilogue);
  }

  const double c = std::cos(o.theta - kPi);
  for (std::size_t k = 0; k < result.signal.size(); ++k) {
    result.envelope.push_back(std::pow(c, static_cast<double>(o.n_forward + result.signal.n(k))));
  }
  return result;
}

}  // namespace adpdtc::quantum
