#include "adpdtc/constants.hpp"
#include "adpdtc/error.hpp"
#include "adpdtc/pulseq.hpp"

#include <cmath>

namespace adpdtc::pulseq {

PulseEvent PulseEvent::delay(double t) {
  PulseEvent e;
  e.kind = Kind::Delay;
  e.duration = t;
  return e;
}

PulseEvent PulseEvent::delta(double angle, double phase) {
  PulseEvent e;
  e.kind = Kind::Pulse;
  e.angle = angle;
  e.phase = phase;
  return e;
}

PulseEvent PulseEvent::finite_pulse(double angle, double phase, double duration) {
  if (!(duration > 0.0)) throw InvalidArgument("finite pulse needs a positive duration");
  if (!(angle > 0.0)) throw InvalidArgument("finite pulse needs a positive angle");
  PulseEvent e;
  e.kind = Kind::Pulse;
  e.angle = angle;
  e.phase = phase;
  e.duration = duration;
  e.finite = true;
  e.omega1 = angle / duration;
  return e;
}

double total_duration(const Timeline& t) {
  double sum = 0.0;
  for (const auto& e : t) sum += e.duration;
  return sum;
}

double total_pulse_time(const Timeline& t) {
  double sum = 0.0;
  for (const auto& e : t)
    if (e.kind == PulseEvent::Kind::Pulse) sum += e.duration;
  return sum;
}

Bindings resolve_bindings(const SequenceProgram& program, const Bindings& bindings) {
  Bindings env = bindings;
  for (const auto& st : program.lets) {
    if (bindings.count(st.name)) continue;  // caller overrides the program
    env[st.name] = evaluate(*st.value, env);
  }
  return env;
}

namespace {

class Expander {
 public:
  Expander(const Bindings& env, PulseMode mode) : env_(env), mode_(mode) {
    if (auto it = env.find("interpulse_gap"); it != env.end()) {
      gap_ = it->second.to_double();
      if (gap_ < 0.0) throw InvalidArgument("interpulse_gap must be >= 0");
    }
  }

  void append(const EventSpec& spec, Timeline& out) const {
    PulseEvent ev = resolve(spec);
    if (ev.kind == PulseEvent::Kind::Pulse && gap_ > 0.0 && !out.empty() &&
        out.back().kind == PulseEvent::Kind::Pulse) {
      out.push_back(PulseEvent::delay(gap_));
    }
    out.push_back(ev);
  }

  std::int64_t count(const Group& g) const {
    if (const auto* n = std::get_if<std::int64_t>(&g.count)) return *n;
    const auto& name = std::get<std::string>(g.count);
    auto it = env_.find(name);
    if (it == env_.end()) throw UnboundSymbol(name);
    const Value& v = it->second;
    double n = v.to_double();
    if (v.is_exact() && (!v.pi_part().is_zero() || v.rational_part().den != 1)) {
      throw InvalidArgument("repetition count '" + name + "' is not an integer");
    }
    if (!v.is_exact() && n != std::floor(n)) throw InvalidArgument("repetition count '" + name + "' is not an integer");
    if (n < 0) throw InvalidArgument("negative repetition count '" + name + "'");
    return static_cast<std::int64_t>(n);
  }

 private:
  double lookup(const char* name) const {
    auto it = env_.find(name);
    if (it == env_.end()) throw UnboundSymbol(name);
    return it->second.to_double();
  }

  PulseEvent resolve(const EventSpec& spec) const {
    if (spec.kind == EventSpec::Kind::Delay) {
      const double t = evaluate(*spec.amount, env_).to_double();
      if (!(t >= 0.0)) throw InvalidArgument("negative delay");
      return PulseEvent::delay(t);
    }
    double angle = evaluate(*spec.amount, env_).to_double();
    double phase = phase_radians(spec.phase);
    if (angle < 0.0) {
      angle = -angle;
      phase = std::fmod(phase + kPi, kTwoPi);
    }
    const bool explicit_duration = spec.duration != nullptr;
    bool finite = false;
    double duration = 0.0;
    switch (mode_) {
      case PulseMode::Delta:
        break;
      case PulseMode::Hybrid:
        if (explicit_duration) {
          finite = true;
          duration = evaluate(*spec.duration, env_).to_double();
        }
        break;
      case PulseMode::Finite:
        finite = true;
        if (explicit_duration) {
          duration = evaluate(*spec.duration, env_).to_double();
        } else if (env_.count("omega1")) {
          const double w1 = lookup("omega1");
          if (!(w1 > 0.0)) throw InvalidArgument("omega1 must be positive");
          duration = angle / w1;
        } else {
          duration = lookup("t_p");
        }
        break;
    }
    if (!finite) return PulseEvent::delta(angle, phase);
    if (duration < 0.0) throw InvalidArgument("negative pulse duration");
    if (duration == 0.0) return PulseEvent::delta(angle, phase);
    if (angle == 0.0) return PulseEvent::delay(duration);
    return PulseEvent::finite_pulse(angle, phase, duration);
  }

  const Bindings& env_;
  PulseMode mode_;
  double gap_ = 0.0;
};

}  // namespace

ExpandedParts expand_parts(const SequenceProgram& program, const Bindings& bindings, PulseMode mode) {
  const Bindings env = resolve_bindings(program, bindings);
  const Expander ex(env, mode);
  const auto block = program.block_index();

  ExpandedParts parts;
  for (std::size_t i = 0; i < program.items.size(); ++i) {
    Timeline& target = !block || i < *block ? parts.prologue : parts.epilogue;
    if (block && i == *block) {
      const auto& g = std::get<Group>(program.items[i]);
      parts.repetitions = ex.count(g);
      for (const auto& e : g.events) ex.append(e, parts.block);
      continue;
    }
    if (const auto* ev = std::get_if<EventSpec>(&program.items[i])) {
      ex.append(*ev, target);
    } else {
      const auto& g = std::get<Group>(program.items[i]);
      const std::int64_t n = ex.count(g);
      for (std::int64_t k = 0; k < n; ++k)
        for (const auto& e : g.events) ex.append(e, target);
    }
  }
  return parts;
}

Timeline expand(const SequenceProgram& program, const Bindings& bindings, PulseMode mode) {
  const ExpandedParts parts = expand_parts(program, bindings, mode);
  Timeline out = parts.prologue;
  for (std::int64_t k = 0; k < parts.repetitions; ++k) out.insert(out.end(), parts.block.begin(), parts.block.end());
  out.insert(out.end(), parts.epilogue.begin(), parts.epilogue.end());
  return out;
}

}  // namespace adpdtc::pulseq
