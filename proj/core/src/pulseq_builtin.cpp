#include "adpdtc/error.hpp"
#include "adpdtc/pulseq.hpp"

#include <utility>

namespace adpdtc::pulseq {

namespace {

struct BuiltinDef {
  std::string name;
  std::vector<std::pair<std::string, std::string>> defaults;  // in let order
  std::vector<std::pair<std::string, std::string>> derived;   // after defaults
  std::string body;
};

const std::vector<BuiltinDef>& table() {
  static const std::vector<BuiltinDef> defs{
      {"dtc",
       {{"theta", "pi"}, {"tau", "392.5us"}, {"t_p", "7.5us"}, {"N", "128"}},
       {},
       "{tau X[theta]}^N"},
      // Forward DTC, unwrap into the transverse plane, N' reversal blocks
      // (short -X_theta then a long Y pulse of length 2 tau), wrap back.
      {"dtc_echo",
       {{"theta", "1.08pi"}, {"tau", "200us"}, {"t_p", "7.5us"}, {"N", "6"}, {"Nprime", "12"}},
       {{"Phi", "theta*2*tau/t_p"}},
       "{tau X[theta]}^N X[pi/2] {-X[theta] Y[Phi, 2*tau]}^Nprime -X[pi/2]"},
      {"xx", {{"theta", "pi"}, {"tau", "20us"}, {"t_p", "7.5us"}, {"N", "128"}}, {}, "{tau X[theta] tau X[theta]}^N"},
      {"yy", {{"theta", "pi"}, {"tau", "20us"}, {"t_p", "7.5us"}, {"N", "128"}}, {}, "{tau Y[theta] tau Y[theta]}^N"},
      {"xy", {{"theta", "pi"}, {"tau", "20us"}, {"t_p", "7.5us"}, {"N", "128"}}, {}, "{tau X[theta] tau Y[theta]}^N"},
      {"burst_xyxy",
       {{"theta", "pi"}, {"tau", "400us"}, {"t_p", "7.5us"}, {"N", "128"}},
       {},
       "{tau X[theta] Y[theta] X[theta] Y[theta]}^N"},
      {"rotary_echo",
       {{"omega1", "2pi*68kHz"}, {"t", "100us"}},
       {},
       "X[omega1*t/2, t/2] -X[omega1*t/2, t/2]"},
      {"nutation", {{"omega1", "2pi*68kHz"}, {"t", "100us"}}, {}, "X[omega1*t, t]"},
  };
  return defs;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& d : table()) out.push_back(d.name);
    return out;
  }();
  return names;
}

SequenceProgram builtin(const std::string& name, const std::map<std::string, std::string>& params) {
  const BuiltinDef* def = nullptr;
  for (const auto& d : table())
    if (d.name == name) def = &d;
  if (!def) throw InvalidArgument("unknown builtin sequence '" + name + "'");

  std::string text;
  std::map<std::string, std::string> remaining = params;
  auto emit = [&](const std::string& key, const std::string& fallback) {
    auto it = remaining.find(key);
    text += "let " + key + " = " + (it != remaining.end() ? it->second : fallback) + "\n";
    if (it != remaining.end()) remaining.erase(it);
  };
  for (const auto& [k, v] : def->defaults) emit(k, v);
  // Extra parameters (eps, interpulse_gap, ...) precede derived values so
  // that derived lets may refer to them.
  const auto extras = remaining;
  for (const auto& [k, v] : extras) {
    bool is_derived = false;
    for (const auto& d : def->derived) is_derived = is_derived || d.first == k;
    if (!is_derived) emit(k, v);
  }
  for (const auto& [k, v] : def->derived) emit(k, v);
  text += def->body + "\n";
  return parse(text);
}

}  // namespace adpdtc::pulseq
