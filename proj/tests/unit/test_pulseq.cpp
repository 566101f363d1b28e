#include "adpdtc/constants.hpp"
#include "adpdtc/error.hpp"
#include "adpdtc/pulseq.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace adpdtc;
using namespace adpdtc::pulseq;

TEST(Rational, NormalisesAndRejectsZeroDenominator) {
  const auto r = Rational::make(6, -4);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->num, -3);
  EXPECT_EQ(r->den, 2);
  EXPECT_FALSE(Rational::make(1, 0));
}

TEST(Value, ExactPiArithmetic) {
  const Value v = parse_value("pi/2 + pi/2");
  ASSERT_TRUE(v.is_exact());
  EXPECT_EQ(v.pi_part(), (Rational{1, 1}));
  EXPECT_TRUE(v.rational_part().is_zero());

  const Value w = parse_value("1.04pi");
  ASSERT_TRUE(w.is_exact());
  EXPECT_EQ(w.pi_part(), (Rational{26, 25}));
  EXPECT_DOUBLE_EQ(w.to_double(), 1.04 * kPi);

  // pi * pi leaves the exact q0 + q1 pi form.
  const Value sq = parse_value("pi*pi");
  EXPECT_FALSE(sq.is_exact());
  EXPECT_NEAR(sq.to_double(), kPi * kPi, 1e-12);
  EXPECT_THROW(parse_value("1/(pi-pi)"), InvalidArgument);
}

TEST(Value, UnitSuffixes) {
  EXPECT_DOUBLE_EQ(parse_value("392.5us").to_double(), 392.5e-6);
  EXPECT_DOUBLE_EQ(parse_value("7.5us").to_double(), 7.5e-6);
  EXPECT_DOUBLE_EQ(parse_value("20ms").to_double(), 0.02);
  EXPECT_DOUBLE_EQ(parse_value("3s").to_double(), 3.0);
  EXPECT_DOUBLE_EQ(parse_value("5ns").to_double(), 5e-9);
  EXPECT_DOUBLE_EQ(parse_value("68kHz").to_double(), 68e3);
  EXPECT_NEAR(parse_value("2pi*68kHz").to_double(), kTwoPi * 68e3, 1e-9);
  EXPECT_DOUBLE_EQ(parse_value("1e-3").to_double(), 1e-3);
  // Exact: 392.5us is a rational number of seconds.
  EXPECT_TRUE(parse_value("392.5us").is_exact());
}

TEST(Value, SymbolsResolveAgainstBindings) {
  const Bindings b{{"eps", parse_value("0.04pi")}};
  const Value v = parse_value("pi + eps", b);
  ASSERT_TRUE(v.is_exact());
  EXPECT_EQ(v.pi_part(), (Rational{26, 25}));
  EXPECT_THROW(parse_value("pi + delta"), UnboundSymbol);
}

TEST(Expr, PrecedenceAndUnaryMinus) {
  EXPECT_DOUBLE_EQ(parse_value("2+3*4").to_double(), 14.0);
  EXPECT_DOUBLE_EQ(parse_value("(2+3)*4").to_double(), 20.0);
  EXPECT_DOUBLE_EQ(parse_value("-2*3").to_double(), -6.0);
  EXPECT_DOUBLE_EQ(parse_value("8/4/2").to_double(), 1.0);
  EXPECT_DOUBLE_EQ(parse_value("8-4-2").to_double(), 2.0);
  EXPECT_THROW(parse_expression("2+"), ParseError);
  EXPECT_THROW(parse_expression("(2"), ParseError);
  EXPECT_THROW(parse_expression("2 3"), ParseError);
}

namespace {

// Random expression text over a small alphabet.
std::string random_expr(oracle::Gen& g, int depth) {
  if (depth == 0 || g.integer(0, 3) == 0) {
    switch (g.integer(0, 4)) {
      case 0: return std::to_string(g.integer(1, 9));
      case 1: return "pi";
      case 2: return std::to_string(g.integer(1, 99)) + "." + std::to_string(g.integer(0, 9)) + "us";
      case 3: return g.coin() ? "theta" : "tau";
      default: return std::to_string(g.integer(2, 5)) + "pi";
    }
  }
  static const char* ops[] = {"+", "-", "*", "/"};
  const std::string a = random_expr(g, depth - 1);
  const std::string b = random_expr(g, depth - 1);
  switch (g.integer(0, 2)) {
    case 0: return a + ops[g.integer(0, 3)] + b;
    case 1: return "(" + a + ")" + ops[g.integer(0, 3)] + b;
    default: return "-" + a;
  }
}

std::string random_event(oracle::Gen& g) {
  static const char* phases[] = {"X", "Y", "-X", "-Y"};
  switch (g.integer(0, 3)) {
    case 0: return "tau";
    case 1: return "d[" + random_expr(g, 2) + "]";
    case 2: return std::string(phases[g.integer(0, 3)]) + "[" + random_expr(g, 2) + "]";
    default: return std::string(phases[g.integer(0, 3)]) + "[" + random_expr(g, 2) + ", " + random_expr(g, 1) + "]";
  }
}

std::string random_program(oracle::Gen& g) {
  std::string text;
  const int lets = g.integer(0, 3);
  for (int i = 0; i < lets; ++i) text += "let v" + std::to_string(i) + " = " + random_expr(g, 2) + "\n";
  const int items = g.integer(1, 5);
  for (int i = 0; i < items; ++i) {
    if (g.coin()) {
      text += random_event(g) + " ";
    } else {
      text += "{";
      const int n = g.integer(0, 4);
      for (int k = 0; k < n; ++k) text += " " + random_event(g);
      text += "}^" + (g.coin() ? std::to_string(g.integer(0, 50)) : std::string("N")) + " ";
    }
  }
  return text;
}

}  // namespace

TEST(Program, PrintParseRoundTripProperty) {
  oracle::Gen g(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string text = random_program(g);
    SCOPED_TRACE(text);
    const SequenceProgram p = parse(text);
    const std::string printed = print(p);
    const SequenceProgram q = parse(printed);
    EXPECT_TRUE(equal(p, q)) << printed;
    EXPECT_EQ(print(q), printed);
  }
}

TEST(Expr, PrintParseRoundTripPreservesValue) {
  oracle::Gen g(7);
  const Bindings b{{"theta", parse_value("1.04pi")}, {"tau", parse_value("20us")}};
  for (int trial = 0; trial < 300; ++trial) {
    const std::string text = random_expr(g, 4);
    SCOPED_TRACE(text);
    const auto e = parse_expression(text);
    const auto back = parse_expression(print(*e));
    EXPECT_TRUE(equal(*e, *back)) << print(*e);
    double v1 = 0.0, v2 = 0.0;
    try {
      v1 = evaluate(*e, b).to_double();
    } catch (const InvalidArgument&) {
      EXPECT_THROW(evaluate(*back, b), InvalidArgument);
      continue;
    }
    v2 = evaluate(*back, b).to_double();
    if (std::isfinite(v1)) EXPECT_NEAR(v1, v2, 1e-12 * std::max(1.0, std::abs(v1)));
  }
}

TEST(Program, PhaseSignRule) {
  const auto a = parse("tau -X[pi]");
  const auto b = parse("tau-X[pi]");
  ASSERT_EQ(a.items.size(), 2u);
  ASSERT_EQ(b.items.size(), 2u);
  EXPECT_EQ(std::get<EventSpec>(a.items[1]).phase, Phase::MinusX);
  EXPECT_EQ(std::get<EventSpec>(b.items[1]).phase, Phase::X);
  const auto c = parse("{-Y[pi/2] tau}^3");
  EXPECT_EQ(std::get<Group>(c.items[0]).events[0].phase, Phase::MinusY);
  // "tau - X" separates with a spaced minus.
  const auto d = parse("tau - X[pi]");
  EXPECT_EQ(std::get<EventSpec>(d.items[1]).phase, Phase::X);
}

TEST(Program, Errors) {
  EXPECT_THROW(parse("{tau X[pi]"), ParseError);
  EXPECT_THROW(parse("tau X[pi]}^2"), ParseError);
  EXPECT_THROW(parse("{tau {X[pi]}^2}^2"), ParseError);
  EXPECT_THROW(parse("{tau X[pi]}^-1"), ParseError);
  EXPECT_THROW(parse("{tau X[pi]}"), ParseError);
  EXPECT_THROW(parse("Z[pi]"), ParseError);
  EXPECT_THROW(parse("X[pi"), ParseError);
  EXPECT_THROW(parse("let = 3"), ParseError);
  try {
    parse("tau X[pi] ?");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 10u);
  }
}

TEST(Program, CommentsAndLets) {
  const auto p = parse("# header\nlet a = 2*pi # comment\nlet b = a/4; {tau X[b]}^3\n");
  ASSERT_EQ(p.lets.size(), 2u);
  const auto env = resolve_bindings(p, {{"tau", Value::real(1e-6)}});
  EXPECT_TRUE(env.at("b").is_exact());
  EXPECT_DOUBLE_EQ(env.at("b").to_double(), kPi / 2);
}

TEST(Expand, DeltaAndFiniteDtc) {
  const auto prog = builtin("dtc", {{"theta", "1.04pi"}});
  const auto d = expand_parts(prog, {}, PulseMode::Delta);
  ASSERT_EQ(d.block.size(), 2u);
  EXPECT_EQ(d.repetitions, 128);
  EXPECT_DOUBLE_EQ(d.block[0].duration, 392.5e-6);
  EXPECT_FALSE(d.block[1].finite);
  EXPECT_DOUBLE_EQ(d.block[1].angle, 1.04 * kPi);

  const auto f = expand_parts(prog, {}, PulseMode::Finite);
  EXPECT_TRUE(f.block[1].finite);
  EXPECT_DOUBLE_EQ(f.block[1].duration, 7.5e-6);
  EXPECT_NEAR(f.block[1].omega1, 1.04 * kPi / 7.5e-6, 1e-6);
  EXPECT_NEAR(total_duration(f.block), 400e-6, 1e-15);
  EXPECT_NEAR(total_pulse_time(f.block), 7.5e-6, 1e-18);

  // A fixed omega1 sets each duration from its own angle.
  const auto w = expand_parts(prog, {{"omega1", parse_value("2pi*68kHz")}}, PulseMode::Finite);
  EXPECT_NEAR(w.block[1].duration, 1.04 * kPi / (kTwoPi * 68e3), 1e-15);
}

TEST(Expand, CallerBindingsOverrideLets) {
  const auto prog = builtin("dtc");
  const auto parts = expand_parts(prog, {{"N", Value::exact({5, 1})}, {"tau", parse_value("12.5us")}}, PulseMode::Delta);
  EXPECT_EQ(parts.repetitions, 5);
  EXPECT_DOUBLE_EQ(parts.block[0].duration, 12.5e-6);
  EXPECT_EQ(expand(prog, {{"N", Value::exact({5, 1})}}, PulseMode::Delta).size(), 10u);
}

TEST(Expand, NegativeAngleFlipsPhase) {
  const auto parts = expand_parts(parse("X[-pi/2] -Y[pi]"), {}, PulseMode::Delta);
  ASSERT_EQ(parts.prologue.size(), 2u);
  EXPECT_DOUBLE_EQ(parts.prologue[0].angle, kPi / 2);
  EXPECT_NEAR(parts.prologue[0].phase, kPi, 1e-15);
  EXPECT_NEAR(parts.prologue[1].phase, 1.5 * kPi, 1e-15);
}

TEST(Expand, EchoHybridStructure) {
  const auto prog = builtin("dtc_echo");
  const auto parts = expand_parts(prog, {}, PulseMode::Hybrid);
  // Prologue: six forward cycles then the pi/2 unwrap.
  ASSERT_EQ(parts.prologue.size(), 13u);
  EXPECT_DOUBLE_EQ(parts.prologue.back().angle, kPi / 2);
  ASSERT_EQ(parts.block.size(), 2u);
  EXPECT_FALSE(parts.block[0].finite);
  EXPECT_NEAR(parts.block[0].phase, kPi, 1e-15);
  EXPECT_TRUE(parts.block[1].finite);
  EXPECT_DOUBLE_EQ(parts.block[1].duration, 400e-6);
  EXPECT_NEAR(parts.block[1].omega1, 1.08 * kPi / 7.5e-6, 1e-6);
  EXPECT_EQ(parts.repetitions, 12);
  ASSERT_EQ(parts.epilogue.size(), 1u);
}

TEST(Expand, InterpulseGapBetweenAdjacentPulses) {
  const auto prog = builtin("burst_xyxy", {{"interpulse_gap", "2us"}});
  const auto parts = expand_parts(prog, {}, PulseMode::Finite);
  // tau P g P g P g P
  ASSERT_EQ(parts.block.size(), 8u);
  EXPECT_NEAR(total_duration(parts.block), 400e-6 + 4 * 7.5e-6 + 3 * 2e-6, 1e-15);
}

TEST(Expand, CountAndBindingErrors) {
  EXPECT_THROW(expand_parts(parse("{tau X[pi]}^N"), {{"tau", Value::real(1e-6)}}, PulseMode::Delta), UnboundSymbol);
  EXPECT_THROW(expand_parts(parse("{tau X[pi]}^N"), {{"tau", Value::real(1e-6)}, {"N", parse_value("1/2")}},
                            PulseMode::Delta),
               InvalidArgument);
  EXPECT_THROW(expand_parts(parse("{X[pi]}^2"), {}, PulseMode::Finite), UnboundSymbol);  // no t_p
  EXPECT_THROW(expand_parts(parse("d[-1us]"), {}, PulseMode::Delta), InvalidArgument);
}

TEST(Expand, EarlierGroupsUnrollIntoPrologue) {
  const auto parts = expand_parts(parse("{X[pi/2]}^3 {tau Y[pi]}^4 X[pi]"), {{"tau", Value::real(1e-6)}}, PulseMode::Delta);
  EXPECT_EQ(parts.prologue.size(), 3u);
  EXPECT_EQ(parts.block.size(), 2u);
  EXPECT_EQ(parts.epilogue.size(), 1u);
  EXPECT_EQ(parts.repetitions, 4);
}

TEST(Builtins, AllParseAndExpand) {
  for (const auto& name : builtin_names()) {
    SCOPED_TRACE(name);
    const auto prog = builtin(name);
    EXPECT_NO_THROW(expand(prog, {}, PulseMode::Finite));
    EXPECT_TRUE(equal(parse(print(prog)), prog));
  }
  EXPECT_THROW(builtin("wahuha"), InvalidArgument);
  const auto rot = expand(builtin("rotary_echo"), {}, PulseMode::Finite);
  ASSERT_EQ(rot.size(), 2u);
  EXPECT_NEAR(rot[0].omega1, kTwoPi * 68e3, 1e-6);
  EXPECT_NEAR(rot[1].phase, kPi, 1e-15);
}
