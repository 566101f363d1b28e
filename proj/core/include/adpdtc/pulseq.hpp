#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace adpdtc::pulseq {

// ---- exact arithmetic -------------------------------------------------------

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static std::optional<Rational> make(std::int64_t n, std::int64_t d);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// q0 + q1 * pi when exact, otherwise a plain double.
class Value {
 public:
  Value() = default;
  static Value exact(Rational q0, Rational q1 = {});
  static Value real(double v);

  bool is_exact() const { return exact_.has_value(); }
  /// Rational part and pi coefficient; only valid when is_exact().
  Rational rational_part() const { return exact_->first; }
  Rational pi_part() const { return exact_->second; }
  double to_double() const;

  friend Value operator+(const Value& a, const Value& b);
  friend Value operator-(const Value& a, const Value& b);
  friend Value operator*(const Value& a, const Value& b);
  friend Value operator/(const Value& a, const Value& b);
  friend Value operator-(const Value& a);

 private:
  std::optional<std::pair<Rational, Rational>> exact_;
  double approx_ = 0.0;
};

using Bindings = std::map<std::string, Value>;

// ---- expressions ------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Pi, Symbol, Neg, Add, Sub, Mul, Div };
  Kind kind;
  std::string text;  // Number: literal as written incl. unit; Symbol: name
  Value number;      // Number: value in SI units
  ExprPtr lhs;
  ExprPtr rhs;
};

ExprPtr parse_expression(const std::string& text);
Value evaluate(const Expr& e, const Bindings& bindings);
std::string print(const Expr& e);
bool equal(const Expr& a, const Expr& b);

/// Parses a standalone literal such as "1.04pi", "392.5us" or "pi/2+eps"
/// (symbols resolved against `bindings`).
Value parse_value(const std::string& text, const Bindings& bindings = {});

// ---- programs ---------------------------------------------------------------

enum class Phase { X, Y, MinusX, MinusY };

double phase_radians(Phase p);
std::string to_string(Phase p);

struct EventSpec {
  enum class Kind { Delay, Pulse };
  Kind kind = Kind::Delay;
  Phase phase = Phase::X;
  ExprPtr amount;    // delay duration, or pulse angle
  ExprPtr duration;  // optional explicit pulse duration
};

struct Group {
  std::vector<EventSpec> events;
  std::variant<std::int64_t, std::string> count;  // literal or symbol
};

using Item = std::variant<EventSpec, Group>;

struct Statement {
  std::string name;
  ExprPtr value;
};

/// Parsed sequence text. The last braced group is the repeated block whose
/// repetition count is scanned by the engine; items before it form the
/// prologue (earlier groups are unrolled), items after it the epilogue.
struct SequenceProgram {
  std::vector<Statement> lets;
  std::vector<Item> items;

  /// Index into items of the repeated block, if any.
  std::optional<std::size_t> block_index() const;
};

/// Grammar (whitespace and '#' comments ignored):
///   program   := (let | item)*
///   let       := 'let' IDENT '=' expr
///   item      := event | '{' event* '}' '^' (INT | IDENT)
///   event     := 'tau' | 'd' '[' expr ']' | PHASE '[' expr (',' expr)? ']'
///   PHASE     := 'X' | 'Y' | '-X' | '-Y'
/// A '-' is a phase sign only at the start of a token (after whitespace,
/// '{' or program start) and directly followed by X or Y; otherwise it
/// separates events, so "tau - X[pi]" and "tau-X[pi]" both mean tau, X.
SequenceProgram parse(const std::string& text);
std::string print(const SequenceProgram& program);
bool equal(const SequenceProgram& a, const SequenceProgram& b);

// ---- expansion --------------------------------------------------------------

enum class PulseMode {
  Delta,   // every pulse is instantaneous
  Finite,  // every pulse has a duration: explicit, angle/omega1, or t_p
  Hybrid   // only pulses with an explicit duration are finite
};

struct PulseEvent {
  enum class Kind { Delay, Pulse };
  Kind kind = Kind::Delay;
  double duration = 0.0;  // s
  double angle = 0.0;     // rad, >= 0
  double phase = 0.0;     // rad
  bool finite = false;
  double omega1 = 0.0;    // rad/s, finite pulses only

  static PulseEvent delay(double t);
  static PulseEvent delta(double angle, double phase);
  static PulseEvent finite_pulse(double angle, double phase, double duration);
};

using Timeline = std::vector<PulseEvent>;

double total_duration(const Timeline& t);
double total_pulse_time(const Timeline& t);

struct ExpandedParts {
  Timeline prologue;
  Timeline block;
  Timeline epilogue;
  std::int64_t repetitions = 0;
};

/// Resolve every symbol and flatten into prologue / block / epilogue.
/// `bindings` override the program's own let statements. Recognised
/// bindings: t_p (default finite pulse length), omega1 (fixed amplitude),
/// interpulse_gap (delay inserted between adjacent pulses).
ExpandedParts expand_parts(const SequenceProgram& program, const Bindings& bindings, PulseMode mode);

/// prologue + block^repetitions + epilogue.
Timeline expand(const SequenceProgram& program, const Bindings& bindings, PulseMode mode);

/// Bindings after evaluating the program's let statements under `bindings`.
Bindings resolve_bindings(const SequenceProgram& program, const Bindings& bindings);

// ---- builtins ---------------------------------------------------------------

/// Names: dtc, dtc_echo, xx, yy, xy, burst_xyxy, rotary_echo, nutation.
/// `params` become let statements (values as expression text, e.g.
/// {"theta","1.04pi"}); unknown keys are added as extra lets.
SequenceProgram builtin(const std::string& name, const std::map<std::string, std::string>& params = {});
const std::vector<std::string>& builtin_names();

}  // namespace adpdtc::pulseq
