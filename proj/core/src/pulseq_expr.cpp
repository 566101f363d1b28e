#include "adpdtc/constants.hpp"
#include "adpdtc/error.hpp"
#include "adpdtc/pulseq.hpp"
#include "pulseq_internal.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

namespace adpdtc::pulseq {

namespace {

__extension__ typedef __int128 i128;

std::optional<Rational> from_wide(i128 n, i128 d) {
  if (d == 0) return std::nullopt;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 a = n < 0 ? -n : n;
  i128 b = d;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  constexpr i128 lim = static_cast<i128>(INT64_MAX);
  if (n > lim || n < -lim || d > lim) return std::nullopt;
  return Rational{static_cast<std::int64_t>(n), static_cast<std::int64_t>(d)};
}

std::optional<Rational> add(Rational a, Rational b) {
  return from_wide(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den,
                   static_cast<i128>(a.den) * b.den);
}

std::optional<Rational> mul(Rational a, Rational b) {
  return from_wide(static_cast<i128>(a.num) * b.num, static_cast<i128>(a.den) * b.den);
}

std::optional<Rational> div(Rational a, Rational b) {
  return from_wide(static_cast<i128>(a.num) * b.den, static_cast<i128>(a.den) * b.num);
}

Rational neg(Rational a) { return {-a.num, a.den}; }

}  // namespace

std::optional<Rational> Rational::make(std::int64_t n, std::int64_t d) { return from_wide(n, d); }

Value Value::exact(Rational q0, Rational q1) {
  Value v;
  v.exact_ = std::make_pair(q0, q1);
  v.approx_ = v.to_double();
  return v;
}

Value Value::real(double x) {
  Value v;
  v.approx_ = x;
  return v;
}

double Value::to_double() const {
  if (!exact_) return approx_;
  const auto& [q0, q1] = *exact_;
  if (q1.is_zero()) return q0.to_double();
  if (q0.is_zero()) {
    // Keeps pi, pi/2, 2pi bit-identical to the library constant multiples.
    if (q1.den == 1) return static_cast<double>(q1.num) * kPi;
    return static_cast<double>(q1.num) * kPi / static_cast<double>(q1.den);
  }
  return q0.to_double() + q1.to_double() * kPi;
}

Value operator+(const Value& a, const Value& b) {
  if (a.is_exact() && b.is_exact()) {
    auto r0 = add(a.rational_part(), b.rational_part());
    auto r1 = add(a.pi_part(), b.pi_part());
    if (r0 && r1) return Value::exact(*r0, *r1);
  }
  return Value::real(a.to_double() + b.to_double());
}

Value operator-(const Value& a) {
  if (a.is_exact()) return Value::exact(neg(a.rational_part()), neg(a.pi_part()));
  return Value::real(-a.to_double());
}

Value operator-(const Value& a, const Value& b) { return a + (-b); }

Value operator*(const Value& a, const Value& b) {
  if (a.is_exact() && b.is_exact()) {
    // (a0 + a1 pi)(b0 + b1 pi) stays exact unless both carry pi.
    if (a.pi_part().is_zero() || b.pi_part().is_zero()) {
      const Value& s = a.pi_part().is_zero() ? a : b;  // scalar factor
      const Value& o = a.pi_part().is_zero() ? b : a;
      auto r0 = mul(s.rational_part(), o.rational_part());
      auto r1 = mul(s.rational_part(), o.pi_part());
      if (r0 && r1) return Value::exact(*r0, *r1);
    }
  }
  return Value::real(a.to_double() * b.to_double());
}

Value operator/(const Value& a, const Value& b) {
  if (a.is_exact() && b.is_exact()) {
    if (b.pi_part().is_zero() && !b.rational_part().is_zero()) {
      auto r0 = div(a.rational_part(), b.rational_part());
      auto r1 = div(a.pi_part(), b.rational_part());
      if (r0 && r1) return Value::exact(*r0, *r1);
    } else if (b.rational_part().is_zero() && !b.pi_part().is_zero() && a.rational_part().is_zero()) {
      auto r0 = div(a.pi_part(), b.pi_part());
      if (r0) return Value::exact(*r0);
    }
  }
  const double d = b.to_double();
  if (d == 0.0) throw InvalidArgument("division by zero in expression");
  return Value::real(a.to_double() / d);
}

// ---- expression parser ------------------------------------------------------

namespace detail {

namespace {

struct UnitInfo {
  const char* name;
  std::int64_t num;
  std::int64_t den;
};

constexpr UnitInfo kUnits[] = {
    {"ns", 1, 1000000000}, {"us", 1, 1000000}, {"ms", 1, 1000}, {"s", 1, 1},
    {"Hz", 1, 1},          {"kHz", 1000, 1},
};

const UnitInfo* find_unit(const std::string& word) {
  for (const auto& u : kUnits)
    if (word == u.name) return &u;
  return nullptr;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

ExprPtr node(Expr::Kind k, ExprPtr l = nullptr, ExprPtr r = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

class ExprParser {
 public:
  ExprParser(const std::string& text, std::size_t base) : s_(text), base_(base) {}

  ExprPtr parse_all() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    ExprPtr e = parse_sum();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "' in expression");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, base_ + pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = node(Expr::Kind::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = node(Expr::Kind::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_product() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = node(Expr::Kind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = node(Expr::Kind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_unary() {
    if (accept('-')) return node(Expr::Kind::Neg, parse_unary());
    return parse_primary();
  }

  ExprPtr identifier_node(const std::string& word) {
    if (word == "pi") return node(Expr::Kind::Pi);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Symbol;
    e->text = word;
    return e;
  }

  std::string read_word() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  ExprPtr parse_primary() {
    skip();
    if (pos_ >= s_.size()) fail("expression ends unexpectedly");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_sum();
      if (!accept(')')) fail("missing ')'");
      return e;
    }
    if (ident_start(c)) return identifier_node(read_word());
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    fail(std::string("unexpected '") + c + "' in expression");
  }

  ExprPtr parse_number() {
    const std::size_t start = pos_;
    std::int64_t mant = 0;
    std::int64_t scale = 1;
    bool digits = false;
    bool overflow = false;
    auto push_digit = [&](char d) {
      digits = true;
      if (mant > (INT64_MAX - 9) / 10) {
        overflow = true;
        return false;
      }
      mant = mant * 10 + (d - '0');
      return true;
    };
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) push_digit(s_[pos_++]);
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        if (push_digit(s_[pos_])) {
          if (scale > INT64_MAX / 10) overflow = true;
          else scale *= 10;
        }
        ++pos_;
      }
    }
    if (!digits) fail("malformed number");
    int exponent = 0;
    if (pos_ + 1 < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') &&
        (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
         ((s_[pos_ + 1] == '-' || s_[pos_ + 1] == '+') && pos_ + 2 < s_.size() &&
          std::isdigit(static_cast<unsigned char>(s_[pos_ + 2]))))) {
      ++pos_;
      const std::size_t estart = pos_;
      if (s_[pos_] == '-' || s_[pos_] == '+') ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      exponent = std::stoi(s_.substr(estart, pos_ - estart));
    }
    const std::string literal = s_.substr(start, pos_ - start);

    Value v;
    std::optional<Rational> q = overflow ? std::nullopt : Rational::make(mant, scale);
    for (int k = 0; q && k < std::abs(exponent); ++k) {
      q = exponent > 0 ? mul(*q, {10, 1}) : div(*q, {10, 1});
    }
    v = q ? Value::exact(*q) : Value::real(std::stod(literal));

    // Unit suffix or implicit multiplication by an identifier ("1.04pi").
    std::string text = literal;
    if (pos_ < s_.size() && ident_start(s_[pos_])) {
      const std::size_t word_pos = pos_;
      const std::string word = read_word();
      if (const UnitInfo* u = find_unit(word)) {
        v = v * Value::exact(*Rational::make(u->num, u->den));
        text += word;
      } else {
        auto num = std::make_shared<Expr>();
        num->kind = Expr::Kind::Number;
        num->text = text;
        num->number = v;
        pos_ = word_pos;
        return node(Expr::Kind::Mul, num, identifier_node(read_word()));
      }
    }
    auto num = std::make_shared<Expr>();
    num->kind = Expr::Kind::Number;
    num->text = text;
    num->number = v;
    return num;
  }

  const std::string& s_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expression_at(const std::string& text, std::size_t base) {
  return ExprParser(text, base).parse_all();
}

}  // namespace detail

ExprPtr parse_expression(const std::string& text) { return detail::parse_expression_at(text, 0); }

Value evaluate(const Expr& e, const Bindings& bindings) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number;
    case Expr::Kind::Pi:
      return Value::exact({0, 1}, {1, 1});
    case Expr::Kind::Symbol: {
      auto it = bindings.find(e.text);
      if (it == bindings.end()) throw UnboundSymbol(e.text);
      return it->second;
    }
    case Expr::Kind::Neg:
      return -evaluate(*e.lhs, bindings);
    case Expr::Kind::Add:
      return evaluate(*e.lhs, bindings) + evaluate(*e.rhs, bindings);
    case Expr::Kind::Sub:
      return evaluate(*e.lhs, bindings) - evaluate(*e.rhs, bindings);
    case Expr::Kind::Mul:
      return evaluate(*e.lhs, bindings) * evaluate(*e.rhs, bindings);
    case Expr::Kind::Div:
      return evaluate(*e.lhs, bindings) / evaluate(*e.rhs, bindings);
  }
  throw InvalidArgument("corrupt expression");
}

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    default:
      return 4;
  }
}

std::string print_at(const Expr& e, int min_prec) {
  std::string out;
  switch (e.kind) {
    case Expr::Kind::Number:
    case Expr::Kind::Symbol:
      out = e.text;
      break;
    case Expr::Kind::Pi:
      out = "pi";
      break;
    case Expr::Kind::Neg:
      out = "-" + print_at(*e.lhs, 3);
      break;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: {
      const int p = precedence(e.kind);
      const char* op = e.kind == Expr::Kind::Add   ? " + "
                       : e.kind == Expr::Kind::Sub ? " - "
                       : e.kind == Expr::Kind::Mul ? "*"
                                                   : "/";
      out = print_at(*e.lhs, p) + op + print_at(*e.rhs, p + 1);
      break;
    }
  }
  if (precedence(e.kind) < min_prec) return "(" + out + ")";
  return out;
}

}  // namespace

std::string print(const Expr& e) { return print_at(e, 0); }

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.text != b.text) return false;
  if ((a.lhs == nullptr) != (b.lhs == nullptr) || (a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !equal(*a.rhs, *b.rhs)) return false;
  return true;
}

Value parse_value(const std::string& text, const Bindings& bindings) {
  return evaluate(*parse_expression(text), bindings);
}

}  // namespace adpdtc::pulseq
