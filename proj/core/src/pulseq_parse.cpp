#include "adpdtc/constants.hpp"
#include "adpdtc/error.hpp"
#include "adpdtc/pulseq.hpp"
#include "pulseq_internal.hpp"

#include <cctype>
#include <sstream>

namespace adpdtc::pulseq {

double phase_radians(Phase p) {
  switch (p) {
    case Phase::X:
      return 0.0;
    case Phase::Y:
      return kPi / 2.0;
    case Phase::MinusX:
      return kPi;
    case Phase::MinusY:
      return 3.0 * kPi / 2.0;
  }
  return 0.0;
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::X:
      return "X";
    case Phase::Y:
      return "Y";
    case Phase::MinusX:
      return "-X";
    case Phase::MinusY:
      return "-Y";
  }
  return "?";
}

std::optional<std::size_t> SequenceProgram::block_index() const {
  std::optional<std::size_t> idx;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (std::holds_alternative<Group>(items[i])) idx = i;
  return idx;
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class ProgramParser {
 public:
  explicit ProgramParser(const std::string& text) : s_(text) {}

  SequenceProgram run() {
    SequenceProgram prog;
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty sequence", 0);
    for (;;) {
      skip_separators();
      if (pos_ >= s_.size()) break;
      const char c = s_[pos_];
      if (c == '{') {
        prog.items.emplace_back(parse_group());
      } else if (c == '}') {
        fail("unbalanced '}'");
      } else if (starts_word("let")) {
        prog.lets.push_back(parse_let());
      } else {
        prog.items.emplace_back(parse_event());
      }
    }
    return prog;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      return;
    }
  }

  bool at_token_start() const {
    if (pos_ == 0) return true;
    const char prev = s_[pos_ - 1];
    return std::isspace(static_cast<unsigned char>(prev)) || prev == '{';
  }

  bool phase_sign_here() const {
    return s_[pos_] == '-' && at_token_start() && pos_ + 1 < s_.size() &&
           (s_[pos_ + 1] == 'X' || s_[pos_ + 1] == 'Y') &&
           (pos_ + 2 >= s_.size() || !ident_char(s_[pos_ + 2]));
  }

  // Whitespace, comments and '-' separators.
  void skip_separators() {
    for (;;) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '-' && !phase_sign_here()) {
        ++pos_;
        continue;
      }
      return;
    }
  }

  bool starts_word(const char* w) const {
    const std::string word(w);
    if (s_.compare(pos_, word.size(), word) != 0) return false;
    const std::size_t end = pos_ + word.size();
    return end >= s_.size() || !ident_char(s_[end]);
  }

  std::string read_ident() {
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected identifier");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Statement parse_let() {
    pos_ += 3;
    skip();
    Statement st;
    st.name = read_ident();
    if (st.name == "pi" || st.name == "let") fail("cannot rebind '" + st.name + "'");
    skip();
    if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '=' after let name");
    ++pos_;
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != ';' && s_[pos_] != '#') ++pos_;
    st.value = detail::parse_expression_at(s_.substr(start, pos_ - start), start);
    if (pos_ < s_.size() && s_[pos_] == ';') ++pos_;
    return st;
  }

  // Contents of [...] split at top-level commas.
  std::vector<std::pair<std::string, std::size_t>> bracket_args() {
    if (pos_ >= s_.size() || s_[pos_] != '[') fail("expected '['");
    ++pos_;
    std::vector<std::pair<std::string, std::size_t>> args;
    std::size_t start = pos_;
    int depth = 0;
    for (; pos_ < s_.size(); ++pos_) {
      const char c = s_[pos_];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth < 0) fail("unbalanced ')'");
      if (depth == 0 && (c == ',' || c == ']')) {
        args.emplace_back(s_.substr(start, pos_ - start), start);
        start = pos_ + 1;
        if (c == ']') {
          ++pos_;
          return args;
        }
      }
    }
    fail("missing ']'");
  }

  EventSpec parse_event() {
    const std::size_t start = pos_;
    bool negative = false;
    if (s_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) {
      pos_ = start;
      fail("expected an event");
    }
    const std::string word = read_ident();
    EventSpec ev;
    if (!negative && word == "tau") {
      ev.kind = EventSpec::Kind::Delay;
      auto sym = std::make_shared<Expr>();
      sym->kind = Expr::Kind::Symbol;
      sym->text = "tau";
      ev.amount = sym;
      return ev;
    }
    if (!negative && word == "d") {
      auto args = bracket_args();
      if (args.size() != 1) fail("d[...] takes one duration");
      ev.kind = EventSpec::Kind::Delay;
      ev.amount = detail::parse_expression_at(args[0].first, args[0].second);
      return ev;
    }
    if (word == "X" || word == "Y") {
      ev.kind = EventSpec::Kind::Pulse;
      ev.phase = word == "X" ? (negative ? Phase::MinusX : Phase::X) : (negative ? Phase::MinusY : Phase::Y);
      auto args = bracket_args();
      if (args.empty() || args.size() > 2) fail("pulse takes an angle and an optional duration");
      ev.amount = detail::parse_expression_at(args[0].first, args[0].second);
      if (args.size() == 2) ev.duration = detail::parse_expression_at(args[1].first, args[1].second);
      return ev;
    }
    pos_ = start;
    fail("unknown event or phase token '" + word + "'");
  }

  Group parse_group() {
    ++pos_;  // '{'
    Group g;
    for (;;) {
      skip_separators();
      if (pos_ >= s_.size()) fail("unbalanced '{'");
      if (s_[pos_] == '}') break;
      if (s_[pos_] == '{') fail("nested blocks are not supported");
      g.events.push_back(parse_event());
    }
    ++pos_;
    skip();
    if (pos_ >= s_.size() || s_[pos_] != '^') fail("expected '^' after block");
    ++pos_;
    skip();
    if (pos_ < s_.size() && s_[pos_] == '-') fail("negative repetition count");
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      try {
        g.count = static_cast<std::int64_t>(std::stoll(s_.substr(start, pos_ - start)));
      } catch (const std::out_of_range&) {
        pos_ = start;
        fail("repetition count too large");
      }
    } else if (pos_ < s_.size() && ident_start(s_[pos_])) {
      g.count = read_ident();
    } else {
      fail("expected repetition count");
    }
    return g;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::string print_event(const EventSpec& ev) {
  if (ev.kind == EventSpec::Kind::Delay) {
    if (ev.amount->kind == Expr::Kind::Symbol && ev.amount->text == "tau") return "tau";
    return "d[" + print(*ev.amount) + "]";
  }
  std::string out = to_string(ev.phase) + "[" + print(*ev.amount);
  if (ev.duration) out += ", " + print(*ev.duration);
  return out + "]";
}

bool same_event(const EventSpec& a, const EventSpec& b) {
  if (a.kind != b.kind || a.phase != b.phase) return false;
  if (!equal(*a.amount, *b.amount)) return false;
  if ((a.duration == nullptr) != (b.duration == nullptr)) return false;
  return !a.duration || equal(*a.duration, *b.duration);
}

}  // namespace

SequenceProgram parse(const std::string& text) { return ProgramParser(text).run(); }

std::string print(const SequenceProgram& program) {
  std::ostringstream out;
  for (const auto& st : program.lets) out << "let " << st.name << " = " << print(*st.value) << "\n";
  bool first = true;
  for (const auto& item : program.items) {
    if (!first) out << ' ';
    first = false;
    if (const auto* ev = std::get_if<EventSpec>(&item)) {
      out << print_event(*ev);
    } else {
      const auto& g = std::get<Group>(item);
      out << '{';
      for (std::size_t i = 0; i < g.events.size(); ++i) out << (i ? " " : "") << print_event(g.events[i]);
      out << "}^";
      if (const auto* n = std::get_if<std::int64_t>(&g.count)) {
        out << *n;
      } else {
        out << std::get<std::string>(g.count);
      }
    }
  }
  if (!program.items.empty()) out << "\n";
  return out.str();
}

bool equal(const SequenceProgram& a, const SequenceProgram& b) {
  if (a.lets.size() != b.lets.size() || a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.lets.size(); ++i) {
    if (a.lets[i].name != b.lets[i].name || !equal(*a.lets[i].value, *b.lets[i].value)) return false;
  }
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].index() != b.items[i].index()) return false;
    if (const auto* ea = std::get_if<EventSpec>(&a.items[i])) {
      if (!same_event(*ea, std::get<EventSpec>(b.items[i]))) return false;
    } else {
      const auto& ga = std::get<Group>(a.items[i]);
      const auto& gb = std::get<Group>(b.items[i]);
      if (ga.count != gb.count || ga.events.size() != gb.events.size()) return false;
      for (std::size_t k = 0; k < ga.events.size(); ++k)
        if (!same_event(ga.events[k], gb.events[k])) return false;
    }
  }
  return true;
}

}  // namespace adpdtc::pulseq
