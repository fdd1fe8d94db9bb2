// SPDX-License-Identifier: Apache-2.0

#include "twm/march.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <limits>
#include <utility>

namespace twm {

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 2>
    kBuiltins{{
        {"marchc-", "{ ud:(w0); up:(r0,w1); up:(r1,w0); dn:(r0,w1); "
                    "dn:(r1,w0); ud:(r0) }"},
        {"marchu", "{ ud:(w0); up:(r0,w1,r1,w0); up:(r0,w1); "
                   "dn:(r1,w0,r0,w1); dn:(r1,w0) }"},
    }};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MarchTest parse(Orientation hint) {
    skip_space();
    if (at_end()) throw EmptyMarchError("empty march test");
    expect('{');
    skip_space();
    if (peek() == '}') throw EmptyMarchError("empty march test");

    MarchTest test;
    test.orientation = hint;
    test.elements.push_back(parse_element());
    skip_space();
    while (peek() == ';') {
      advance();
      test.elements.push_back(parse_element());
      skip_space();
    }
    expect('}');
    skip_space();
    if (!at_end()) fail("trailing characters after '}'");
    if (test.background_count() > 0) test.orientation = Orientation::Word;
    return test;
  }

 private:
  MarchElement parse_element() {
    skip_space();
    MarchElement element;
    element.order = parse_order();
    skip_space();
    expect(':');
    skip_space();
    expect('(');
    skip_space();
    if (peek() == ')') fail("empty element");
    element.ops.push_back(parse_op());
    skip_space();
    while (peek() == ',') {
      advance();
      element.ops.push_back(parse_op());
      skip_space();
    }
    expect(')');
    return element;
  }

  AddressOrder parse_order() {
    const std::size_t line = line_, column = column_;
    std::string word;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) {
      word.push_back(peek());
      advance();
    }
    if (word == "up") return AddressOrder::Ascending;
    if (word == "dn") return AddressOrder::Descending;
    if (word == "ud") return AddressOrder::Any;
    if (word.empty()) fail("expected address order");
    throw ParseError("unknown order token '" + word + "'", line, column);
  }

  MarchOp parse_op() {
    skip_space();
    MarchOp op;
    if (peek() == 'r') {
      op.action = Action::Read;
    } else if (peek() == 'w') {
      op.action = Action::Write;
    } else {
      fail("expected 'r' or 'w'");
    }
    advance();
    skip_space();
    op.data = parse_data();
    return op;
  }

  DataSpec parse_data() {
    const char c = peek();
    if (c == '0' || c == '1') {
      advance();
      skip_space();
      if (peek() == '@') fail("background index on a 0/1 literal");
      return c == '0' ? DataSpec::zero() : DataSpec::one();
    }
    DataSpec spec;
    if (c == '~') {
      spec.complemented = true;
      advance();
      skip_space();
    }
    if (peek() == 'D') {
      spec.kind = DataKind::Transparent;
      advance();
      skip_space();
      if (peek() == '@') {
        advance();
        skip_space();
        spec.background = parse_uint();
      }
      return spec;
    }
    if (peek() == 'a') {
      spec.kind = DataKind::Literal;
      advance();
      skip_space();
      expect('@');
      skip_space();
      spec.background = parse_uint();
      return spec;
    }
    fail(spec.complemented ? "expected 'D' or 'a' after '~'"
                           : "expected data '0', '1', 'D' or 'a@k'");
  }

  unsigned parse_uint() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      advance();
    if (start == pos_) fail("expected background index");
    unsigned value = 0;
    auto [ptr, ec] =
        std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{}) fail("background index out of range");
    return value;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
      advance();
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    if (at_end()) throw ParseError(what + " (end of input)", line_, column_);
    throw ParseError(what + " near '" + std::string(1, peek()) + "'", line_,
                     column_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line,
                       std::size_t column)
    : std::runtime_error(what + " at line " + std::to_string(line) +
                         ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

std::size_t MarchTest::op_count() const {
  std::size_t n = 0;
  for (const auto& e : elements) n += e.ops.size();
  return n;
}

unsigned MarchTest::background_count() const {
  unsigned k = 0;
  for (const auto& e : elements)
    for (const auto& op : e.ops) k = std::max(k, op.data.background);
  return k;
}

bool MarchTest::has_transparent() const {
  for (const auto& e : elements)
    for (const auto& op : e.ops)
      if (op.data.transparent()) return true;
  return false;
}

bool MarchTest::has_literal() const {
  for (const auto& e : elements)
    for (const auto& op : e.ops)
      if (!op.data.transparent()) return true;
  return false;
}

const MarchOp& MarchTest::last_op() const {
  return elements.back().ops.back();
}

MarchTest parse_march(std::string_view text, Orientation hint) {
  return Parser(text).parse(hint);
}

std::string_view order_token(AddressOrder order) {
  switch (order) {
    case AddressOrder::Ascending:
      return "up";
    case AddressOrder::Descending:
      return "dn";
    case AddressOrder::Any:
      break;
  }
  return "ud";
}

std::string format_data(const DataSpec& data) {
  if (!data.transparent() && data.background == 0)
    return data.complemented ? "1" : "0";
  std::string s = data.complemented ? "~" : "";
  s += data.transparent() ? "D@" : "a@";
  s += std::to_string(data.background);
  return s;
}

std::string format_op(const MarchOp& op) {
  return (op.is_read() ? "r" : "w") + format_data(op.data);
}

std::string format_element(const MarchElement& element) {
  std::string s(order_token(element.order));
  s += ":(";
  for (std::size_t i = 0; i < element.ops.size(); ++i) {
    if (i) s += ',';
    s += format_op(element.ops[i]);
  }
  s += ')';
  return s;
}

std::string format_march(const MarchTest& test) {
  if (test.empty()) return "{ }";
  std::string s = "{ ";
  for (std::size_t i = 0; i < test.elements.size(); ++i) {
    if (i) s += "; ";
    s += format_element(test.elements[i]);
  }
  s += " }";
  return s;
}

DataSpec symbolic_final_state(const MarchTest& test) {
  DataSpec state = DataSpec::initial();
  for (const auto& e : test.elements)
    for (const auto& op : e.ops)
      if (op.is_write()) state = op.data;
  return state;
}

std::vector<Diagnostic> validate(const MarchTest& test) {
  std::vector<Diagnostic> out;
  if (test.empty()) {
    out.push_back({Severity::Error, "empty march test", 0, 0});
    return out;
  }

  if (test.has_literal() && test.has_transparent())
    out.push_back({Severity::Warning, "mixed transparency", 0, 0});

  bool written = false;
  DataSpec state = DataSpec::initial();
  for (std::size_t e = 0; e < test.elements.size(); ++e) {
    const auto& ops = test.elements[e].ops;
    for (std::size_t o = 0; o < ops.size(); ++o) {
      const MarchOp& op = ops[o];
      if (test.orientation == Orientation::Bit && op.data.background > 0)
        out.push_back({Severity::Warning,
                       "background index " +
                           std::to_string(op.data.background) +
                           " in a bit-oriented test",
                       e, o});
      if (op.is_write()) {
        state = op.data;
        written = true;
        continue;
      }
      if (op.data == state) continue;
      if (!written && !op.data.transparent()) {
        out.push_back(
            {Severity::Warning, "read before initialization", e, o});
        // Report once; later reads follow from the assumed content.
        state = op.data;
        written = true;
        continue;
      }
      out.push_back({Severity::Warning,
                     "read expects " + format_data(op.data) +
                         " but the cell holds " + format_data(state),
                     e, o});
    }
  }

  if (test.last_op().is_write())
    out.push_back({Severity::Warning, "final write never observed",
                   test.elements.size() - 1,
                   test.elements.back().ops.size() - 1});
  return out;
}

std::string_view builtin_march_text(std::string_view name) {
  for (const auto& [key, text] : kBuiltins)
    if (key == name) return text;
  return {};
}

std::vector<std::string_view> builtin_march_names() {
  std::vector<std::string_view> names;
  for (const auto& [key, text] : kBuiltins) names.push_back(key);
  return names;
}

}  // namespace twm
