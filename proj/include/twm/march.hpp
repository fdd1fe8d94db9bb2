// SPDX-License-Identifier: Apache-2.0
//
// March test representation and the textual notation used to read and
// write it.
//
//   march   := '{' element (';' element)* '}'
//   element := order ':' '(' op (',' op)* ')'
//   order   := 'up' | 'dn' | 'ud'
//   op      := ('r' | 'w') data
//   data    := '0' | '1' | ['~'] 'D' ['@' uint] | ['~'] 'a' '@' uint
//
// `D@k` is the initial content XOR background a_k, `~D@k` the initial content
// XOR the complement of a_k. `a@k` is the literal background a_k, used for
// nontransparent word-oriented references; `0`/`1` are shorthand for
// `a@0`/`~a@0`.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twm {

enum class AddressOrder { Ascending, Descending, Any };
enum class Action { Read, Write };
enum class Orientation { Bit, Word };

enum class DataKind {
  Literal,      // fixed pattern a_k (k == 0: the all-0 / all-1 word)
  Transparent,  // initial content XOR a_k
};

/// What a read expects or a write stores.
struct DataSpec {
  DataKind kind = DataKind::Literal;
  bool complemented = false;
  unsigned background = 0;

  static constexpr DataSpec zero() { return {DataKind::Literal, false, 0}; }
  static constexpr DataSpec one() { return {DataKind::Literal, true, 0}; }
  static constexpr DataSpec pattern(unsigned k, bool inverted = false) {
    return {DataKind::Literal, inverted, k};
  }
  static constexpr DataSpec initial(unsigned k = 0, bool inverted = false) {
    return {DataKind::Transparent, inverted, k};
  }

  constexpr DataSpec complement() const {
    return {kind, !complemented, background};
  }
  constexpr bool transparent() const { return kind == DataKind::Transparent; }

  friend constexpr bool operator==(const DataSpec&, const DataSpec&) = default;
};

struct MarchOp {
  Action action = Action::Read;
  DataSpec data;

  static constexpr MarchOp read(DataSpec d) { return {Action::Read, d}; }
  static constexpr MarchOp write(DataSpec d) { return {Action::Write, d}; }

  bool is_read() const { return action == Action::Read; }
  bool is_write() const { return action == Action::Write; }

  friend bool operator==(const MarchOp&, const MarchOp&) = default;
};

struct MarchElement {
  AddressOrder order = AddressOrder::Any;
  std::vector<MarchOp> ops;

  friend bool operator==(const MarchElement&, const MarchElement&) = default;
};

/// An ordered sequence of march elements. A test without elements is the
/// "empty" value; transformations reject it.
struct MarchTest {
  std::vector<MarchElement> elements;
  Orientation orientation = Orientation::Bit;

  bool empty() const { return elements.empty(); }
  std::size_t op_count() const;
  /// Highest background index referenced by any op (0 if none).
  unsigned background_count() const;
  bool has_transparent() const;
  bool has_literal() const;
  /// Last operation of the last element. Precondition: !empty().
  const MarchOp& last_op() const;

  friend bool operator==(const MarchTest&, const MarchTest&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised when a march test without elements reaches a parser or transform.
class EmptyMarchError : public std::runtime_error {
 public:
  explicit EmptyMarchError(const std::string& what = "Abort: empty march test")
      : std::runtime_error(what) {}
};

/// Parses the textual notation. The orientation is taken from `hint`, except
/// that a test referencing any background index above 0 is always WORD.
MarchTest parse_march(std::string_view text,
                      Orientation hint = Orientation::Bit);

std::string format_march(const MarchTest& test);
std::string format_element(const MarchElement& element);
std::string format_op(const MarchOp& op);
std::string format_data(const DataSpec& data);
std::string_view order_token(AddressOrder order);

enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity = Severity::Warning;
  std::string message;
  std::size_t element = 0;
  std::size_t op = 0;
};

/// Static checks. Returns an empty list for a well-formed test.
std::vector<Diagnostic> validate(const MarchTest& test);

/// Content of every cell after a fault-free run, as a DataSpec relative to
/// the initial content (which is DataSpec::initial()). Each op only touches
/// its own address, so the value is the same for all addresses.
DataSpec symbolic_final_state(const MarchTest& test);

/// Built-in tests in their published bit-oriented form.
std::string_view builtin_march_text(std::string_view name);
std::vector<std::string_view> builtin_march_names();

}  // namespace twm
