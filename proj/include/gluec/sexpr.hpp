#pragma once

// Shared s-expression reader for defs, typemap and override files.
//
// Surface syntax:
//   form    := atom | string | int | '(' form* ')'
//   atom    := [A-Za-z_][A-Za-z0-9_*-]*
//   int     := '-'? [0-9]+            (must fit in int64)
//   string  := '"' ( [^"\\] | '\"' | '\\' )* '"'
//   comment := ';' to end of line
//
// Parsing is iterative so that pathological nesting cannot exhaust the stack.

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gluec/diagnostic.hpp"

namespace gluec {

struct SExpr {
  enum class Kind { Atom, Str, Int, List };

  Kind kind = Kind::List;
  std::string text;  // Atom name or decoded Str contents
  std::int64_t integer = 0;
  std::vector<SExpr> children;
  SourceLocation location;

  static SExpr atom(std::string t, SourceLocation loc = {}) {
    SExpr e;
    e.kind = Kind::Atom;
    e.text = std::move(t);
    e.location = loc;
    return e;
  }
  static SExpr str(std::string t, SourceLocation loc = {}) {
    SExpr e;
    e.kind = Kind::Str;
    e.text = std::move(t);
    e.location = loc;
    return e;
  }
  static SExpr integer_value(std::int64_t v, SourceLocation loc = {}) {
    SExpr e;
    e.kind = Kind::Int;
    e.integer = v;
    e.location = loc;
    return e;
  }
  static SExpr list(std::vector<SExpr> items = {}, SourceLocation loc = {}) {
    SExpr e;
    e.kind = Kind::List;
    e.children = std::move(items);
    e.location = loc;
    return e;
  }

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_atom(std::string_view name) const { return kind == Kind::Atom && text == name; }
  bool is_str() const { return kind == Kind::Str; }
  bool is_int() const { return kind == Kind::Int; }
  bool is_list() const { return kind == Kind::List; }

  // (head ...) with an atom head; empty string otherwise.
  std::string_view head() const {
    if (kind != Kind::List || children.empty() || !children.front().is_atom()) return {};
    return children.front().text;
  }
};

// Structural equality; locations are ignored.
inline bool same_structure(const SExpr& a, const SExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SExpr::Kind::Atom:
    case SExpr::Kind::Str:
      return a.text == b.text;
    case SExpr::Kind::Int:
      return a.integer == b.integer;
    case SExpr::Kind::List:
      if (a.children.size() != b.children.size()) return false;
      for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!same_structure(a.children[i], b.children[i])) return false;
      return true;
  }
  return false;
}

class SExprError : public std::runtime_error {
 public:
  SExprError(const std::string& what, SourceLocation loc)
      : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + what),
        message_(what),
        location_(loc) {}

  const std::string& message() const { return message_; }
  SourceLocation location() const { return location_; }

 private:
  std::string message_;
  SourceLocation location_;
};

namespace detail {

inline bool atom_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
inline bool atom_char(char c) {
  return atom_start(c) || (c >= '0' && c <= '9') || c == '*' || c == '-';
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
inline bool is_delimiter(char c) { return is_space(c) || c == '(' || c == ')' || c == '"' || c == ';'; }

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    // Open lists; top-level forms accumulate in `top`.
    std::vector<SExpr> top;
    std::vector<SExpr> open;

    auto emit = [&](SExpr e) {
      if (open.empty())
        top.push_back(std::move(e));
      else
        open.back().children.push_back(std::move(e));
    };

    while (true) {
      skip_blank();
      if (pos_ >= text_.size()) break;
      const SourceLocation here{line_, column_};
      const char c = text_[pos_];
      if (c == '(') {
        advance();
        open.push_back(SExpr::list({}, here));
      } else if (c == ')') {
        if (open.empty()) throw SExprError("unbalanced parenthesis: unexpected ')'", here);
        advance();
        SExpr done = std::move(open.back());
        open.pop_back();
        emit(std::move(done));
      } else if (c == '"') {
        emit(read_string(here));
      } else if (is_digit(c) || (c == '-' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))) {
        emit(read_int(here));
      } else if (atom_start(c)) {
        emit(read_atom(here));
      } else {
        throw SExprError(unexpected(c), here);
      }
    }
    if (!open.empty())
      throw SExprError("unbalanced parenthesis: '(' is never closed", open.back().location);
    return top;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (is_space(c)) {
        advance();
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  static std::string unexpected(char c) {
    const auto byte = static_cast<unsigned char>(c);
    if (byte >= 0x20 && byte < 0x7f) return std::string("unexpected character '") + c + "'";
    static constexpr char hex[] = "0123456789abcdef";
    return std::string("unexpected byte 0x") + hex[byte >> 4] + hex[byte & 0xf];
  }

  SExpr read_string(SourceLocation start) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) throw SExprError("unterminated string", start);
      const char c = text_[pos_];
      if (c == '"') {
        advance();
        return SExpr::str(std::move(out), start);
      }
      if (c == '\\') {
        const SourceLocation esc{line_, column_};
        advance();
        if (pos_ >= text_.size()) throw SExprError("unterminated string", start);
        const char e = text_[pos_];
        if (e != '"' && e != '\\') throw SExprError("invalid escape sequence in string", esc);
        out.push_back(e);
        advance();
        continue;
      }
      out.push_back(c);
      advance();
    }
  }

  SExpr read_int(SourceLocation start) {
    const std::size_t begin = pos_;
    if (text_[pos_] == '-') advance();
    while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
    if (pos_ < text_.size() && !is_delimiter(text_[pos_]))
      throw SExprError("malformed integer", start);
    std::int64_t value = 0;
    const char* first = text_.data() + begin;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) throw SExprError("integer overflow", start);
    if (ec != std::errc{} || ptr != last) throw SExprError("malformed integer", start);
    return SExpr::integer_value(value, start);
  }

  SExpr read_atom(SourceLocation start) {
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && atom_char(text_[pos_])) advance();
    if (pos_ < text_.size() && !is_delimiter(text_[pos_]))
      throw SExprError(unexpected(text_[pos_]), SourceLocation{line_, column_});
    return SExpr::atom(std::string(text_.substr(begin, pos_ - begin)), start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

inline void print_into(std::string& out, const SExpr& e) {
  switch (e.kind) {
    case SExpr::Kind::Atom:
      out += e.text;
      break;
    case SExpr::Kind::Int:
      out += std::to_string(e.integer);
      break;
    case SExpr::Kind::Str:
      out.push_back('"');
      for (char c : e.text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('"');
      break;
    case SExpr::Kind::List:
      out.push_back('(');
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out.push_back(' ');
        print_into(out, e.children[i]);
      }
      out.push_back(')');
      break;
  }
}

}  // namespace detail

/// Parses every top-level form in `text`. Throws SExprError on the first
/// lexical or structural error.
inline std::vector<SExpr> parse_sexprs(std::string_view text) {
  return detail::Reader(text).read_all();
}

/// Canonical single-line rendering; parse_sexprs(print(e)) is structurally e.
inline std::string print(const SExpr& e) {
  std::string out;
  detail::print_into(out, e);
  return out;
}

}  // namespace gluec
