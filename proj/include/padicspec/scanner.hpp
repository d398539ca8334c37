#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "padicspec/arith.hpp"

namespace padicspec {

/// Syntax error with a 1-based source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

// Cursor over UTF-8 text; only ASCII is meaningful to the grammars here.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  // Peek without skipping whitespace first.
  char peek_raw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool accept(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool accept_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    for (std::size_t i = 0; i < w.size(); ++i) advance();
    return true;
  }

  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected '" + std::string(w) + "'");
  }

  bool next_is_digit() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    if (c == '+' || c == '-') {
      return pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
    }
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  }

  // Signed decimal integer.
  BigInt integer() {
    skip_ws();
    std::string digits;
    if (peek_raw() == '+' || peek_raw() == '-') {
      if (peek_raw() == '-') digits.push_back('-');
      advance();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek_raw()))) fail("expected integer");
    while (std::isdigit(static_cast<unsigned char>(peek_raw()))) {
      digits.push_back(peek_raw());
      advance();
    }
    return BigInt(digits);
  }

  std::int64_t small_integer() {
    const std::size_t l = line_, c = col_;
    BigInt v = integer();
    if (v > BigInt(std::numeric_limits<std::int32_t>::max()) ||
        v < BigInt(std::numeric_limits<std::int32_t>::min()))
      throw ParseError("exponent out of range", l, c);
    return static_cast<std::int64_t>(v);
  }

  [[noreturn]] void fail(const std::string& msg) {
    skip_ws();
    throw ParseError(msg, line_, col_);
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  void advance() {
    if (pos_ >= text_.size()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace detail
}  // namespace padicspec
