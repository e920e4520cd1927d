// Recursive-descent parser for the expression mini-language.
//
// Precedence, loosest to tightest: + -  <  * /  <  unary -  <  ^  <
// atoms (numbers, variables, function calls, parentheses). '^' is
// right-associative and binds tighter than unary minus, so -x^2 parses
// as -(x^2) while x^-2 is accepted. Implicit multiplication is a syntax
// error. Full grammar in docs/grammar.md.

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

#include "nonstat/errors.hpp"
#include "nonstat/expr.hpp"

namespace nonstat {

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
  auto tail = [](unsigned char c) { return std::isalnum(c) || c == '_'; };
  if (!head(s[0])) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!tail(s[i])) return false;
  return true;
}

namespace detail {

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::size_t offset;     // byte offset into the source
  std::string_view text;  // slice of the source
  double value = 0;       // for Number
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  Expr parse_expression() {
    Expr e = parse_additive();
    if (tok_.kind != Token::Kind::End)
      throw SyntaxError(tok_.offset, "an operator or end of input");
    return e;
  }

 private:
  using Kind = Token::Kind;

  Expr parse_additive() {
    Expr e = parse_multiplicative();
    while (tok_.kind == Kind::Plus || tok_.kind == Kind::Minus) {
      BinaryOp op = tok_.kind == Kind::Plus ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      e = binary(op, std::move(e), parse_multiplicative());
    }
    return e;
  }

  Expr parse_multiplicative() {
    Expr e = parse_unary();
    while (tok_.kind == Kind::Star || tok_.kind == Kind::Slash) {
      BinaryOp op = tok_.kind == Kind::Star ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      e = binary(op, std::move(e), parse_unary());
    }
    return e;
  }

  Expr parse_unary() {
    if (tok_.kind == Kind::Minus) {
      advance();
      return unary(UnaryOp::Neg, parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (tok_.kind == Kind::Caret) {
      advance();
      // Right-associative; the exponent re-enters at unary level so that
      // x^-2 and x^y^z parse without parentheses.
      return binary(BinaryOp::Pow, std::move(base), parse_unary());
    }
    return base;
  }

  Expr parse_primary() {
    switch (tok_.kind) {
      case Kind::Number: {
        double v = tok_.value;
        advance();
        return constant(v);
      }
      case Kind::Ident: {
        std::string name(tok_.text);
        std::size_t at = tok_.offset;
        advance();
        if (tok_.kind == Kind::LParen) {
          UnaryOp op = function_op(name, at);
          advance();
          Expr arg = parse_additive();
          expect(Kind::RParen, "')'");
          return unary(op, std::move(arg));
        }
        return variable(std::move(name));
      }
      case Kind::LParen: {
        advance();
        Expr e = parse_additive();
        expect(Kind::RParen, "')'");
        return e;
      }
      default:
        throw SyntaxError(tok_.offset, "a number, variable, function or '('");
    }
  }

  static UnaryOp function_op(const std::string& name, std::size_t offset) {
    if (name == "sin") return UnaryOp::Sin;
    if (name == "cos") return UnaryOp::Cos;
    if (name == "exp") return UnaryOp::Exp;
    if (name == "log") return UnaryOp::Log;
    if (name == "sqrt") return UnaryOp::Sqrt;
    if (name == "abs") return UnaryOp::Abs;
    throw UnknownFunction(name, offset);
  }

  void expect(Kind kind, const char* what) {
    if (tok_.kind != kind) throw SyntaxError(tok_.offset, what);
    advance();
  }

  void advance() { tok_ = lex(); }

  Token lex() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::size_t at = pos_;
    if (pos_ >= src_.size()) return {Kind::End, at, {}};

    char c = src_[pos_];
    auto single = [&](Kind k) {
      ++pos_;
      return Token{k, at, src_.substr(at, 1)};
    };
    switch (c) {
      case '+': return single(Kind::Plus);
      case '-': return single(Kind::Minus);
      case '*': return single(Kind::Star);
      case '/': return single(Kind::Slash);
      case '^': return single(Kind::Caret);
      case '(': return single(Kind::LParen);
      case ')': return single(Kind::RParen);
      default: break;
    }

    auto is_digit = [](unsigned char ch) { return std::isdigit(ch) != 0; };
    if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                        is_digit(src_[pos_ + 1]))) {
      return lex_number(at);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      Token t{Kind::Ident, at, src_.substr(at, end - at)};
      pos_ = end;
      return t;
    }
    throw SyntaxError(at, "a valid token");
  }

  Token lex_number(std::size_t at) {
    std::size_t end = pos_;
    auto is_digit = [&](std::size_t i) {
      return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    };
    while (is_digit(end)) ++end;
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (is_digit(end)) ++end;
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
      if (is_digit(exp)) {
        end = exp;
        while (is_digit(end)) ++end;
      }
      // otherwise the 'e' is not part of the literal; "2e" lexes as 2
      // followed by an identifier and fails as implicit multiplication.
    }
    std::string_view text = src_.substr(at, end - at);
    double value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec == std::errc::result_out_of_range)
      value = std::strtod(std::string(text).c_str(), nullptr);
    else if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
      throw SyntaxError(at, "a number");
    if (!std::isfinite(value)) throw SyntaxError(at, "a finite number");
    pos_ = end;
    return {Kind::Number, at, text, value};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_{Token::Kind::End, 0, {}};
};

}  // namespace detail

// Throws SyntaxError (with byte offset and an expected-token hint) or
// UnknownFunction.
inline Expr parse(std::string_view source) {
  return detail::Parser(source).parse_expression();
}

}  // namespace nonstat
