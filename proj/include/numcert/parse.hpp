#pragma once

#include <cctype>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "numcert/polynomial.hpp"

namespace numcert {

struct ParseDiagnostics {
  /// Set when a rational literal (a '/' between constants) is converted to
  /// floating point in approximate mode.
  bool rational_in_approx_mode = false;
};

namespace detail {

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::string_view text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    std::size_t start = i_;
    if (i_ >= src_.size()) return {Token::End, {}, start};
    char c = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
      bool seen_dot = false;
      while (i_ < src_.size()) {
        char d = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          ++i_;
        } else if (d == '.' && !seen_dot) {
          seen_dot = true;
          ++i_;
        } else if ((d == 'e' || d == 'E') && i_ + 1 < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[i_ + 1])) ||
                    ((src_[i_ + 1] == '+' || src_[i_ + 1] == '-') && i_ + 2 < src_.size() &&
                     std::isdigit(static_cast<unsigned char>(src_[i_ + 2]))))) {
          i_ += (src_[i_ + 1] == '+' || src_[i_ + 1] == '-') ? 2 : 1;
          while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
          break;
        } else {
          break;
        }
      }
      return {Token::Number, src_.substr(start, i_ - start), start};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                                  src_[i_] == '_'))
        ++i_;
      return {Token::Ident, src_.substr(start, i_ - start), start};
    }
    ++i_;
    switch (c) {
      case '+': return {Token::Plus, src_.substr(start, 1), start};
      case '-': return {Token::Minus, src_.substr(start, 1), start};
      case '*': return {Token::Star, src_.substr(start, 1), start};
      case '/': return {Token::Slash, src_.substr(start, 1), start};
      case '^': return {Token::Caret, src_.substr(start, 1), start};
      case '(': return {Token::LParen, src_.substr(start, 1), start};
      case ')': return {Token::RParen, src_.substr(start, 1), start};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

 private:
  std::string_view src_;
  std::size_t i_ = 0;
};

template <class S>
class PolyParser {
 public:
  PolyParser(std::string_view src, std::span<const std::string> vars, ParseDiagnostics* diag)
      : lexer_(src), vars_(vars), diag_(diag) {
    advance();
  }

  Polynomial<S> parse() {
    Polynomial<S> p = expr();
    if (tok_.kind != Token::End)
      throw ParseError("unexpected trailing input '" + std::string(tok_.text) + "'", tok_.pos);
    return p;
  }

 private:
  using Traits = ScalarTraits<S>;

  Polynomial<S> expr() {
    Polynomial<S> acc = term();
    while (tok_.kind == Token::Plus || tok_.kind == Token::Minus) {
      bool minus = tok_.kind == Token::Minus;
      advance();
      Polynomial<S> rhs = term();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  Polynomial<S> term() {
    Polynomial<S> acc = unary();
    while (tok_.kind == Token::Star || tok_.kind == Token::Slash) {
      bool divide = tok_.kind == Token::Slash;
      std::size_t pos = tok_.pos;
      advance();
      Polynomial<S> rhs = unary();
      if (divide) {
        if (!rhs.is_constant())
          throw ParseError("division is only supported by nonzero constants", pos);
        S d = rhs.constant_value();
        if (Traits::is_zero(d)) throw ParseError("division by zero", pos);
        if (!Traits::exact && diag_) diag_->rational_in_approx_mode = true;
        acc = (Traits::one() / d) * acc;
      } else {
        acc = acc * rhs;
      }
    }
    return acc;
  }

  Polynomial<S> unary() {
    if (tok_.kind == Token::Minus) {
      advance();
      return -unary();
    }
    if (tok_.kind == Token::Plus) {
      advance();
      return unary();
    }
    return power();
  }

  Polynomial<S> power() {
    Polynomial<S> base = atom();
    if (tok_.kind == Token::Caret) {
      advance();
      if (tok_.kind != Token::Number || tok_.text.find('.') != std::string_view::npos ||
          tok_.text.find('e') != std::string_view::npos ||
          tok_.text.find('E') != std::string_view::npos)
        throw ParseError("expected a nonnegative integer exponent", tok_.pos);
      if (tok_.text.size() > 9) throw ParseError("exponent too large", tok_.pos);
      unsigned long k = std::stoul(std::string(tok_.text));
      advance();
      return base.pow(static_cast<std::uint32_t>(k));
    }
    return base;
  }

  Polynomial<S> atom() {
    switch (tok_.kind) {
      case Token::Number: {
        Rational r = rational_from_string(tok_.text);
        advance();
        return Polynomial<S>::constant(vars_.size(), Traits::from_rational(r));
      }
      case Token::Ident: {
        std::string name(tok_.text);
        std::size_t pos = tok_.pos;
        advance();
        if (name == "ii")
          return Polynomial<S>::constant(vars_.size(), Traits::imaginary_unit());
        for (std::size_t j = 0; j < vars_.size(); ++j)
          if (vars_[j] == name) return Polynomial<S>::variable(vars_.size(), j);
        throw ParseError("unknown variable name '" + name + "'", pos);
      }
      case Token::LParen: {
        advance();
        Polynomial<S> p = expr();
        if (tok_.kind != Token::RParen) throw ParseError("expected ')'", tok_.pos);
        advance();
        return p;
      }
      default:
        throw ParseError("expected a number, variable, or '('", tok_.pos);
    }
  }

  void advance() { tok_ = lexer_.next(); }

  Lexer lexer_;
  Token tok_{Token::End, {}, 0};
  std::span<const std::string> vars_;
  ParseDiagnostics* diag_;
};

}  // namespace detail

/// Parses a polynomial expression over the listed variables. Supported
/// grammar: + - * / ^, parentheses, integer/decimal/rational literals and
/// the imaginary unit `ii`; '/' only by nonzero constants.
template <class S>
Polynomial<S> parse_polynomial(std::string_view text, std::span<const std::string> vars,
                               ParseDiagnostics* diag = nullptr) {
  return detail::PolyParser<S>(text, vars, diag).parse();
}

template <class S>
Polynomial<S> parse_polynomial(std::string_view text, const std::vector<std::string>& vars,
                               ParseDiagnostics* diag = nullptr) {
  return detail::PolyParser<S>(text, std::span<const std::string>(vars), diag).parse();
}

}  // namespace numcert
