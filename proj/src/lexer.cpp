#include "lexer.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace snewton::detail {

void fail(const Token& tok, const std::string& what) { throw SyntaxError(what, tok.line, tok.column); }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t s = 0; s < k; ++s) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isdigit(c) || (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          j = k;
        }
      }
      tok.kind = Token::Kind::Number;
      tok.text = std::string(text.substr(i, j - i));
      tok.value = std::strtod(tok.text.c_str(), nullptr);
      if (!std::isfinite(tok.value)) fail(tok, "number out of range '" + tok.text + "'");
      advance(j - i);
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::string_view("+-*/^(),;=").find(static_cast<char>(c)) != std::string_view::npos) {
      tok.kind = Token::Kind::Symbol;
      tok.text = std::string(1, static_cast<char>(c));
      advance(1);
    } else {
      fail(tok, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

Polynomial ExprParser::parse_expr() {
  Polynomial acc = parse_term();
  while (peek().is('+') || peek().is('-')) {
    const bool minus = next().is('-');
    Polynomial rhs = parse_term();
    acc = minus ? acc - rhs : acc + rhs;
  }
  return acc;
}

Polynomial ExprParser::parse_term() {
  Polynomial acc = parse_unary();
  while (peek().is('*') || peek().is('/')) {
    const Token& op = next();
    Polynomial rhs = parse_unary();
    if (op.is('*')) {
      acc = acc * rhs;
      continue;
    }
    const bool constant = rhs.terms.size() == 1 && rhs.terms[0].t_exp == 0 && rhs.total_degree() == 0;
    if (!constant) fail(op, "division by a non-constant expression");
    acc = (Complex(1) / rhs.terms[0].coeff) * acc;
  }
  return acc;
}

Polynomial ExprParser::parse_unary() {
  if (peek().is('-')) {
    next();
    return -parse_unary();
  }
  if (peek().is('+')) {
    next();
    return parse_unary();
  }
  return parse_power();
}

Polynomial ExprParser::parse_power() {
  Polynomial base = parse_primary();
  if (!peek().is('^')) return base;
  next();
  bool negative = false;
  if (peek().is('-')) {
    negative = true;
    next();
  }
  const Token& e = next();
  if (e.kind != Token::Kind::Number || e.value != std::floor(e.value) || e.value > 64) {
    fail(e, "exponent must be an integer between 0 and 64");
  }
  const int k = static_cast<int>(e.value);
  if (!negative) return pow(base, k);
  const bool t_monomial = base.terms.size() == 1 && base.total_degree() == 0;
  if (!laurent_ || !t_monomial) fail(e, "negative exponents are only allowed on the parameter in series starts");
  Monomial m = base.terms[0];
  m.coeff = Complex(1) / ipow(m.coeff, k);
  m.t_exp = -m.t_exp * k;
  Polynomial out(base.nvars);
  out.terms.push_back(std::move(m));
  return out;
}

Polynomial ExprParser::parse_primary() {
  const int n = static_cast<int>(vars_.size());
  const Token& tok = next();
  switch (tok.kind) {
    case Token::Kind::Number:
      return Polynomial::constant(n, Complex(tok.value, 0.0));
    case Token::Kind::Ident: {
      if (tok.text == t_name_) return Polynomial::parameter(n);
      for (int j = 0; j < n; ++j) {
        if (vars_[static_cast<std::size_t>(j)] == tok.text) return Polynomial::variable(n, j);
      }
      if (tok.text == "i") return Polynomial::constant(n, Complex(0.0, 1.0));
      if (peek().is('(')) fail(tok, "function '" + tok.text + "' is not supported; pre-scale irrational constants");
      throw UnknownVariable(tok.text);
    }
    case Token::Kind::Symbol:
      if (tok.is('(')) {
        Polynomial inner = parse_expr();
        if (!peek().is(')')) fail(peek(), "expected ')'");
        next();
        return inner;
      }
      fail(tok, "unexpected '" + tok.text + "'");
    case Token::Kind::End:
      break;
  }
  fail(tok, "unexpected end of input");
}

}  // namespace snewton::detail
