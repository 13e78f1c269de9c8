#pragma once

// Tokenizer and expression parser shared by the polynomial and job-file
// readers. Internal to the library.

#include <string>
#include <string_view>
#include <vector>

#include "snewton/errors.hpp"
#include "snewton/poly.hpp"

namespace snewton::detail {

struct Token {
  enum class Kind { Number, Ident, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  double value = 0.0;
  int line = 1;
  int column = 1;

  bool is(char c) const { return kind == Kind::Symbol && text.size() == 1 && text[0] == c; }
  bool is_ident(std::string_view s) const { return kind == Kind::Ident && text == s; }
};

/// Splits text into tokens; `#` starts a comment running to end of line.
/// The final token is always End.
std::vector<Token> tokenize(std::string_view text);

[[noreturn]] void fail(const Token& tok, const std::string& what);

/// Recursive-descent reader for + - * / ^ and parentheses over complex
/// constants, the parameter, the imaginary unit `i`, and declared variables.
class ExprParser {
 public:
  ExprParser(const std::vector<Token>& toks, std::size_t& pos, const std::vector<std::string>& vars,
             const std::string& t_name, bool allow_laurent_t)
      : toks_(toks), pos_(pos), vars_(vars), t_name_(t_name), laurent_(allow_laurent_t) {}

  Polynomial parse_expr();

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  Polynomial parse_term();
  Polynomial parse_unary();
  Polynomial parse_power();
  Polynomial parse_primary();

  const std::vector<Token>& toks_;
  std::size_t& pos_;
  const std::vector<std::string>& vars_;
  const std::string& t_name_;
  bool laurent_;
};

}  // namespace snewton::detail
