#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ast.hpp"

namespace cise {

enum class Tok {
  Ident,
  Int,
  // punctuation
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Dot,
  Comma,
  Semi,
  Colon,
  At,
  // operators
  Eq,        // =
  Ne,        // <>
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,      // ==
  AmpAmp,    // "&&" or "/\ "
  PipePipe,  // "||" or "\/"
  Arrow,     // ->
  Iff,       // <->
  Assign,    // <-
  Plus,
  Minus,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  long long int_value = 0;
  SourceSpan span;
};

struct LexError : std::runtime_error {
  SourceSpan span;
  LexError(SourceSpan sp, const std::string& msg)
      : std::runtime_error(msg), span(std::move(sp)) {}
};

// Tokenizes the whole input. Block comments (* ... *) nest.
std::vector<Token> lex(const std::string& text, const std::string& filename);

}  // namespace cise
