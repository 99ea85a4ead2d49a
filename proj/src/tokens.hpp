#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "typecheck.hpp"

namespace cise {

// A consistency model: tokens bound to operations (or to one of their
// arguments) plus a symmetric conflict relation. Operations holding
// conflicting op-level tokens must synchronize; conflicting argument tokens
// restrict concurrency to runs with different argument values.
struct TokenSystem {
  struct OpToken {
    std::string op;
    std::string token;
    SourceSpan span;
  };
  struct ArgToken {
    std::string op;
    std::string arg;
    std::string token;
    SourceSpan span;
  };

  std::vector<OpToken> op_tokens;
  std::vector<ArgToken> arg_tokens;
  // Unordered pairs, stored with first <= second. Self-pairs are allowed.
  std::vector<std::pair<std::string, std::string>> conflicts;

  bool tokens_conflict(const std::string& t1, const std::string& t2) const;

  // True when f and g carry conflicting tokens of which at least one is
  // op-level; such pairs are never analyzed. A conflict between an op-level
  // and an argument token is treated op-level (the coarser reading).
  bool ops_conflict(const std::string& f, const std::string& g) const;

  // Argument pairs (arg of f, arg of g) whose argtokens conflict.
  std::vector<std::pair<std::string, std::string>> arg_conflicts(
      const std::string& f, const std::string& g) const;

 private:
  std::vector<std::string> tokens_of(const std::string& op, bool op_level) const;
};

struct TokenParseResult {
  std::optional<TokenSystem> tokens;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return tokens.has_value() && diagnostics.empty(); }
};

// Parses a .tok file against a spec: one or more token/argtoken declarations
// followed by one or more conflict declarations, newline-separated.
TokenParseResult parse_tokens(const std::string& text, const Spec& spec,
                              const std::string& filename = "<tokens>");

}  // namespace cise
