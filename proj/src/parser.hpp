#pragma once

#include <optional>

#include "ast.hpp"
#include "typecheck.hpp"

namespace cise {

struct ParseResult {
  std::optional<Spec> spec;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return spec.has_value() && diagnostics.empty(); }
};

// Parses and typechecks a .cise specification. On failure, `spec` is empty
// and `diagnostics` carries at least one entry with a source span.
ParseResult parse_spec(const std::string& text, const std::string& filename = "<input>");

// Parses without running the typechecker; used by tests that exercise
// `typecheck` on ill-sorted specs.
ParseResult parse_spec_no_typecheck(const std::string& text,
                                    const std::string& filename = "<input>");

// Parses a formula in the scope of an operation of `spec` (parameters and
// current-state fields visible). Intended for tests and tooling.
struct FormulaParseResult {
  FormulaPtr formula;
  std::vector<Diagnostic> diagnostics;
};
FormulaParseResult parse_formula_in_op_scope(const Spec& spec, const std::string& op_name,
                                             const std::string& text);

}  // namespace cise
