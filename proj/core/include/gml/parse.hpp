#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gml/ast.hpp"

namespace gml {

struct SyntaxError : std::runtime_error {
  Pos pos;
  std::vector<std::string> expected; // token descriptions acceptable at pos

  SyntaxError(Pos p, std::string message, std::vector<std::string> exp = {})
      : std::runtime_error(std::move(message)), pos(p), expected(std::move(exp)) {}
};

// Parses a full source file: signature declarations, an optional
// `exceptions` header, then the main computation. Surface sugar is kept
// in the tree; run desugar() to obtain core terms. Builtin signatures
// (zero, succ, pred, put) are injected ahead of the declarations.
Program parse_program(const std::string& text);

// Single-term entry points for tests and tools; signatures are needed to
// classify `f(v)` heads, so a program context is required.
CompPtr parse_comp(const std::string& text, const Program& sigContext);
ValuePtr parse_value(const std::string& text, const Program& sigContext);
TypePtr parse_type(const std::string& text);

} // namespace gml
