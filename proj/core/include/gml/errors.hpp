#pragma once

#include <stdexcept>
#include <string>

#include "gml/ast.hpp"

namespace gml {

enum class ErrorCode {
  UnboundVar,
  UnboundExc,
  GuardedRaise,
  TagMismatch,
  TypeMismatch,
  SignatureMismatch,
  ExcContextMismatch,
};

const char* error_code_name(ErrorCode c);

// Static rejection: thrown by the desugarer (bad operation use) and the
// type checker.
struct TypeError : std::runtime_error {
  ErrorCode code;
  Pos pos;

  TypeError(ErrorCode c, Pos p, const std::string& message)
      : std::runtime_error(message), code(c), pos(p) {}
};

} // namespace gml
