#pragma once

#include <stdexcept>
#include <string>

// Runtime faults. On programs accepted by the checker, none of these can
// fire; they exist so that force-evaluating unchecked terms surfaces the
// violation instead of hanging or corrupting state.

namespace gml {

// A loop re-entered without emitting any output in the round: the semantic
// error the guardedness discipline exists to prevent.
struct GuardednessFault : std::runtime_error {
  explicit GuardednessFault(const std::string& msg) : std::runtime_error(msg) {}
};

// The step budget elapsed with no event and no terminal.
struct SilentDivergence : std::runtime_error {
  explicit SilentDivergence(const std::string& msg) : std::runtime_error(msg) {}
};

// No evaluation rule applies (closed, typed terms never get here).
struct StuckTerm : std::runtime_error {
  explicit StuckTerm(const std::string& msg) : std::runtime_error(msg) {}
};

// An iteration operator was handed a morphism its guardedness predicate
// rejects.
struct NotGuardedError : std::runtime_error {
  explicit NotGuardedError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gml
