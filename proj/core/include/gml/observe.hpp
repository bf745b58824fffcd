#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gml/ast.hpp"
#include "gml/denote.hpp"
#include "gml/machine.hpp"
#include "gml/typing.hpp"

namespace gml {

// What a fuel-bounded reading of a run looks like from the outside: the
// events seen, then how (or whether) it stopped. Fault is never produced by
// the reference evaluators on checked programs; it absorbs the defined
// runtime faults so that a deliberately broken evaluator shows up as a
// disagreement instead of a crash.
struct Observation {
  enum class Kind { Ret, Raise, Pending, Fault };
  std::vector<std::uint64_t> events;
  Kind kind = Kind::Pending;
  std::string exc;       // raise name; fault description for Kind::Fault
  std::string valueText; // canonical rendering of the terminal value
  bool comparableValue = true; // false once a function space is involved

  std::string text() const;
};

// Structural agreement: equal events, same stop kind, same exception, and
// equal values whenever both sides can render one.
bool observations_agree(const Observation& a, const Observation& b);

// Ascriptions dropped everywhere; numerals survive pretty-printing as digits.
ValuePtr canon_value(const ValuePtr& v);

// Machine side: pull up to `fuel` events. retType only decides comparability.
Observation observe(Stream<Terminal> s, std::uint64_t fuel, const TypePtr& retType);

// Denotational side: terminal values are read back at their syntactic types
// (the result type for returns, the declared payload type for raises).
Observation observe(Stream<SemOutcome> s, std::uint64_t fuel, const TypePtr& retType,
                    const ExcContext& delta);

struct AdequacyResult {
  bool agree = false;
  Observation operational;
  Observation denotational;
  std::string note; // first difference, or a broken internal guarantee
};

// Runs both evaluators on a checked program and compares the observations.
// Additionally enforces that a surviving raise of a loop-style (guarded)
// exception arrives with at least one event in front of it.
AdequacyResult adequacy_check(const TypedProgram& tp, std::uint64_t fuel,
                              std::uint64_t maxSteps = 100000,
                              Mutation mut = Mutation::None);

} // namespace gml
