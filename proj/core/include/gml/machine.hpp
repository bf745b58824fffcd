#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gml/ast.hpp"
#include "gml/stream.hpp"

// Big-step operational evaluation of closed core computations, realized as a
// resumable frame machine so results stream: outputs are produced as they
// happen, and a diverging-but-productive program yields events forever.
// Substitution-based: binders are eliminated by substituting closed values.

namespace gml {

struct Terminal {
  enum class Kind { Ret, Raise, Pending };
  Kind kind = Kind::Pending;
  std::string exc;   // Raise only
  ValuePtr value;    // Ret and Raise

  static Terminal ret(ValuePtr v) { return {Kind::Ret, "", std::move(v)}; }
  static Terminal raise(std::string e, ValuePtr v) { return {Kind::Raise, std::move(e), std::move(v)}; }
  static Terminal pending() { return {Kind::Pending, "", nullptr}; }
};

struct EvalLimits {
  std::uint64_t maxEvents = 64;     // observation budget (eval_steps_report only)
  std::uint64_t maxSteps = 100000;  // rule applications allowed between events
};

// Deliberate bugs for differential-testing sensitivity checks.
enum class Mutation {
  None,
  DropPutEvent,        // the put rule forgets to emit its event
  SwapDoShortCircuit,  // a raised bound computation makes the do return the payload
  HandleItOffByOne,    // loop re-entry uses the previous round's payload
};

// Lazily evaluates p, emitting Out per put and Done at a terminal.
// Throws StuckTerm when no rule applies (unreachable for typed closed
// terms), SilentDivergence when maxSteps rule applications pass without an
// event or terminal, and GuardednessFault when a loop re-enters on its own
// exception with no event emitted that round.
Stream<Terminal> eval(const CompPtr& p, const EvalLimits& limits, Mutation mutation = Mutation::None);

struct StepsReport {
  std::vector<std::uint64_t> events;
  Terminal terminal;       // Pending iff maxEvents ran out first
  std::uint64_t steps = 0; // total rule applications
  std::uint64_t loopRounds = 0; // handleit round entries, across all loops
};

StepsReport eval_steps_report(const CompPtr& p, const EvalLimits& limits,
                              Mutation mutation = Mutation::None);

} // namespace gml
