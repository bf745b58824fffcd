#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "gml/ast.hpp"

namespace gml {

// Relative odds of each computation production. Leaves stay available at
// every depth; the others need budget. Zero disables a production.
struct GenWeights {
  int retStop = 3;
  int doBind = 4;
  int caseSplit = 2;
  int pcaseSplit = 1;
  int guardPut = 3;
  int predSplit = 2;
  int raiseNow = 2;
  int handleBlock = 2;
  int loopBlock = 2;
  int applyLambda = 1;
  int countdownLoop = 2; // a full counting loop: seeded, guarded, payload-driven
  int raiseUnderDo = 1;  // a raise in bind position, exercising short-circuiting
};

struct GenConfig {
  std::uint64_t seed = 1;
  int maxDepth = 6;
  TypePtr resultType;      // null: a small first-order type chosen per program
  int exceptionBudget = 2; // ambient exception declarations for main
  GenWeights weights;
};

// How often each production fired, keyed by the weight-field names.
using GenStats = std::map<std::string, int>;

// Type-directed closed-program generation. Deterministic per seed; the
// returned program always passes check_program.
Program gen_program(const GenConfig& cfg, GenStats* stats = nullptr);

// An open body over one free variable plus a closed value for it, both
// well-typed. Pairs the substitution route (close the body, then run)
// against the environment route (bind the variable semantically).
struct OpenPair {
  CompPtr body; // may use `var` free
  std::string var;
  TypePtr varType;
  ValuePtr value; // closed, at varType
  TypePtr resultType;
  ExcContext delta; // ambient exception context the body was built under
};

OpenPair gen_open_pair(const GenConfig& cfg);

} // namespace gml
