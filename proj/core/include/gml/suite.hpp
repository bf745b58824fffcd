#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gml/gen.hpp"
#include "gml/machine.hpp"
#include "gml/observe.hpp"

namespace gml {

struct DisagreeCase {
  std::uint64_t seedIndex = 0; // offset from the base seed
  std::string program;         // pretty-printed witness, already shrunk
  Observation operational;
  Observation denotational;
  std::string note;
};

struct SuiteReport {
  std::uint64_t total = 0;
  std::uint64_t agreed = 0;
  std::vector<DisagreeCase> disagreed; // sorted by seedIndex
  bool ok() const { return total == agreed; }
};

struct SuiteConfig {
  GenConfig gen; // program i is generated with seed gen.seed + i
  std::uint64_t count = 100;
  std::uint64_t fuel = 64;
  std::uint64_t maxSteps = 100000;
  Mutation mutation = Mutation::None; // applied to the machine side only
  unsigned threads = 0;               // 0: one per hardware thread
  bool shrink = true;
};

// Generates `count` programs and compares both evaluators on each.
// Independent per program; runs on a small work pool, merged by index.
SuiteReport run_adequacy_suite(const SuiteConfig& cfg);

// Greedy witness minimization: replaces subcomputations by trivial returns
// while the program still typechecks and the disagreement persists.
Program shrink_witness(const Program& witness, std::uint64_t fuel, std::uint64_t maxSteps,
                       Mutation mut);

std::string suite_report_text(const SuiteReport& report);

} // namespace gml
