#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "gml/instances.hpp"
#include "gml/laws.hpp"

using namespace gml;

namespace {

const std::vector<std::string> kLawNames = {
    "unit-left",   "unit-right", "star-assoc",    "guard-trv",
    "guard-sum",   "guard-cmp",  "guard-str",     "guard-wkn",
    "fixpoint",    "naturality", "codiagonal",    "uniformity",
    "strength",    "double-dagger", "double-dagger-unit-context"};

template <typename I>
void expectAllLawsHold(const I& inst, const LawConfig& cfg) {
  LawReport report = check_laws(inst, cfg);
  REQUIRE(report.size() == kLawNames.size());
  for (size_t i = 0; i < report.size(); ++i) {
    CAPTURE(report[i].law);
    CHECK(report[i].law == kLawNames[i]);
    CHECK(report[i].samples > 0);
    if (!report[i].ok()) {
      INFO(law_report_text(report));
      CHECK(report[i].failures.empty());
    }
  }
  CHECK(law_report_ok(report));
}

// Deliberately broken: iteration ignores the table and returns everything.
struct FullSetPow : PowInstance {
  std::vector<PowSet> iterate(const std::vector<PowSet>& f, int ny) const {
    std::vector<PowSet> out(f.size());
    for (PowSet& row : out)
      for (int e = 0; e < ny; ++e) row.insert(e);
    return out;
  }
};

// Deliberately broken: iteration forgets the outputs of terminating rows.
struct ForgetfulTrace : TraceInstance {
  std::vector<Rational<int>> iterate(const std::vector<Rational<int>>& f, int ny) const {
    std::vector<Rational<int>> out = TraceInstance::iterate(f, ny);
    for (Rational<int>& r : out)
      if (r.finite()) r.prefix.clear();
    return out;
  }
};

long long failuresFor(const LawReport& report, const std::string& law) {
  for (const LawResult& r : report)
    if (r.law == law) return static_cast<long long>(r.failures.size());
  return -1;
}

} // namespace

TEST_CASE("powerset satisfies the iteration laws, exhaustively at small carriers") {
  PowInstance inst;
  LawConfig cfg;
  cfg.samples = 150;
  cfg.seed = 11;
  cfg.maxCarrier = 3;
  cfg.exhaustiveUpTo = 2;
  expectAllLawsHold(inst, cfg);
}

TEST_CASE("non-empty powerset satisfies the iteration laws") {
  PPlusInstance inst;
  LawConfig cfg;
  cfg.samples = 150;
  cfg.seed = 12;
  cfg.maxCarrier = 3;
  cfg.exhaustiveUpTo = 2;
  expectAllLawsHold(inst, cfg);
}

TEST_CASE("traces satisfy the iteration laws") {
  TraceInstance inst;
  LawConfig cfg;
  cfg.samples = 400;
  cfg.seed = 13;
  cfg.maxCarrier = 3;
  cfg.exhaustiveUpTo = 0; // traces are not enumerable; sampling only
  expectAllLawsHold(inst, cfg);
}

TEST_CASE("broken instances are caught, so the checks are not vacuous") {
  LawConfig cfg;
  cfg.samples = 60;
  cfg.seed = 14;
  cfg.maxCarrier = 2;
  cfg.exhaustiveUpTo = 0;
  SUBCASE("an iteration that always returns the full set fails the fixpoint law") {
    FullSetPow broken;
    LawReport report = check_laws(broken, cfg);
    CHECK_FALSE(law_report_ok(report));
    CHECK(failuresFor(report, "fixpoint") > 0);
    // failures carry printable evidence
    for (const LawResult& r : report) {
      for (const LawFailure& f : r.failures) {
        CHECK_FALSE(f.f.empty());
        CHECK_FALSE(f.lhs.empty());
        CHECK_FALSE(f.rhs.empty());
      }
    }
  }
  SUBCASE("an iteration that drops outputs fails the fixpoint law on traces") {
    ForgetfulTrace broken;
    LawReport report = check_laws(broken, cfg);
    CHECK_FALSE(law_report_ok(report));
    CHECK(failuresFor(report, "fixpoint") > 0);
  }
}
