// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// binary exits nonzero if any fails. Run directly or via ctest.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "gml/ast.hpp"
#include "gml/denote.hpp"
#include "gml/desugar.hpp"
#include "gml/errors.hpp"
#include "gml/faults.hpp"
#include "gml/gen.hpp"
#include "gml/instances.hpp"
#include "gml/laws.hpp"
#include "gml/machine.hpp"
#include "gml/observe.hpp"
#include "gml/parse.hpp"
#include "gml/powerset.hpp"
#include "gml/pretty.hpp"
#include "gml/subst.hpp"
#include "gml/suite.hpp"
#include "gml/typing.hpp"

using namespace gml;

namespace {

Program prg(const std::string& s) { return desugar(parse_program(s)); }

const char* kCountdown =
    "handleit e : N = 3 in "
    "do z <- pred(e); "
    "case z of inl u => ret * | inr m => (put(m) & raise_e m)";

const char* kPutLoop = "(handleit e : 1 = * in (put(0) & raise_e *) : 1)";

Observation machineObs(const CompPtr& p, std::uint64_t fuel, const TypePtr& at,
                       std::uint64_t maxSteps = 100000) {
  EvalLimits lim;
  lim.maxEvents = fuel;
  lim.maxSteps = maxSteps;
  return observe(eval(p, lim), fuel, at);
}

Observation denoteObs(const CompPtr& p, std::uint64_t fuel, const TypePtr& at,
                      const ExcContext& delta) {
  return observe(denote_comp(p, Env()), fuel, at, delta);
}

// 1: the interactive session program typechecks, and removing its output
// guard turns the loop's re-raise into a rejected program.
bool sessionGolden(std::string& detail) {
  std::string decls =
      "value msg_think : 1 -> Str "
      "value msg_answer : 1 -> Str "
      "value eq42 : N -> 1 + 1 "
      "value eqN : N * N -> 1 + 1 "
      "effect rand : 1 -> N [0] "
      "effect read : 1 -> N [0] "
      "effect print : Str -> 0 [1] ";
  std::string body =
      "do y <- rand(); z <- read(); "
      "if eq42(y) then raise_r * else "
      "(if eqN((z, y)) then ret * else raise_e *)";

  Program ok = prg(decls + "handle r : 1 in (handleit e : 1 = * in print(msg_think(*)) & (" +
                   body + ")) with (print(msg_answer(*)) & ret *)");
  TypedProgram tp = check_program(ok);
  if (pretty(tp.mainType) != "1") {
    detail = "session program synthesized " + pretty(tp.mainType) + ", expected 1";
    return false;
  }
  std::string why;
  if (!replay_derivation(tp, &why)) {
    detail = "derivation replay failed: " + why;
    return false;
  }

  Program bare = prg(decls + "handle r : 1 in (handleit e : 1 = * in " + body +
                     ") with (print(msg_answer(*)) & ret *)");
  try {
    check_program(bare);
  } catch (const TypeError& e) {
    if (e.code == ErrorCode::GuardedRaise) return true;
    detail = std::string("unguarded variant rejected with ") + error_code_name(e.code) +
             ", expected GuardedRaise";
    return false;
  }
  detail = "unguarded variant was accepted";
  return false;
}

SuiteConfig corpusConfig() {
  SuiteConfig cfg;
  cfg.gen.seed = 42;
  cfg.gen.maxDepth = 8;
  cfg.count = 500;
  cfg.fuel = 64;
  cfg.maxSteps = 100000;
  return cfg;
}

// 2: the two semantics agree on a 500-program random corpus, and each of the
// three seeded evaluator mutations is caught on the same corpus.
bool adequacyCorpus(std::string& detail) {
  SuiteConfig cfg = corpusConfig();
  SuiteReport clean = run_adequacy_suite(cfg);
  if (!clean.ok()) {
    const DisagreeCase& d = clean.disagreed.front();
    detail = std::to_string(clean.disagreed.size()) + " disagreements; seed " +
             std::to_string(cfg.gen.seed + d.seedIndex) + ": " + d.note;
    return false;
  }

  struct Mut {
    Mutation m;
    const char* name;
  };
  const Mut muts[] = {{Mutation::DropPutEvent, "drop output event"},
                      {Mutation::SwapDoShortCircuit, "swap do short-circuit"},
                      {Mutation::HandleItOffByOne, "loop re-entry off by one"}};
  cfg.shrink = false; // witnesses are not reported here, skip the minimization cost
  for (const Mut& mu : muts) {
    cfg.mutation = mu.m;
    SuiteReport r = run_adequacy_suite(cfg);
    if (r.disagreed.empty()) {
      detail = std::string("mutation '") + mu.name + "' produced no disagreement";
      return false;
    }
  }
  return true;
}

// 3: iteration laws on the finite powerset instance, exhaustive at small
// carriers plus a large random sweep.
bool powersetLaws(std::string& detail) {
  LawConfig cfg;
  cfg.samples = 1000;
  cfg.seed = 2026;
  cfg.fuel = 64;
  cfg.maxCarrier = 3;
  cfg.exhaustiveUpTo = 2;
  LawReport report = check_laws(PowInstance{}, cfg);
  for (const LawResult& r : report) {
    if (!r.ok()) {
      detail = "law '" + r.law + "' failed on " + std::to_string(r.failures.size()) +
               " of " + std::to_string(r.samples) + " tables";
      return false;
    }
  }
  detail = std::to_string(report.size()) + " laws";
  return true;
}

// 4: the same laws on rational-stream tables.
bool traceLaws(std::string& detail) {
  LawConfig cfg;
  cfg.samples = 500;
  cfg.seed = 2026;
  cfg.fuel = 64;
  cfg.maxCarrier = 3;
  cfg.exhaustiveUpTo = 0;
  LawReport report = check_laws(TraceInstance{}, cfg);
  for (const LawResult& r : report) {
    if (!r.ok()) {
      detail = "law '" + r.law + "' failed on " + std::to_string(r.failures.size()) +
               " of " + std::to_string(r.samples) + " tables";
      return false;
    }
  }
  detail = std::to_string(report.size()) + " laws";
  return true;
}

// 5: non-empty powerset iteration is total on guarded tables (never an empty
// row), exhaustively over all carriers up to 3, and its precondition rejects
// the unguarded unit-on-the-loop-summand table.
bool nonemptyPowersetTotal(std::string& detail) {
  long long tables = 0;
  for (int ny = 1; ny <= 3; ++ny) {
    for (int nx = 1; nx <= 3; ++nx) {
      int n = ny + nx;
      std::vector<PowSet> rows; // nonempty rows that can escape into the result summand
      for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
        PowSet s;
        for (int e = 0; e < n; ++e)
          if (bits >> e & 1) s.insert(e);
        bool escapes = false;
        for (int e : s)
          if (e < ny) escapes = true;
        if (escapes) rows.push_back(std::move(s));
      }
      std::vector<std::size_t> idx(static_cast<std::size_t>(nx), 0);
      for (;;) {
        PowTable f;
        f.reserve(idx.size());
        for (std::size_t k : idx) f.push_back(rows[k]);
        PowTable out = pplus_iterate(f, ny);
        for (const PowSet& row : out) {
          if (row.empty()) {
            detail = "empty result row for a guarded table at |Y|=" + std::to_string(ny) +
                     ", |X|=" + std::to_string(nx);
            return false;
          }
        }
        ++tables;
        int k = nx - 1;
        while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == rows.size()) {
          idx[static_cast<std::size_t>(k)] = 0;
          --k;
        }
        if (k < 0) break;
      }
    }
  }

  try {
    pplus_iterate(PowTable{PowSet{1}}, 1); // unit into the loop summand, 1 -> P+(1+1)
  } catch (const NotGuardedError&) {
    detail = std::to_string(tables) + " guarded tables";
    return true;
  }
  detail = "unguarded injection table was accepted";
  return false;
}

// 6: typed programs never go silent under the step budget, and the one
// ill-typed loop that would spin is stopped by the runtime guardedness fault.
bool productivity(std::string& detail) {
  SuiteConfig cfg = corpusConfig();
  for (std::uint64_t i = 0; i < cfg.count; ++i) {
    GenConfig gc = cfg.gen;
    gc.seed = cfg.gen.seed + i;
    Program p = gen_program(gc);
    TypedProgram tp = check_program(p);
    Observation o = machineObs(tp.program.main, cfg.fuel, tp.mainType, cfg.maxSteps);
    if (o.kind == Observation::Kind::Fault) {
      detail = "seed " + std::to_string(gc.seed) + ": " + o.exc;
      return false;
    }
  }

  CompPtr loop = c_handleit(v_star(), "e", t_one(), c_raise("e", v_star()));
  Observation o = machineObs(loop, 4, t_one());
  if (o.kind != Observation::Kind::Fault) {
    detail = "unguarded loop yielded " + o.text() + ", expected a fault";
    return false;
  }
  if (o.exc.find("round 1") == std::string::npos) {
    detail = "fault does not name round 1: " + o.exc;
    return false;
  }
  return true;
}

// 7: concrete programs behave as computed by hand, and denotation commutes
// with substitution on generated open terms.
bool concreteExamples(std::string& detail) {
  TypedProgram cd = check_program(prg(kCountdown));
  Observation m = machineObs(cd.program.main, 64, cd.mainType);
  Observation d = denoteObs(cd.program.main, 64, cd.mainType, cd.program.mainExc);
  std::vector<std::uint64_t> want{2, 1, 0};
  if (m.events != want || m.kind != Observation::Kind::Ret || m.valueText != "*") {
    detail = "countdown on the machine: " + m.text();
    return false;
  }
  if (!observations_agree(m, d)) {
    detail = "countdown denotation: " + d.text();
    return false;
  }

  TypedProgram pl = check_program(prg(kPutLoop));
  for (std::uint64_t fuel : {1, 5, 17}) {
    Observation lm = machineObs(pl.program.main, fuel, pl.mainType);
    Observation ld = denoteObs(pl.program.main, fuel, pl.mainType, pl.program.mainExc);
    bool zeros = lm.events.size() == fuel;
    for (std::uint64_t e : lm.events) zeros = zeros && e == 0;
    if (!zeros || lm.kind != Observation::Kind::Pending) {
      detail = "output loop at fuel " + std::to_string(fuel) + ": " + lm.text();
      return false;
    }
    if (!observations_agree(lm, ld)) {
      detail = "output loop denotation at fuel " + std::to_string(fuel) + ": " + ld.text();
      return false;
    }
  }

  for (int i = 0; i < 200; ++i) {
    GenConfig gc;
    gc.seed = 1000 + static_cast<std::uint64_t>(i);
    OpenPair pair = gen_open_pair(gc);
    CompPtr plugged = substitute(pair.body, pair.var, pair.value);
    Observation om = machineObs(plugged, 32, pair.resultType);
    Observation od = denoteObs(plugged, 32, pair.resultType, pair.delta);
    Env rho = Env().extend(pair.var, denote_value(pair.value, Env()));
    Observation oe = observe(denote_comp(pair.body, rho), 32, pair.resultType, pair.delta);
    if (!observations_agree(od, oe)) {
      detail = "seed " + std::to_string(gc.seed) + ": plugged denotation " + od.text() +
               " vs environment " + oe.text();
      return false;
    }
    if (!observations_agree(om, od)) {
      detail = "seed " + std::to_string(gc.seed) + ": machine " + om.text() +
               " vs denotation " + od.text();
      return false;
    }
  }
  return true;
}

struct Criterion {
  const char* title;
  std::function<bool(std::string&)> run;
  double budgetSecs; // 0: untimed
};

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"session program accepted, unguarded variant rejected", sessionGolden, 1.0},
      {"machine and denotation agree on 500 random programs; 3 mutations caught",
       adequacyCorpus, 60.0},
      {"iteration laws on finite powersets (exhaustive <=2 + 1000 samples)", powersetLaws,
       120.0},
      {"iteration laws on rational stream tables (500 samples)", traceLaws, 0},
      {"non-empty powerset iteration total on guarded tables, precondition enforced",
       nonemptyPowersetTotal, 0},
      {"typed corpus never goes silent; unguarded loop faults on round 1", productivity, 0},
      {"countdown, infinite output loop, and substitution on 200 open terms",
       concreteExamples, 0},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    std::string detail;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && c.budgetSecs > 0 && secs > c.budgetSecs) {
      ok = false;
      detail = "exceeded the " + std::to_string(c.budgetSecs) + " s budget";
    }
    if (!ok) ++failed;
    std::printf("%s  %zu. %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", i + 1, c.title, secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
  if (failed == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    return 0;
  }
  std::printf("acceptance: %d of %zu criteria FAILED\n", failed, criteria.size());
  return 1;
}
