#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "gml/ast.hpp"
#include "gml/denote.hpp"
#include "gml/desugar.hpp"
#include "gml/faults.hpp"
#include "gml/gen.hpp"
#include "gml/machine.hpp"
#include "gml/observe.hpp"
#include "gml/parse.hpp"
#include "gml/pretty.hpp"
#include "gml/subst.hpp"
#include "gml/suite.hpp"
#include "gml/typing.hpp"

using namespace gml;

namespace {

Program prg(const std::string& s) { return desugar(parse_program(s)); }

CompPtr pc(const std::string& s) {
  static Program ctx = [] {
    Program p;
    add_builtin_sigs(p);
    return p;
  }();
  return desugar(parse_comp(s, ctx), ctx);
}

Observation denoteObs(const CompPtr& p, std::uint64_t fuel, const TypePtr& ty,
                      const ExcContext& delta = {}) {
  return observe(denote_comp(p, Env()), fuel, ty, delta);
}

Observation machineObs(const CompPtr& p, std::uint64_t fuel, const TypePtr& ty) {
  EvalLimits limits;
  limits.maxEvents = fuel;
  return observe(eval(p, limits), fuel, ty);
}

const std::string kCountdown =
    "handleit e : N = 3 in "
    "do z <- pred(e); case z of inl u => ret * | inr m => (put(m) & raise_e m)";

} // namespace

TEST_CASE("denotation of the countdown matches the hand-computed trace") {
  Observation d = denoteObs(pc("handleit e : N = 3 in do z <- pred(e); "
                               "case z of inl u => ret * | inr m => (put(m) & raise_e m)"),
                            16, t_one());
  CHECK(d.events == std::vector<std::uint64_t>({2, 1, 0}));
  CHECK(d.kind == Observation::Kind::Ret);
  CHECK(d.valueText == "*");
}

TEST_CASE("denotational handle clauses") {
  SUBCASE("returns pass through") {
    Observation d = denoteObs(pc("handle e : 1 in (put(3) & ret *) with (put(9) & ret *)"), 8,
                              t_one());
    CHECK(d.events == std::vector<std::uint64_t>({3}));
    CHECK(d.kind == Observation::Kind::Ret);
  }
  SUBCASE("a matching raise continues in the handler, trace concatenated") {
    Observation d = denoteObs(pc("handle e : N in (put(1) & raise_e 5) with (put(e) & ret e)"), 8,
                              t_nat());
    CHECK(d.events == std::vector<std::uint64_t>({1, 5}));
    CHECK(d.kind == Observation::Kind::Ret);
    CHECK(d.valueText == "5");
  }
  SUBCASE("a foreign raise skips the handler") {
    ExcContext delta{ExcEntry{"f", t_one(), ExcTag::Unguarded}};
    Observation d = denoteObs(pc("handle e : 1 in raise_f * with (put(9) & ret *)"), 8, t_one(),
                              delta);
    CHECK(d.kind == Observation::Kind::Raise);
    CHECK(d.exc == "f");
    CHECK(d.events.empty());
  }
}

TEST_CASE("denotational loop faults on a silent round") {
  Observation d = denoteObs(pc("handleit e : 1 = * in raise_e *"), 8, t_one());
  CHECK(d.kind == Observation::Kind::Fault);
  CHECK(d.exc.find("round 1") != std::string::npos);
}

TEST_CASE("an infinite denotational loop yields events forever") {
  Observation d = denoteObs(pc("handleit e : 1 = * in (put(0) & raise_e *)"), 5, t_one());
  CHECK(d.events == std::vector<std::uint64_t>({0, 0, 0, 0, 0}));
  CHECK(d.kind == Observation::Kind::Pending);
}

TEST_CASE("readback reifies first-order results and refuses functions") {
  Observation d =
      denoteObs(pc("ret (inr (3, 4) : 1 + N * N)"), 4, t_sum(t_one(), t_prod(t_nat(), t_nat())));
  CHECK(d.kind == Observation::Kind::Ret);
  CHECK(d.comparableValue);
  CHECK(d.valueText == "inr (3, 4)");

  TypePtr funTy = t_fun(t_nat(), {}, t_nat());
  Observation f = denoteObs(pc("ret (fun (x : N) [] => ret x)"), 4, funTy);
  CHECK(f.kind == Observation::Kind::Ret);
  CHECK_FALSE(f.comparableValue);
}

TEST_CASE("adequacy on the countdown program") {
  TypedProgram tp = check_program(prg(kCountdown));
  AdequacyResult r = adequacy_check(tp, 64);
  CHECK(r.agree);
  CHECK(r.operational.events == std::vector<std::uint64_t>({2, 1, 0}));
  CHECK(r.operational.kind == Observation::Kind::Ret);
  CHECK(r.denotational.valueText == "*");
}

TEST_CASE("adequacy on an infinite loop is agreement on the prefix") {
  TypedProgram tp = check_program(prg("(handleit e : 1 = * in (put(0) & raise_e *) : 1)"));
  AdequacyResult r = adequacy_check(tp, 5);
  CHECK(r.agree);
  CHECK(r.operational.kind == Observation::Kind::Pending);
  CHECK(r.operational.events.size() == 5);
}

TEST_CASE("agreement is symmetric in the two observations") {
  TypedProgram tp = check_program(prg(kCountdown));
  AdequacyResult r = adequacy_check(tp, 64);
  CHECK(observations_agree(r.operational, r.denotational) ==
        observations_agree(r.denotational, r.operational));
}

TEST_CASE("environment binding and substitution give the same meaning") {
  // The machine substitutes closed values; the denotation carries an
  // environment. Running both over the same open body at many arguments
  // exercises the substitution route against the environment route.
  struct Template {
    std::string body;
    TypePtr at;
  };
  std::vector<Template> bodies = {
      {"do z <- pred(x); case z of inl u => ret 0 | inr m => (put(m) & ret (succ(m)))", t_nat()},
      {"handleit e : N = x in do z <- pred(e); "
       "case z of inl u => ret x | inr m => (put(m) & raise_e m)",
       t_nat()},
      {"handle f : N in (put(x) & raise_f x) with (put(f) & ret f)", t_nat()},
      {"do y <- ret (x, succ(x)); pcase y of (a, b) => (put(b) & ret a)", t_nat()},
  };
  for (const Template& t : bodies) {
    CompPtr body = pc(t.body);
    for (std::uint64_t n = 0; n < 12; ++n) {
      ValuePtr v = v_nat(n);
      CompPtr closed = substitute(body, "x", v);
      Observation viaSubst = denoteObs(closed, 32, t.at);
      Observation viaEnv =
          observe(denote_comp(body, Env().extend("x", denote_value(v, Env()))), 32, t.at, {});
      Observation machine = machineObs(closed, 32, t.at);
      CAPTURE(t.body);
      CAPTURE(n);
      CHECK(observations_agree(viaSubst, viaEnv));
      CHECK(observations_agree(viaSubst, machine));
    }
  }
}

TEST_CASE("generated programs are deterministic per seed and typecheck") {
  GenConfig cfg;
  cfg.seed = 7;
  cfg.maxDepth = 5;
  Program a = gen_program(cfg);
  Program b = gen_program(cfg);
  CHECK(pretty_program(a) == pretty_program(b));

  std::set<std::string> distinct;
  for (std::uint64_t s = 0; s < 100; ++s) {
    GenConfig c;
    c.seed = 1000 + s;
    c.maxDepth = 6;
    Program p = gen_program(c); // throws if generation cannot satisfy the checker
    check_program(p);
    distinct.insert(pretty_program(p));
  }
  CHECK(distinct.size() > 90); // near-total variety across seeds
}

TEST_CASE("the generated corpus exercises every construct") {
  GenStats stats;
  for (std::uint64_t s = 0; s < 80; ++s) {
    GenConfig c;
    c.seed = 5000 + s;
    c.maxDepth = 7;
    gen_program(c, &stats);
  }
  for (const char* key :
       {"retStop", "doBind", "caseSplit", "pcaseSplit", "guardPut", "predSplit", "raiseNow",
        "handleBlock", "loopBlock", "applyLambda", "countdownLoop", "raiseUnderDo"}) {
    CAPTURE(key);
    CHECK(stats[key] > 0);
  }
}

TEST_CASE("the adequacy suite agrees on a fresh corpus") {
  SuiteConfig cfg;
  cfg.gen.seed = 42;
  cfg.gen.maxDepth = 6;
  cfg.count = 60;
  cfg.fuel = 32;
  SuiteReport r = run_adequacy_suite(cfg);
  INFO(suite_report_text(r));
  CHECK(r.total == 60);
  CHECK(r.agreed == 60);
  CHECK(r.ok());
}

TEST_CASE("an empty suite run passes") {
  SuiteConfig cfg;
  cfg.count = 0;
  SuiteReport r = run_adequacy_suite(cfg);
  CHECK(r.ok());
  CHECK(r.total == 0);
}

TEST_CASE("each broken evaluator is caught by the suite") {
  auto disagreements = [](Mutation mut) {
    SuiteConfig cfg;
    cfg.gen.seed = 42;
    cfg.gen.maxDepth = 6;
    cfg.count = 60;
    cfg.fuel = 32;
    cfg.mutation = mut;
    SuiteReport r = run_adequacy_suite(cfg);
    return r;
  };
  SUBCASE("dropped events") {
    SuiteReport r = disagreements(Mutation::DropPutEvent);
    INFO(suite_report_text(r));
    CHECK(!r.disagreed.empty());
  }
  SUBCASE("raise treated as return") {
    SuiteReport r = disagreements(Mutation::SwapDoShortCircuit);
    INFO(suite_report_text(r));
    CHECK(!r.disagreed.empty());
  }
  SUBCASE("loop payload off by one round") {
    SuiteReport r = disagreements(Mutation::HandleItOffByOne);
    INFO(suite_report_text(r));
    CHECK(!r.disagreed.empty());
  }
}

TEST_CASE("witnesses are shrunk and still disagree after shrinking") {
  SuiteConfig cfg;
  cfg.gen.seed = 42;
  cfg.gen.maxDepth = 6;
  cfg.count = 60;
  cfg.fuel = 32;
  cfg.mutation = Mutation::DropPutEvent;
  SuiteReport r = run_adequacy_suite(cfg);
  REQUIRE(!r.disagreed.empty());
  const DisagreeCase& d = r.disagreed.front();
  // reproduce the original, shrink it again, and confirm the contract
  GenConfig gc = cfg.gen;
  gc.seed = cfg.gen.seed + d.seedIndex;
  Program original = gen_program(gc);
  Program shrunk = shrink_witness(original, cfg.fuel, cfg.maxSteps, cfg.mutation);
  TypedProgram tp = check_program(shrunk); // witnesses must stay well-typed
  AdequacyResult res = adequacy_check(tp, cfg.fuel, cfg.maxSteps, cfg.mutation);
  CHECK_FALSE(res.agree);
  CHECK(pretty_program(shrunk).size() <= pretty_program(original).size());
}

TEST_CASE("open term generation yields checkable pairs") {
  // pairs are deterministic per seed and stay well-typed under the one-variable context
  for (int i = 0; i < 12; ++i) {
    GenConfig gc;
    gc.seed = 500 + static_cast<std::uint64_t>(i);
    OpenPair a = gen_open_pair(gc);
    OpenPair b = gen_open_pair(gc);
    CHECK(pretty(a.body) == pretty(b.body));
    CHECK(pretty(a.value) == pretty(b.value));
    CHECK(a.var == b.var);

    Program sigs;
    add_builtin_sigs(sigs);
    // the replacement value is closed, so the plugged term checks in the empty context
    CompPtr plugged = substitute(a.body, a.var, a.value);
    CHECK_NOTHROW(check_comp(sigs, a.delta, VarContext{}, plugged, a.resultType));
  }
}
