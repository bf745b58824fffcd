#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "gml/ast.hpp"
#include "gml/desugar.hpp"
#include "gml/faults.hpp"
#include "gml/machine.hpp"
#include "gml/parse.hpp"
#include "gml/pretty.hpp"

using namespace gml;

namespace {

CompPtr pc(const std::string& s) {
  static Program ctx = [] {
    Program p;
    add_builtin_sigs(p);
    return p;
  }();
  return desugar(parse_comp(s, ctx), ctx);
}

StepsReport run(const std::string& s, EvalLimits limits = {}, Mutation mut = Mutation::None) {
  return eval_steps_report(pc(s), limits, mut);
}

std::vector<std::uint64_t> ev(std::initializer_list<std::uint64_t> xs) { return xs; }

} // namespace

TEST_CASE("countdown loop emits the descent and returns unit") {
  StepsReport r = run(
      "handleit e : N = 3 in "
      "do z <- pred(e); case z of inl u => ret * | inr m => (put(m) & raise_e m)");
  CHECK(r.events == ev({2, 1, 0}));
  CHECK(r.terminal.kind == Terminal::Kind::Ret);
  CHECK(pretty(r.terminal.value) == "*");
  CHECK(r.loopRounds == 4); // seeded round plus three re-entries
  CHECK(r.steps > 0);
}

TEST_CASE("infinite put loop is cut off at the event budget") {
  EvalLimits limits;
  limits.maxEvents = 5;
  StepsReport r = run("handleit e : 1 = * in (put(0) & raise_e *)", limits);
  CHECK(r.events == ev({0, 0, 0, 0, 0}));
  CHECK(r.terminal.kind == Terminal::Kind::Pending);
}

TEST_CASE("do sequencing concatenates events and threads the value") {
  StepsReport r = run("do x <- ret 1; (put(x) & ret x)");
  CHECK(r.events == ev({1}));
  CHECK(r.terminal.kind == Terminal::Kind::Ret);
  CHECK(pretty(r.terminal.value) == "1");
}

TEST_CASE("a raise short-circuits the rest of a do block") {
  StepsReport r = run("do x <- raise_e 7; (put(0) & ret *)");
  CHECK(r.events.empty());
  CHECK(r.terminal.kind == Terminal::Kind::Raise);
  CHECK(r.terminal.exc == "e");
  CHECK(pretty(r.terminal.value) == "7");
}

TEST_CASE("handle clause coverage") {
  SUBCASE("returns pass through untouched") {
    StepsReport r = run("handle e : 1 in (put(3) & ret *) with (put(9) & ret *)");
    CHECK(r.events == ev({3}));
    CHECK(r.terminal.kind == Terminal::Kind::Ret);
  }
  SUBCASE("a foreign raise passes through without running the handler") {
    StepsReport r = run("handle e : 1 in raise_f * with (put(9) & ret *)");
    CHECK(r.events.empty());
    CHECK(r.terminal.kind == Terminal::Kind::Raise);
    CHECK(r.terminal.exc == "f");
  }
  SUBCASE("a matching raise enters the handler with the payload bound") {
    StepsReport r = run("handle e : N in raise_e 5 with (put(e) & ret e)");
    CHECK(r.events == ev({5}));
    CHECK(r.terminal.kind == Terminal::Kind::Ret);
    CHECK(pretty(r.terminal.value) == "5");
  }
  SUBCASE("events before the raise are kept in front of the handler's") {
    StepsReport r = run("handle e : 1 in (put(1) & raise_e *) with (put(2) & ret *)");
    CHECK(r.events == ev({1, 2}));
    CHECK(r.terminal.kind == Terminal::Kind::Ret);
  }
}

TEST_CASE("trivial return takes exactly one step") {
  StepsReport r = run("ret *");
  CHECK(r.steps == 1);
  CHECK(r.events.empty());
  CHECK(r.terminal.kind == Terminal::Kind::Ret);
}

TEST_CASE("annotations are transparent at runtime") {
  StepsReport r = run("(put(1) & ret * : 1)");
  CHECK(r.events == ev({1}));
  CHECK(r.terminal.kind == Terminal::Kind::Ret);
}

TEST_CASE("an unproductive loop faults on its first silent re-entry") {
  // Rejected by the type checker; forcing it through the machine must fault
  // rather than spin.
  try {
    run("handleit e : 1 = * in raise_e *");
    FAIL("expected a guardedness fault");
  } catch (const GuardednessFault& f) {
    CHECK(std::string(f.what()).find("round 1") != std::string::npos);
  }
}

TEST_CASE("a loop that goes silent after a while names the failing round") {
  // First round emits, later rounds never do: pred(0) keeps yielding inl.
  try {
    run("handleit e : N = 2 in "
        "do z <- pred(e); case z of inl u => raise_e 0 | inr m => (put(m) & raise_e m)");
    FAIL("expected a guardedness fault");
  } catch (const GuardednessFault& f) {
    // rounds 1 and 2 emit 1 and 0; round 3 hits pred(0) and re-raises silently
    CHECK(std::string(f.what()).find("round 3") != std::string::npos);
  }
}

TEST_CASE("event-free divergence trips the step budget") {
  // (fun x => x x)(fun x => x x) reduces to itself forever with no output.
  ValuePtr omega =
      v_lambda("x", t_nat(), {}, c_app(v_var("x"), v_var("x")));
  EvalLimits limits;
  limits.maxSteps = 1000;
  CHECK_THROWS_AS(eval_steps_report(c_app(omega, omega), limits), SilentDivergence);
}

TEST_CASE("do blocks reassociate without changing observations") {
  StepsReport a =
      run("do y <- (do x <- (put(1) & ret 5); (put(x) & ret x)); (put(y) & ret y)");
  StepsReport b =
      run("do x <- (put(1) & ret 5); do y <- (put(x) & ret x); (put(y) & ret y)");
  CHECK(a.events == ev({1, 5, 5}));
  CHECK(a.events == b.events);
  CHECK(a.terminal.kind == b.terminal.kind);
  CHECK(pretty(a.terminal.value) == pretty(b.terminal.value));
}

TEST_CASE("inner loop output keeps an outer loop productive") {
  StepsReport r = run(
      "handleit o : N = 2 in "
      "do z <- pred(o); case z of inl u => ret * | inr m => "
      "(do w <- (handleit i : N = 1 in "
      "  do y <- pred(i); case y of inl u => ret * | inr k => (put(k) & raise_i k)); "
      " raise_o m)");
  CHECK(r.events == ev({0, 0}));
  CHECK(r.terminal.kind == Terminal::Kind::Ret);
}

TEST_CASE("mutant machines are observably wrong") {
  SUBCASE("dropping put events") {
    StepsReport r = run("put(4) & ret *", {}, Mutation::DropPutEvent);
    CHECK(r.events.empty());
    CHECK(r.terminal.kind == Terminal::Kind::Ret);
  }
  SUBCASE("a raise mistaken for a return") {
    StepsReport r = run("do x <- raise_e 7; (put(0) & ret *)", {}, Mutation::SwapDoShortCircuit);
    CHECK(r.terminal.kind == Terminal::Kind::Ret);
    CHECK(pretty(r.terminal.value) == "7");
    CHECK(r.events.empty());
  }
  SUBCASE("feeding a loop round the previous payload") {
    StepsReport r = run(
        "handleit e : N = 3 in "
        "do z <- pred(e); case z of inl u => ret * | inr m => (put(m) & raise_e m)",
        {}, Mutation::HandleItOffByOne);
    CHECK(r.events == ev({2, 2, 1, 1, 0, 0}));
    CHECK(r.terminal.kind == Terminal::Kind::Ret);
  }
}

TEST_CASE("eval exposes the same run as an incremental stream") {
  Stream<Terminal> s = eval(pc("put(8) & (put(6) & ret *)"), {});
  auto step1 = s.next();
  auto* out1 = std::get_if<Stream<Terminal>::Out>(&step1);
  REQUIRE(out1 != nullptr);
  CHECK(out1->value == 8);
  auto step2 = s.next();
  auto* out2 = std::get_if<Stream<Terminal>::Out>(&step2);
  REQUIRE(out2 != nullptr);
  CHECK(out2->value == 6);
  auto step3 = s.next();
  auto* done = std::get_if<Stream<Terminal>::Done>(&step3);
  REQUIRE(done != nullptr);
  CHECK(done->value.kind == Terminal::Kind::Ret);
  // pulls after completion keep answering with the same terminal
  auto step4 = s.next();
  CHECK(std::get_if<Stream<Terminal>::Done>(&step4) != nullptr);
}
