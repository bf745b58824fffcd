#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gml/ast.hpp"
#include "gml/desugar.hpp"
#include "gml/errors.hpp"
#include "gml/parse.hpp"
#include "gml/pretty.hpp"
#include "gml/subst.hpp"

using namespace gml;

namespace {

Program sigsOnly() {
  Program p;
  add_builtin_sigs(p);
  return p;
}

CompPtr pc(const std::string& s) {
  static Program ctx = sigsOnly();
  return parse_comp(s, ctx);
}

ValuePtr pv(const std::string& s) {
  static Program ctx = sigsOnly();
  return parse_value(s, ctx);
}

} // namespace

TEST_CASE("types parse and round-trip") {
  CHECK(pretty(parse_type("N")) == "N");
  CHECK(pretty(parse_type("1 + N")) == "1 + N");
  CHECK(pretty(parse_type("N*N+1")) == "N * N + 1");
  CHECK(pretty(parse_type("(N+1)*N")) == "(N + 1) * N");
  CHECK(pretty(parse_type("Str")) == "Str");
  CHECK(pretty(parse_type("N -[e:1^u]> 0")) == "N -[e:1^u]> 0");
  CHECK(pretty(parse_type("N -[]> (N -[d:N*N^g]> 1)")) == "N -[]> N -[d:N * N^g]> 1");

  // + and * associate to the right; arrows nest on the right unparenthesized
  TypePtr t = parse_type("N + N + N");
  auto* s = std::get_if<Type::Sum>(&t->node);
  REQUIRE(s);
  CHECK(std::holds_alternative<Type::Nat>(s->lhs->node));
  CHECK(std::holds_alternative<Type::Sum>(s->rhs->node));

  for (const char* src : {"N", "0", "1", "N * (N + 1)", "(N -[e:N^u]> 1) -[]> 0 + 1"}) {
    TypePtr a = parse_type(src);
    CHECK(type_equal(a, parse_type(pretty(a))));
  }

  CHECK_THROWS_AS(parse_type("2"), SyntaxError);
  CHECK_THROWS_AS(parse_type("N +"), SyntaxError);
}

TEST_CASE("values parse") {
  CHECK(alpha_equal(pv("3"), v_nat(3)));
  CHECK(pretty(pv("succ(succ(zero(*)))")) == "2");
  CHECK(pretty(pv("(1, (2, *))")) == "(1, (2, *))");
  CHECK(pretty(pv("(inl * : 1+N)")) == "(inl * : 1 + N)");
  CHECK(pretty(pv("inr (x, y)")) == "inr (x, y)");
  CHECK(pretty(pv("fun (x : N) [e:1^u] => ret x")) == "fun (x : N) [e:1^u] => ret x");

  // ascription sticks to the injection node
  auto* inl = std::get_if<Value::Inl>(&pv("(inl 2 : N+1)")->node);
  REQUIRE(inl);
  CHECK(type_equal(inl->sum, parse_type("N+1")));

  CHECK_THROWS_AS(pv("(x : N)"), SyntaxError);  // ascription only on injections
  CHECK_THROWS_AS(pv("put(3)"), SyntaxError);   // effect op inside a value
  CHECK_THROWS_AS(pv("_"), SyntaxError);
  CHECK_THROWS_AS(pv("raise"), SyntaxError);
}

TEST_CASE("computations parse") {
  SUBCASE("do chain nests to the right") {
    CompPtr p = pc("do x <- ret 1; y <- ret 2; ret (x, y)");
    auto* d1 = std::get_if<Comp::Do>(&p->node);
    REQUIRE(d1);
    CHECK(d1->var == "x");
    auto* d2 = std::get_if<Comp::Do>(&d1->body->node);
    REQUIRE(d2);
    CHECK(d2->var == "y");
    CHECK(std::holds_alternative<Comp::Ret>(d2->body->node));
  }

  SUBCASE("unbound chain element gets the dummy binder") {
    CompPtr p = pc("do ret *; ret 1");
    auto* d = std::get_if<Comp::Do>(&p->node);
    REQUIRE(d);
    CHECK(d->var == "_");
  }

  SUBCASE("case branches split at the pipe") {
    CompPtr p = pc("case z of inl u => ret * | inr m => put(m) & raise_e m");
    auto* c = std::get_if<Comp::Case>(&p->node);
    REQUIRE(c);
    CHECK(std::holds_alternative<Comp::Ret>(c->left->node));
    CHECK(std::holds_alternative<Comp::SGuard>(c->right->node));
  }

  SUBCASE("nullary-looking call means star argument") {
    CompPtr p = pc("do y <- pred(); ret y");
    auto* d = std::get_if<Comp::Do>(&p->node);
    REQUIRE(d);
    auto* call = std::get_if<Comp::SCall>(&d->bound->node);
    REQUIRE(call);
    CHECK(std::holds_alternative<Value::Star>(call->arg->node));
  }

  SUBCASE("parenthesized value-led computations") {
    CHECK(std::holds_alternative<Comp::SGuard>(pc("(put(1) & ret *)")->node));
    CHECK(std::holds_alternative<Comp::App>(pc("f 3")->node));
    CHECK(std::holds_alternative<Comp::Ann>(pc("(raise_e * : 0)")->node));
  }

  SUBCASE("handleit payload type is optional") {
    CompPtr p = pc("handleit e = * in raise_e *");
    auto* h = std::get_if<Comp::HandleIt>(&p->node);
    REQUIRE(h);
    CHECK(h->payloadType == nullptr);
    CompPtr q = pc("handleit e : N = 3 in ret e");
    auto* h2 = std::get_if<Comp::HandleIt>(&q->node);
    REQUIRE(h2);
    CHECK(type_equal(h2->payloadType, t_nat()));
  }

  SUBCASE("application binds one argument at a time") {
    CompPtr p = pc("f (x, y)");
    auto* a = std::get_if<Comp::App>(&p->node);
    REQUIRE(a);
    CHECK(std::holds_alternative<Value::Var>(a->fn->node));
    CHECK(std::holds_alternative<Value::Pair>(a->arg->node));
  }

  CHECK_THROWS_AS(pc("x"), SyntaxError);        // bare value
  CHECK_THROWS_AS(pc("ret x & ret *"), SyntaxError);
  CHECK_THROWS_AS(pc("do x <- ret 1"), SyntaxError); // chain needs a tail
}

TEST_CASE("programs parse with declarations") {
  Program prog = parse_program(R"(
    # trace a few numbers, then stop
    value eq42 : N -> 1+1
    effect print : Str -> 0 [1]
    exceptions stop : 1 ^ u
    do x <- pred(7); ret *
  )");
  CHECK(value_sig(prog, "eq42"));
  CHECK(effect_sig(prog, "print"));
  CHECK(value_sig(prog, "zero")->builtin);
  REQUIRE(prog.mainExc.size() == 1);
  CHECK(prog.mainExc[0].name == "stop");
  CHECK(prog.mainExc[0].tag == ExcTag::Unguarded);

  CHECK_THROWS_AS(parse_program("value put : N -> N ret *"), SyntaxError);
  CHECK_THROWS_AS(parse_program("value f : N -> N value f : N -> N ret *"), SyntaxError);
  CHECK_THROWS_AS(parse_program("exceptions e:1^u, e:1^g ret *"), SyntaxError);
  CHECK_THROWS_AS(parse_program("exceptions e:1^x ret *"), SyntaxError);
}

TEST_CASE("pretty output reparses to an alpha-equal tree") {
  const char* samples[] = {
      "ret *",
      "ret (inl (1, 2) : N*N+1)",
      "do x <- ret 1; y <- ret x; ret (x, y)",
      "handleit e : N = 3 in do z <- pred(e); case z of inl u => ret * | inr m => "
      "(put(m) & raise_e m)",
      "handle r : 1 in (put(0) & raise_r *) with ret 7",
      "pcase (1, 2) of (a, b) => ret b",
      "gcase put(3) of inl x => init x | inr y => ret y",
      "if x then ret 1 else (if y then ret 2 else ret 3)",
      "try v <= pred(0) in ret * unless e : 1 => ret *",
      "do f <- ret (fun (x : N) [e:1^u] => (raise_e * : N)); f 4",
      "put(1) & (put(2) & ret *)",
      "put(1) & put(2) & ret *", // & chains to the right
      "do x <- (put(0) & pred(1)); ret x",
      "(init x : N)",
      "handleit e = * in raise_e *",
  };
  static Program ctx = sigsOnly();
  for (const char* src : samples) {
    CAPTURE(src);
    CompPtr once = parse_comp(src, ctx);
    CompPtr twice = parse_comp(pretty(once), ctx);
    CHECK(alpha_equal(once, twice));
    CHECK(pretty(once) == pretty(twice)); // printing is a fixpoint
  }
}

TEST_CASE("desugar eliminates every sugar form") {
  static Program ctx = sigsOnly();

  SUBCASE("if becomes case with dummy binders") {
    CompPtr p = desugar(pc("if b then ret 1 else ret 2"), ctx);
    auto* c = std::get_if<Comp::Case>(&p->node);
    REQUIRE(c);
    CHECK(c->leftVar == "_");
    CHECK(alpha_equal(p, pc("case b of inl _ => ret 1 | inr _ => ret 2")));
  }

  SUBCASE("guard routes the event to the continuation") {
    CompPtr p = desugar(pc("put(5) & ret *"), ctx);
    CHECK(alpha_equal(p, pc("gcase put(5) of inl x => init x | inr _ => ret *")));
  }

  SUBCASE("bare call with a dead guarded summand returns the plain result") {
    CompPtr p = desugar(pc("pred(4)"), ctx);
    CHECK(alpha_equal(p, pc("gcase pred(4) of inl x => ret x | inr y => init y")));
  }

  SUBCASE("bare call with a dead unguarded summand returns the guarded result") {
    CompPtr p = desugar(pc("put(4)"), ctx);
    CHECK(alpha_equal(p, pc("gcase put(4) of inl x => init x | inr y => ret y")));
  }

  SUBCASE("bare call in general position exposes both summands") {
    Program prog = parse_program("effect toss : 1 -> N [N] toss(*)");
    CompPtr p = desugar(prog).main;
    CHECK(alpha_equal(
        p, parse_comp("gcase toss(*) of inl x => ret inl x | inr y => ret inr y", prog)));
  }

  SUBCASE("try expands to the handle-and-split composite") {
    CompPtr p = desugar(pc("try x <= pred(0) in ret x unless e : 1 => ret 9"), ctx);
    CompPtr expect = pc(
        "do z <- (handle e : 1 in (do x <- pred(0); ret inl x) with (do y <- ret 9; ret inr y));"
        " case z of inl x => ret x | inr y => ret y");
    CHECK(alpha_equal(p, desugar(expect, ctx)));
    CHECK(is_core(p));
  }

  SUBCASE("idempotent on core output") {
    for (const char* src :
         {"try x <= pred(0) in ret x unless e : 1 => ret 9",
          "if b then (put(1) & ret *) else pred(2)",
          "handleit e : N = 3 in do z <- pred(e); case z of inl u => ret * | inr m => "
          "(put(m) & raise_e m)"}) {
      CAPTURE(src);
      CompPtr once = desugar(pc(src), ctx);
      CHECK(is_core(once));
      CHECK(alpha_equal(once, desugar(once, ctx)));
    }
  }

  SUBCASE("misused operations are rejected") {
    CHECK_THROWS_AS(desugar(pc("pred(0) & ret *"), ctx), TypeError); // pred is not A -> 0 [1]
    CHECK_THROWS_AS(desugar(pc("gcase mystery(0) of inl x => ret x | inr y => ret y"), ctx),
                    TypeError);
    // unknown names never parse as operation calls in the first place
    CHECK_THROWS_AS(pc("mystery(0) & ret *"), SyntaxError);
    try {
      desugar(c_call("mystery", v_star()), ctx);
      CHECK(false);
    } catch (const TypeError& e) {
      CHECK(e.code == ErrorCode::SignatureMismatch);
    }
    try {
      desugar(c_guard("zero", v_star(), c_ret(v_star())), ctx);
      CHECK(false);
    } catch (const TypeError& e) {
      CHECK(e.code == ErrorCode::SignatureMismatch);
    }
  }
}

TEST_CASE("substitution") {
  static Program ctx = sigsOnly();

  SUBCASE("replaces free occurrences only") {
    CompPtr p = pc("do x <- ret y; ret (x, y)");
    CompPtr q = substitute(p, "y", v_nat(5));
    CHECK(alpha_equal(q, pc("do x <- ret 5; ret (x, 5)")));
  }

  SUBCASE("binders shadow") {
    CompPtr p = pc("do y <- ret 1; ret y");
    CHECK(alpha_equal(substitute(p, "y", v_nat(9)), p));
  }

  SUBCASE("capture is avoided by freshening") {
    ValuePtr lam = pv("fun (x : N) [] => ret y");
    ValuePtr sub = substitute(lam, "y", v_var("x"));
    auto* l = std::get_if<Value::Lambda>(&sub->node);
    REQUIRE(l);
    CHECK(l->param != "x"); // freshened so the image's x stays free
    auto* body = std::get_if<Comp::Ret>(&l->body->node);
    REQUIRE(body);
    CHECK(alpha_equal(body->val, v_var("x")));
    CHECK(free_vars(sub) == std::set<std::string>{"x"});
  }

  SUBCASE("handleit freshening renames the loop exception with the variable") {
    CompPtr p = pc("handleit e : N = w in (put(e) & raise_e e)");
    CompPtr q = substitute(p, "w", v_var("e"));
    auto* h = std::get_if<Comp::HandleIt>(&q->node);
    REQUIRE(h);
    CHECK(h->exc != "e");
    CHECK(alpha_equal(h->seed, v_var("e")));
    CHECK(free_exc_names(q).empty());
    CHECK(alpha_equal(q, pc("handleit d : N = e in (put(d) & raise_d d)")));
  }

  SUBCASE("simultaneous equals sequential for closed images") {
    CompPtr p = pc("do a <- ret (x, y); pcase a of (u, v) => ret (v, x)");
    Subst both;
    both.emplace("x", v_nat(1));
    both.emplace("y", v_nat(2));
    CHECK(alpha_equal(substitute(p, both),
                      substitute(substitute(p, "x", v_nat(1)), "y", v_nat(2))));
  }

  SUBCASE("free variable sets") {
    CHECK(free_vars(pc("do x <- ret y; ret (x, z)")) == std::set<std::string>{"y", "z"});
    CHECK(free_vars(pv("fun (x : N) [] => ret (x, y)")) == std::set<std::string>{"y"});
    CHECK(free_exc_names(pc("handle e : 1 in raise_e * with raise_d e")) ==
          std::set<std::string>{"d"});
  }
}

TEST_CASE("alpha equivalence is a congruence up to renaming") {
  static Program ctx = sigsOnly();
  CHECK(alpha_equal(pc("do x <- ret 1; ret x"), pc("do y <- ret 1; ret y")));
  CHECK(!alpha_equal(pc("do x <- ret 1; ret x"), pc("do x <- ret 1; ret 1")));
  CHECK(alpha_equal(pc("handleit e : N = 0 in raise_e e"),
                    pc("handleit f : N = 0 in raise_f f")));
  CHECK(!alpha_equal(pc("raise_e *"), pc("raise_f *"))); // free exceptions are not renamed
  CHECK(alpha_equal(pv("(inl * : 1+1)"), pv("(inl * : 1+1)")));
  CHECK(!alpha_equal(pv("(inl * : 1+1)"), pv("(inl * : 1+N)")));
}
