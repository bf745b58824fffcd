#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <set>
#include <vector>

#include "gml/coshape.hpp"
#include "gml/faults.hpp"
#include "gml/instances.hpp"
#include "gml/laws.hpp"
#include "gml/powerset.hpp"
#include "gml/rational.hpp"
#include "gml/rng.hpp"
#include "gml/stream.hpp"

using namespace gml;

namespace {

using RatInt = Rational<int>;
using Ev = std::vector<std::uint64_t>;

std::vector<std::uint64_t> drain(Stream<int>& s, int maxPulls, std::optional<int>* done) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < maxPulls; ++i) {
    auto step = s.next();
    if (auto* o = std::get_if<Stream<int>::Out>(&step)) {
      out.push_back(o->value);
    } else if (auto* d = std::get_if<Stream<int>::Done>(&step)) {
      if (done) *done = d->value;
      return out;
    }
  }
  return out;
}

} // namespace

TEST_CASE("streams pull one step at a time") {
  SUBCASE("outputs then result, and the result repeats") {
    auto s = Stream<int>::outputs({2, 1, 0}, 5);
    std::optional<int> done;
    CHECK(drain(s, 10, &done) == Ev{2, 1, 0});
    REQUIRE(done.has_value());
    CHECK(*done == 5);
    auto again = s.next();
    REQUIRE(std::holds_alternative<Stream<int>::Done>(again));
    CHECK(std::get<Stream<int>::Done>(again).value == 5);
  }
  SUBCASE("looping repeats its cycle") {
    auto s = Stream<int>::looping({7}, {1, 2});
    std::optional<int> done;
    CHECK(drain(s, 6, &done) == Ev{7, 1, 2, 1, 2, 1});
    CHECK_FALSE(done.has_value());
  }
  SUBCASE("sequencing relays outputs before the continuation") {
    auto s = Stream<int>::outputs({1}, 3).andThen<int>([](int v) {
      return Stream<int>::outputs({static_cast<std::uint64_t>(v + 10)}, v * 2);
    });
    std::optional<int> done;
    CHECK(drain(s, 10, &done) == Ev{1, 13});
    REQUIRE(done.has_value());
    CHECK(*done == 6);
  }
  SUBCASE("tick budgets bound silent work") {
    int silent = 0;
    Stream<int> s([&silent]() -> Stream<int>::Step {
      if (silent < 5) {
        ++silent;
        return Stream<int>::Tick{};
      }
      return Stream<int>::Done{9};
    });
    CHECK_FALSE(s.nextEvent(2).has_value());
    auto step = s.nextEvent(10);
    REQUIRE(step.has_value());
    CHECK(std::get<Stream<int>::Done>(*step).value == 9);
  }
}

TEST_CASE("eventually periodic traces have decidable equality") {
  SUBCASE("canonical forms reduce the cycle and absorb the prefix tail") {
    auto a = RatInt::loop({1, 2}, {3, 2, 3, 2});
    auto c = a.canonical();
    CHECK(c.prefix == Ev{1});
    CHECK(c.cycle == Ev{2, 3});
    CHECK(a == RatInt::loop({1, 2, 3}, {2, 3}));
    CHECK(a != RatInt::loop({1, 2}, {3, 3}));
  }
  SUBCASE("finite traces compare directly") {
    CHECK(RatInt::trace({1, 2}, 3) == RatInt::trace({1, 2}, 3));
    CHECK(RatInt::trace({1, 2}, 3) != RatInt::trace({1, 2}, 4));
    CHECK(RatInt::trace({1}, 3) != RatInt::loop({1}, {3}));
  }
  SUBCASE("equality agrees with bounded expansion on random pairs") {
    Rng rng(20260819);
    for (int s = 0; s < 2000; ++s) {
      auto make = [&rng]() {
        Ev prefix;
        int plen = rng.below(4);
        for (int i = 0; i < plen; ++i) prefix.push_back(static_cast<std::uint64_t>(rng.below(3)));
        if (rng.flip()) {
          Ev cycle;
          int clen = 1 + rng.below(3);
          for (int i = 0; i < clen; ++i) cycle.push_back(static_cast<std::uint64_t>(rng.below(3)));
          return RatInt::loop(std::move(prefix), std::move(cycle));
        }
        return RatInt::trace(std::move(prefix), rng.below(3));
      };
      RatInt a = make(), b = make();
      auto ea = a.expand(64), eb = b.expand(64);
      bool expandEq = ea.first == eb.first && ea.second == eb.second;
      // 64 steps is past every repeat at these sizes, so the verdicts agree.
      CHECK((a == b) == expandEq);
    }
  }
  SUBCASE("extension appends onto finite traces and skips infinite ones") {
    std::function<RatInt(const int&)> f = [](const int& x) {
      return RatInt::trace({7}, x + 1);
    };
    CHECK(r_star(f, RatInt::trace({1, 2}, 3)) == RatInt::trace({1, 2, 7}, 4));
    CHECK(r_star(f, RatInt::loop({1}, {2})) == RatInt::loop({1}, {2}));
  }
  SUBCASE("streaming a rational replays it") {
    auto s = RatInt::trace({4, 5}, 6).stream();
    std::optional<int> done;
    CHECK(drain(s, 10, &done) == Ev{4, 5});
    CHECK(done == 6);
    auto inf = RatInt::loop({}, {9}).stream();
    CHECK(drain(inf, 3, nullptr) == Ev{9, 9, 9});
  }
}

TEST_CASE("coproduct shapes expand summand paths to index masks") {
  auto shape = co_branch(co_branch(co_leaf(2), co_leaf(3)), co_leaf(3));
  CHECK(co_width(shape) == 8);
  auto mask = summand_mask(shape, {{1, 2}, {2}});
  std::vector<bool> expect{false, false, true, true, true, true, true, true};
  CHECK(mask == expect);
  CHECK(summand_mask(shape, {}) == std::vector<bool>(8, false));
  CHECK(summand_mask(shape, {{1, 1}}) ==
        std::vector<bool>{true, true, false, false, false, false, false, false});
  CHECK_THROWS_AS(summand_mask(shape, {{2, 1}}), std::invalid_argument);
}

TEST_CASE("powerset iteration is reachability") {
  SUBCASE("a pure self-loop iterates to the empty set") {
    // one loop state, one result state; the row only re-enters
    PowTable f{{1}};
    CHECK(p_iterate(f, 1) == PowTable{{}});
  }
  SUBCASE("a branch that can exit keeps exactly the exits") {
    PowTable f{{0, 1}};
    CHECK(p_iterate(f, 1) == PowTable{{0}});
  }
  SUBCASE("chains pass results back") {
    // a -> b, b -> y; carrier Y = {y}, X = {a, b}
    PowTable f{{2}, {0}};
    CHECK(p_iterate(f, 1) == PowTable{{0}, {0}});
  }
  SUBCASE("iteration agrees with path reachability on all small tables") {
    for (int ny = 0; ny <= 2; ++ny) {
      for (int nx = 1; nx <= 2; ++nx) {
        const int width = ny + nx;
        const std::uint64_t rowChoices = std::uint64_t{1} << width;
        std::uint64_t total = 1;
        for (int r = 0; r < nx; ++r) total *= rowChoices;
        for (std::uint64_t code = 0; code < total; ++code) {
          PowTable f(static_cast<size_t>(nx));
          std::uint64_t c = code;
          for (int r = 0; r < nx; ++r) {
            for (int e = 0; e < width; ++e)
              if (c >> e & 1) f[static_cast<size_t>(r)].insert(e);
            c >>= width;
          }
          CHECK(p_iterate(f, ny) == p_reach(f, ny));
        }
      }
    }
  }
  SUBCASE("tables print with summand tags") {
    PowTable f{{0, 1}, {}};
    CHECK(format_pow_table(f, 1) == "0 -> {inl 0, inr 0}\n1 -> {}");
    CHECK(format_pow_elem(f[0], -1) == "{0, 1}");
  }
}

TEST_CASE("non-empty powerset iteration needs every row to reach a result") {
  SUBCASE("the pure re-injection is rejected") {
    // unit . inr over 1 -> (1+1): the single row only re-enters the loop
    PowTable f{{1}};
    CHECK_FALSE(pplus_guarded(f, 1));
    CHECK_THROWS_AS(pplus_iterate(f, 1), NotGuardedError);
  }
  SUBCASE("empty rows are not non-empty-powerset tables") {
    PowTable f{{}};
    CHECK_THROWS_AS(pplus_iterate(f, 1), NotGuardedError);
  }
  SUBCASE("guarded tables never iterate to an empty row") {
    // brute force over all non-empty-row tables on small carriers
    for (int ny = 1; ny <= 2; ++ny) {
      for (int nx = 1; nx <= 2; ++nx) {
        const int width = ny + nx;
        const std::uint64_t rowChoices = std::uint64_t{1} << width;
        std::uint64_t total = 1;
        for (int r = 0; r < nx; ++r) total *= rowChoices;
        for (std::uint64_t code = 0; code < total; ++code) {
          PowTable f(static_cast<size_t>(nx));
          std::uint64_t c = code;
          bool nonEmpty = true;
          for (int r = 0; r < nx; ++r) {
            for (int e = 0; e < width; ++e)
              if (c >> e & 1) f[static_cast<size_t>(r)].insert(e);
            nonEmpty = nonEmpty && !f[static_cast<size_t>(r)].empty();
            c >>= width;
          }
          if (!nonEmpty || !pplus_guarded(f, ny)) continue;
          PowTable result = pplus_iterate(f, ny);
          for (const PowSet& row : result) CHECK_FALSE(row.empty());
        }
      }
    }
  }
}

TEST_CASE("trace iteration unfolds tables to exact rationals") {
  TraceInstance tr;
  SUBCASE("a self-loop with output is the loop of its output") {
    std::vector<RatInt> f{RatInt::trace({0}, 1)}; // state 0 emits 0 and re-enters
    auto it = tr.iterate(f, 1);
    CHECK(it[0] == RatInt::loop({}, {0}));
  }
  SUBCASE("two states alternate") {
    std::vector<RatInt> f{RatInt::trace({7}, 2), RatInt::trace({8}, 1)};
    auto it = tr.iterate(f, 1);
    CHECK(it[0] == RatInt::loop({}, {7, 8}));
    CHECK(it[1] == RatInt::loop({}, {8, 7}));
  }
  SUBCASE("a countdown terminates with its emissions") {
    // states x = 0..2 over one result; x > 0 emits x and steps down
    std::vector<RatInt> f{RatInt::ret(0), RatInt::trace({1}, 1), RatInt::trace({2}, 2)};
    auto it = tr.iterate(f, 1);
    CHECK(it[2] == RatInt::trace({2, 1}, 0));
  }
  SUBCASE("an unguarded re-entry faults") {
    std::vector<RatInt> f{RatInt::trace({}, 1)};
    CHECK_THROWS_AS(tr.iterate(f, 1), NotGuardedError);
    std::vector<RatInt> two{RatInt::trace({}, 2), RatInt::trace({}, 1)};
    CHECK_THROWS_AS(tr.iterate(two, 1), NotGuardedError);
  }
  SUBCASE("an infinite row ends the unfolding") {
    std::vector<RatInt> f{RatInt::trace({1}, 2), RatInt::loop({9}, {5})};
    auto it = tr.iterate(f, 1);
    CHECK(it[0] == RatInt::loop({1, 9}, {5}));
  }
}

TEST_CASE("context distribution and threading match their defining clauses") {
  PowInstance pw;
  TraceInstance tr;
  SUBCASE("distribution pairs the context onto both summands") {
    // w = 1 over {inl 0, inr 0} with one result and one loop state
    PowSet t{0, 1};
    auto d = t_delta(pw, 1, t, 1, 1, 2);
    CHECK(d == PowSet{1, 3}); // inl (1,0) and inr (1,0)
  }
  SUBCASE("distribution on traces relabels the result and keeps outputs") {
    auto t = RatInt::trace({1}, 0); // (inl y, <1>)
    auto d = t_delta(tr, 7, t, 1, 1, 8);
    CHECK(d == RatInt::trace({1}, 7)); // (inl (7,y), <1>)
    auto pi = RatInt::loop({}, {3});
    CHECK(t_delta(tr, 7, pi, 1, 1, 8) == pi);
  }
  SUBCASE("threading keeps the context through re-entries") {
    // f(w, x) = x > 0 ? emit w, step to x-1 : return w; W and Y both 0..5
    const int nw = 6, nx = 4, ny = 6;
    std::vector<RatInt> f;
    for (int w = 0; w < nw; ++w)
      for (int x = 0; x < nx; ++x)
        f.push_back(x > 0 ? RatInt::trace({static_cast<std::uint64_t>(w)}, ny + (x - 1))
                          : RatInt::ret(w));
    auto strong = iterate_strong(tr, f, nw, nx, ny);
    CHECK(strong[5 * nx + 3] == RatInt::trace({5, 5, 5}, 5));
    CHECK(strong[2 * nx + 0] == RatInt::ret(2));
  }
}
