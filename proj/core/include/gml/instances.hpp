#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gml/faults.hpp"
#include "gml/powerset.hpp"
#include "gml/rational.hpp"
#include "gml/rng.hpp"

// Concrete carriers for the law harness. Each instance packages a monad on
// finite carriers 0..n-1: unit, Kleisli extension, renaming of results,
// a guardedness test against a summand mask, iteration of tables over Y+X,
// plus sampling (and, where feasible, exhaustive enumeration) of rows.
//
// Mask convention: a row is sigma-guarded when the masked summand cannot
// trap it. For traces that means a finite result inside the mask comes
// after at least one output; for non-empty powersets, that some element
// escapes the mask; the full powerset is guarded everywhere.

namespace gml {

struct PowInstance {
  using Elem = PowSet;
  static constexpr bool kEnumerable = true;

  std::string name() const { return "powerset"; }

  Elem unit(int x) const { return p_unit(x); }

  Elem star(const std::function<Elem(int)>& f, const Elem& t) const { return p_star(f, t); }

  Elem mapElem(const Elem& t, const std::function<int(int)>& h) const {
    Elem out;
    for (int e : t) out.insert(h(e));
    return out;
  }

  bool guardedElem(const Elem&, const std::vector<bool>&) const { return true; }

  std::vector<Elem> iterate(const std::vector<Elem>& f, int ny) const { return p_iterate(f, ny); }

  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  std::string show(const Elem& t, int splitAt) const { return format_pow_elem(t, splitAt); }

  Elem sample(Rng& rng, int n, const std::vector<bool>&) const {
    Elem out;
    for (int e = 0; e < n; ++e)
      if (rng.flip()) out.insert(e);
    return out;
  }

  std::vector<Elem> enumerate(int n, const std::vector<bool>& mask) const {
    std::vector<Elem> all;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      Elem s;
      for (int e = 0; e < n; ++e)
        if (bits >> e & 1) s.insert(e);
      if (guardedElem(s, mask)) all.push_back(std::move(s));
    }
    return all;
  }
};

// Non-empty powerset: rows must be non-empty, and iteration additionally
// demands that every row can escape into the result summand.
struct PPlusInstance {
  using Elem = PowSet;
  static constexpr bool kEnumerable = true;

  std::string name() const { return "powerset-nonempty"; }

  Elem unit(int x) const { return p_unit(x); }

  Elem star(const std::function<Elem(int)>& f, const Elem& t) const { return p_star(f, t); }

  Elem mapElem(const Elem& t, const std::function<int(int)>& h) const {
    Elem out;
    for (int e : t) out.insert(h(e));
    return out;
  }

  bool guardedElem(const Elem& t, const std::vector<bool>& mask) const {
    if (t.empty()) return false;
    for (int e : t)
      if (!mask[static_cast<size_t>(e)]) return true;
    return false;
  }

  std::vector<Elem> iterate(const std::vector<Elem>& f, int ny) const {
    return pplus_iterate(f, ny);
  }

  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  std::string show(const Elem& t, int splitAt) const { return format_pow_elem(t, splitAt); }

  Elem sample(Rng& rng, int n, const std::vector<bool>& mask) const {
    std::vector<int> escapes;
    for (int e = 0; e < n; ++e)
      if (!mask[static_cast<size_t>(e)]) escapes.push_back(e);
    if (escapes.empty())
      throw std::logic_error("PPlusInstance::sample: mask leaves no escape element");
    Elem out{escapes[static_cast<size_t>(rng.below(static_cast<int>(escapes.size())))]};
    for (int e = 0; e < n; ++e)
      if (rng.flip()) out.insert(e);
    return out;
  }

  std::vector<Elem> enumerate(int n, const std::vector<bool>& mask) const {
    std::vector<Elem> all;
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
      Elem s;
      for (int e = 0; e < n; ++e)
        if (bits >> e & 1) s.insert(e);
      if (guardedElem(s, mask)) all.push_back(std::move(s));
    }
    return all;
  }
};

// Traces with results: finite runs of outputs ending in a value, or
// eventually periodic infinite runs. Equality is decided on canonical
// forms and cross-checked against bounded expansion.
struct TraceInstance {
  using Elem = Rational<int>;
  static constexpr bool kEnumerable = false;

  int crossCheckFuel = 64;

  std::string name() const { return "trace"; }

  Elem unit(int x) const { return Elem::ret(x); }

  Elem star(const std::function<Elem(int)>& f, const Elem& t) const {
    return r_star<int, int>([&f](const int& v) { return f(v); }, t);
  }

  Elem mapElem(const Elem& t, const std::function<int(int)>& h) const { return t.map(h); }

  bool guardedElem(const Elem& t, const std::vector<bool>& mask) const {
    if (!t.finite()) return true;
    if (!mask[static_cast<size_t>(*t.result)]) return true;
    return !t.prefix.empty();
  }

  std::vector<Elem> iterate(const std::vector<Elem>& f, int ny) const {
    std::vector<Elem> out;
    out.reserve(f.size());
    for (size_t x = 0; x < f.size(); ++x) out.push_back(iterateRow(f, ny, static_cast<int>(x)));
    return out;
  }

  bool equal(const Elem& a, const Elem& b) const {
    bool canon = (a == b);
    auto ea = a.expand(static_cast<size_t>(crossCheckFuel));
    auto eb = b.expand(static_cast<size_t>(crossCheckFuel));
    if (canon && (ea.first != eb.first || ea.second != eb.second))
      throw std::logic_error("trace equality: canonical forms agree but expansions differ");
    return canon;
  }

  std::string show(const Elem& t, int splitAt) const {
    std::ostringstream os;
    os << "(<";
    for (size_t i = 0; i < t.prefix.size(); ++i) {
      if (i) os << ',';
      os << t.prefix[i];
    }
    if (t.finite()) {
      os << ">, ";
      int v = *t.result;
      if (splitAt < 0) {
        os << v;
      } else if (v < splitAt) {
        os << "inl " << v;
      } else {
        os << "inr " << (v - splitAt);
      }
      os << ')';
    } else {
      os << " | ";
      for (size_t i = 0; i < t.cycle.size(); ++i) {
        if (i) os << ',';
        os << t.cycle[i];
      }
      os << ">^w)";
    }
    return os.str();
  }

  Elem sample(Rng& rng, int n, const std::vector<bool>& mask) const {
    std::vector<std::uint64_t> prefix;
    int plen = rng.below(4);
    for (int i = 0; i < plen; ++i) prefix.push_back(static_cast<std::uint64_t>(rng.below(8)));
    bool infinite = (n == 0) || rng.below(4) == 0;
    if (infinite) {
      std::vector<std::uint64_t> cycle;
      int clen = 1 + rng.below(3);
      for (int i = 0; i < clen; ++i) cycle.push_back(static_cast<std::uint64_t>(rng.below(8)));
      return Elem::loop(std::move(prefix), std::move(cycle));
    }
    int v = rng.below(n);
    if (mask[static_cast<size_t>(v)] && prefix.empty())
      prefix.push_back(static_cast<std::uint64_t>(rng.below(8)));
    return Elem::trace(std::move(prefix), v);
  }

private:
  // Unfold one table row to its exact eventually-periodic trace. The state
  // space is finite, so an infinite run revisits some state; the outputs
  // between the two visits form the cycle. A revisit with no output in
  // between is an unguarded loop.
  Elem iterateRow(const std::vector<Elem>& f, int ny, int x0) const {
    std::vector<std::uint64_t> events;
    std::map<int, size_t> firstSeen;
    int x = x0;
    for (;;) {
      auto it = firstSeen.find(x);
      if (it != firstSeen.end()) {
        size_t at = it->second;
        if (at == events.size())
          throw NotGuardedError("trace iterate: loop state revisited without output");
        std::vector<std::uint64_t> pre(events.begin(), events.begin() + static_cast<long>(at));
        std::vector<std::uint64_t> cyc(events.begin() + static_cast<long>(at), events.end());
        return Elem::loop(std::move(pre), std::move(cyc));
      }
      firstSeen.emplace(x, events.size());
      const Elem& row = f[static_cast<size_t>(x)];
      events.insert(events.end(), row.prefix.begin(), row.prefix.end());
      if (!row.finite()) return Elem::loop(std::move(events), row.cycle);
      int e = *row.result;
      if (e < ny) return Elem::trace(std::move(events), e);
      x = e - ny;
    }
  }
};

} // namespace gml
