#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "gml/stream.hpp"

// Eventually periodic traces: a finite run of outputs ending in a result, or
// a finite prefix followed by a repeating non-empty cycle. These are the
// decidable-equality carrier for trace law checking: two rationals denote
// the same stream iff their canonical forms are identical.

namespace gml {

template <typename V>
struct Rational {
  std::vector<std::uint64_t> prefix;
  std::optional<V> result;           // set iff the trace is finite
  std::vector<std::uint64_t> cycle;  // non-empty iff the trace is infinite

  bool finite() const { return result.has_value(); }

  static Rational ret(V v) { return Rational{{}, std::move(v), {}}; }

  static Rational trace(std::vector<std::uint64_t> events, V v) {
    return Rational{std::move(events), std::move(v), {}};
  }

  static Rational loop(std::vector<std::uint64_t> pre, std::vector<std::uint64_t> cyc) {
    return Rational{std::move(pre), std::nullopt, std::move(cyc)};
  }

  // Canonical form: the cycle is primitive (no shorter period) and the
  // prefix is shortest (its tail never duplicates the cycle's last element).
  void canonicalize() {
    if (finite()) return;
    // primitive period
    for (std::size_t d = 1; d <= cycle.size(); ++d) {
      if (cycle.size() % d != 0) continue;
      bool periodic = true;
      for (std::size_t i = d; i < cycle.size() && periodic; ++i)
        periodic = cycle[i] == cycle[i - d];
      if (periodic) {
        cycle.resize(d);
        break;
      }
    }
    // fold the prefix tail into the cycle: p·a (c·a)^ω = p (a·c)^ω
    while (!prefix.empty() && prefix.back() == cycle.back()) {
      prefix.pop_back();
      cycle.insert(cycle.begin(), cycle.back());
      cycle.pop_back();
    }
  }

  Rational canonical() const {
    Rational r = *this;
    r.canonicalize();
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    Rational x = a.canonical(), y = b.canonical();
    return x.prefix == y.prefix && x.result == y.result && x.cycle == y.cycle;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  // First `fuel` outputs; second component set iff the result was reached.
  std::pair<std::vector<std::uint64_t>, std::optional<V>> expand(std::size_t fuel) const {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < prefix.size() && out.size() < fuel; ++i)
      out.push_back(prefix[i]);
    if (finite()) {
      if (prefix.size() <= fuel) return {out, result};
      return {out, std::nullopt};
    }
    while (out.size() < fuel) out.push_back(cycle[(out.size() - prefix.size()) % cycle.size()]);
    return {out, std::nullopt};
  }

  Stream<V> stream() const {
    if (finite()) return Stream<V>::outputs(prefix, *result);
    return Stream<V>::looping(prefix, cycle);
  }

  template <typename F>
  auto map(F f) const -> Rational<decltype(f(*result))> {
    using W = decltype(f(*result));
    if (finite()) return Rational<W>{prefix, f(*result), {}};
    return Rational<W>{prefix, std::nullopt, cycle};
  }
};

// Kleisli extension: f*(t) appends f(result)'s trace; infinite t unchanged.
template <typename V, typename W>
Rational<W> r_star(const std::function<Rational<W>(const V&)>& f, const Rational<V>& t) {
  if (!t.finite()) return Rational<W>{t.prefix, std::nullopt, t.cycle};
  Rational<W> k = f(*t.result);
  std::vector<std::uint64_t> events = t.prefix;
  events.insert(events.end(), k.prefix.begin(), k.prefix.end());
  if (k.finite()) return Rational<W>{std::move(events), k.result, {}};
  return Rational<W>{std::move(events), std::nullopt, k.cycle};
}

} // namespace gml
