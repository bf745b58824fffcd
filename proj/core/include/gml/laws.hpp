#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gml/coshape.hpp"
#include "gml/rng.hpp"

// Equational law checker for guarded iteration instances. Each law samples
// (and, for enumerable instances, exhaustively enumerates at small carriers)
// tables satisfying the law's guardedness premises by construction, computes
// both sides, and compares with the instance's decidable equality. Failures
// carry printable tables so a broken instance is diagnosable from the report.

namespace gml {

struct LawConfig {
  int samples = 500;        // random tables per law
  std::uint64_t seed = 1;   // base seed; each law derives its own stream
  int fuel = 64;            // trace expansion budget for the equality cross-check
  int maxCarrier = 3;       // sampled carrier sizes range over 1..maxCarrier
  int exhaustiveUpTo = 0;   // enumerable instances: all tables with carriers 1..this
};

struct LawFailure {
  std::string f;   // the sampled data, printed as tables
  std::string lhs;
  std::string rhs;
};

struct LawResult {
  std::string law;
  long long samples = 0; // tuples checked, exhaustive plus random
  std::vector<LawFailure> failures;
  bool ok() const { return failures.empty(); }
};

using LawReport = std::vector<LawResult>;

bool law_report_ok(const LawReport& report);
std::string law_report_text(const LawReport& report);

// Pairing with a fixed context value: results e over a carrier of size m
// become pair indices (w, e) laid out as w*m + e.
template <typename I>
typename I::Elem t_tau(const I& inst, int w, const typename I::Elem& t, int m) {
  return inst.mapElem(t, [w, m](int e) { return w * m + e; });
}

// Context distribution over a sum: T(Y+Z) becomes T(W*Y + W*Z) with the
// context value w attached on both sides. Infinite traces are untouched.
template <typename I>
typename I::Elem t_delta(const I& inst, int w, const typename I::Elem& t, int ny, int nz,
                         int nw) {
  return inst.mapElem(t, [w, ny, nz, nw](int e) {
    return e < ny ? w * ny + e : nw * ny + w * nz + (e - ny);
  });
}

// Context-threading iteration: rows are indexed by pairs (w, x) as w*nx + x
// over codomain Y+X; the context rides along unchanged through re-entries.
template <typename I>
std::vector<typename I::Elem> iterate_strong(const I& inst,
                                             const std::vector<typename I::Elem>& f, int nw,
                                             int nx, int ny) {
  std::vector<typename I::Elem> rethreaded;
  rethreaded.reserve(f.size());
  for (int w = 0; w < nw; ++w)
    for (int x = 0; x < nx; ++x)
      rethreaded.push_back(inst.mapElem(f[static_cast<size_t>(w * nx + x)], [=](int e) {
        return e < ny ? e : ny + (w * nx + (e - ny));
      }));
  return inst.iterate(rethreaded, ny);
}

namespace lawdetail {

template <typename I>
using Table = std::vector<typename I::Elem>;

inline std::uint64_t lawSeed(std::uint64_t base, const char* law) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char* p = law; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 1099511628211ull;
  }
  return h ^ (base * 0x9e3779b97f4a7c15ull + 0x165667b19e3779f9ull);
}

inline std::vector<bool> rangeMask(int total, int lo, int hi) {
  std::vector<bool> m(static_cast<size_t>(total), false);
  for (int i = lo; i < hi; ++i) m[static_cast<size_t>(i)] = true;
  return m;
}

inline std::vector<bool> noMask(int total) {
  return std::vector<bool>(static_cast<size_t>(total), false);
}

template <typename I>
Table<I> sampleTable(const I& inst, Rng& rng, int rows, int n, const std::vector<bool>& mask) {
  Table<I> t;
  t.reserve(static_cast<size_t>(rows));
  for (int i = 0; i < rows; ++i) t.push_back(inst.sample(rng, n, mask));
  return t;
}

// All tables with `rows` rows drawn from the guarded elements over carrier n.
// No-op for instances without enumeration support.
template <typename I, typename Fn>
void forEachTable(const I& inst, int rows, int n, const std::vector<bool>& mask, const Fn& fn) {
  if constexpr (I::kEnumerable) {
    std::vector<typename I::Elem> elems = inst.enumerate(n, mask);
    if (elems.empty() && rows > 0) return;
    std::vector<size_t> idx(static_cast<size_t>(rows), 0);
    Table<I> t(static_cast<size_t>(rows));
    for (;;) {
      for (int i = 0; i < rows; ++i) t[static_cast<size_t>(i)] = elems[idx[static_cast<size_t>(i)]];
      fn(t);
      int pos = rows - 1;
      while (pos >= 0 && ++idx[static_cast<size_t>(pos)] == elems.size()) {
        idx[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  } else {
    (void)inst;
    (void)rows;
    (void)n;
    (void)mask;
    (void)fn;
  }
}

template <typename I>
std::string showTable(const I& inst, const Table<I>& t, int splitAt, const std::string& header) {
  std::ostringstream os;
  os << header;
  for (size_t x = 0; x < t.size(); ++x) os << '\n' << x << " -> " << inst.show(t[x], splitAt);
  return os.str();
}

inline void addFailure(LawResult& res, std::string f, std::string lhs, std::string rhs) {
  if (res.failures.size() < 8) res.failures.push_back({std::move(f), std::move(lhs), std::move(rhs)});
}

// A broken instance may throw (for example by producing an unguarded
// intermediate table); record that as a failure of the law being checked
// instead of tearing down the whole report.
template <typename Fn>
void runChecked(LawResult& res, const Fn& fn) {
  try {
    fn();
  } catch (const std::exception& ex) {
    addFailure(res, "(instance threw while checking this law)",
               std::string("exception: ") + ex.what(), "no exception");
  }
}

inline int dim(Rng& rng, int maxCarrier) { return 1 + rng.below(maxCarrier); }

// ---- monad laws ----

template <typename I>
LawResult law_unit_left(const I& inst, const LawConfig& cfg) {
  LawResult res{"unit-left", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int n, const typename I::Elem& t) {
    ++res.samples;
    auto lhs = inst.star([&inst](int e) { return inst.unit(e); }, t);
    if (!inst.equal(lhs, t))
      addFailure(res, "t = " + inst.show(t, -1) + " over carrier " + std::to_string(n),
                 inst.show(lhs, -1), inst.show(t, -1));
  };
  if constexpr (I::kEnumerable) {
    for (int n = 1; n <= cfg.exhaustiveUpTo; ++n)
      for (const auto& t : inst.enumerate(n, noMask(n))) check(n, t);
  }
  Rng rng(lawSeed(cfg.seed, "unit-left"));
  for (int s = 0; s < cfg.samples; ++s) {
    int n = dim(rng, cfg.maxCarrier);
    check(n, inst.sample(rng, n, noMask(n)));
  }
  });
  return res;
}

template <typename I>
LawResult law_unit_right(const I& inst, const LawConfig& cfg) {
  LawResult res{"unit-right", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int nx, int ny, const Table<I>& f) {
    ++res.samples;
    for (int x = 0; x < nx; ++x) {
      auto lhs = inst.star([&f](int e) { return f[static_cast<size_t>(e)]; }, inst.unit(x));
      if (!inst.equal(lhs, f[static_cast<size_t>(x)])) {
        addFailure(res, showTable(inst, f, -1, "f over " + std::to_string(ny)),
                   inst.show(lhs, -1), inst.show(f[static_cast<size_t>(x)], -1));
        break;
      }
    }
  };
  if constexpr (I::kEnumerable) {
    for (int nx = 1; nx <= cfg.exhaustiveUpTo; ++nx)
      for (int ny = 1; ny <= cfg.exhaustiveUpTo; ++ny)
        forEachTable(inst, nx, ny, noMask(ny), [&](const Table<I>& f) { check(nx, ny, f); });
  }
  Rng rng(lawSeed(cfg.seed, "unit-right"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nx = dim(rng, cfg.maxCarrier), ny = dim(rng, cfg.maxCarrier);
    check(nx, ny, sampleTable(inst, rng, nx, ny, noMask(ny)));
  }
  });
  return res;
}

template <typename I>
LawResult law_star_assoc(const I& inst, const LawConfig& cfg) {
  LawResult res{"star-assoc", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int nx, int ny, int nz, const Table<I>& f, const Table<I>& g,
                   const typename I::Elem& t) {
    ++res.samples;
    auto fOf = [&f](int e) { return f[static_cast<size_t>(e)]; };
    auto gOf = [&g](int e) { return g[static_cast<size_t>(e)]; };
    auto lhs = inst.star(gOf, inst.star(fOf, t));
    auto rhs = inst.star([&](int e) { return inst.star(gOf, fOf(e)); }, t);
    if (!inst.equal(lhs, rhs))
      addFailure(res,
                 showTable(inst, f, -1, "f over " + std::to_string(ny)) + "\n" +
                     showTable(inst, g, -1, "g over " + std::to_string(nz)) +
                     "\nt = " + inst.show(t, -1) + " over " + std::to_string(nx),
                 inst.show(lhs, -1), inst.show(rhs, -1));
  };
  if constexpr (I::kEnumerable) {
    for (int nx = 1; nx <= cfg.exhaustiveUpTo; ++nx)
      for (int ny = 1; ny <= cfg.exhaustiveUpTo; ++ny)
        for (int nz = 1; nz <= cfg.exhaustiveUpTo; ++nz)
          forEachTable(inst, nx, ny, noMask(ny), [&](const Table<I>& f) {
            forEachTable(inst, ny, nz, noMask(nz), [&](const Table<I>& g) {
              for (const auto& t : inst.enumerate(nx, noMask(nx))) check(nx, ny, nz, f, g, t);
            });
          });
  }
  Rng rng(lawSeed(cfg.seed, "star-assoc"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nx = dim(rng, cfg.maxCarrier), ny = dim(rng, cfg.maxCarrier), nz = dim(rng, cfg.maxCarrier);
    auto f = sampleTable(inst, rng, nx, ny, noMask(ny));
    auto g = sampleTable(inst, rng, ny, nz, noMask(nz));
    check(nx, ny, nz, f, g, inst.sample(rng, nx, noMask(nx)));
  }
  });
  return res;
}

// ---- guardedness closure ----

// Landing everything in the left summand is guarded in the right one.
template <typename I>
LawResult law_guard_trv(const I& inst, const LawConfig& cfg) {
  LawResult res{"guard-trv", 0, {}};
  runChecked(res, [&] {
  Rng rng(lawSeed(cfg.seed, "guard-trv"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nx = dim(rng, cfg.maxCarrier), ny = dim(rng, cfg.maxCarrier), nz = dim(rng, cfg.maxCarrier);
    auto f = sampleTable(inst, rng, nx, ny, noMask(ny));
    auto mask = rangeMask(ny + nz, ny, ny + nz);
    ++res.samples;
    for (int x = 0; x < nx; ++x) {
      auto widened = inst.mapElem(f[static_cast<size_t>(x)], [](int e) { return e; });
      if (!inst.guardedElem(widened, mask)) {
        addFailure(res, showTable(inst, f, -1, "f over " + std::to_string(ny)),
                   "not guarded in the right summand of " + std::to_string(ny) + "+" +
                       std::to_string(nz),
                 "guarded expected");
        break;
      }
    }
  }
  });
  return res;
}

// Copairing two guarded tables stays guarded.
template <typename I>
LawResult law_guard_sum(const I& inst, const LawConfig& cfg) {
  LawResult res{"guard-sum", 0, {}};
  runChecked(res, [&] {
  Rng rng(lawSeed(cfg.seed, "guard-sum"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nx = dim(rng, cfg.maxCarrier), ny = dim(rng, cfg.maxCarrier);
    int n1 = dim(rng, cfg.maxCarrier), n2 = dim(rng, cfg.maxCarrier);
    auto mask = rangeMask(n1 + n2, n1, n1 + n2);
    auto f = sampleTable(inst, rng, nx, n1 + n2, mask);
    auto g = sampleTable(inst, rng, ny, n1 + n2, mask);
    Table<I> both = f;
    both.insert(both.end(), g.begin(), g.end());
    ++res.samples;
    for (size_t x = 0; x < both.size(); ++x) {
      if (!inst.guardedElem(both[x], mask)) {
        addFailure(res, showTable(inst, both, n1, "[f,g] over " + std::to_string(n1) + "+" +
                                                      std::to_string(n2)),
                   "row " + std::to_string(x) + " not guarded", "guarded expected");
        break;
      }
    }
  }
  });
  return res;
}

// Extending a right-guarded table with a guarded continuation on the left
// summand (and anything on the right) keeps the continuation's guardedness.
template <typename I>
LawResult law_guard_cmp(const I& inst, const LawConfig& cfg) {
  LawResult res{"guard-cmp", 0, {}};
  runChecked(res, [&] {
  Rng rng(lawSeed(cfg.seed, "guard-cmp"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nx = dim(rng, cfg.maxCarrier), ny = dim(rng, cfg.maxCarrier), nz = dim(rng, cfg.maxCarrier);
    int nv1 = dim(rng, cfg.maxCarrier), nv2 = dim(rng, cfg.maxCarrier);
    auto innerMask = rangeMask(ny + nz, ny, ny + nz);
    auto sigma = rangeMask(nv1 + nv2, nv1, nv1 + nv2);
    auto f = sampleTable(inst, rng, nx, ny + nz, innerMask);
    auto g = sampleTable(inst, rng, ny, nv1 + nv2, sigma);
    auto h = sampleTable(inst, rng, nz, nv1 + nv2, noMask(nv1 + nv2));
    ++res.samples;
    for (int x = 0; x < nx; ++x) {
      auto composed = inst.star(
          [&](int e) { return e < ny ? g[static_cast<size_t>(e)] : h[static_cast<size_t>(e - ny)]; },
          f[static_cast<size_t>(x)]);
      if (!inst.guardedElem(composed, sigma)) {
        addFailure(res,
                   showTable(inst, f, ny, "f over " + std::to_string(ny) + "+" + std::to_string(nz)) +
                       "\n" + showTable(inst, g, nv1, "g") + "\n" + showTable(inst, h, nv1, "h"),
                   "row " + std::to_string(x) + " of the composite not guarded",
                   "guarded expected");
        break;
      }
    }
  }
  });
  return res;
}

// Pairing a context onto a guarded table transports its guardedness.
template <typename I>
LawResult law_guard_str(const I& inst, const LawConfig& cfg) {
  LawResult res{"guard-str", 0, {}};
  runChecked(res, [&] {
  Rng rng(lawSeed(cfg.seed, "guard-str"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nx = dim(rng, cfg.maxCarrier);
    int n1 = dim(rng, cfg.maxCarrier), n2 = dim(rng, cfg.maxCarrier);
    int nw = 1 + rng.below(std::min(2, cfg.maxCarrier));
    int ny = n1 + n2;
    auto sigma = rangeMask(ny, n1, ny);
    auto f = sampleTable(inst, rng, nx, ny, sigma);
    std::vector<bool> lifted(static_cast<size_t>(nw * ny), false);
    for (int w = 0; w < nw; ++w)
      for (int e = n1; e < ny; ++e) lifted[static_cast<size_t>(w * ny + e)] = true;
    ++res.samples;
    for (int w = 0; w < nw && res.failures.size() < 8; ++w) {
      for (int x = 0; x < nx; ++x) {
        auto paired = t_tau(inst, w, f[static_cast<size_t>(x)], ny);
        if (!inst.guardedElem(paired, lifted)) {
          addFailure(res, showTable(inst, f, n1, "f over " + std::to_string(n1) + "+" +
                                                     std::to_string(n2)),
                     "pairing with w = " + std::to_string(w) + " lost guardedness",
                     "guarded expected");
          break;
        }
      }
    }
  }
  });
  return res;
}

// Guardedness weakens to any sub-summand of the guard.
template <typename I>
LawResult law_guard_wkn(const I& inst, const LawConfig& cfg) {
  LawResult res{"guard-wkn", 0, {}};
  runChecked(res, [&] {
  Rng rng(lawSeed(cfg.seed, "guard-wkn"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nx = dim(rng, cfg.maxCarrier);
    int n1 = dim(rng, cfg.maxCarrier), n2 = dim(rng, cfg.maxCarrier);
    int ny = n1 + n2;
    auto sigma = rangeMask(ny, n1, ny);
    std::vector<bool> sub = sigma;
    for (int e = n1; e < ny; ++e)
      if (rng.flip()) sub[static_cast<size_t>(e)] = false;
    auto f = sampleTable(inst, rng, nx, ny, sigma);
    ++res.samples;
    for (int x = 0; x < nx; ++x) {
      if (!inst.guardedElem(f[static_cast<size_t>(x)], sub)) {
        addFailure(res, showTable(inst, f, n1, "f over " + std::to_string(n1) + "+" +
                                                   std::to_string(n2)),
                   "row " + std::to_string(x) + " not guarded in the sub-summand",
                   "guarded expected");
        break;
      }
    }
  }
  });
  return res;
}

// ---- iteration laws ----

// Unfolding once agrees with the fixpoint: f† = [unit, f†]* . f.
template <typename I>
LawResult law_fixpoint(const I& inst, const LawConfig& cfg) {
  LawResult res{"fixpoint", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int ny, int nx, const Table<I>& f) {
    ++res.samples;
    auto ft = inst.iterate(f, ny);
    for (int x = 0; x < nx; ++x) {
      auto rhs = inst.star(
          [&](int e) { return e < ny ? inst.unit(e) : ft[static_cast<size_t>(e - ny)]; },
          f[static_cast<size_t>(x)]);
      if (!inst.equal(ft[static_cast<size_t>(x)], rhs)) {
        addFailure(res,
                   showTable(inst, f, ny,
                             "f : " + std::to_string(nx) + " -> T(" + std::to_string(ny) + "+" +
                                 std::to_string(nx) + "), at x = " + std::to_string(x)),
                   inst.show(ft[static_cast<size_t>(x)], -1), inst.show(rhs, -1));
        break;
      }
    }
  };
  if constexpr (I::kEnumerable) {
    for (int ny = 1; ny <= cfg.exhaustiveUpTo; ++ny)
      for (int nx = 1; nx <= cfg.exhaustiveUpTo; ++nx)
        forEachTable(inst, nx, ny + nx, rangeMask(ny + nx, ny, ny + nx),
                     [&](const Table<I>& f) { check(ny, nx, f); });
  }
  Rng rng(lawSeed(cfg.seed, "fixpoint"));
  for (int s = 0; s < cfg.samples; ++s) {
    int ny = dim(rng, cfg.maxCarrier), nx = dim(rng, cfg.maxCarrier);
    check(ny, nx, sampleTable(inst, rng, nx, ny + nx, rangeMask(ny + nx, ny, ny + nx)));
  }
  });
  return res;
}

// Post-composition commutes with iteration: g* . f† = ([T(inl) . g, unit . inr]* . f)†.
template <typename I>
LawResult law_naturality(const I& inst, const LawConfig& cfg) {
  LawResult res{"naturality", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int ny, int nx, int nz, const Table<I>& f, const Table<I>& g) {
    ++res.samples;
    auto ft = inst.iterate(f, ny);
    Table<I> pushed;
    pushed.reserve(static_cast<size_t>(nx));
    for (int x = 0; x < nx; ++x)
      pushed.push_back(inst.star(
          [&](int e) {
            return e < ny ? g[static_cast<size_t>(e)] : inst.unit(nz + (e - ny));
          },
          f[static_cast<size_t>(x)]));
    auto rhsT = inst.iterate(pushed, nz);
    for (int x = 0; x < nx; ++x) {
      auto lhs = inst.star([&g](int e) { return g[static_cast<size_t>(e)]; },
                           ft[static_cast<size_t>(x)]);
      if (!inst.equal(lhs, rhsT[static_cast<size_t>(x)])) {
        addFailure(res,
                   showTable(inst, f, ny,
                             "f : " + std::to_string(nx) + " -> T(" + std::to_string(ny) + "+" +
                                 std::to_string(nx) + ")") +
                       "\n" + showTable(inst, g, -1, "g -> T(" + std::to_string(nz) + ")") +
                       "\nat x = " + std::to_string(x),
                   inst.show(lhs, -1), inst.show(rhsT[static_cast<size_t>(x)], -1));
        break;
      }
    }
  };
  if constexpr (I::kEnumerable) {
    for (int ny = 1; ny <= cfg.exhaustiveUpTo; ++ny)
      for (int nx = 1; nx <= cfg.exhaustiveUpTo; ++nx)
        for (int nz = 1; nz <= cfg.exhaustiveUpTo; ++nz)
          forEachTable(inst, nx, ny + nx, rangeMask(ny + nx, ny, ny + nx), [&](const Table<I>& f) {
            forEachTable(inst, ny, nz, noMask(nz),
                         [&](const Table<I>& g) { check(ny, nx, nz, f, g); });
          });
  }
  Rng rng(lawSeed(cfg.seed, "naturality"));
  for (int s = 0; s < cfg.samples; ++s) {
    int ny = dim(rng, cfg.maxCarrier), nx = dim(rng, cfg.maxCarrier), nz = dim(rng, cfg.maxCarrier);
    auto f = sampleTable(inst, rng, nx, ny + nx, rangeMask(ny + nx, ny, ny + nx));
    auto g = sampleTable(inst, rng, ny, nz, noMask(nz));
    check(ny, nx, nz, f, g);
  }
  });
  return res;
}

// Collapsing nested loop exits agrees with iterating twice:
// (T[id, inr] . f)† = f†† for f into (Y+X)+X guarded in both X summands.
template <typename I>
LawResult law_codiagonal(const I& inst, const LawConfig& cfg) {
  LawResult res{"codiagonal", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int ny, int nx, const Table<I>& f) {
    ++res.samples;
    Table<I> collapsed;
    collapsed.reserve(static_cast<size_t>(nx));
    for (int x = 0; x < nx; ++x)
      collapsed.push_back(inst.mapElem(f[static_cast<size_t>(x)],
                                       [=](int e) { return e < ny + nx ? e : e - nx; }));
    auto lhs = inst.iterate(collapsed, ny);
    auto once = inst.iterate(f, ny + nx);
    auto twice = inst.iterate(once, ny);
    for (int x = 0; x < nx; ++x) {
      if (!inst.equal(lhs[static_cast<size_t>(x)], twice[static_cast<size_t>(x)])) {
        addFailure(res,
                   showTable(inst, f, ny + nx,
                             "f : " + std::to_string(nx) + " -> T((" + std::to_string(ny) + "+" +
                                 std::to_string(nx) + ")+" + std::to_string(nx) +
                                 "), at x = " + std::to_string(x)),
                   inst.show(lhs[static_cast<size_t>(x)], -1),
                   inst.show(twice[static_cast<size_t>(x)], -1));
        break;
      }
    }
  };
  auto doubleMask = [](int ny, int nx) {
    auto shape = co_branch(co_branch(co_leaf(ny), co_leaf(nx)), co_leaf(nx));
    return summand_mask(shape, {{1, 2}, {2}});
  };
  if constexpr (I::kEnumerable) {
    for (int ny = 1; ny <= cfg.exhaustiveUpTo; ++ny)
      for (int nx = 1; nx <= cfg.exhaustiveUpTo; ++nx)
        forEachTable(inst, nx, ny + 2 * nx, doubleMask(ny, nx),
                     [&](const Table<I>& f) { check(ny, nx, f); });
  }
  Rng rng(lawSeed(cfg.seed, "codiagonal"));
  for (int s = 0; s < cfg.samples; ++s) {
    int ny = dim(rng, cfg.maxCarrier), nx = dim(rng, cfg.maxCarrier);
    check(ny, nx, sampleTable(inst, rng, nx, ny + 2 * nx, doubleMask(ny, nx)));
  }
  });
  return res;
}

// Iteration is independent of how loop states are named: if f agrees with g
// along an injective renaming h of the states, their iterations agree too.
template <typename I>
LawResult law_uniformity(const I& inst, const LawConfig& cfg) {
  LawResult res{"uniformity", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int ny, int nx, int nz, const std::vector<int>& h, const Table<I>& g,
                   const Table<I>& freeRows) {
    ++res.samples;
    Table<I> f;
    f.resize(static_cast<size_t>(nx));
    std::vector<bool> covered(static_cast<size_t>(nx), false);
    for (int z = 0; z < nz; ++z) {
      f[static_cast<size_t>(h[static_cast<size_t>(z)])] =
          inst.mapElem(g[static_cast<size_t>(z)], [&](int e) {
            return e < ny ? e : ny + h[static_cast<size_t>(e - ny)];
          });
      covered[static_cast<size_t>(h[static_cast<size_t>(z)])] = true;
    }
    size_t nextFree = 0;
    for (int x = 0; x < nx; ++x)
      if (!covered[static_cast<size_t>(x)]) f[static_cast<size_t>(x)] = freeRows[nextFree++];
    auto ft = inst.iterate(f, ny);
    auto gt = inst.iterate(g, ny);
    for (int z = 0; z < nz; ++z) {
      if (!inst.equal(ft[static_cast<size_t>(h[static_cast<size_t>(z)])],
                      gt[static_cast<size_t>(z)])) {
        std::ostringstream hh;
        hh << "h = [";
        for (int i = 0; i < nz; ++i) hh << (i ? "," : "") << h[static_cast<size_t>(i)];
        hh << "]";
        addFailure(res,
                   showTable(inst, g, ny, "g over " + std::to_string(ny) + "+" + std::to_string(nz)) +
                       "\n" + showTable(inst, f, ny, "f over " + std::to_string(ny) + "+" +
                                                         std::to_string(nx)) +
                       "\n" + hh.str() + ", at z = " + std::to_string(z),
                   inst.show(ft[static_cast<size_t>(h[static_cast<size_t>(z)])], -1),
                   inst.show(gt[static_cast<size_t>(z)], -1));
        break;
      }
    }
  };
  auto forEachInjection = [](int nz, int nx, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> h;
    std::vector<bool> used(static_cast<size_t>(nx), false);
    std::function<void()> go = [&]() {
      if (static_cast<int>(h.size()) == nz) {
        fn(h);
        return;
      }
      for (int x = 0; x < nx; ++x) {
        if (used[static_cast<size_t>(x)]) continue;
        used[static_cast<size_t>(x)] = true;
        h.push_back(x);
        go();
        h.pop_back();
        used[static_cast<size_t>(x)] = false;
      }
    };
    go();
  };
  if constexpr (I::kEnumerable) {
    for (int ny = 1; ny <= cfg.exhaustiveUpTo; ++ny)
      for (int nx = 1; nx <= cfg.exhaustiveUpTo; ++nx)
        for (int nz = 1; nz <= nx; ++nz)
          forEachInjection(nz, nx, [&](const std::vector<int>& h) {
            forEachTable(inst, nz, ny + nz, rangeMask(ny + nz, ny, ny + nz),
                         [&](const Table<I>& g) {
                           forEachTable(inst, nx - nz, ny + nx,
                                        rangeMask(ny + nx, ny, ny + nx),
                                        [&](const Table<I>& freeRows) {
                                          check(ny, nx, nz, h, g, freeRows);
                                        });
                         });
          });
  }
  Rng rng(lawSeed(cfg.seed, "uniformity"));
  for (int s = 0; s < cfg.samples; ++s) {
    int ny = dim(rng, cfg.maxCarrier), nx = dim(rng, cfg.maxCarrier);
    int nz = 1 + rng.below(nx);
    std::vector<int> perm(static_cast<size_t>(nx));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.eng);
    std::vector<int> h(perm.begin(), perm.begin() + nz);
    auto g = sampleTable(inst, rng, nz, ny + nz, rangeMask(ny + nz, ny, ny + nz));
    auto freeRows = sampleTable(inst, rng, nx - nz, ny + nx, rangeMask(ny + nx, ny, ny + nx));
    check(ny, nx, nz, h, g, freeRows);
  }
  });
  return res;
}

// Pairing a context onto an iteration agrees with iterating the
// context-distributed table: tau . (id x f†) = (delta . (id x f))†.
template <typename I>
LawResult law_strength(const I& inst, const LawConfig& cfg) {
  LawResult res{"strength", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int nw, int nx, int ny, const Table<I>& f) {
    ++res.samples;
    auto ft = inst.iterate(f, ny);
    Table<I> dist;
    dist.reserve(static_cast<size_t>(nw * nx));
    for (int w = 0; w < nw; ++w)
      for (int x = 0; x < nx; ++x)
        dist.push_back(t_delta(inst, w, f[static_cast<size_t>(x)], ny, nx, nw));
    auto rhsT = inst.iterate(dist, nw * ny);
    for (int w = 0; w < nw; ++w) {
      for (int x = 0; x < nx; ++x) {
        auto lhs = t_tau(inst, w, ft[static_cast<size_t>(x)], ny);
        if (!inst.equal(lhs, rhsT[static_cast<size_t>(w * nx + x)])) {
          addFailure(res,
                     showTable(inst, f, ny,
                               "f : " + std::to_string(nx) + " -> T(" + std::to_string(ny) + "+" +
                                   std::to_string(nx) + "), at (w,x) = (" + std::to_string(w) +
                                   "," + std::to_string(x) + ")"),
                     inst.show(lhs, -1), inst.show(rhsT[static_cast<size_t>(w * nx + x)], -1));
          return;
        }
      }
    }
  };
  if constexpr (I::kEnumerable) {
    for (int nw = 1; nw <= std::min(2, cfg.exhaustiveUpTo); ++nw)
      for (int nx = 1; nx <= cfg.exhaustiveUpTo; ++nx)
        for (int ny = 1; ny <= cfg.exhaustiveUpTo; ++ny)
          forEachTable(inst, nx, ny + nx, rangeMask(ny + nx, ny, ny + nx),
                       [&](const Table<I>& f) { check(nw, nx, ny, f); });
  }
  Rng rng(lawSeed(cfg.seed, "strength"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nw = 1 + rng.below(std::min(2, cfg.maxCarrier));
    int nx = dim(rng, cfg.maxCarrier), ny = dim(rng, cfg.maxCarrier);
    check(nw, nx, ny, sampleTable(inst, rng, nx, ny + nx, rangeMask(ny + nx, ny, ny + nx)));
  }
  });
  return res;
}

// Context-threading iteration agrees with iterating the distributed table:
// tau . <fst, f‡> = (delta . <fst, f>)†.
template <typename I>
LawResult law_double_dagger(const I& inst, const LawConfig& cfg) {
  LawResult res{"double-dagger", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int nw, int nx, int ny, const Table<I>& f) {
    ++res.samples;
    auto strong = iterate_strong(inst, f, nw, nx, ny);
    Table<I> dist;
    dist.reserve(static_cast<size_t>(nw * nx));
    for (int w = 0; w < nw; ++w)
      for (int x = 0; x < nx; ++x)
        dist.push_back(t_delta(inst, w, f[static_cast<size_t>(w * nx + x)], ny, nx, nw));
    auto rhsT = inst.iterate(dist, nw * ny);
    for (int w = 0; w < nw; ++w) {
      for (int x = 0; x < nx; ++x) {
        auto lhs = t_tau(inst, w, strong[static_cast<size_t>(w * nx + x)], ny);
        if (!inst.equal(lhs, rhsT[static_cast<size_t>(w * nx + x)])) {
          addFailure(res,
                     showTable(inst, f, ny,
                               "f : " + std::to_string(nw) + "x" + std::to_string(nx) + " -> T(" +
                                   std::to_string(ny) + "+" + std::to_string(nx) +
                                   "), at (w,x) = (" + std::to_string(w) + "," +
                                   std::to_string(x) + ")"),
                     inst.show(lhs, -1), inst.show(rhsT[static_cast<size_t>(w * nx + x)], -1));
          return;
        }
      }
    }
  };
  if constexpr (I::kEnumerable) {
    for (int nw = 1; nw <= std::min(2, cfg.exhaustiveUpTo); ++nw)
      for (int nx = 1; nx <= cfg.exhaustiveUpTo; ++nx)
        for (int ny = 1; ny <= cfg.exhaustiveUpTo; ++ny)
          forEachTable(inst, nw * nx, ny + nx, rangeMask(ny + nx, ny, ny + nx),
                       [&](const Table<I>& f) { check(nw, nx, ny, f); });
  }
  Rng rng(lawSeed(cfg.seed, "double-dagger"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nw = 1 + rng.below(std::min(2, cfg.maxCarrier));
    int nx = dim(rng, cfg.maxCarrier), ny = dim(rng, cfg.maxCarrier);
    check(nw, nx, ny, sampleTable(inst, rng, nw * nx, ny + nx, rangeMask(ny + nx, ny, ny + nx)));
  }
  });
  return res;
}

// With a trivial context the threading operator degenerates to plain
// iteration.
template <typename I>
LawResult law_double_dagger_unit(const I& inst, const LawConfig& cfg) {
  LawResult res{"double-dagger-unit-context", 0, {}};
  runChecked(res, [&] {
  auto check = [&](int nx, int ny, const Table<I>& f) {
    ++res.samples;
    auto strong = iterate_strong(inst, f, 1, nx, ny);
    auto plain = inst.iterate(f, ny);
    for (int x = 0; x < nx; ++x) {
      if (!inst.equal(strong[static_cast<size_t>(x)], plain[static_cast<size_t>(x)])) {
        addFailure(res,
                   showTable(inst, f, ny,
                             "f : " + std::to_string(nx) + " -> T(" + std::to_string(ny) + "+" +
                                 std::to_string(nx) + "), at x = " + std::to_string(x)),
                   inst.show(strong[static_cast<size_t>(x)], -1),
                   inst.show(plain[static_cast<size_t>(x)], -1));
        break;
      }
    }
  };
  if constexpr (I::kEnumerable) {
    for (int nx = 1; nx <= cfg.exhaustiveUpTo; ++nx)
      for (int ny = 1; ny <= cfg.exhaustiveUpTo; ++ny)
        forEachTable(inst, nx, ny + nx, rangeMask(ny + nx, ny, ny + nx),
                     [&](const Table<I>& f) { check(nx, ny, f); });
  }
  Rng rng(lawSeed(cfg.seed, "double-dagger-unit-context"));
  for (int s = 0; s < cfg.samples; ++s) {
    int nx = dim(rng, cfg.maxCarrier), ny = dim(rng, cfg.maxCarrier);
    check(nx, ny, sampleTable(inst, rng, nx, ny + nx, rangeMask(ny + nx, ny, ny + nx)));
  }
  });
  return res;
}

} // namespace lawdetail

template <typename I>
LawReport check_laws(const I& inst, const LawConfig& cfg) {
  using namespace lawdetail;
  LawReport report;
  report.push_back(law_unit_left(inst, cfg));
  report.push_back(law_unit_right(inst, cfg));
  report.push_back(law_star_assoc(inst, cfg));
  report.push_back(law_guard_trv(inst, cfg));
  report.push_back(law_guard_sum(inst, cfg));
  report.push_back(law_guard_cmp(inst, cfg));
  report.push_back(law_guard_str(inst, cfg));
  report.push_back(law_guard_wkn(inst, cfg));
  report.push_back(law_fixpoint(inst, cfg));
  report.push_back(law_naturality(inst, cfg));
  report.push_back(law_codiagonal(inst, cfg));
  report.push_back(law_uniformity(inst, cfg));
  report.push_back(law_strength(inst, cfg));
  report.push_back(law_double_dagger(inst, cfg));
  report.push_back(law_double_dagger_unit(inst, cfg));
  return report;
}

} // namespace gml
