#include "gml/gen.hpp"

#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "gml/errors.hpp"
#include "gml/rng.hpp"
#include "gml/typing.hpp"

namespace gml {

namespace {

ExcContext allUnguarded(ExcContext d) {
  for (ExcEntry& e : d) e.tag = ExcTag::Unguarded;
  return d;
}

struct Gen {
  Rng rng;
  const GenWeights& w;
  GenStats* stats;
  std::vector<std::pair<std::string, TypePtr>> vars;
  ExcContext delta;
  int nameCounter = 0;

  Gen(std::uint64_t seed, const GenWeights& weights, GenStats* st)
      : rng(seed), w(weights), stats(st) {}

  void tally(const char* key) {
    if (stats) ++(*stats)[key];
  }

  std::string freshVar() { return "x" + std::to_string(nameCounter++); }
  std::string freshExc() { return "e" + std::to_string(nameCounter++); }

  TypePtr smallType(int depth) {
    switch (rng.below(depth > 0 ? 4 : 2)) {
      case 0: return t_one();
      case 1: return t_nat();
      case 2: return t_sum(smallType(depth - 1), smallType(depth - 1));
      default: return t_prod(smallType(depth - 1), smallType(depth - 1));
    }
  }

  // A value at `ty` under the current scope. With forSynth the value must
  // also synthesize its type on its own, so injections get ascribed.
  ValuePtr genValue(const TypePtr& ty, int depth, bool forSynth) {
    std::vector<std::string> hits;
    for (const auto& v : vars)
      if (type_equal(v.second, ty)) hits.push_back(v.first);
    if (!hits.empty() && rng.flip()) return v_var(hits[rng.below(static_cast<int>(hits.size()))]);
    return std::visit(
        [&](const auto& n) -> ValuePtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Type::One>) {
            return v_star();
          } else if constexpr (std::is_same_v<T, Type::Nat>) {
            return v_nat(static_cast<std::uint64_t>(rng.below(10)));
          } else if constexpr (std::is_same_v<T, Type::Sum>) {
            TypePtr ann = forSynth ? ty : nullptr;
            if (rng.flip()) return v_inl(genValue(n.lhs, depth - 1, forSynth), ann);
            return v_inr(genValue(n.rhs, depth - 1, forSynth), ann);
          } else if constexpr (std::is_same_v<T, Type::Prod>) {
            return v_pair(genValue(n.lhs, depth - 1, forSynth),
                          genValue(n.rhs, depth - 1, forSynth));
          } else if constexpr (std::is_same_v<T, Type::Fun>) {
            std::string x = freshVar();
            ExcContext saved = std::exchange(delta, n.exc);
            vars.emplace_back(x, n.arg);
            CompPtr body = genComp(n.res, depth - 1);
            vars.pop_back();
            delta = std::move(saved);
            return v_lambda(x, n.arg, n.exc, body);
          } else {
            throw std::logic_error("no values can be generated at this type");
          }
        },
        ty->node);
  }

  std::vector<const ExcEntry*> raisable() const {
    std::vector<const ExcEntry*> out;
    for (const ExcEntry& e : delta)
      if (e.tag == ExcTag::Unguarded) out.push_back(&e);
    return out;
  }

  CompPtr genComp(const TypePtr& ty, int depth) {
    struct Choice {
      int weight;
      const char* key;
    };
    std::vector<Choice> menu;
    bool canRaise = !raisable().empty();
    menu.push_back({w.retStop, "retStop"});
    if (canRaise) menu.push_back({w.raiseNow, "raiseNow"});
    if (depth > 0) {
      menu.push_back({w.doBind, "doBind"});
      menu.push_back({w.caseSplit, "caseSplit"});
      menu.push_back({w.pcaseSplit, "pcaseSplit"});
      menu.push_back({w.guardPut, "guardPut"});
      menu.push_back({w.predSplit, "predSplit"});
      menu.push_back({w.handleBlock, "handleBlock"});
      menu.push_back({w.loopBlock, "loopBlock"});
      menu.push_back({w.applyLambda, "applyLambda"});
      if (canRaise) menu.push_back({w.raiseUnderDo, "raiseUnderDo"});
    }
    if (depth >= 3) menu.push_back({w.countdownLoop, "countdownLoop"});

    int total = 0;
    for (const Choice& c : menu) total += c.weight;
    if (total <= 0) return retStop(ty, depth);
    int roll = rng.below(total);
    const char* pick = "retStop";
    for (const Choice& c : menu) {
      if (roll < c.weight) {
        pick = c.key;
        break;
      }
      roll -= c.weight;
    }
    tally(pick);

    std::string key(pick);
    if (key == "retStop") return retStop(ty, depth);
    if (key == "raiseNow") return raiseNow(depth);
    if (key == "doBind") return doBind(ty, depth);
    if (key == "caseSplit") return caseSplit(ty, depth);
    if (key == "pcaseSplit") return pcaseSplit(ty, depth);
    if (key == "guardPut") return guardPut(ty, depth);
    if (key == "predSplit") return predSplit(ty, depth);
    if (key == "handleBlock") return handleBlock(ty, depth);
    if (key == "loopBlock") return loopBlock(ty, depth);
    if (key == "applyLambda") return applyLambda(ty, depth);
    if (key == "countdownLoop") return countdownLoop(ty, depth);
    return raiseUnderDo(ty, depth);
  }

  CompPtr retStop(const TypePtr& ty, int depth) {
    return c_ret(genValue(ty, depth > 2 ? 2 : depth, false));
  }

  CompPtr raiseNow(int depth) {
    std::vector<const ExcEntry*> es = raisable();
    const ExcEntry* e = es[rng.below(static_cast<int>(es.size()))];
    return c_raise(e->name, genValue(e->payload, depth > 2 ? 2 : depth, false));
  }

  CompPtr doBind(const TypePtr& ty, int depth) {
    TypePtr mid = smallType(1);
    std::string x = freshVar();
    CompPtr bound = c_ann(genComp(mid, depth - 1), mid);
    vars.emplace_back(x, mid);
    CompPtr body = genComp(ty, depth - 1);
    vars.pop_back();
    return c_do(x, bound, body);
  }

  CompPtr caseSplit(const TypePtr& ty, int depth) {
    TypePtr sum = t_sum(smallType(1), smallType(1));
    ValuePtr scrut = genValue(sum, 2, true);
    const auto& s = std::get<Type::Sum>(sum->node);
    std::string l = freshVar(), r = freshVar();
    vars.emplace_back(l, s.lhs);
    CompPtr left = genComp(ty, depth - 1);
    vars.pop_back();
    vars.emplace_back(r, s.rhs);
    CompPtr right = genComp(ty, depth - 1);
    vars.pop_back();
    return c_case(scrut, l, left, r, right);
  }

  CompPtr pcaseSplit(const TypePtr& ty, int depth) {
    TypePtr prod = t_prod(smallType(1), smallType(1));
    ValuePtr scrut = genValue(prod, 2, true);
    const auto& pr = std::get<Type::Prod>(prod->node);
    std::string a = freshVar(), b = freshVar();
    vars.emplace_back(a, pr.lhs);
    vars.emplace_back(b, pr.rhs);
    CompPtr body = genComp(ty, depth - 1);
    vars.pop_back();
    vars.pop_back();
    return c_pcase(scrut, a, b, body);
  }

  CompPtr guardPut(const TypePtr& ty, int depth) {
    ValuePtr arg = genValue(t_nat(), 1, false);
    std::string dead = freshVar();
    ExcContext saved = std::exchange(delta, allUnguarded(delta));
    CompPtr rest = genComp(ty, depth - 1);
    delta = std::move(saved);
    return c_gcase("put", arg, dead, c_init(v_var(dead)), "_", rest);
  }

  CompPtr predSplit(const TypePtr& ty, int depth) {
    ValuePtr arg = genValue(t_nat(), 1, false);
    std::string z = freshVar(), dead = freshVar();
    vars.emplace_back(z, t_sum(t_one(), t_nat()));
    CompPtr left = genComp(ty, depth - 1);
    vars.pop_back();
    return c_gcase("pred", arg, z, left, dead, c_init(v_var(dead)));
  }

  CompPtr handleBlock(const TypePtr& ty, int depth) {
    std::string e = freshExc();
    TypePtr payload = smallType(1);
    delta.push_back(ExcEntry{e, payload, ExcTag::Unguarded});
    CompPtr body = genComp(ty, depth - 1);
    delta.pop_back();
    vars.emplace_back(e, payload);
    CompPtr handler = genComp(ty, depth - 1);
    vars.pop_back();
    return c_handle(e, payload, body, e, handler);
  }

  CompPtr loopBlock(const TypePtr& ty, int depth) {
    std::string e = freshExc();
    TypePtr payload = smallType(1);
    ValuePtr seed = genValue(payload, 2, false);
    delta.push_back(ExcEntry{e, payload, ExcTag::Guarded});
    vars.emplace_back(e, payload);
    CompPtr body = genComp(ty, depth - 1);
    vars.pop_back();
    delta.pop_back();
    return c_handleit(seed, e, payload, body);
  }

  CompPtr applyLambda(const TypePtr& ty, int depth) {
    TypePtr arg = smallType(1);
    std::string x = freshVar();
    vars.emplace_back(x, arg);
    CompPtr body = genComp(ty, depth - 1);
    vars.pop_back();
    ValuePtr fn = v_lambda(x, arg, delta, body);
    return c_app(fn, genValue(arg, 2, false));
  }

  // handleit e = k in do z <- pred(e); case z of stop => base | m => put(m) & raise_e m
  CompPtr countdownLoop(const TypePtr& ty, int depth) {
    std::string e = freshExc();
    std::uint64_t k = 1 + static_cast<std::uint64_t>(rng.below(4));
    std::string z = freshVar(), dead = freshVar(), m = freshVar(), g0 = freshVar();
    delta.push_back(ExcEntry{e, t_nat(), ExcTag::Guarded});
    vars.emplace_back(e, t_nat());
    CompPtr probe =
        c_gcase("pred", v_var(e), z, c_ret(v_var(z)), dead, c_init(v_var(dead)));
    CompPtr base = genComp(ty, depth >= 4 ? 2 : 1);
    vars.pop_back();
    delta.pop_back();
    CompPtr again = c_gcase("put", v_var(m), g0, c_init(v_var(g0)), "_",
                            c_raise(e, v_var(m)));
    CompPtr body =
        c_do(z, probe, c_case(v_var(z), "_", base, m, again));
    return c_handleit(v_nat(k), e, t_nat(), body);
  }

  CompPtr raiseUnderDo(const TypePtr& ty, int depth) {
    std::vector<const ExcEntry*> es = raisable();
    const ExcEntry* e = es[rng.below(static_cast<int>(es.size()))];
    CompPtr bound = c_ann(c_raise(e->name, genValue(e->payload, 2, false)), t_one());
    CompPtr body = genComp(ty, depth - 1);
    return c_do("_", bound, body);
  }
};

} // namespace

OpenPair gen_open_pair(const GenConfig& cfg) {
  Program sigs;
  add_builtin_sigs(sigs);
  std::string firstError;
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    Gen g(cfg.seed * 0x9e3779b97f4a7c15ULL + attempt + 0x5bd1e995ULL, cfg.weights, nullptr);
    OpenPair pair;
    for (int i = 0; i < cfg.exceptionBudget; ++i) {
      ExcTag tag = (i == 0 || g.rng.flip()) ? ExcTag::Unguarded : ExcTag::Guarded;
      pair.delta.push_back(ExcEntry{g.freshExc(), g.smallType(1), tag});
    }
    g.delta = pair.delta;
    pair.var = g.freshVar();
    pair.varType = g.smallType(1);
    pair.value = g.genValue(pair.varType, 2, false); // vars empty: closed
    pair.resultType = cfg.resultType ? cfg.resultType : g.smallType(1);
    g.vars.emplace_back(pair.var, pair.varType);
    pair.body = g.genComp(pair.resultType, cfg.maxDepth);
    try {
      VarContext gamma = VarContext{}.extend(pair.var, pair.varType);
      check_comp(sigs, pair.delta, gamma, pair.body, pair.resultType);
      return pair;
    } catch (const TypeError& err) {
      if (firstError.empty()) firstError = err.what();
    }
  }
  throw std::logic_error("open-pair generation kept producing ill-typed terms; first error: " +
                         firstError);
}

Program gen_program(const GenConfig& cfg, GenStats* stats) {
  std::string firstError;
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    Gen g(cfg.seed * 0x9e3779b97f4a7c15ULL + attempt, cfg.weights, stats);
    Program prog;
    add_builtin_sigs(prog);
    for (int i = 0; i < cfg.exceptionBudget; ++i) {
      ExcTag tag = (i == 0 || g.rng.flip()) ? ExcTag::Unguarded : ExcTag::Guarded;
      prog.mainExc.push_back(ExcEntry{g.freshExc(), g.smallType(1), tag});
    }
    g.delta = prog.mainExc;
    TypePtr target = cfg.resultType ? cfg.resultType : g.smallType(1);
    prog.main = c_ann(g.genComp(target, cfg.maxDepth), target);
    try {
      check_program(prog);
      return prog;
    } catch (const TypeError& err) {
      if (firstError.empty()) firstError = err.what();
    }
  }
  throw std::logic_error("program generation kept producing ill-typed terms; first error: " +
                         firstError);
}

} // namespace gml
