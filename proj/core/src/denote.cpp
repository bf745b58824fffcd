#include "gml/denote.hpp"

#include <functional>
#include <stdexcept>
#include <utility>

#include "gml/faults.hpp"

namespace gml {

Env Env::extend(const std::string& name, SemValuePtr v) const {
  return Env(std::make_shared<const Node>(Node{name, std::move(v), head_}));
}

const SemValuePtr* Env::lookup(const std::string& name) const {
  for (const Node* n = head_.get(); n; n = n->next.get())
    if (n->name == name) return &n->value;
  return nullptr;
}

SemValuePtr sem_nat(std::uint64_t n) {
  return std::make_shared<const SemValue>(SemValue{SemValue::Nat{n}});
}
SemValuePtr sem_unit() { return std::make_shared<const SemValue>(SemValue{SemValue::Unit{}}); }
SemValuePtr sem_inl(SemValuePtr v) {
  return std::make_shared<const SemValue>(SemValue{SemValue::Inl{std::move(v)}});
}
SemValuePtr sem_inr(SemValuePtr v) {
  return std::make_shared<const SemValue>(SemValue{SemValue::Inr{std::move(v)}});
}
SemValuePtr sem_pair(SemValuePtr fst, SemValuePtr snd) {
  return std::make_shared<const SemValue>(SemValue{SemValue::Pair{std::move(fst), std::move(snd)}});
}

namespace {

template <class... Fs>
struct Overload : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;

std::uint64_t natOf(const SemValuePtr& v, const char* who) {
  if (const auto* n = std::get_if<SemValue::Nat>(&v->node)) return n->n;
  throw StuckTerm(std::string(who) + " needs a numeral argument");
}

using Out = Stream<SemOutcome>;
using Cont = std::function<Out(SemOutcome)>;

// Relays a stream's outputs, then hands its terminal outcome to k.
Out continueWith(Out s, Cont k) {
  return std::move(s).andThen(std::move(k));
}

} // namespace

SemValuePtr denote_value(const ValuePtr& v, const Env& rho) {
  return std::visit(
      Overload{
          [&](const Value::Var& n) -> SemValuePtr {
            if (const SemValuePtr* hit = rho.lookup(n.name)) return *hit;
            throw std::logic_error("unbound variable '" + n.name + "' at runtime");
          },
          [&](const Value::Star&) -> SemValuePtr { return sem_unit(); },
          [&](const Value::PrimApp& n) -> SemValuePtr {
            if (n.op == "zero") return sem_nat(0);
            if (n.op == "succ") return sem_nat(natOf(denote_value(n.arg, rho), "succ") + 1);
            throw StuckTerm("value operation '" + n.op + "' has no runtime meaning");
          },
          [&](const Value::Inl& n) -> SemValuePtr { return sem_inl(denote_value(n.val, rho)); },
          [&](const Value::Inr& n) -> SemValuePtr { return sem_inr(denote_value(n.val, rho)); },
          [&](const Value::Pair& n) -> SemValuePtr {
            return sem_pair(denote_value(n.fst, rho), denote_value(n.snd, rho));
          },
          [&](const Value::Lambda& n) -> SemValuePtr {
            return std::make_shared<const SemValue>(
                SemValue{SemValue::Closure{n.param, n.body, rho}});
          },
      },
      v->node);
}

Stream<SemOutcome> denote_comp(const CompPtr& p, const Env& rho) {
  return std::visit(
      Overload{
          [&](const Comp::Ret& n) -> Out {
            return Out::unit(SemOutcome::ret(denote_value(n.val, rho)));
          },
          [&](const Comp::Raise& n) -> Out {
            return Out::unit(SemOutcome::raise(n.exc, denote_value(n.payload, rho)));
          },
          [&](const Comp::Do& n) -> Out {
            Env env = rho;
            std::string var = n.var;
            CompPtr body = n.body;
            return continueWith(denote_comp(n.bound, rho), [env, var, body](SemOutcome out) {
              if (out.kind == SemOutcome::Kind::Raise) return Out::unit(out);
              return denote_comp(body, env.extend(var, out.value));
            });
          },
          [&](const Comp::GCase& n) -> Out {
            if (n.op == "put") {
              std::uint64_t ev = natOf(denote_value(n.arg, rho), "put");
              struct St {
                bool emitted = false;
                CompPtr q;
                Env rho;
                std::optional<Out> inner;
              };
              auto st = std::make_shared<St>();
              st->q = n.right;
              st->rho = rho.extend(n.rightVar, sem_unit());
              return Out([st, ev]() -> Out::Step {
                if (!st->emitted) {
                  st->emitted = true;
                  return Out::Out{ev};
                }
                if (!st->inner) st->inner.emplace(denote_comp(st->q, st->rho));
                return st->inner->next();
              });
            }
            if (n.op == "pred") {
              std::uint64_t num = natOf(denote_value(n.arg, rho), "pred");
              SemValuePtr branch = num == 0 ? sem_inl(sem_unit()) : sem_inr(sem_nat(num - 1));
              return denote_comp(n.left, rho.extend(n.leftVar, branch));
            }
            throw StuckTerm("no meaning for operation '" + n.op + "'");
          },
          [&](const Comp::Case& n) -> Out {
            SemValuePtr scrut = denote_value(n.scrutinee, rho);
            if (const auto* inl = std::get_if<SemValue::Inl>(&scrut->node))
              return denote_comp(n.left, rho.extend(n.leftVar, inl->v));
            if (const auto* inr = std::get_if<SemValue::Inr>(&scrut->node))
              return denote_comp(n.right, rho.extend(n.rightVar, inr->v));
            throw StuckTerm("case scrutinee is not an injection");
          },
          [&](const Comp::PCase& n) -> Out {
            SemValuePtr scrut = denote_value(n.scrutinee, rho);
            const auto* pair = std::get_if<SemValue::Pair>(&scrut->node);
            if (!pair) throw StuckTerm("pcase scrutinee is not a pair");
            return denote_comp(n.body, rho.extend(n.fstVar, pair->fst).extend(n.sndVar, pair->snd));
          },
          [&](const Comp::Init&) -> Out {
            throw StuckTerm("init reached at runtime; the empty type has no values");
          },
          [&](const Comp::Handle& n) -> Out {
            Env env = rho;
            std::string exc = n.exc;
            std::string payloadVar = n.payloadVar;
            CompPtr handler = n.handler;
            return continueWith(denote_comp(n.body, rho),
                                [env, exc, payloadVar, handler](SemOutcome out) {
                                  if (out.kind == SemOutcome::Kind::Raise && out.exc == exc)
                                    return denote_comp(handler, env.extend(payloadVar, out.value));
                                  return Out::unit(out);
                                });
          },
          [&](const Comp::HandleIt& n) -> Out {
            struct St {
              Env rho;
              std::string exc;
              CompPtr body;
              SemValuePtr payload;
              std::optional<Out> cur;
              std::uint64_t roundEvents = 0;
              std::uint64_t round = 1;
            };
            auto st = std::make_shared<St>();
            st->rho = rho;
            st->exc = n.exc;
            st->body = n.body;
            st->payload = denote_value(n.seed, rho);
            return Out([st]() -> Out::Step {
              for (;;) {
                if (!st->cur)
                  st->cur.emplace(denote_comp(st->body, st->rho.extend(st->exc, st->payload)));
                Out::Step step = st->cur->next();
                if (const auto* out = std::get_if<Out::Out>(&step)) {
                  ++st->roundEvents;
                  return *out;
                }
                if (std::get_if<Out::Tick>(&step)) return step;
                SemOutcome fin = std::get<Out::Done>(step).value;
                if (fin.kind != SemOutcome::Kind::Raise || fin.exc != st->exc)
                  return Out::Done{fin};
                if (st->roundEvents == 0)
                  throw GuardednessFault("loop on '" + st->exc +
                                         "' re-raised without output in round " +
                                         std::to_string(st->round));
                st->payload = fin.value;
                st->roundEvents = 0;
                ++st->round;
                st->cur.reset();
              }
            });
          },
          [&](const Comp::App& n) -> Out {
            SemValuePtr fn = denote_value(n.fn, rho);
            const auto* clo = std::get_if<SemValue::Closure>(&fn->node);
            if (!clo) throw StuckTerm("application head is not a function");
            return denote_comp(clo->body, clo->env.extend(clo->param, denote_value(n.arg, rho)));
          },
          [&](const Comp::Ann& n) -> Out { return denote_comp(n.comp, rho); },
          [&](const Comp::SIf&) -> Out {
            throw StuckTerm("surface form has no direct meaning; desugar first");
          },
          [&](const Comp::SGuard&) -> Out {
            throw StuckTerm("surface form has no direct meaning; desugar first");
          },
          [&](const Comp::SCall&) -> Out {
            throw StuckTerm("surface form has no direct meaning; desugar first");
          },
          [&](const Comp::STry&) -> Out {
            throw StuckTerm("surface form has no direct meaning; desugar first");
          },
      },
      p->node);
}

std::optional<ValuePtr> readback(const SemValuePtr& v, const TypePtr& ty) {
  return std::visit(
      Overload{
          [&](const Type::Fun&) -> std::optional<ValuePtr> { return std::nullopt; },
          [&](const Type::One&) -> std::optional<ValuePtr> {
            if (std::get_if<SemValue::Unit>(&v->node)) return v_star();
            throw std::logic_error("semantic value does not inhabit the unit type");
          },
          [&](const Type::Nat&) -> std::optional<ValuePtr> {
            if (const auto* n = std::get_if<SemValue::Nat>(&v->node)) return v_nat(n->n);
            throw std::logic_error("semantic value is not a numeral");
          },
          [&](const Type::Sum& s) -> std::optional<ValuePtr> {
            if (const auto* inl = std::get_if<SemValue::Inl>(&v->node)) {
              std::optional<ValuePtr> inner = readback(inl->v, s.lhs);
              if (!inner) return std::nullopt;
              return v_inl(*inner);
            }
            if (const auto* inr = std::get_if<SemValue::Inr>(&v->node)) {
              std::optional<ValuePtr> inner = readback(inr->v, s.rhs);
              if (!inner) return std::nullopt;
              return v_inr(*inner);
            }
            throw std::logic_error("semantic value is not an injection");
          },
          [&](const Type::Prod& pr) -> std::optional<ValuePtr> {
            const auto* pair = std::get_if<SemValue::Pair>(&v->node);
            if (!pair) throw std::logic_error("semantic value is not a pair");
            std::optional<ValuePtr> f = readback(pair->fst, pr.lhs);
            std::optional<ValuePtr> s = readback(pair->snd, pr.rhs);
            if (!f || !s) return std::nullopt;
            return v_pair(*f, *s);
          },
          [&](const Type::Zero&) -> std::optional<ValuePtr> {
            throw std::logic_error("the empty type has no values to read back");
          },
          [&](const Type::Base& b) -> std::optional<ValuePtr> {
            throw std::logic_error("base type '" + b.name + "' has no closed values");
          },
          [&](const Type::Unknown&) -> std::optional<ValuePtr> {
            throw std::logic_error("cannot read back at an undetermined type");
          },
      },
      ty->node);
}

std::string show_sem(const SemValuePtr& v) {
  return std::visit(
      Overload{
          [&](const SemValue::Nat& n) { return std::to_string(n.n); },
          [&](const SemValue::Unit&) { return std::string("*"); },
          [&](const SemValue::Inl& n) { return "inl " + show_sem(n.v); },
          [&](const SemValue::Inr& n) { return "inr " + show_sem(n.v); },
          [&](const SemValue::Pair& n) {
            return "(" + show_sem(n.fst) + ", " + show_sem(n.snd) + ")";
          },
          [&](const SemValue::Closure& n) { return "<fun " + n.param + ">"; },
      },
      v->node);
}

} // namespace gml
