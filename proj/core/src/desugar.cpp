#include "gml/desugar.hpp"

#include "gml/errors.hpp"
#include "gml/subst.hpp"

namespace gml {

namespace {

bool is_zero_type(const TypePtr& t) { return std::holds_alternative<Type::Zero>(t->node); }
bool is_one_type(const TypePtr& t) { return std::holds_alternative<Type::One>(t->node); }

const EffectSig& effectSigOrThrow(const Program& sigs, const std::string& op, Pos pos) {
  if (const EffectSig* sig = effect_sig(sigs, op)) return *sig;
  std::string kind = value_sig(sigs, op) ? "a value operation, not an effect" : "not declared";
  throw TypeError(ErrorCode::SignatureMismatch, pos, "operation '" + op + "' is " + kind);
}

struct Desugarer {
  const Program& sigs;

  ValuePtr value(const ValuePtr& v) {
    return std::visit(
        [&](const auto& n) -> ValuePtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Value::Var> || std::is_same_v<T, Value::Star>) {
            return v;
          } else if constexpr (std::is_same_v<T, Value::PrimApp>) {
            return v_prim(n.op, value(n.arg), v->pos);
          } else if constexpr (std::is_same_v<T, Value::Inl>) {
            return v_inl(value(n.val), n.sum, v->pos);
          } else if constexpr (std::is_same_v<T, Value::Inr>) {
            return v_inr(value(n.val), n.sum, v->pos);
          } else if constexpr (std::is_same_v<T, Value::Pair>) {
            return v_pair(value(n.fst), value(n.snd), v->pos);
          } else if constexpr (std::is_same_v<T, Value::Lambda>) {
            return v_lambda(n.param, n.paramType, n.exc, comp(n.body), v->pos);
          }
        },
        v->node);
  }

  CompPtr comp(const CompPtr& p) {
    return std::visit(
        [&](const auto& n) -> CompPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Comp::Ret>) {
            return c_ret(value(n.val), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Init>) {
            return c_init(value(n.val), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Do>) {
            return c_do(n.var, comp(n.bound), comp(n.body), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::GCase>) {
            effectSigOrThrow(sigs, n.op, p->pos);
            return c_gcase(n.op, value(n.arg), n.leftVar, comp(n.left), n.rightVar,
                           comp(n.right), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Case>) {
            return c_case(value(n.scrutinee), n.leftVar, comp(n.left), n.rightVar,
                          comp(n.right), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::PCase>) {
            return c_pcase(value(n.scrutinee), n.fstVar, n.sndVar, comp(n.body), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Raise>) {
            return c_raise(n.exc, value(n.payload), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Handle>) {
            return c_handle(n.exc, n.payloadType, comp(n.body), n.payloadVar,
                            comp(n.handler), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
            return c_handleit(value(n.seed), n.exc, n.payloadType, comp(n.body), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::App>) {
            return c_app(value(n.fn), value(n.arg), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Ann>) {
            return c_ann(comp(n.comp), n.type, p->pos);
          } else if constexpr (std::is_same_v<T, Comp::SIf>) {
            return c_case(value(n.cond), "_", comp(n.thenBranch), "_", comp(n.elseBranch),
                          p->pos);
          } else if constexpr (std::is_same_v<T, Comp::SGuard>) {
            const EffectSig& sig = effectSigOrThrow(sigs, n.op, p->pos);
            if (!is_zero_type(sig.unguardedRes) || !is_one_type(sig.guardedRes))
              throw TypeError(ErrorCode::SignatureMismatch, p->pos,
                              "'&' guard needs an operation of shape A -> 0 [1]; '" + n.op +
                                  "' has a different signature");
            return c_gcase(n.op, value(n.arg), "x", c_init(v_var("x"), p->pos), "_",
                           comp(n.rest), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::SCall>) {
            const EffectSig& sig = effectSigOrThrow(sigs, n.op, p->pos);
            ValuePtr arg = value(n.arg);
            if (is_zero_type(sig.unguardedRes)) // dead left: route the guarded result out
              return c_gcase(n.op, arg, "x", c_init(v_var("x"), p->pos), "y",
                             c_ret(v_var("y"), p->pos), p->pos);
            if (is_zero_type(sig.guardedRes)) // dead right
              return c_gcase(n.op, arg, "x", c_ret(v_var("x"), p->pos), "y",
                             c_init(v_var("y"), p->pos), p->pos);
            return c_gcase(n.op, arg, "x", c_ret(v_inl(v_var("x")), p->pos), "y",
                           c_ret(v_inr(v_var("y")), p->pos), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::STry>) {
            CompPtr body = comp(n.body);
            CompPtr bound = comp(n.bound);
            CompPtr handler = comp(n.handler);
            std::set<std::string> avoid = free_vars(body);
            std::string x = n.var == "_" ? fresh_name("x", avoid) : n.var;
            avoid.insert(x);
            std::string z = fresh_name("z", avoid);
            std::string y = fresh_name("y", {x});
            CompPtr handleBody = c_do(x, bound, c_ret(v_inl(v_var(x)), p->pos), p->pos);
            CompPtr handleHandler =
                c_do(y, handler, c_ret(v_inr(v_var(y)), p->pos), p->pos);
            CompPtr handle =
                c_handle(n.exc, n.payloadType, handleBody, n.exc, handleHandler, p->pos);
            CompPtr caseOut = c_case(v_var(z), x, body, y, c_ret(v_var(y), p->pos), p->pos);
            return c_do(z, handle, caseOut, p->pos);
          }
        },
        p->node);
  }
};

} // namespace

CompPtr desugar(const CompPtr& comp, const Program& sigs) { return Desugarer{sigs}.comp(comp); }
ValuePtr desugar(const ValuePtr& v, const Program& sigs) { return Desugarer{sigs}.value(v); }

Program desugar(const Program& prog) {
  Program out = prog;
  out.main = desugar(prog.main, prog);
  return out;
}

} // namespace gml
