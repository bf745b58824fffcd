#include <sstream>

#include "gml/pretty.hpp"
#include "gml/typing.hpp"

// Re-verifies a check_program result node by node. Unlike the checker this
// does no synthesis and no merging: for each node it reads the recorded
// types of the node and its children and tests them against the one typing
// rule for that syntax form. Any disagreement is a bug in the checker (or a
// tampered record), not a user error.

namespace gml {

namespace {

struct Replay {
  const TypedProgram& tp;
  std::string why;

  bool bad(Pos pos, const std::string& msg) {
    std::ostringstream os;
    os << "line " << pos.line << " col " << pos.col << ": " << msg;
    why = os.str();
    return false;
  }

  const NodeInfo* rec(const void* node) {
    auto it = tp.info.find(node);
    return it == tp.info.end() ? nullptr : &it->second;
  }

  bool sameExc(const NodeInfo& i, const ExcContext& d, Pos pos) {
    if (!exc_equal(i.exc, d))
      return bad(pos, "recorded exception context [" + pretty(i.exc) +
                          "] differs from the derivation's [" + pretty(d) + "]");
    return true;
  }

  bool value(const ValuePtr& v, const ExcContext& d, const VarContext& g) {
    const NodeInfo* i = rec(v.get());
    if (!i) return bad(v->pos, "value node has no record");
    if (!type_grounded(i->type)) return bad(v->pos, "recorded value type is not determined");
    if (!sameExc(*i, d, v->pos)) return false;
    const TypePtr& t = i->type;

    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Value::Var>) {
            const TypePtr* bound = g.lookup(n.name);
            if (!bound) return bad(v->pos, "variable '" + n.name + "' not in context");
            if (!type_equal(*bound, t))
              return bad(v->pos, "variable '" + n.name + "' recorded as " + pretty(t) +
                                     " but bound at " + pretty(*bound));
            return true;
          } else if constexpr (std::is_same_v<T, Value::Star>) {
            if (!std::holds_alternative<Type::One>(t->node))
              return bad(v->pos, "unit value recorded as " + pretty(t));
            return true;
          } else if constexpr (std::is_same_v<T, Value::PrimApp>) {
            const ValueSig* sig = value_sig(tp.program, n.op);
            if (!sig) return bad(v->pos, "no value signature for '" + n.op + "'");
            if (!type_equal(t, sig->res))
              return bad(v->pos, "'" + n.op + "' recorded as " + pretty(t) +
                                     ", signature result is " + pretty(sig->res));
            const NodeInfo* ai = rec(n.arg.get());
            if (!ai || !type_equal(ai->type, sig->arg))
              return bad(n.arg->pos, "argument record does not match the signature of '" +
                                         n.op + "'");
            return value(n.arg, d, g);
          } else if constexpr (std::is_same_v<T, Value::Inl> ||
                               std::is_same_v<T, Value::Inr>) {
            constexpr bool left = std::is_same_v<T, Value::Inl>;
            const auto* s = std::get_if<Type::Sum>(&t->node);
            if (!s) return bad(v->pos, "injection recorded at non-sum type " + pretty(t));
            if (n.sum && !type_equal(n.sum, t))
              return bad(v->pos, "ascription differs from the recorded type");
            const NodeInfo* ci = rec(n.val.get());
            if (!ci || !type_equal(ci->type, left ? s->lhs : s->rhs))
              return bad(n.val->pos, "injected value record does not match the summand");
            return value(n.val, d, g);
          } else if constexpr (std::is_same_v<T, Value::Pair>) {
            const auto* pr = std::get_if<Type::Prod>(&t->node);
            if (!pr) return bad(v->pos, "pair recorded at non-product type " + pretty(t));
            const NodeInfo* fi = rec(n.fst.get());
            const NodeInfo* si = rec(n.snd.get());
            if (!fi || !type_equal(fi->type, pr->lhs))
              return bad(n.fst->pos, "first component record does not match");
            if (!si || !type_equal(si->type, pr->rhs))
              return bad(n.snd->pos, "second component record does not match");
            return value(n.fst, d, g) && value(n.snd, d, g);
          } else { // Lambda
            const auto* f = std::get_if<Type::Fun>(&t->node);
            if (!f) return bad(v->pos, "function recorded at non-function type " + pretty(t));
            if (!type_equal(f->arg, n.paramType))
              return bad(v->pos, "parameter annotation differs from the recorded type");
            if (!exc_equal(f->exc, n.exc))
              return bad(v->pos, "context annotation differs from the recorded type");
            const NodeInfo* bi = rec(n.body.get());
            if (!bi || !type_equal(bi->type, f->res))
              return bad(n.body->pos, "body record does not match the result type");
            return comp(n.body, n.exc, g.extend(n.param, n.paramType));
          }
        },
        v->node);
  }

  bool comp(const CompPtr& p, const ExcContext& d, const VarContext& g) {
    const NodeInfo* i = rec(p.get());
    if (!i) return bad(p->pos, "computation node has no record");
    if (!type_grounded(i->type))
      return bad(p->pos, "recorded computation type is not determined");
    if (!sameExc(*i, d, p->pos)) return false;
    const TypePtr& t = i->type;

    auto childType = [&](const CompPtr& c) -> const TypePtr* {
      const NodeInfo* ci = rec(c.get());
      return ci ? &ci->type : nullptr;
    };

    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Comp::Ret>) {
            const NodeInfo* vi = rec(n.val.get());
            if (!vi || !type_equal(vi->type, t))
              return bad(p->pos, "returned value record does not match " + pretty(t));
            return value(n.val, d, g);
          } else if constexpr (std::is_same_v<T, Comp::Do>) {
            const TypePtr* a = childType(n.bound);
            if (!a) return bad(n.bound->pos, "bound computation has no record");
            const TypePtr* b = childType(n.body);
            if (!b || !type_equal(*b, t))
              return bad(n.body->pos, "sequence body record does not match " + pretty(t));
            return comp(n.bound, d, g) && comp(n.body, d, g.extend(n.var, *a));
          } else if constexpr (std::is_same_v<T, Comp::GCase>) {
            const EffectSig* sig = effect_sig(tp.program, n.op);
            if (!sig) return bad(p->pos, "no effect signature for '" + n.op + "'");
            const NodeInfo* ai = rec(n.arg.get());
            if (!ai || !type_equal(ai->type, sig->arg))
              return bad(n.arg->pos, "argument record does not match the signature of '" +
                                         n.op + "'");
            const TypePtr* l = childType(n.left);
            const TypePtr* r = childType(n.right);
            if (!l || !type_equal(*l, t)) return bad(n.left->pos, "left branch record differs");
            if (!r || !type_equal(*r, t))
              return bad(n.right->pos, "right branch record differs");
            ExcContext du = d;
            for (auto& e : du) e.tag = ExcTag::Unguarded;
            return value(n.arg, d, g) &&
                   comp(n.left, d, g.extend(n.leftVar, sig->unguardedRes)) &&
                   comp(n.right, du, g.extend(n.rightVar, sig->guardedRes));
          } else if constexpr (std::is_same_v<T, Comp::Case>) {
            const NodeInfo* si = rec(n.scrutinee.get());
            if (!si) return bad(n.scrutinee->pos, "scrutinee has no record");
            const auto* s = std::get_if<Type::Sum>(&si->type->node);
            if (!s)
              return bad(n.scrutinee->pos,
                         "scrutinee recorded at non-sum type " + pretty(si->type));
            const TypePtr* l = childType(n.left);
            const TypePtr* r = childType(n.right);
            if (!l || !type_equal(*l, t)) return bad(n.left->pos, "left branch record differs");
            if (!r || !type_equal(*r, t))
              return bad(n.right->pos, "right branch record differs");
            return value(n.scrutinee, d, g) &&
                   comp(n.left, d, g.extend(n.leftVar, s->lhs)) &&
                   comp(n.right, d, g.extend(n.rightVar, s->rhs));
          } else if constexpr (std::is_same_v<T, Comp::PCase>) {
            const NodeInfo* si = rec(n.scrutinee.get());
            if (!si) return bad(n.scrutinee->pos, "scrutinee has no record");
            const auto* pr = std::get_if<Type::Prod>(&si->type->node);
            if (!pr)
              return bad(n.scrutinee->pos,
                         "scrutinee recorded at non-product type " + pretty(si->type));
            const TypePtr* b = childType(n.body);
            if (!b || !type_equal(*b, t)) return bad(n.body->pos, "body record differs");
            return value(n.scrutinee, d, g) &&
                   comp(n.body, d, g.extend(n.fstVar, pr->lhs).extend(n.sndVar, pr->rhs));
          } else if constexpr (std::is_same_v<T, Comp::Init>) {
            const NodeInfo* vi = rec(n.val.get());
            if (!vi || !std::holds_alternative<Type::Zero>(vi->type->node))
              return bad(n.val->pos, "init argument not recorded at the empty type");
            return value(n.val, d, g);
          } else if constexpr (std::is_same_v<T, Comp::Raise>) {
            const ExcEntry* e = exc_lookup(d, n.exc);
            if (!e) return bad(p->pos, "raised exception '" + n.exc + "' not in context");
            if (e->tag != ExcTag::Unguarded)
              return bad(p->pos, "raised exception '" + n.exc + "' is guarded in context");
            const NodeInfo* vi = rec(n.payload.get());
            if (!vi || !type_equal(vi->type, e->payload))
              return bad(n.payload->pos, "payload record does not match the exception type");
            return value(n.payload, d, g);
          } else if constexpr (std::is_same_v<T, Comp::Handle>) {
            if (exc_lookup(d, n.exc))
              return bad(p->pos, "handled exception '" + n.exc + "' shadows the context");
            ExcContext db = d;
            db.push_back(ExcEntry{n.exc, n.payloadType, ExcTag::Unguarded});
            const TypePtr* b = childType(n.body);
            const TypePtr* h = childType(n.handler);
            if (!b || !type_equal(*b, t)) return bad(n.body->pos, "body record differs");
            if (!h || !type_equal(*h, t)) return bad(n.handler->pos, "handler record differs");
            return comp(n.body, db, g) &&
                   comp(n.handler, d, g.extend(n.payloadVar, n.payloadType));
          } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
            if (exc_lookup(d, n.exc))
              return bad(p->pos, "loop exception '" + n.exc + "' shadows the context");
            const NodeInfo* si = rec(n.seed.get());
            if (!si) return bad(n.seed->pos, "seed has no record");
            TypePtr e = n.payloadType ? n.payloadType : si->type;
            if (!type_equal(si->type, e))
              return bad(n.seed->pos, "seed record does not match the loop annotation");
            ExcContext db = d;
            db.push_back(ExcEntry{n.exc, e, ExcTag::Guarded});
            const TypePtr* b = childType(n.body);
            if (!b || !type_equal(*b, t)) return bad(n.body->pos, "body record differs");
            return value(n.seed, d, g) && comp(n.body, db, g.extend(n.exc, e));
          } else if constexpr (std::is_same_v<T, Comp::App>) {
            const NodeInfo* fi = rec(n.fn.get());
            if (!fi) return bad(n.fn->pos, "function has no record");
            const auto* f = std::get_if<Type::Fun>(&fi->type->node);
            if (!f)
              return bad(n.fn->pos,
                         "function recorded at non-function type " + pretty(fi->type));
            if (!exc_equal(f->exc, d))
              return bad(p->pos, "function context [" + pretty(f->exc) +
                                     "] differs from the derivation's [" + pretty(d) + "]");
            const NodeInfo* ai = rec(n.arg.get());
            if (!ai || !type_equal(ai->type, f->arg))
              return bad(n.arg->pos, "argument record does not match the parameter type");
            if (!type_equal(f->res, t))
              return bad(p->pos, "application recorded as " + pretty(t) +
                                     ", function yields " + pretty(f->res));
            return value(n.fn, d, g) && value(n.arg, d, g);
          } else if constexpr (std::is_same_v<T, Comp::Ann>) {
            if (!type_equal(n.type, t))
              return bad(p->pos, "ascription differs from the recorded type");
            const TypePtr* b = childType(n.comp);
            if (!b || !type_equal(*b, t)) return bad(n.comp->pos, "body record differs");
            return comp(n.comp, d, g);
          } else {
            return bad(p->pos, "surface syntax in a checked tree");
          }
        },
        p->node);
  }
};

} // namespace

bool replay_derivation(const TypedProgram& tp, std::string* why) {
  Replay r{tp};
  bool ok = false;
  if (!tp.program.main) {
    r.why = "program has no main computation";
  } else {
    const NodeInfo* mi = r.rec(tp.program.main.get());
    if (!mi) {
      r.why = "main computation has no record";
    } else if (!type_equal(mi->type, tp.mainType)) {
      r.why = "main record does not match the reported program type";
    } else {
      ok = r.comp(tp.program.main, tp.program.mainExc, VarContext{});
    }
  }
  if (!ok && why) *why = r.why;
  return ok;
}

} // namespace gml
