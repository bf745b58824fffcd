#include "gml/typing.hpp"

#include <stdexcept>

#include "gml/pretty.hpp"

namespace gml {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnboundVar: return "UnboundVar";
    case ErrorCode::UnboundExc: return "UnboundExc";
    case ErrorCode::GuardedRaise: return "GuardedRaise";
    case ErrorCode::TagMismatch: return "TagMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::ExcContextMismatch: return "ExcContextMismatch";
  }
  return "TypeError";
}

const TypePtr* VarContext::lookup(const std::string& name) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

VarContext VarContext::extend(const std::string& name, TypePtr type) const {
  VarContext out = *this;
  if (name != "_") out.entries.emplace_back(name, std::move(type));
  return out;
}

const NodeInfo* TypedProgram::lookup(const ValuePtr& v) const {
  auto it = info.find(static_cast<const void*>(v.get()));
  return it == info.end() ? nullptr : &it->second;
}

const NodeInfo* TypedProgram::lookup(const CompPtr& p) const {
  auto it = info.find(static_cast<const void*>(p.get()));
  return it == info.end() ? nullptr : &it->second;
}

namespace {

bool is_unknown(const TypePtr& t) { return std::holds_alternative<Type::Unknown>(t->node); }

// Least common refinement of two partial types, or null when they disagree
// on a determined position.
TypePtr merge(const TypePtr& a, const TypePtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (is_unknown(a)) return b;
  if (is_unknown(b)) return a;
  if (a->node.index() != b->node.index()) return nullptr;
  if (const auto* x = std::get_if<Type::Base>(&a->node))
    return x->name == std::get<Type::Base>(b->node).name ? a : nullptr;
  if (const auto* x = std::get_if<Type::Sum>(&a->node)) {
    const auto& y = std::get<Type::Sum>(b->node);
    TypePtr l = merge(x->lhs, y.lhs), r = merge(x->rhs, y.rhs);
    if (!l || !r) return nullptr;
    return l == x->lhs && r == x->rhs ? a : t_sum(l, r);
  }
  if (const auto* x = std::get_if<Type::Prod>(&a->node)) {
    const auto& y = std::get<Type::Prod>(b->node);
    TypePtr l = merge(x->lhs, y.lhs), r = merge(x->rhs, y.rhs);
    if (!l || !r) return nullptr;
    return l == x->lhs && r == x->rhs ? a : t_prod(l, r);
  }
  if (const auto* x = std::get_if<Type::Fun>(&a->node)) {
    const auto& y = std::get<Type::Fun>(b->node);
    if (!exc_equal(x->exc, y.exc)) return nullptr;
    TypePtr arg = merge(x->arg, y.arg), res = merge(x->res, y.res);
    if (!arg || !res) return nullptr;
    return arg == x->arg && res == x->res ? a : t_fun(arg, x->exc, res);
  }
  return a; // Zero, One, Nat: same index means equal
}

bool mergeable(const TypePtr& a, const TypePtr& b) { return merge(a, b) != nullptr; }

ExcContext retag_unguarded(const ExcContext& d) {
  ExcContext out = d;
  for (auto& e : out) e.tag = ExcTag::Unguarded;
  return out;
}

ExcContext push_exc(const ExcContext& d, const std::string& name, TypePtr payload, ExcTag tag) {
  ExcContext out = d;
  out.push_back(ExcEntry{name, std::move(payload), tag});
  return out;
}

[[noreturn]] void fail(ErrorCode code, Pos pos, std::string msg) {
  throw TypeError(code, pos, std::move(msg));
}

// Scrutinee/function types copied out of the synthesized type, so they
// survive any later synthesis.
struct SumParts { TypePtr lhs, rhs; };
struct ProdParts { TypePtr lhs, rhs; };
struct FunParts { TypePtr arg; ExcContext exc; TypePtr res; };

struct Checker {
  const Program& prog;
  std::map<const void*, NodeInfo>* record = nullptr;

  void note(const void* node, const TypePtr& t, const ExcContext& d) {
    if (!record) return;
    auto [it, fresh] = record->emplace(node, NodeInfo{t, d});
    if (!fresh && (!type_equal(it->second.type, t) || !exc_equal(it->second.exc, d)))
      throw std::logic_error("type annotation: node reused under conflicting contexts");
  }

  // -------------------------------------------------------------------
  // values
  // -------------------------------------------------------------------

  // Synthesis never records; partial results are fine.
  TypePtr synthValue(const VarContext& g, const ValuePtr& v) {
    return std::visit(
        [&](const auto& n) -> TypePtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Value::Var>) {
            const TypePtr* t = g.lookup(n.name);
            if (!t) fail(ErrorCode::UnboundVar, v->pos, "unbound variable '" + n.name + "'");
            return *t;
          } else if constexpr (std::is_same_v<T, Value::Star>) {
            return t_one();
          } else if constexpr (std::is_same_v<T, Value::PrimApp>) {
            const ValueSig* sig = sigOf(n.op, v->pos);
            TypePtr s = synthValue(g, n.arg);
            if (!mergeable(s, sig->arg))
              fail(ErrorCode::SignatureMismatch, n.arg->pos,
                   "argument of '" + n.op + "' has type " + pretty(s) + ", signature expects " +
                       pretty(sig->arg));
            return sig->res;
          } else if constexpr (std::is_same_v<T, Value::Inl>) {
            if (n.sum) return synthAscribedInjection(g, v, n.val, n.sum, /*left=*/true);
            return t_sum(synthValue(g, n.val), t_unknown());
          } else if constexpr (std::is_same_v<T, Value::Inr>) {
            if (n.sum) return synthAscribedInjection(g, v, n.val, n.sum, /*left=*/false);
            return t_sum(t_unknown(), synthValue(g, n.val));
          } else if constexpr (std::is_same_v<T, Value::Pair>) {
            return t_prod(synthValue(g, n.fst), synthValue(g, n.snd));
          } else { // Lambda
            if (!type_grounded(n.paramType))
              fail(ErrorCode::TypeMismatch, v->pos,
                   "parameter type must be fully determined, got " + pretty(n.paramType));
            requireWellFormedExc(n.exc, v->pos);
            TypePtr b = synthComp(n.exc, g.extend(n.param, n.paramType), n.body);
            return t_fun(n.paramType, n.exc, b);
          }
        },
        v->node);
  }

  TypePtr synthAscribedInjection(const VarContext& g, const ValuePtr& whole,
                                 const ValuePtr& val, const TypePtr& sum, bool left) {
    if (!sum || !type_grounded(sum))
      fail(ErrorCode::TypeMismatch, whole->pos, "ascription must be a fully determined type");
    const auto* s = std::get_if<Type::Sum>(&sum->node);
    if (!s)
      fail(ErrorCode::TypeMismatch, whole->pos,
           "ascription on an injection must be a sum type, got " + pretty(sum));
    TypePtr want = left ? s->lhs : s->rhs;
    TypePtr got = synthValue(g, val);
    if (!mergeable(got, want))
      fail(ErrorCode::TypeMismatch, val->pos,
           "injected value has type " + pretty(got) + ", ascription expects " + pretty(want));
    return sum;
  }

  // expected is fully determined; d is threaded through only for recording.
  void checkValue(const ExcContext& d, const VarContext& g, const ValuePtr& v,
                  const TypePtr& expected) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Value::Inl> || std::is_same_v<T, Value::Inr>) {
            constexpr bool left = std::is_same_v<T, Value::Inl>;
            if (n.sum && !type_equal(n.sum, expected))
              fail(ErrorCode::TypeMismatch, v->pos,
                   "ascribed type " + pretty(n.sum) + " does not match expected " +
                       pretty(expected));
            const auto* s = std::get_if<Type::Sum>(&expected->node);
            if (!s)
              fail(ErrorCode::TypeMismatch, v->pos,
                   std::string(left ? "inl" : "inr") + " value where " + pretty(expected) +
                       " is expected");
            checkValue(d, g, n.val, left ? s->lhs : s->rhs);
          } else if constexpr (std::is_same_v<T, Value::Pair>) {
            const auto* pr = std::get_if<Type::Prod>(&expected->node);
            if (!pr)
              fail(ErrorCode::TypeMismatch, v->pos,
                   "pair where " + pretty(expected) + " is expected");
            checkValue(d, g, n.fst, pr->lhs);
            checkValue(d, g, n.snd, pr->rhs);
          } else if constexpr (std::is_same_v<T, Value::Lambda>) {
            TypePtr s = synthValue(g, v);
            if (!mergeable(s, expected))
              fail(ErrorCode::TypeMismatch, v->pos,
                   "function has type " + pretty(s) + ", expected " + pretty(expected));
            if (record) {
              TypePtr res = std::get<Type::Fun>(expected->node).res;
              checkComp(n.exc, g.extend(n.param, n.paramType), n.body, res);
            }
          } else {
            TypePtr s = synthValue(g, v);
            if (!mergeable(s, expected))
              fail(ErrorCode::TypeMismatch, v->pos,
                   "value has type " + pretty(s) + ", expected " + pretty(expected));
            if constexpr (std::is_same_v<T, Value::PrimApp>) {
              if (record) checkValue(d, g, n.arg, sigOf(n.op, v->pos)->arg);
            }
          }
        },
        v->node);
    note(v.get(), expected, d);
  }

  // -------------------------------------------------------------------
  // computations
  // -------------------------------------------------------------------

  TypePtr synthComp(const ExcContext& d, const VarContext& g, const CompPtr& p) {
    return std::visit(
        [&](const auto& n) -> TypePtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Comp::Ret>) {
            return synthValue(g, n.val);
          } else if constexpr (std::is_same_v<T, Comp::Do>) {
            TypePtr a = synthComp(d, g, n.bound);
            requireGrounded(a, n.bound->pos);
            return synthComp(d, g.extend(n.var, a), n.body);
          } else if constexpr (std::is_same_v<T, Comp::GCase>) {
            const EffectSig* sig = effectSigOf(n.op, p->pos);
            checkOpArgNoRecord(g, n.op, n.arg, sig->arg);
            TypePtr l = synthComp(d, g.extend(n.leftVar, sig->unguardedRes), n.left);
            TypePtr r =
                synthComp(retag_unguarded(d), g.extend(n.rightVar, sig->guardedRes), n.right);
            return joinBranches(l, r, p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Case>) {
            SumParts s = scrutineeSum(g, n.scrutinee);
            TypePtr l = synthComp(d, g.extend(n.leftVar, s.lhs), n.left);
            TypePtr r = synthComp(d, g.extend(n.rightVar, s.rhs), n.right);
            return joinBranches(l, r, p->pos);
          } else if constexpr (std::is_same_v<T, Comp::PCase>) {
            ProdParts pr = scrutineeProd(g, n.scrutinee);
            return synthComp(d, g.extend(n.fstVar, pr.lhs).extend(n.sndVar, pr.rhs), n.body);
          } else if constexpr (std::is_same_v<T, Comp::Init>) {
            checkInit(g, n);
            return t_unknown();
          } else if constexpr (std::is_same_v<T, Comp::Raise>) {
            checkRaise(d, g, p, n);
            return t_unknown();
          } else if constexpr (std::is_same_v<T, Comp::Handle>) {
            requireFreshExc(d, n.exc, p->pos);
            requireGroundedAnnotation(n.payloadType, p->pos);
            TypePtr b =
                synthComp(push_exc(d, n.exc, n.payloadType, ExcTag::Unguarded), g, n.body);
            TypePtr h = synthComp(d, g.extend(n.payloadVar, n.payloadType), n.handler);
            return joinBranches(b, h, p->pos);
          } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
            TypePtr e = loopPayloadType(g, n, p->pos);
            requireFreshExc(d, n.exc, p->pos);
            return synthComp(push_exc(d, n.exc, e, ExcTag::Guarded), g.extend(n.exc, e),
                             n.body);
          } else if constexpr (std::is_same_v<T, Comp::App>) {
            return applyFun(d, g, n, p->pos).res;
          } else if constexpr (std::is_same_v<T, Comp::Ann>) {
            requireGroundedAnnotation(n.type, p->pos);
            checkCompNoRecord(d, g, n.comp, n.type);
            return n.type;
          } else {
            throw std::logic_error("type checker: surface syntax survived desugaring");
          }
        },
        p->node);
  }

  // expected is fully determined.
  void checkComp(const ExcContext& d, const VarContext& g, const CompPtr& p,
                 const TypePtr& expected) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Comp::Ret>) {
            checkValue(d, g, n.val, expected);
          } else if constexpr (std::is_same_v<T, Comp::Do>) {
            TypePtr a = synthComp(d, g, n.bound);
            requireGrounded(a, n.bound->pos);
            checkComp(d, g, n.bound, a);
            checkComp(d, g.extend(n.var, a), n.body, expected);
          } else if constexpr (std::is_same_v<T, Comp::GCase>) {
            const EffectSig* sig = effectSigOf(n.op, p->pos);
            checkOpArgNoRecord(g, n.op, n.arg, sig->arg);
            if (record) checkValue(d, g, n.arg, sig->arg);
            checkComp(d, g.extend(n.leftVar, sig->unguardedRes), n.left, expected);
            checkComp(retag_unguarded(d), g.extend(n.rightVar, sig->guardedRes), n.right,
                      expected);
          } else if constexpr (std::is_same_v<T, Comp::Case>) {
            SumParts s = scrutineeSum(g, n.scrutinee);
            if (record) checkValue(d, g, n.scrutinee, t_sum(s.lhs, s.rhs));
            checkComp(d, g.extend(n.leftVar, s.lhs), n.left, expected);
            checkComp(d, g.extend(n.rightVar, s.rhs), n.right, expected);
          } else if constexpr (std::is_same_v<T, Comp::PCase>) {
            ProdParts pr = scrutineeProd(g, n.scrutinee);
            if (record) checkValue(d, g, n.scrutinee, t_prod(pr.lhs, pr.rhs));
            checkComp(d, g.extend(n.fstVar, pr.lhs).extend(n.sndVar, pr.rhs), n.body,
                      expected);
          } else if constexpr (std::is_same_v<T, Comp::Init>) {
            checkInit(g, n);
            if (record) checkValue(d, g, n.val, t_zero());
          } else if constexpr (std::is_same_v<T, Comp::Raise>) {
            checkRaise(d, g, p, n);
            if (record) checkValue(d, g, n.payload, exc_lookup(d, n.exc)->payload);
          } else if constexpr (std::is_same_v<T, Comp::Handle>) {
            requireFreshExc(d, n.exc, p->pos);
            requireGroundedAnnotation(n.payloadType, p->pos);
            checkComp(push_exc(d, n.exc, n.payloadType, ExcTag::Unguarded), g, n.body,
                      expected);
            checkComp(d, g.extend(n.payloadVar, n.payloadType), n.handler, expected);
          } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
            TypePtr e = loopPayloadType(g, n, p->pos);
            requireFreshExc(d, n.exc, p->pos);
            if (record) checkValue(d, g, n.seed, e);
            checkComp(push_exc(d, n.exc, e, ExcTag::Guarded), g.extend(n.exc, e), n.body,
                      expected);
          } else if constexpr (std::is_same_v<T, Comp::App>) {
            FunParts f = applyFun(d, g, n, p->pos);
            if (!mergeable(f.res, expected))
              fail(ErrorCode::TypeMismatch, p->pos,
                   "application has type " + pretty(f.res) + ", expected " + pretty(expected));
            if (record) {
              checkValue(d, g, n.fn, t_fun(f.arg, f.exc, expected));
              checkValue(d, g, n.arg, f.arg);
            }
          } else if constexpr (std::is_same_v<T, Comp::Ann>) {
            requireGroundedAnnotation(n.type, p->pos);
            if (!type_equal(n.type, expected))
              fail(ErrorCode::TypeMismatch, p->pos,
                   "ascribed type " + pretty(n.type) + " does not match expected " +
                       pretty(expected));
            checkComp(d, g, n.comp, n.type);
          } else {
            throw std::logic_error("type checker: surface syntax survived desugaring");
          }
        },
        p->node);
    note(p.get(), expected, d);
  }

  // -------------------------------------------------------------------
  // shared premises
  // -------------------------------------------------------------------

  void checkCompNoRecord(const ExcContext& d, const VarContext& g, const CompPtr& p,
                         const TypePtr& expected) {
    auto* saved = record;
    record = nullptr;
    try {
      checkComp(d, g, p, expected);
    } catch (...) {
      record = saved;
      throw;
    }
    record = saved;
  }

  const ValueSig* sigOf(const std::string& op, Pos pos) {
    if (const ValueSig* sig = value_sig(prog, op)) return sig;
    if (effect_sig(prog, op))
      fail(ErrorCode::SignatureMismatch, pos,
           "'" + op + "' is an effect operation and cannot appear inside a value");
    fail(ErrorCode::SignatureMismatch, pos, "value operation '" + op + "' is not declared");
  }

  const EffectSig* effectSigOf(const std::string& op, Pos pos) {
    if (const EffectSig* sig = effect_sig(prog, op)) return sig;
    if (value_sig(prog, op))
      fail(ErrorCode::SignatureMismatch, pos,
           "'" + op + "' is a value operation; gcase needs an effect operation");
    fail(ErrorCode::SignatureMismatch, pos, "effect operation '" + op + "' is not declared");
  }

  void checkOpArgNoRecord(const VarContext& g, const std::string& op, const ValuePtr& arg,
                          const TypePtr& want) {
    TypePtr s = synthValue(g, arg);
    if (!mergeable(s, want))
      fail(ErrorCode::SignatureMismatch, arg->pos,
           "argument of '" + op + "' has type " + pretty(s) + ", signature expects " +
               pretty(want));
  }

  void checkInit(const VarContext& g, const Comp::Init& n) {
    TypePtr s = synthValue(g, n.val);
    if (!mergeable(s, t_zero()))
      fail(ErrorCode::TypeMismatch, n.val->pos,
           "init expects a value of the empty type, got " + pretty(s));
  }

  void checkRaise(const ExcContext& d, const VarContext& g, const CompPtr& p,
                  const Comp::Raise& n) {
    const ExcEntry* e = exc_lookup(d, n.exc);
    if (!e) fail(ErrorCode::UnboundExc, p->pos, "exception '" + n.exc + "' is not in scope");
    if (e->tag == ExcTag::Guarded)
      fail(ErrorCode::GuardedRaise, p->pos,
           "exception '" + n.exc +
               "' is guarded here; raising it is only allowed behind a guard");
    TypePtr s = synthValue(g, n.payload);
    if (!mergeable(s, e->payload))
      fail(ErrorCode::TypeMismatch, n.payload->pos,
           "payload of raise_" + n.exc + " has type " + pretty(s) + ", expected " +
               pretty(e->payload));
  }

  SumParts scrutineeSum(const VarContext& g, const ValuePtr& scrutinee) {
    TypePtr s = synthValue(g, scrutinee);
    const auto* sum = std::get_if<Type::Sum>(&s->node);
    if (!sum)
      fail(ErrorCode::TypeMismatch, scrutinee->pos,
           "case scrutinee must have a sum type, got " + pretty(s));
    requireGrounded(s, scrutinee->pos);
    return SumParts{sum->lhs, sum->rhs};
  }

  ProdParts scrutineeProd(const VarContext& g, const ValuePtr& scrutinee) {
    TypePtr s = synthValue(g, scrutinee);
    const auto* pr = std::get_if<Type::Prod>(&s->node);
    if (!pr)
      fail(ErrorCode::TypeMismatch, scrutinee->pos,
           "pcase scrutinee must have a product type, got " + pretty(s));
    requireGrounded(s, scrutinee->pos);
    return ProdParts{pr->lhs, pr->rhs};
  }

  TypePtr loopPayloadType(const VarContext& g, const Comp::HandleIt& n, Pos pos) {
    if (n.payloadType) {
      requireGroundedAnnotation(n.payloadType, pos);
      TypePtr s = synthValue(g, n.seed);
      if (!mergeable(s, n.payloadType))
        fail(ErrorCode::TypeMismatch, n.seed->pos,
             "loop seed has type " + pretty(s) + ", expected " + pretty(n.payloadType));
      return n.payloadType;
    }
    TypePtr s = synthValue(g, n.seed);
    if (!type_grounded(s))
      fail(ErrorCode::TypeMismatch, n.seed->pos,
           "cannot infer the loop payload type from this seed (got " + pretty(s) +
               "); annotate the loop exception");
    return s;
  }

  template <typename AppNode>
  FunParts applyFun(const ExcContext& d, const VarContext& g, const AppNode& n, Pos pos) {
    TypePtr fty = synthValue(g, n.fn);
    const auto* f = std::get_if<Type::Fun>(&fty->node);
    if (!f)
      fail(ErrorCode::TypeMismatch, n.fn->pos,
           "application of a non-function (type " + pretty(fty) + ")");
    if (!exc_equal(f->exc, d)) {
      if (exc_equal_erased(f->exc, d))
        fail(ErrorCode::TagMismatch, pos,
             "function expects exception context [" + pretty(f->exc) +
                 "] but the call site tags differ: [" + pretty(d) + "]");
      fail(ErrorCode::ExcContextMismatch, pos,
           "function expects exception context [" + pretty(f->exc) + "], call site has [" +
               pretty(d) + "]");
    }
    TypePtr s = synthValue(g, n.arg);
    if (!mergeable(s, f->arg))
      fail(ErrorCode::TypeMismatch, n.arg->pos,
           "argument has type " + pretty(s) + ", expected " + pretty(f->arg));
    return FunParts{f->arg, f->exc, f->res};
  }

  TypePtr joinBranches(const TypePtr& l, const TypePtr& r, Pos pos) {
    TypePtr m = merge(l, r);
    if (!m)
      fail(ErrorCode::TypeMismatch, pos, "branches disagree: " + pretty(l) + " vs " + pretty(r));
    return m;
  }

  void requireGrounded(const TypePtr& t, Pos pos) {
    if (!type_grounded(t))
      fail(ErrorCode::TypeMismatch, pos,
           "cannot infer a complete type here (got " + pretty(t) + "); add an ascription");
  }

  void requireGroundedAnnotation(const TypePtr& t, Pos pos) {
    if (!t || !type_grounded(t))
      fail(ErrorCode::TypeMismatch, pos, "annotation must be a fully determined type");
  }

  void requireFreshExc(const ExcContext& d, const std::string& name, Pos pos) {
    if (exc_lookup(d, name))
      fail(ErrorCode::ExcContextMismatch, pos,
           "exception '" + name + "' is already in scope and cannot be redeclared");
  }

  void requireWellFormedExc(const ExcContext& d, Pos pos) {
    for (size_t i = 0; i < d.size(); ++i) {
      if (!d[i].payload || !type_grounded(d[i].payload))
        fail(ErrorCode::TypeMismatch, pos, "exception payload type must be fully determined");
      for (size_t j = i + 1; j < d.size(); ++j)
        if (d[i].name == d[j].name)
          fail(ErrorCode::ExcContextMismatch, pos,
               "exception '" + d[i].name + "' declared twice in one context");
    }
  }
};

} // namespace

TypePtr infer_value(const Program& sigs, const VarContext& gamma, const ValuePtr& v) {
  Checker ck{sigs};
  TypePtr t = ck.synthValue(gamma, v);
  if (!type_grounded(t))
    throw TypeError(ErrorCode::TypeMismatch, v->pos,
                    "cannot infer the type of this value (got " + pretty(t) +
                        "); add an ascription");
  return t;
}

void check_comp(const Program& sigs, const ExcContext& delta, const VarContext& gamma,
                const CompPtr& p, const TypePtr& expected) {
  if (!is_core(p))
    throw std::logic_error("check_comp: computation contains surface syntax; desugar first");
  Checker ck{sigs};
  ck.requireWellFormedExc(delta, p->pos);
  ck.requireGroundedAnnotation(expected, p->pos);
  ck.checkComp(delta, gamma, p, expected);
}

TypedProgram check_program(const Program& prog) {
  if (!prog.main) throw std::logic_error("check_program: program has no main computation");
  if (!is_core(prog.main))
    throw std::logic_error("check_program: program contains surface syntax; desugar first");
  Checker ck{prog};
  ck.requireWellFormedExc(prog.mainExc, prog.main->pos);
  VarContext empty;
  TypePtr a = ck.synthComp(prog.mainExc, empty, prog.main);
  if (!type_grounded(a))
    throw TypeError(ErrorCode::TypeMismatch, prog.main->pos,
                    "cannot infer the type of main (got " + pretty(a) + "); add an ascription");
  TypedProgram tp;
  tp.program = prog;
  tp.mainType = a;
  ck.record = &tp.info;
  ck.checkComp(prog.mainExc, empty, prog.main, a);
  return tp;
}

} // namespace gml
