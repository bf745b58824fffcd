#include "gml/ast.hpp"

#include <algorithm>
#include <map>

namespace gml {

TypePtr t_base(std::string name) { return std::make_shared<Type>(Type{Type::Base{std::move(name)}}); }
TypePtr t_zero() {
  static const TypePtr t = std::make_shared<Type>(Type{Type::Zero{}});
  return t;
}
TypePtr t_one() {
  static const TypePtr t = std::make_shared<Type>(Type{Type::One{}});
  return t;
}
TypePtr t_nat() {
  static const TypePtr t = std::make_shared<Type>(Type{Type::Nat{}});
  return t;
}
TypePtr t_sum(TypePtr lhs, TypePtr rhs) {
  return std::make_shared<Type>(Type{Type::Sum{std::move(lhs), std::move(rhs)}});
}
TypePtr t_prod(TypePtr lhs, TypePtr rhs) {
  return std::make_shared<Type>(Type{Type::Prod{std::move(lhs), std::move(rhs)}});
}
TypePtr t_fun(TypePtr arg, ExcContext exc, TypePtr res) {
  return std::make_shared<Type>(Type{Type::Fun{std::move(arg), std::move(exc), std::move(res)}});
}

TypePtr t_unknown() {
  static const TypePtr hole = std::make_shared<Type>(Type{Type::Unknown{}});
  return hole;
}

bool type_grounded(const TypePtr& a) {
  if (!a) return false;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Type::Unknown>) {
          return false;
        } else if constexpr (std::is_same_v<T, Type::Sum> || std::is_same_v<T, Type::Prod>) {
          return type_grounded(x.lhs) && type_grounded(x.rhs);
        } else if constexpr (std::is_same_v<T, Type::Fun>) {
          if (!type_grounded(x.arg) || !type_grounded(x.res)) return false;
          for (const auto& e : x.exc)
            if (!type_grounded(e.payload)) return false;
          return true;
        } else {
          return true;
        }
      },
      a->node);
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Type::Base>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Type::Sum> || std::is_same_v<T, Type::Prod>) {
          return type_equal(x.lhs, y.lhs) && type_equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Type::Fun>) {
          return type_equal(x.arg, y.arg) && exc_equal(x.exc, y.exc) && type_equal(x.res, y.res);
        } else {
          return true;
        }
      },
      a->node);
}

bool exc_equal(const ExcContext& a, const ExcContext& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].tag != b[i].tag || !type_equal(a[i].payload, b[i].payload))
      return false;
  }
  return true;
}

bool exc_equal_erased(const ExcContext& a, const ExcContext& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || !type_equal(a[i].payload, b[i].payload)) return false;
  }
  return true;
}

bool first_order(const TypePtr& a) {
  if (!a) return false;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Type::Sum> || std::is_same_v<T, Type::Prod>) {
          return first_order(x.lhs) && first_order(x.rhs);
        } else if constexpr (std::is_same_v<T, Type::Fun>) {
          return false;
        } else {
          return true;
        }
      },
      a->node);
}

const ExcEntry* exc_lookup(const ExcContext& d, const std::string& name) {
  for (const auto& e : d)
    if (e.name == name) return &e;
  return nullptr;
}

// ---------------------------------------------------------------------------

ValuePtr v_var(std::string name, Pos pos) {
  return std::make_shared<Value>(Value{Value::Var{std::move(name)}, pos});
}
ValuePtr v_star(Pos pos) { return std::make_shared<Value>(Value{Value::Star{}, pos}); }
ValuePtr v_prim(std::string op, ValuePtr arg, Pos pos) {
  return std::make_shared<Value>(Value{Value::PrimApp{std::move(op), std::move(arg)}, pos});
}
ValuePtr v_inl(ValuePtr val, TypePtr sum, Pos pos) {
  return std::make_shared<Value>(Value{Value::Inl{std::move(val), std::move(sum)}, pos});
}
ValuePtr v_inr(ValuePtr val, TypePtr sum, Pos pos) {
  return std::make_shared<Value>(Value{Value::Inr{std::move(val), std::move(sum)}, pos});
}
ValuePtr v_pair(ValuePtr fst, ValuePtr snd, Pos pos) {
  return std::make_shared<Value>(Value{Value::Pair{std::move(fst), std::move(snd)}, pos});
}
ValuePtr v_lambda(std::string param, TypePtr paramType, ExcContext exc, CompPtr body, Pos pos) {
  return std::make_shared<Value>(
      Value{Value::Lambda{std::move(param), std::move(paramType), std::move(exc), std::move(body)}, pos});
}
ValuePtr v_nat(std::uint64_t n, Pos pos) {
  ValuePtr v = v_prim("zero", v_star(pos), pos);
  for (std::uint64_t i = 0; i < n; ++i) v = v_prim("succ", v, pos);
  return v;
}

CompPtr c_ret(ValuePtr val, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::Ret{std::move(val)}, pos});
}
CompPtr c_do(std::string var, CompPtr bound, CompPtr body, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::Do{std::move(var), std::move(bound), std::move(body)}, pos});
}
CompPtr c_gcase(std::string op, ValuePtr arg, std::string leftVar, CompPtr left,
                std::string rightVar, CompPtr right, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::GCase{std::move(op), std::move(arg), std::move(leftVar),
                                                 std::move(left), std::move(rightVar), std::move(right)},
                                     pos});
}
CompPtr c_case(ValuePtr scrutinee, std::string leftVar, CompPtr left, std::string rightVar,
               CompPtr right, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::Case{std::move(scrutinee), std::move(leftVar), std::move(left),
                                                std::move(rightVar), std::move(right)},
                                     pos});
}
CompPtr c_pcase(ValuePtr scrutinee, std::string fstVar, std::string sndVar, CompPtr body, Pos pos) {
  return std::make_shared<Comp>(
      Comp{Comp::PCase{std::move(scrutinee), std::move(fstVar), std::move(sndVar), std::move(body)}, pos});
}
CompPtr c_init(ValuePtr val, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::Init{std::move(val)}, pos});
}
CompPtr c_raise(std::string exc, ValuePtr payload, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::Raise{std::move(exc), std::move(payload)}, pos});
}
CompPtr c_handle(std::string exc, TypePtr payloadType, CompPtr body, std::string payloadVar,
                 CompPtr handler, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::Handle{std::move(exc), std::move(payloadType), std::move(body),
                                                  std::move(payloadVar), std::move(handler)},
                                     pos});
}
CompPtr c_handleit(ValuePtr seed, std::string exc, TypePtr payloadType, CompPtr body, Pos pos) {
  return std::make_shared<Comp>(
      Comp{Comp::HandleIt{std::move(seed), std::move(exc), std::move(payloadType), std::move(body)}, pos});
}
CompPtr c_app(ValuePtr fn, ValuePtr arg, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::App{std::move(fn), std::move(arg)}, pos});
}
CompPtr c_ann(CompPtr comp, TypePtr type, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::Ann{std::move(comp), std::move(type)}, pos});
}
CompPtr c_if(ValuePtr cond, CompPtr thenBranch, CompPtr elseBranch, Pos pos) {
  return std::make_shared<Comp>(
      Comp{Comp::SIf{std::move(cond), std::move(thenBranch), std::move(elseBranch)}, pos});
}
CompPtr c_guard(std::string op, ValuePtr arg, CompPtr rest, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::SGuard{std::move(op), std::move(arg), std::move(rest)}, pos});
}
CompPtr c_call(std::string op, ValuePtr arg, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::SCall{std::move(op), std::move(arg)}, pos});
}
CompPtr c_try(std::string var, CompPtr bound, CompPtr body, std::string exc, TypePtr payloadType,
              CompPtr handler, Pos pos) {
  return std::make_shared<Comp>(Comp{Comp::STry{std::move(var), std::move(bound), std::move(body),
                                                std::move(exc), std::move(payloadType),
                                                std::move(handler)},
                                     pos});
}

std::optional<std::uint64_t> as_numeral(const ValuePtr& v) {
  std::uint64_t n = 0;
  const Value* cur = v.get();
  for (;;) {
    const auto* app = std::get_if<Value::PrimApp>(&cur->node);
    if (!app) return std::nullopt;
    if (app->op == "succ") {
      ++n;
      cur = app->arg.get();
      continue;
    }
    if (app->op == "zero" && std::holds_alternative<Value::Star>(app->arg->node)) return n;
    return std::nullopt;
  }
}

static bool value_is_core(const ValuePtr& v);

bool is_core(const CompPtr& p) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comp::SIf> || std::is_same_v<T, Comp::SGuard> ||
                      std::is_same_v<T, Comp::SCall> || std::is_same_v<T, Comp::STry>) {
          return false;
        } else if constexpr (std::is_same_v<T, Comp::Ret>) {
          return value_is_core(n.val);
        } else if constexpr (std::is_same_v<T, Comp::Do>) {
          return is_core(n.bound) && is_core(n.body);
        } else if constexpr (std::is_same_v<T, Comp::GCase>) {
          return value_is_core(n.arg) && is_core(n.left) && is_core(n.right);
        } else if constexpr (std::is_same_v<T, Comp::Case>) {
          return value_is_core(n.scrutinee) && is_core(n.left) && is_core(n.right);
        } else if constexpr (std::is_same_v<T, Comp::PCase>) {
          return value_is_core(n.scrutinee) && is_core(n.body);
        } else if constexpr (std::is_same_v<T, Comp::Init>) {
          return value_is_core(n.val);
        } else if constexpr (std::is_same_v<T, Comp::Raise>) {
          return value_is_core(n.payload);
        } else if constexpr (std::is_same_v<T, Comp::Handle>) {
          return is_core(n.body) && is_core(n.handler);
        } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
          return value_is_core(n.seed) && is_core(n.body);
        } else if constexpr (std::is_same_v<T, Comp::App>) {
          return value_is_core(n.fn) && value_is_core(n.arg);
        } else { // Ann
          return is_core(n.comp);
        }
      },
      p->node);
}

static bool value_is_core(const ValuePtr& v) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Value::PrimApp>) {
          return value_is_core(n.arg);
        } else if constexpr (std::is_same_v<T, Value::Inl> || std::is_same_v<T, Value::Inr>) {
          return value_is_core(n.val);
        } else if constexpr (std::is_same_v<T, Value::Pair>) {
          return value_is_core(n.fst) && value_is_core(n.snd);
        } else if constexpr (std::is_same_v<T, Value::Lambda>) {
          return is_core(n.body);
        } else {
          return true;
        }
      },
      v->node);
}

// ---------------------------------------------------------------------------
// alpha-equivalence: bound names matched positionally via rename maps
// ---------------------------------------------------------------------------

namespace {

struct AlphaEnv {
  std::map<std::string, std::string> left;  // left name -> canonical
  std::map<std::string, std::string> right; // right name -> canonical
  std::map<std::string, std::string> excLeft;
  std::map<std::string, std::string> excRight;
  int next = 0;

  AlphaEnv bind(const std::string& a, const std::string& b) const {
    AlphaEnv e = *this;
    std::string canon = "#" + std::to_string(e.next++);
    e.left[a] = canon;
    e.right[b] = canon;
    return e;
  }
  // handle/handleit scope exception names like binders
  AlphaEnv bindExc(const std::string& a, const std::string& b) const {
    AlphaEnv e = *this;
    std::string canon = "#" + std::to_string(e.next++);
    e.excLeft[a] = canon;
    e.excRight[b] = canon;
    return e;
  }
  static bool same(const std::map<std::string, std::string>& l,
                   const std::map<std::string, std::string>& r, const std::string& a,
                   const std::string& b) {
    auto la = l.find(a);
    auto rb = r.find(b);
    if (la != l.end() || rb != r.end()) {
      return la != l.end() && rb != r.end() && la->second == rb->second;
    }
    return a == b; // both free
  }
  bool sameVar(const std::string& a, const std::string& b) const {
    return same(left, right, a, b);
  }
  bool sameExc(const std::string& a, const std::string& b) const {
    return same(excLeft, excRight, a, b);
  }
};

bool alpha_v(const ValuePtr& a, const ValuePtr& b, const AlphaEnv& env);
bool alpha_c(const CompPtr& a, const CompPtr& b, const AlphaEnv& env);

bool alpha_v(const ValuePtr& a, const ValuePtr& b, const AlphaEnv& env) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Value::Var>) {
          return env.sameVar(x.name, y.name);
        } else if constexpr (std::is_same_v<T, Value::Star>) {
          return true;
        } else if constexpr (std::is_same_v<T, Value::PrimApp>) {
          return x.op == y.op && alpha_v(x.arg, y.arg, env);
        } else if constexpr (std::is_same_v<T, Value::Inl> || std::is_same_v<T, Value::Inr>) {
          if ((x.sum == nullptr) != (y.sum == nullptr)) return false;
          if (x.sum && !type_equal(x.sum, y.sum)) return false;
          return alpha_v(x.val, y.val, env);
        } else if constexpr (std::is_same_v<T, Value::Pair>) {
          return alpha_v(x.fst, y.fst, env) && alpha_v(x.snd, y.snd, env);
        } else { // Lambda
          if (!type_equal(x.paramType, y.paramType) || !exc_equal(x.exc, y.exc)) return false;
          // the annotation redeclares its exception names for the body
          AlphaEnv inner = env.bind(x.param, y.param);
          for (const auto& e : x.exc) inner = inner.bindExc(e.name, e.name);
          return alpha_c(x.body, y.body, inner);
        }
      },
      a->node);
}

bool alpha_c(const CompPtr& a, const CompPtr& b, const AlphaEnv& env) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Comp::Ret>) {
          return alpha_v(x.val, y.val, env);
        } else if constexpr (std::is_same_v<T, Comp::Do>) {
          return alpha_c(x.bound, y.bound, env) &&
                 alpha_c(x.body, y.body, env.bind(x.var, y.var));
        } else if constexpr (std::is_same_v<T, Comp::GCase>) {
          return x.op == y.op && alpha_v(x.arg, y.arg, env) &&
                 alpha_c(x.left, y.left, env.bind(x.leftVar, y.leftVar)) &&
                 alpha_c(x.right, y.right, env.bind(x.rightVar, y.rightVar));
        } else if constexpr (std::is_same_v<T, Comp::Case>) {
          return alpha_v(x.scrutinee, y.scrutinee, env) &&
                 alpha_c(x.left, y.left, env.bind(x.leftVar, y.leftVar)) &&
                 alpha_c(x.right, y.right, env.bind(x.rightVar, y.rightVar));
        } else if constexpr (std::is_same_v<T, Comp::PCase>) {
          return alpha_v(x.scrutinee, y.scrutinee, env) &&
                 alpha_c(x.body, y.body, env.bind(x.fstVar, y.fstVar).bind(x.sndVar, y.sndVar));
        } else if constexpr (std::is_same_v<T, Comp::Init>) {
          return alpha_v(x.val, y.val, env);
        } else if constexpr (std::is_same_v<T, Comp::Raise>) {
          return env.sameExc(x.exc, y.exc) && alpha_v(x.payload, y.payload, env);
        } else if constexpr (std::is_same_v<T, Comp::Handle>) {
          return type_equal(x.payloadType, y.payloadType) &&
                 alpha_c(x.body, y.body, env.bindExc(x.exc, y.exc)) &&
                 alpha_c(x.handler, y.handler, env.bind(x.payloadVar, y.payloadVar));
        } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
          return type_equal(x.payloadType, y.payloadType) && alpha_v(x.seed, y.seed, env) &&
                 alpha_c(x.body, y.body, env.bind(x.exc, y.exc).bindExc(x.exc, y.exc));
        } else if constexpr (std::is_same_v<T, Comp::App>) {
          return alpha_v(x.fn, y.fn, env) && alpha_v(x.arg, y.arg, env);
        } else if constexpr (std::is_same_v<T, Comp::Ann>) {
          return type_equal(x.type, y.type) && alpha_c(x.comp, y.comp, env);
        } else if constexpr (std::is_same_v<T, Comp::SIf>) {
          return alpha_v(x.cond, y.cond, env) && alpha_c(x.thenBranch, y.thenBranch, env) &&
                 alpha_c(x.elseBranch, y.elseBranch, env);
        } else if constexpr (std::is_same_v<T, Comp::SGuard>) {
          return x.op == y.op && alpha_v(x.arg, y.arg, env) && alpha_c(x.rest, y.rest, env);
        } else if constexpr (std::is_same_v<T, Comp::SCall>) {
          return x.op == y.op && alpha_v(x.arg, y.arg, env);
        } else { // STry
          return type_equal(x.payloadType, y.payloadType) &&
                 alpha_c(x.bound, y.bound, env.bindExc(x.exc, y.exc)) &&
                 alpha_c(x.body, y.body, env.bind(x.var, y.var)) &&
                 alpha_c(x.handler, y.handler, env.bind(x.exc, y.exc));
        }
      },
      a->node);
}

} // namespace

bool alpha_equal(const ValuePtr& a, const ValuePtr& b) { return alpha_v(a, b, AlphaEnv{}); }
bool alpha_equal(const CompPtr& a, const CompPtr& b) { return alpha_c(a, b, AlphaEnv{}); }

// ---------------------------------------------------------------------------

void add_builtin_sigs(Program& prog) {
  prog.valueSigs.push_back({"zero", t_one(), t_nat(), {}, true});
  prog.valueSigs.push_back({"succ", t_nat(), t_nat(), {}, true});
  prog.effectSigs.push_back({"pred", t_nat(), t_sum(t_one(), t_nat()), t_zero(), {}, true});
  prog.effectSigs.push_back({"put", t_nat(), t_zero(), t_one(), {}, true});
}

const ValueSig* value_sig(const Program& prog, const std::string& name) {
  for (const auto& s : prog.valueSigs)
    if (s.name == name) return &s;
  return nullptr;
}

const EffectSig* effect_sig(const Program& prog, const std::string& name) {
  for (const auto& s : prog.effectSigs)
    if (s.name == name) return &s;
  return nullptr;
}

} // namespace gml
