#include "gml/subst.hpp"

namespace gml {

namespace {

void fvValue(const ValuePtr& v, std::set<std::string>& bound, std::set<std::string>& out);
void fvComp(const CompPtr& p, std::set<std::string>& bound, std::set<std::string>& out);

// Runs f with name temporarily added to bound (respecting shadowing).
template <typename F>
void withBound(std::set<std::string>& bound, const std::string& name, F f) {
  bool fresh = bound.insert(name).second;
  f();
  if (fresh) bound.erase(name);
}

void fvValue(const ValuePtr& v, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Value::Var>) {
          if (!bound.count(n.name)) out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Value::PrimApp>) {
          fvValue(n.arg, bound, out);
        } else if constexpr (std::is_same_v<T, Value::Inl> || std::is_same_v<T, Value::Inr>) {
          fvValue(n.val, bound, out);
        } else if constexpr (std::is_same_v<T, Value::Pair>) {
          fvValue(n.fst, bound, out);
          fvValue(n.snd, bound, out);
        } else if constexpr (std::is_same_v<T, Value::Lambda>) {
          withBound(bound, n.param, [&] { fvComp(n.body, bound, out); });
        }
      },
      v->node);
}

void fvComp(const CompPtr& p, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comp::Ret> || std::is_same_v<T, Comp::Init>) {
          fvValue(n.val, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::Do>) {
          fvComp(n.bound, bound, out);
          withBound(bound, n.var, [&] { fvComp(n.body, bound, out); });
        } else if constexpr (std::is_same_v<T, Comp::GCase>) {
          fvValue(n.arg, bound, out);
          withBound(bound, n.leftVar, [&] { fvComp(n.left, bound, out); });
          withBound(bound, n.rightVar, [&] { fvComp(n.right, bound, out); });
        } else if constexpr (std::is_same_v<T, Comp::Case>) {
          fvValue(n.scrutinee, bound, out);
          withBound(bound, n.leftVar, [&] { fvComp(n.left, bound, out); });
          withBound(bound, n.rightVar, [&] { fvComp(n.right, bound, out); });
        } else if constexpr (std::is_same_v<T, Comp::PCase>) {
          fvValue(n.scrutinee, bound, out);
          withBound(bound, n.fstVar, [&] {
            withBound(bound, n.sndVar, [&] { fvComp(n.body, bound, out); });
          });
        } else if constexpr (std::is_same_v<T, Comp::Raise>) {
          fvValue(n.payload, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::Handle>) {
          fvComp(n.body, bound, out);
          withBound(bound, n.payloadVar, [&] { fvComp(n.handler, bound, out); });
        } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
          fvValue(n.seed, bound, out);
          withBound(bound, n.exc, [&] { fvComp(n.body, bound, out); });
        } else if constexpr (std::is_same_v<T, Comp::App>) {
          fvValue(n.fn, bound, out);
          fvValue(n.arg, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::Ann>) {
          fvComp(n.comp, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::SIf>) {
          fvValue(n.cond, bound, out);
          fvComp(n.thenBranch, bound, out);
          fvComp(n.elseBranch, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::SGuard>) {
          fvValue(n.arg, bound, out);
          fvComp(n.rest, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::SCall>) {
          fvValue(n.arg, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::STry>) {
          fvComp(n.bound, bound, out);
          withBound(bound, n.var, [&] { fvComp(n.body, bound, out); });
          withBound(bound, n.exc, [&] { fvComp(n.handler, bound, out); });
        }
      },
      p->node);
}

void fexc(const CompPtr& p, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comp::Raise>) {
          if (!bound.count(n.exc)) out.insert(n.exc);
        } else if constexpr (std::is_same_v<T, Comp::Do>) {
          fexc(n.bound, bound, out);
          fexc(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::GCase>) {
          fexc(n.left, bound, out);
          fexc(n.right, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::Case>) {
          fexc(n.left, bound, out);
          fexc(n.right, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::PCase>) {
          fexc(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::Handle>) {
          withBound(bound, n.exc, [&] { fexc(n.body, bound, out); });
          fexc(n.handler, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
          withBound(bound, n.exc, [&] { fexc(n.body, bound, out); });
        } else if constexpr (std::is_same_v<T, Comp::Ann>) {
          fexc(n.comp, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::SIf>) {
          fexc(n.thenBranch, bound, out);
          fexc(n.elseBranch, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::SGuard>) {
          fexc(n.rest, bound, out);
        } else if constexpr (std::is_same_v<T, Comp::STry>) {
          withBound(bound, n.exc, [&] { fexc(n.bound, bound, out); });
          fexc(n.body, bound, out);
          fexc(n.handler, bound, out);
        }
        // Ret/Init/Raise payloads, App, SCall: values cannot raise; lambda
        // bodies resolve raises against their own annotation.
      },
      p->node);
}

// Renames free occurrences of an exception name; value variables untouched.
CompPtr renameExc(const CompPtr& p, const std::string& from, const std::string& to);

ValuePtr renameExcV(const ValuePtr& v, const std::string&, const std::string&) {
  return v; // values carry no free exception references
}

CompPtr renameExc(const CompPtr& p, const std::string& from, const std::string& to) {
  auto re = [&](const CompPtr& q) { return renameExc(q, from, to); };
  return std::visit(
      [&](const auto& n) -> CompPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comp::Ret> || std::is_same_v<T, Comp::Init> ||
                      std::is_same_v<T, Comp::App> || std::is_same_v<T, Comp::SCall>) {
          return p;
        } else if constexpr (std::is_same_v<T, Comp::Raise>) {
          if (n.exc != from) return p;
          return c_raise(to, n.payload, p->pos);
        } else if constexpr (std::is_same_v<T, Comp::Do>) {
          return c_do(n.var, re(n.bound), re(n.body), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::GCase>) {
          return c_gcase(n.op, n.arg, n.leftVar, re(n.left), n.rightVar, re(n.right), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::Case>) {
          return c_case(n.scrutinee, n.leftVar, re(n.left), n.rightVar, re(n.right), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::PCase>) {
          return c_pcase(n.scrutinee, n.fstVar, n.sndVar, re(n.body), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::Handle>) {
          CompPtr body = n.exc == from ? n.body : re(n.body);
          return c_handle(n.exc, n.payloadType, body, n.payloadVar, re(n.handler), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
          CompPtr body = n.exc == from ? n.body : re(n.body);
          return c_handleit(n.seed, n.exc, n.payloadType, body, p->pos);
        } else if constexpr (std::is_same_v<T, Comp::Ann>) {
          return c_ann(re(n.comp), n.type, p->pos);
        } else if constexpr (std::is_same_v<T, Comp::SIf>) {
          return c_if(n.cond, re(n.thenBranch), re(n.elseBranch), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::SGuard>) {
          return c_guard(n.op, n.arg, re(n.rest), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::STry>) {
          CompPtr bound = n.exc == from ? n.bound : re(n.bound);
          return c_try(n.var, bound, re(n.body), n.exc, n.payloadType, re(n.handler), p->pos);
        }
      },
      p->node);
}

struct Substituter {
  ValuePtr value(const ValuePtr& v, const Subst& s) {
    if (s.empty()) return v;
    return std::visit(
        [&](const auto& n) -> ValuePtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Value::Var>) {
            auto it = s.find(n.name);
            return it != s.end() ? it->second : v;
          } else if constexpr (std::is_same_v<T, Value::Star>) {
            return v;
          } else if constexpr (std::is_same_v<T, Value::PrimApp>) {
            return v_prim(n.op, value(n.arg, s), v->pos);
          } else if constexpr (std::is_same_v<T, Value::Inl>) {
            return v_inl(value(n.val, s), n.sum, v->pos);
          } else if constexpr (std::is_same_v<T, Value::Inr>) {
            return v_inr(value(n.val, s), n.sum, v->pos);
          } else if constexpr (std::is_same_v<T, Value::Pair>) {
            return v_pair(value(n.fst, s), value(n.snd, s), v->pos);
          } else if constexpr (std::is_same_v<T, Value::Lambda>) {
            auto [b, s2] = binder(n.param, s, {n.body});
            CompPtr body = n.body;
            if (b != n.param) body = renameVar(body, n.param, b);
            return v_lambda(b, n.paramType, n.exc, comp(body, s2), v->pos);
          }
        },
        v->node);
  }

  CompPtr comp(const CompPtr& p, const Subst& s) {
    if (s.empty()) return p;
    auto sv = [&](const ValuePtr& v) { return value(v, s); };
    return std::visit(
        [&](const auto& n) -> CompPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Comp::Ret>) {
            return c_ret(sv(n.val), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Init>) {
            return c_init(sv(n.val), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Do>) {
            CompPtr bound = comp(n.bound, s);
            auto [b, s2] = binder(n.var, s, {n.body});
            CompPtr body = n.body;
            if (b != n.var) body = renameVar(body, n.var, b);
            return c_do(b, bound, comp(body, s2), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::GCase>) {
            auto [lb, ls] = binder(n.leftVar, s, {n.left});
            CompPtr left = lb != n.leftVar ? renameVar(n.left, n.leftVar, lb) : n.left;
            auto [rb, rs] = binder(n.rightVar, s, {n.right});
            CompPtr right = rb != n.rightVar ? renameVar(n.right, n.rightVar, rb) : n.right;
            return c_gcase(n.op, sv(n.arg), lb, comp(left, ls), rb, comp(right, rs), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Case>) {
            auto [lb, ls] = binder(n.leftVar, s, {n.left});
            CompPtr left = lb != n.leftVar ? renameVar(n.left, n.leftVar, lb) : n.left;
            auto [rb, rs] = binder(n.rightVar, s, {n.right});
            CompPtr right = rb != n.rightVar ? renameVar(n.right, n.rightVar, rb) : n.right;
            return c_case(sv(n.scrutinee), lb, comp(left, ls), rb, comp(right, rs), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::PCase>) {
            auto [fb, fs] = binder(n.fstVar, s, {n.body});
            CompPtr body = fb != n.fstVar ? renameVar(n.body, n.fstVar, fb) : n.body;
            auto [sb, ss] = binder(n.sndVar, fs, {body});
            if (sb != n.sndVar) body = renameVar(body, n.sndVar, sb);
            return c_pcase(sv(n.scrutinee), fb, sb, comp(body, ss), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Raise>) {
            return c_raise(n.exc, sv(n.payload), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Handle>) {
            CompPtr body = comp(n.body, s);
            auto [b, s2] = binder(n.payloadVar, s, {n.handler});
            CompPtr handler = n.handler;
            if (b != n.payloadVar) handler = renameVar(handler, n.payloadVar, b);
            return c_handle(n.exc, n.payloadType, body, b, comp(handler, s2), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
            auto [b, s2] = binder(n.exc, s, {n.body});
            CompPtr body = n.body;
            if (b != n.exc) {
              body = renameVar(body, n.exc, b);
              body = renameExc(body, n.exc, b);
            }
            return c_handleit(sv(n.seed), b, n.payloadType, comp(body, s2), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::App>) {
            return c_app(sv(n.fn), sv(n.arg), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::Ann>) {
            return c_ann(comp(n.comp, s), n.type, p->pos);
          } else if constexpr (std::is_same_v<T, Comp::SIf>) {
            return c_if(sv(n.cond), comp(n.thenBranch, s), comp(n.elseBranch, s), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::SGuard>) {
            return c_guard(n.op, sv(n.arg), comp(n.rest, s), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::SCall>) {
            return c_call(n.op, sv(n.arg), p->pos);
          } else if constexpr (std::is_same_v<T, Comp::STry>) {
            CompPtr bound = n.bound;
            auto [vb, vs] = binder(n.var, s, {n.body});
            CompPtr body = vb != n.var ? renameVar(n.body, n.var, vb) : n.body;
            auto [eb, es] = binder(n.exc, s, {n.handler, n.bound});
            CompPtr handler = n.handler;
            if (eb != n.exc) {
              handler = renameVar(handler, n.exc, eb);
              bound = renameExc(bound, n.exc, eb);
            }
            return c_try(vb, comp(bound, s), comp(body, vs), eb, n.payloadType,
                         comp(handler, es), p->pos);
          }
        },
        p->node);
  }

private:
  // Drops the shadowed entry and freshens the binder if any remaining image
  // mentions it free.
  std::pair<std::string, Subst> binder(const std::string& name, const Subst& s,
                                       std::vector<CompPtr> scope) {
    Subst pruned;
    bool capture = false;
    std::set<std::string> avoid;
    for (const auto& [k, img] : s) {
      if (k == name) continue;
      pruned.emplace(k, img);
      std::set<std::string> fv = free_vars(img);
      if (fv.count(name)) capture = true;
      avoid.insert(fv.begin(), fv.end());
      avoid.insert(k);
    }
    if (!capture || pruned.empty()) return {name, std::move(pruned)};
    for (const auto& c : scope) {
      auto fv = free_vars(c);
      avoid.insert(fv.begin(), fv.end());
      auto fe = free_exc_names(c);
      avoid.insert(fe.begin(), fe.end());
    }
    avoid.insert(name);
    return {fresh_name(name, avoid), std::move(pruned)};
  }

  CompPtr renameVar(const CompPtr& p, const std::string& from, const std::string& to) {
    Subst one;
    one.emplace(from, v_var(to));
    return comp(p, one);
  }
};

} // namespace

std::set<std::string> free_vars(const ValuePtr& v) {
  std::set<std::string> bound, out;
  fvValue(v, bound, out);
  return out;
}

std::set<std::string> free_vars(const CompPtr& p) {
  std::set<std::string> bound, out;
  fvComp(p, bound, out);
  return out;
}

std::set<std::string> free_exc_names(const CompPtr& p) {
  std::set<std::string> bound, out;
  fexc(p, bound, out);
  return out;
}

ValuePtr substitute(const ValuePtr& v, const Subst& s) { return Substituter{}.value(v, s); }
CompPtr substitute(const CompPtr& p, const Subst& s) { return Substituter{}.comp(p, s); }

ValuePtr substitute(const ValuePtr& v, const std::string& var, const ValuePtr& image) {
  Subst s;
  s.emplace(var, image);
  return substitute(v, s);
}

CompPtr substitute(const CompPtr& p, const std::string& var, const ValuePtr& image) {
  Subst s;
  s.emplace(var, image);
  return substitute(p, s);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string name = base;
  while (avoid.count(name)) name += '\'';
  return name;
}

} // namespace gml
