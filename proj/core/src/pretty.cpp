#include "gml/pretty.hpp"

#include <sstream>

namespace gml {

namespace {

// Type precedence levels, loosest to tightest.
enum TypePrec { FunPrec = 0, SumPrec = 1, ProdPrec = 2, AtomPrec = 3 };

void printType(std::ostream& os, const TypePtr& t, int level);

void printExc(std::ostream& os, const ExcContext& ctx) {
  bool first = true;
  for (const auto& e : ctx) {
    if (!first) os << ", ";
    first = false;
    os << e.name << ":";
    printType(os, e.payload, FunPrec);
    os << "^" << (e.tag == ExcTag::Unguarded ? 'u' : 'g');
  }
}

void printType(std::ostream& os, const TypePtr& t, int level) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Type::Base>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, Type::Zero>) {
          os << "0";
        } else if constexpr (std::is_same_v<T, Type::One>) {
          os << "1";
        } else if constexpr (std::is_same_v<T, Type::Nat>) {
          os << "N";
        } else if constexpr (std::is_same_v<T, Type::Sum>) {
          bool paren = level > SumPrec;
          if (paren) os << "(";
          printType(os, n.lhs, ProdPrec);
          os << " + ";
          printType(os, n.rhs, SumPrec); // right-assoc
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, Type::Prod>) {
          bool paren = level > ProdPrec;
          if (paren) os << "(";
          printType(os, n.lhs, AtomPrec);
          os << " * ";
          printType(os, n.rhs, ProdPrec);
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, Type::Fun>) {
          bool paren = level > FunPrec;
          if (paren) os << "(";
          printType(os, n.arg, SumPrec);
          os << " -[";
          printExc(os, n.exc);
          os << "]> ";
          printType(os, n.res, FunPrec);
          if (paren) os << ")";
        } else if constexpr (std::is_same_v<T, Type::Unknown>) {
          os << "?";
        }
      },
      t->node);
}

// Values: atom=true when the position admits only an atomic value, as in
// application operands or injection bodies.
void printValue(std::ostream& os, const ValuePtr& v, bool atom);
void printComp(std::ostream& os, const CompPtr& p, bool tail);

void printValue(std::ostream& os, const ValuePtr& v, bool atom) {
  if (auto n = as_numeral(v)) {
    os << *n;
    return;
  }
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Value::Var>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, Value::Star>) {
          os << "*";
        } else if constexpr (std::is_same_v<T, Value::PrimApp>) {
          os << n.op << "(";
          printValue(os, n.arg, false);
          os << ")";
        } else if constexpr (std::is_same_v<T, Value::Inl> || std::is_same_v<T, Value::Inr>) {
          const char* tag = std::is_same_v<T, Value::Inl> ? "inl " : "inr ";
          if (n.sum) {
            os << "(" << tag;
            printValue(os, n.val, true);
            os << " : ";
            printType(os, n.sum, FunPrec);
            os << ")";
          } else {
            if (atom) os << "(";
            os << tag;
            printValue(os, n.val, true);
            if (atom) os << ")";
          }
        } else if constexpr (std::is_same_v<T, Value::Pair>) {
          os << "(";
          printValue(os, n.fst, false);
          os << ", ";
          printValue(os, n.snd, false);
          os << ")";
        } else if constexpr (std::is_same_v<T, Value::Lambda>) {
          if (atom) os << "(";
          os << "fun (" << n.param << " : ";
          printType(os, n.paramType, FunPrec);
          os << ") [";
          printExc(os, n.exc);
          os << "] => ";
          printComp(os, n.body, true);
          if (atom) os << ")";
        }
      },
      v->node);
}

bool selfDelimiting(const CompPtr& p) {
  return std::holds_alternative<Comp::Ret>(p->node) ||
         std::holds_alternative<Comp::Init>(p->node) ||
         std::holds_alternative<Comp::Raise>(p->node) ||
         std::holds_alternative<Comp::SCall>(p->node) ||
         std::holds_alternative<Comp::App>(p->node) ||
         std::holds_alternative<Comp::Ann>(p->node);
}

// tail=true when the computation runs to the end of the enclosing construct,
// so its own greedy tail cannot swallow a following keyword.
void printComp(std::ostream& os, const CompPtr& p, bool tail) {
  bool paren = !tail && !selfDelimiting(p);
  if (paren) os << "(";
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comp::Ret>) {
          os << "ret ";
          printValue(os, n.val, true);
        } else if constexpr (std::is_same_v<T, Comp::Do>) {
          os << "do " << n.var << " <- ";
          printComp(os, n.bound, false);
          os << "; ";
          // chain bodies print flat: do x <- p; y <- q; r
          CompPtr body = n.body;
          while (auto* d = std::get_if<Comp::Do>(&body->node)) {
            os << d->var << " <- ";
            printComp(os, d->bound, false);
            os << "; ";
            body = d->body;
          }
          printComp(os, body, true);
        } else if constexpr (std::is_same_v<T, Comp::GCase>) {
          os << "gcase " << n.op << "(";
          printValue(os, n.arg, false);
          os << ") of inl " << n.leftVar << " => ";
          printComp(os, n.left, false);
          os << " | inr " << n.rightVar << " => ";
          printComp(os, n.right, true);
        } else if constexpr (std::is_same_v<T, Comp::Case>) {
          os << "case ";
          printValue(os, n.scrutinee, true);
          os << " of inl " << n.leftVar << " => ";
          printComp(os, n.left, false);
          os << " | inr " << n.rightVar << " => ";
          printComp(os, n.right, true);
        } else if constexpr (std::is_same_v<T, Comp::PCase>) {
          os << "pcase ";
          printValue(os, n.scrutinee, true);
          os << " of (" << n.fstVar << ", " << n.sndVar << ") => ";
          printComp(os, n.body, true);
        } else if constexpr (std::is_same_v<T, Comp::Init>) {
          os << "init ";
          printValue(os, n.val, true);
        } else if constexpr (std::is_same_v<T, Comp::Raise>) {
          os << "raise_" << n.exc << " ";
          printValue(os, n.payload, true);
        } else if constexpr (std::is_same_v<T, Comp::Handle>) {
          os << "handle " << n.exc << " : ";
          printType(os, n.payloadType, FunPrec);
          os << " in ";
          printComp(os, n.body, false);
          os << " with ";
          printComp(os, n.handler, true);
        } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
          os << "handleit " << n.exc;
          if (n.payloadType) {
            os << " : ";
            printType(os, n.payloadType, FunPrec);
          }
          os << " = ";
          printValue(os, n.seed, true);
          os << " in ";
          printComp(os, n.body, true);
        } else if constexpr (std::is_same_v<T, Comp::App>) {
          printValue(os, n.fn, true);
          os << " ";
          printValue(os, n.arg, true);
        } else if constexpr (std::is_same_v<T, Comp::Ann>) {
          os << "(";
          printComp(os, n.comp, true);
          os << " : ";
          printType(os, n.type, FunPrec);
          os << ")";
        } else if constexpr (std::is_same_v<T, Comp::SIf>) {
          os << "if ";
          printValue(os, n.cond, true);
          os << " then ";
          printComp(os, n.thenBranch, false);
          os << " else ";
          printComp(os, n.elseBranch, true);
        } else if constexpr (std::is_same_v<T, Comp::SGuard>) {
          os << n.op << "(";
          printValue(os, n.arg, false);
          os << ") & ";
          printComp(os, n.rest, true);
        } else if constexpr (std::is_same_v<T, Comp::SCall>) {
          os << n.op << "(";
          printValue(os, n.arg, false);
          os << ")";
        } else if constexpr (std::is_same_v<T, Comp::STry>) {
          os << "try " << n.var << " <= ";
          printComp(os, n.bound, false);
          os << " in ";
          printComp(os, n.body, false);
          os << " unless " << n.exc << " : ";
          printType(os, n.payloadType, FunPrec);
          os << " => ";
          printComp(os, n.handler, true);
        }
      },
      p->node);
  if (paren) os << ")";
}

} // namespace

std::string pretty(const TypePtr& t) {
  std::ostringstream os;
  printType(os, t, FunPrec);
  return os.str();
}

std::string pretty(const ValuePtr& v) {
  std::ostringstream os;
  printValue(os, v, false);
  return os.str();
}

std::string pretty(const CompPtr& p) {
  std::ostringstream os;
  printComp(os, p, true);
  return os.str();
}

std::string pretty(const ExcContext& ctx) {
  std::ostringstream os;
  printExc(os, ctx);
  return os.str();
}

std::string pretty_program(const Program& prog) {
  std::ostringstream os;
  for (const auto& s : prog.valueSigs) {
    if (s.builtin) continue;
    os << "value " << s.name << " : ";
    printType(os, s.arg, FunPrec);
    os << " -> ";
    printType(os, s.res, FunPrec);
    os << "\n";
  }
  for (const auto& s : prog.effectSigs) {
    if (s.builtin) continue;
    os << "effect " << s.name << " : ";
    printType(os, s.arg, FunPrec);
    os << " -> ";
    printType(os, s.unguardedRes, SumPrec);
    os << " [";
    printType(os, s.guardedRes, FunPrec);
    os << "]\n";
  }
  if (!prog.mainExc.empty()) {
    os << "exceptions ";
    printExc(os, prog.mainExc);
    os << "\n";
  }
  printComp(os, prog.main, true);
  os << "\n";
  return os.str();
}

} // namespace gml
