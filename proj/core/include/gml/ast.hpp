#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

// AST for the guarded-iteration metalanguage.
//
// Trees are immutable and shared; every rewrite (desugaring, substitution)
// builds new nodes and reuses untouched subtrees. Value and computation
// terms carry their source position for diagnostics; positions are ignored
// by equality and alpha-equivalence.

namespace gml {

struct Pos {
  int line = 0;
  int col = 0;
};

// ---------------------------------------------------------------------------
// types
// ---------------------------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

enum class ExcTag { Unguarded, Guarded }; // ^u / ^g

struct ExcEntry {
  std::string name;
  TypePtr payload;
  ExcTag tag = ExcTag::Unguarded;
};

// Ordered; names are pairwise distinct (enforced by parser/checker).
using ExcContext = std::vector<ExcEntry>;

struct Type {
  struct Base { std::string name; };
  struct Zero {};
  struct One {};
  struct Nat {};
  struct Sum { TypePtr lhs, rhs; };
  struct Prod { TypePtr lhs, rhs; };
  struct Fun { TypePtr arg; ExcContext exc; TypePtr res; }; // A -[D]> B
  struct Unknown {}; // checker-internal hole; never parsed, printed as ?

  using Node = std::variant<Base, Zero, One, Nat, Sum, Prod, Fun, Unknown>;
  Node node;
};

TypePtr t_base(std::string name);
TypePtr t_zero();
TypePtr t_one();
TypePtr t_nat();
TypePtr t_sum(TypePtr lhs, TypePtr rhs);
TypePtr t_prod(TypePtr lhs, TypePtr rhs);
TypePtr t_fun(TypePtr arg, ExcContext exc, TypePtr res);
TypePtr t_unknown();

bool type_grounded(const TypePtr& a); // no Unknown anywhere

bool type_equal(const TypePtr& a, const TypePtr& b);
bool exc_equal(const ExcContext& a, const ExcContext& b);          // names, types, tags
bool exc_equal_erased(const ExcContext& a, const ExcContext& b);   // |D|: tags dropped
bool first_order(const TypePtr& a);                                // no Fun anywhere

const ExcEntry* exc_lookup(const ExcContext& d, const std::string& name);

// ---------------------------------------------------------------------------
// terms
// ---------------------------------------------------------------------------

struct Value;
struct Comp;
using ValuePtr = std::shared_ptr<const Value>;
using CompPtr = std::shared_ptr<const Comp>;

struct Value {
  struct Var { std::string name; };
  struct Star {};
  struct PrimApp { std::string op; ValuePtr arg; };            // f(v), f in Sigma_v
  struct Inl { ValuePtr val; TypePtr sum; };                   // sum: ascription, may be null
  struct Inr { ValuePtr val; TypePtr sum; };
  struct Pair { ValuePtr fst, snd; };
  struct Lambda { std::string param; TypePtr paramType; ExcContext exc; CompPtr body; };

  using Node = std::variant<Var, Star, PrimApp, Inl, Inr, Pair, Lambda>;
  Node node;
  Pos pos;
};

struct Comp {
  struct Ret { ValuePtr val; };
  struct Do { std::string var; CompPtr bound, body; };
  struct GCase { // gcase op(arg) of inl lv => left | inr rv => right
    std::string op;
    ValuePtr arg;
    std::string leftVar;
    CompPtr left;
    std::string rightVar;
    CompPtr right;
  };
  struct Case {
    ValuePtr scrutinee;
    std::string leftVar;
    CompPtr left;
    std::string rightVar;
    CompPtr right;
  };
  struct PCase { ValuePtr scrutinee; std::string fstVar, sndVar; CompPtr body; };
  struct Init { ValuePtr val; };
  struct Raise { std::string exc; ValuePtr payload; };
  struct Handle { // handle exc:payloadType in body with handler (payloadVar bound in handler)
    std::string exc;
    TypePtr payloadType;
    CompPtr body;
    std::string payloadVar;
    CompPtr handler;
  };
  struct HandleIt { // handleit exc:payloadType = seed in body (exc bound as value var in body)
    ValuePtr seed;
    std::string exc;
    TypePtr payloadType;
    CompPtr body;
  };
  struct App { ValuePtr fn, arg; };
  struct Ann { CompPtr comp; TypePtr type; }; // (p : A); transparent at runtime

  // Surface-only nodes, eliminated by desugar().
  struct SIf { ValuePtr cond; CompPtr thenBranch, elseBranch; };
  struct SGuard { std::string op; ValuePtr arg; CompPtr rest; }; // f(v) & p
  struct SCall { std::string op; ValuePtr arg; };                // bare f(v), f in Sigma_c
  struct STry { // try var <= bound in body unless exc : payloadType => handler
    std::string var;
    CompPtr bound, body;
    std::string exc;
    TypePtr payloadType;
    CompPtr handler;
  };

  using Node = std::variant<Ret, Do, GCase, Case, PCase, Init, Raise, Handle, HandleIt,
                            App, Ann, SIf, SGuard, SCall, STry>;
  Node node;
  Pos pos;
};

ValuePtr v_var(std::string name, Pos pos = {});
ValuePtr v_star(Pos pos = {});
ValuePtr v_prim(std::string op, ValuePtr arg, Pos pos = {});
ValuePtr v_inl(ValuePtr val, TypePtr sum = nullptr, Pos pos = {});
ValuePtr v_inr(ValuePtr val, TypePtr sum = nullptr, Pos pos = {});
ValuePtr v_pair(ValuePtr fst, ValuePtr snd, Pos pos = {});
ValuePtr v_lambda(std::string param, TypePtr paramType, ExcContext exc, CompPtr body,
                  Pos pos = {});
ValuePtr v_nat(std::uint64_t n, Pos pos = {}); // succ^n(zero(*))

CompPtr c_ret(ValuePtr val, Pos pos = {});
CompPtr c_do(std::string var, CompPtr bound, CompPtr body, Pos pos = {});
CompPtr c_gcase(std::string op, ValuePtr arg, std::string leftVar, CompPtr left,
                std::string rightVar, CompPtr right, Pos pos = {});
CompPtr c_case(ValuePtr scrutinee, std::string leftVar, CompPtr left, std::string rightVar,
               CompPtr right, Pos pos = {});
CompPtr c_pcase(ValuePtr scrutinee, std::string fstVar, std::string sndVar, CompPtr body,
                Pos pos = {});
CompPtr c_init(ValuePtr val, Pos pos = {});
CompPtr c_raise(std::string exc, ValuePtr payload, Pos pos = {});
CompPtr c_handle(std::string exc, TypePtr payloadType, CompPtr body, std::string payloadVar,
                 CompPtr handler, Pos pos = {});
CompPtr c_handleit(ValuePtr seed, std::string exc, TypePtr payloadType, CompPtr body,
                   Pos pos = {});
CompPtr c_app(ValuePtr fn, ValuePtr arg, Pos pos = {});
CompPtr c_ann(CompPtr comp, TypePtr type, Pos pos = {});
CompPtr c_if(ValuePtr cond, CompPtr thenBranch, CompPtr elseBranch, Pos pos = {});
CompPtr c_guard(std::string op, ValuePtr arg, CompPtr rest, Pos pos = {});
CompPtr c_call(std::string op, ValuePtr arg, Pos pos = {});
CompPtr c_try(std::string var, CompPtr bound, CompPtr body, std::string exc, TypePtr payloadType,
              CompPtr handler,
              Pos pos = {});

// If v is succ^n(zero(*)), yields n.
std::optional<std::uint64_t> as_numeral(const ValuePtr& v);

bool is_core(const CompPtr& p); // no surface nodes anywhere

bool alpha_equal(const ValuePtr& a, const ValuePtr& b);
bool alpha_equal(const CompPtr& a, const CompPtr& b);

// ---------------------------------------------------------------------------
// programs
// ---------------------------------------------------------------------------

struct ValueSig {
  std::string name;
  TypePtr arg, res; // f : arg -> res
  Pos pos;
  bool builtin = false;
};

struct EffectSig {
  std::string name;
  TypePtr arg, unguardedRes, guardedRes; // f : arg -> unguardedRes [guardedRes]
  Pos pos;
  bool builtin = false;
};

struct Program {
  std::vector<ValueSig> valueSigs;   // builtins first
  std::vector<EffectSig> effectSigs; // builtins first
  ExcContext mainExc;
  CompPtr main;
};

// zero : 1 -> N, succ : N -> N, pred : N -> (1+N)[0], put : N -> 0[1]
void add_builtin_sigs(Program& prog);

const ValueSig* value_sig(const Program& prog, const std::string& name);
const EffectSig* effect_sig(const Program& prog, const std::string& name);

} // namespace gml
