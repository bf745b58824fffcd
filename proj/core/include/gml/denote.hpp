#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "gml/ast.hpp"
#include "gml/stream.hpp"

namespace gml {

struct SemValue;
using SemValuePtr = std::shared_ptr<const SemValue>;

// Persistent name->value map; extension shares the tail with the parent.
class Env {
public:
  Env() = default;
  Env extend(const std::string& name, SemValuePtr v) const;
  const SemValuePtr* lookup(const std::string& name) const; // null when absent

private:
  struct Node {
    std::string name;
    SemValuePtr value;
    std::shared_ptr<const Node> next;
  };
  explicit Env(std::shared_ptr<const Node> head) : head_(std::move(head)) {}
  std::shared_ptr<const Node> head_;
};

struct SemValue {
  struct Nat {
    std::uint64_t n;
  };
  struct Unit {};
  struct Inl {
    SemValuePtr v;
  };
  struct Inr {
    SemValuePtr v;
  };
  struct Pair {
    SemValuePtr fst, snd;
  };
  struct Closure {
    std::string param;
    CompPtr body;
    Env env;
  };
  using Node = std::variant<Nat, Unit, Inl, Inr, Pair, Closure>;
  Node node;
};

SemValuePtr sem_nat(std::uint64_t n);
SemValuePtr sem_unit();
SemValuePtr sem_inl(SemValuePtr v);
SemValuePtr sem_inr(SemValuePtr v);
SemValuePtr sem_pair(SemValuePtr fst, SemValuePtr snd);

// Result summand of a computation's meaning: a value or a named raise.
struct SemOutcome {
  enum class Kind { Ret, Raise };
  Kind kind = Kind::Ret;
  std::string exc;
  SemValuePtr value;

  static SemOutcome ret(SemValuePtr v) { return {Kind::Ret, "", std::move(v)}; }
  static SemOutcome raise(std::string e, SemValuePtr v) {
    return {Kind::Raise, std::move(e), std::move(v)};
  }
};

SemValuePtr denote_value(const ValuePtr& v, const Env& rho);

// The meaning of a computation: its output trace, capped by a terminal
// outcome when finite. Work happens on pulls; loops unfold a round at a
// time and fault if a round re-raises without output.
Stream<SemOutcome> denote_comp(const CompPtr& p, const Env& rho);

// Reifies a first-order semantic value back into syntax at the given type;
// nullopt as soon as a function space makes the comparison meaningless.
std::optional<ValuePtr> readback(const SemValuePtr& v, const TypePtr& ty);

std::string show_sem(const SemValuePtr& v);

} // namespace gml
