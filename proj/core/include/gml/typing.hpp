#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gml/ast.hpp"
#include "gml/errors.hpp"

// Bidirectional type checker.
//
// Synthesis may return a partial type (one containing ?): a bare injection
// synthesizes only the summand it populates, and raise/init synthesize ?.
// Partial types are merged structurally where two branches join, so the
// usual case/handle join of `ret inl x` against `ret inr y` needs no
// ascription. A type that is still partial where a binder needs it (do,
// case scrutinee, function result) is an error; the fix is an ascription.

namespace gml {

// Ordered variable context; the innermost binding of a name wins.
struct VarContext {
  std::vector<std::pair<std::string, TypePtr>> entries;

  const TypePtr* lookup(const std::string& name) const;
  // Returns an extended copy; "_" binds nothing.
  VarContext extend(const std::string& name, TypePtr type) const;
};

// What check_program records per node: the node's type, and the exception
// context it was checked under (for values, the ambient context; a lambda
// body is under the lambda's own annotation).
struct NodeInfo {
  TypePtr type;
  ExcContext exc;
};

struct TypedProgram {
  Program program;
  TypePtr mainType;
  std::map<const void*, NodeInfo> info; // keyed by node identity

  const NodeInfo* lookup(const ValuePtr& v) const;
  const NodeInfo* lookup(const CompPtr& p) const;
};

// Synthesizes the type of a value. Throws TypeError if the value is
// ill-typed or its type is not fully determined.
TypePtr infer_value(const Program& sigs, const VarContext& gamma, const ValuePtr& v);

// Checks a core computation against an expected (fully determined) type.
// Throws TypeError on rejection; returns normally on success.
void check_comp(const Program& sigs, const ExcContext& delta, const VarContext& gamma,
                const CompPtr& p, const TypePtr& expected);

// Checks a whole core program (run desugar() first) and annotates every
// node. All recorded types are fully determined. Throws TypeError with the
// first error in evaluation order.
TypedProgram check_program(const Program& prog);

// Independent re-verification of a check_program result: walks the tree and
// confirms every node's record is justified by the one typing rule for its
// syntax form, with premises read off the children's records. Returns false
// and fills `why` on the first violation.
bool replay_derivation(const TypedProgram& tp, std::string* why = nullptr);

} // namespace gml
