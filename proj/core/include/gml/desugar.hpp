#pragma once

#include "gml/ast.hpp"

namespace gml {

// Rewrites surface sugar to core forms:
//   if b then p else q        => case b of inl _ => p | inr _ => q
//   f(v) & p                  => gcase f(v) of inl x => init x | inr _ => p
//   f(v)  with f : A -> B[0]  => gcase f(v) of inl x => ret x | inr y => init y
//   f(v)  with f : A -> 0[C]  => gcase f(v) of inl x => init x | inr y => ret y
//   f(v)  otherwise           => gcase f(v) of inl x => ret inl x | inr y => ret inr y
//   try x <= p in q unless e : E => r
//     => do z <- handle e : E in (do x <- p; ret inl x)
//                 with (do y <- r; ret inr y);
//        case z of inl x => q | inr y => ret y
// Throws TypeError{SignatureMismatch} when f is not an effect operation or
// the guard is not shaped A -> 0[1]. Idempotent on core terms.
Program desugar(const Program& prog);
CompPtr desugar(const CompPtr& comp, const Program& sigs);
ValuePtr desugar(const ValuePtr& v, const Program& sigs);

} // namespace gml
