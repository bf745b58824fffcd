#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

// Finite-carrier powerset Kleisli tables. Carriers are 0..n-1; an element of
// P(Y+Z) is a set of flat indices with Y occupying [0, |Y|) and Z the rest.
// The full powerset is totally guarded and iterates by least fixpoint; the
// non-empty variant restricts iteration to tables where every row can
// escape into the result summand.

namespace gml {

using PowSet = std::set<int>;
using PowTable = std::vector<PowSet>; // row per domain point

PowSet p_unit(int x);
PowSet p_star(const std::function<PowSet(int)>& f, const PowSet& t);

// Least solution of s = [eta, s]* . f over codomain Y+X with |Y| = ny:
// Kleene iteration from the everywhere-empty table.
PowTable p_iterate(const PowTable& f, int ny);

// Independent oracle: y is in the iteration's row for x iff some finite
// chain of inr-steps from x reaches inl y.
PowTable p_reach(const PowTable& f, int ny);

// Non-empty-powerset guardedness: every row meets the escape summand
// [0, ny). Callers must pass rows that are themselves non-empty.
bool pplus_guarded(const PowTable& f, int ny);

// Iteration restricted to guarded non-empty tables. Throws NotGuardedError
// when the precondition fails; the non-emptiness of every result row is the
// claim under test and is asserted.
PowTable pplus_iterate(const PowTable& f, int ny);

// "x -> {inl 0, inr 1}" per row; splitAt < 0 prints bare indices.
std::string format_pow_elem(const PowSet& s, int splitAt);
std::string format_pow_table(const PowTable& f, int splitAt);

} // namespace gml
