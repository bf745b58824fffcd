#pragma once

#include <map>
#include <set>
#include <string>

#include "gml/ast.hpp"

namespace gml {

// Simultaneous substitution of values for free value variables.
using Subst = std::map<std::string, ValuePtr>;

std::set<std::string> free_vars(const ValuePtr& v);
std::set<std::string> free_vars(const CompPtr& p);

// Exception names a term can raise toward the enclosing context. Lambda
// bodies are opaque: their annotated contexts rebind every name they use.
std::set<std::string> free_exc_names(const CompPtr& p);

// Capture-avoiding: binders in the way of a substituted free variable are
// freshened (primes appended). handleit/try loop names double as exception
// names; freshening renames both roles together.
ValuePtr substitute(const ValuePtr& v, const Subst& s);
CompPtr substitute(const CompPtr& p, const Subst& s);
ValuePtr substitute(const ValuePtr& v, const std::string& var, const ValuePtr& image);
CompPtr substitute(const CompPtr& p, const std::string& var, const ValuePtr& image);

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

} // namespace gml
