#pragma once

#include <string>

#include "gml/ast.hpp"

namespace gml {

// Renders terms back to concrete syntax. The output is one line, fully
// parenthesized where the grammar needs it, and reparses to an
// alpha-equal tree (numerals are printed in decimal).
std::string pretty(const TypePtr& t);
std::string pretty(const ValuePtr& v);
std::string pretty(const CompPtr& p);
std::string pretty(const ExcContext& ctx);
std::string pretty_program(const Program& prog);

} // namespace gml
