#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gml/parse.hpp"

namespace gml {

enum class Tok {
  Ident,
  Nat,      // decimal literal
  RaiseTag, // raise_<name>, text = name
  Dummy,    // _
  KwRet, KwDo, KwGcase, KwCase, KwPcase, KwOf, KwInit, KwHandle, KwHandleit, KwWith,
  KwIn, KwFun, KwTry, KwUnless, KwIf, KwThen, KwElse, KwInl, KwInr,
  KwValue, KwEffect, KwExceptions,
  LParen, RParen, LBrack, RBrack,
  Comma, Semi, Colon, Star, Plus, Amp, Pipe, Caret, Eq,
  Arrow,     // ->
  ArrowLBrack, // -[
  RBrackGt,  // ]>
  FatArrow,  // =>
  BindArrow, // <-
  TryArrow,  // <=
  Eof,
};

struct Token {
  Tok kind;
  std::string text; // ident name, numeral digits, raise target
  Pos pos;
};

// Throws SyntaxError on malformed input (bad character, bare raise_).
std::vector<Token> lex(const std::string& src);

const char* token_name(Tok t);

} // namespace gml
