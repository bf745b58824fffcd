#include "lexer.hpp"

#include <cctype>
#include <map>

namespace gml {

namespace {

const std::map<std::string, Tok, std::less<>> kKeywords = {
    {"ret", Tok::KwRet},       {"do", Tok::KwDo},         {"gcase", Tok::KwGcase},
    {"case", Tok::KwCase},     {"pcase", Tok::KwPcase},   {"of", Tok::KwOf},
    {"init", Tok::KwInit},     {"handle", Tok::KwHandle}, {"handleit", Tok::KwHandleit},
    {"with", Tok::KwWith},     {"in", Tok::KwIn},         {"fun", Tok::KwFun},
    {"try", Tok::KwTry},       {"unless", Tok::KwUnless}, {"if", Tok::KwIf},
    {"then", Tok::KwThen},     {"else", Tok::KwElse},     {"inl", Tok::KwInl},
    {"inr", Tok::KwInr},       {"value", Tok::KwValue},   {"effect", Tok::KwEffect},
    {"exceptions", Tok::KwExceptions},
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

} // namespace

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto pos = [&]() { return Pos{line, col}; };
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  auto two = [&](char a, char b) { return src[i] == a && i + 1 < src.size() && src[i + 1] == b; };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Pos p = pos();
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word = src.substr(i, j - i);
      advance(j - i);
      if (word == "_") {
        out.push_back({Tok::Dummy, word, p});
      } else if (word == "raise") {
        throw SyntaxError(p, "bare 'raise': write raise_<exception> <payload>");
      } else if (word.rfind("raise_", 0) == 0) {
        std::string target = word.substr(6);
        if (target.empty()) throw SyntaxError(p, "raise_ needs an exception name");
        out.push_back({Tok::RaiseTag, target, p});
      } else if (auto it = kKeywords.find(word); it != kKeywords.end()) {
        out.push_back({it->second, word, p});
      } else {
        out.push_back({Tok::Ident, word, p});
      }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Nat, src.substr(i, j - i), p});
      advance(j - i);
      continue;
    }
    if (two('-', '[')) {
      out.push_back({Tok::ArrowLBrack, "-[", p});
      advance(2);
      continue;
    }
    if (two('-', '>')) {
      out.push_back({Tok::Arrow, "->", p});
      advance(2);
      continue;
    }
    if (two(']', '>')) {
      out.push_back({Tok::RBrackGt, "]>", p});
      advance(2);
      continue;
    }
    if (two('=', '>')) {
      out.push_back({Tok::FatArrow, "=>", p});
      advance(2);
      continue;
    }
    if (two('<', '-')) {
      out.push_back({Tok::BindArrow, "<-", p});
      advance(2);
      continue;
    }
    if (two('<', '=')) {
      out.push_back({Tok::TryArrow, "<=", p});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBrack; break;
      case ']': kind = Tok::RBrack; break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semi; break;
      case ':': kind = Tok::Colon; break;
      case '*': kind = Tok::Star; break;
      case '+': kind = Tok::Plus; break;
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Pipe; break;
      case '^': kind = Tok::Caret; break;
      case '=': kind = Tok::Eq; break;
      default:
        throw SyntaxError(p, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), p});
    advance(1);
  }
  out.push_back({Tok::Eof, "", pos()});
  return out;
}

const char* token_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Nat: return "numeral";
    case Tok::RaiseTag: return "raise_<exc>";
    case Tok::Dummy: return "_";
    case Tok::KwRet: return "ret";
    case Tok::KwDo: return "do";
    case Tok::KwGcase: return "gcase";
    case Tok::KwCase: return "case";
    case Tok::KwPcase: return "pcase";
    case Tok::KwOf: return "of";
    case Tok::KwInit: return "init";
    case Tok::KwHandle: return "handle";
    case Tok::KwHandleit: return "handleit";
    case Tok::KwWith: return "with";
    case Tok::KwIn: return "in";
    case Tok::KwFun: return "fun";
    case Tok::KwTry: return "try";
    case Tok::KwUnless: return "unless";
    case Tok::KwIf: return "if";
    case Tok::KwThen: return "then";
    case Tok::KwElse: return "else";
    case Tok::KwInl: return "inl";
    case Tok::KwInr: return "inr";
    case Tok::KwValue: return "value";
    case Tok::KwEffect: return "effect";
    case Tok::KwExceptions: return "exceptions";
    case Tok::LParen: return "(";
    case Tok::RParen: return ")";
    case Tok::LBrack: return "[";
    case Tok::RBrack: return "]";
    case Tok::Comma: return ",";
    case Tok::Semi: return ";";
    case Tok::Colon: return ":";
    case Tok::Star: return "*";
    case Tok::Plus: return "+";
    case Tok::Amp: return "&";
    case Tok::Pipe: return "|";
    case Tok::Caret: return "^";
    case Tok::Eq: return "=";
    case Tok::Arrow: return "->";
    case Tok::ArrowLBrack: return "-[";
    case Tok::RBrackGt: return "]>";
    case Tok::FatArrow: return "=>";
    case Tok::BindArrow: return "<-";
    case Tok::TryArrow: return "<=";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

} // namespace gml
