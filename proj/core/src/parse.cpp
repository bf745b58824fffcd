#include "gml/parse.hpp"

#include <set>

#include "lexer.hpp"

namespace gml {

namespace {

bool comp_start_keyword(Tok t) {
  switch (t) {
    case Tok::KwRet:
    case Tok::KwDo:
    case Tok::KwGcase:
    case Tok::KwCase:
    case Tok::KwPcase:
    case Tok::KwInit:
    case Tok::KwHandle:
    case Tok::KwHandleit:
    case Tok::KwIf:
    case Tok::KwTry:
    case Tok::RaiseTag:
      return true;
    default:
      return false;
  }
}

bool value_start(Tok t) {
  switch (t) {
    case Tok::Ident:
    case Tok::Nat:
    case Tok::Star:
    case Tok::KwInl:
    case Tok::KwInr:
    case Tok::KwFun:
    case Tok::LParen:
      return true;
    default:
      return false;
  }
}

class Parser {
public:
  Parser(std::vector<Token> toks, const Program* sigs) : toks_(std::move(toks)), sigs_(sigs) {}

  // program := decl* ('exceptions' excEntry,+)? comp EOF
  Program parseProgram() {
    Program prog;
    add_builtin_sigs(prog);
    sigs_ = &prog;
    while (check(Tok::KwValue) || check(Tok::KwEffect)) parseDecl(prog);
    if (accept(Tok::KwExceptions)) {
      prog.mainExc = parseExcEntries();
      std::set<std::string> seen;
      for (const auto& e : prog.mainExc)
        if (!seen.insert(e.name).second)
          fail(peek().pos, "exception '" + e.name + "' declared twice");
    }
    prog.main = parseComp();
    expect(Tok::Eof, "end of program");
    return prog;
  }

  CompPtr parseCompOnly() {
    CompPtr p = parseComp();
    expect(Tok::Eof, "end of input");
    return p;
  }

  ValuePtr parseValueOnly() {
    ValuePtr v = parseValue();
    expect(Tok::Eof, "end of input");
    return v;
  }

  TypePtr parseTypeOnly() {
    TypePtr t = parseType();
    expect(Tok::Eof, "end of input");
    return t;
  }

private:
  std::vector<Token> toks_;
  size_t at_ = 0;
  const Program* sigs_;

  const Token& peek(size_t k = 0) const {
    size_t i = at_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool check(Tok t, size_t k = 0) const { return peek(k).kind == t; }
  bool accept(Tok t) {
    if (!check(t)) return false;
    ++at_;
    return true;
  }
  Token next() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }
  Token expect(Tok t, const char* what) {
    if (!check(t))
      fail(peek().pos, std::string("expected ") + token_name(t) + " (" + what + "), found " +
                           describe(peek()),
           {token_name(t)});
    return next();
  }
  [[noreturn]] void fail(Pos p, std::string msg, std::vector<std::string> exp = {}) const {
    throw SyntaxError(p, std::move(msg), std::move(exp));
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::Ident) return "'" + t.text + "'";
    if (t.kind == Tok::Nat) return "'" + t.text + "'";
    return std::string("'") + token_name(t.kind) + "'";
  }

  bool isEffectOp(const std::string& name) const {
    return sigs_ && effect_sig(*sigs_, name) != nullptr;
  }
  bool isValueOp(const std::string& name) const {
    return sigs_ && value_sig(*sigs_, name) != nullptr;
  }

  // ---- declarations ----

  void parseDecl(Program& prog) {
    bool isValue = check(Tok::KwValue);
    Pos p = next().pos;
    Token name = expect(Tok::Ident, "signature name");
    if (value_sig(prog, name.text) || effect_sig(prog, name.text))
      fail(name.pos, "'" + name.text + "' is already declared");
    expect(Tok::Colon, "signature type");
    TypePtr arg = parseType();
    expect(Tok::Arrow, "signature result");
    TypePtr res = parseType();
    if (isValue) {
      prog.valueSigs.push_back({name.text, arg, res, p, false});
    } else {
      expect(Tok::LBrack, "guarded result type");
      TypePtr gres = parseType();
      expect(Tok::RBrack, "guarded result type");
      prog.effectSigs.push_back({name.text, arg, res, gres, p, false});
    }
  }

  ExcContext parseExcEntries() {
    ExcContext ctx;
    do {
      Token name = expect(Tok::Ident, "exception name");
      expect(Tok::Colon, "exception payload type");
      TypePtr ty = parseType();
      expect(Tok::Caret, "exception tag");
      Token tag = expect(Tok::Ident, "exception tag 'u' or 'g'");
      ExcTag t;
      if (tag.text == "u")
        t = ExcTag::Unguarded;
      else if (tag.text == "g")
        t = ExcTag::Guarded;
      else
        fail(tag.pos, "exception tag must be 'u' or 'g'");
      ctx.push_back({name.text, ty, t});
    } while (accept(Tok::Comma));
    return ctx;
  }

  // ---- types ----
  // type := sum ('-[' excCtx ']>' type)?   (right-assoc arrows)
  // sum  := prod ('+' sum)?
  // prod := atom ('*' prod)?
  // atom := 'N' | '0' | '1' | ident | '(' type ')'

  TypePtr parseType() {
    TypePtr lhs = parseSumType();
    if (accept(Tok::ArrowLBrack)) {
      ExcContext exc;
      if (!check(Tok::RBrackGt)) exc = parseExcEntries();
      expect(Tok::RBrackGt, "function result type");
      TypePtr res = parseType();
      return t_fun(lhs, std::move(exc), res);
    }
    return lhs;
  }

  TypePtr parseSumType() {
    TypePtr lhs = parseProdType();
    if (accept(Tok::Plus)) return t_sum(lhs, parseSumType());
    return lhs;
  }

  TypePtr parseProdType() {
    TypePtr lhs = parseAtomType();
    if (accept(Tok::Star)) return t_prod(lhs, parseProdType());
    return lhs;
  }

  TypePtr parseAtomType() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        next();
        if (t.text == "N") return t_nat();
        return t_base(t.text);
      }
      case Tok::Nat: {
        next();
        if (t.text == "0") return t_zero();
        if (t.text == "1") return t_one();
        fail(t.pos, "only 0 and 1 are types; '" + t.text + "' is not");
      }
      case Tok::LParen: {
        next();
        TypePtr inner = parseType();
        expect(Tok::RParen, "closing parenthesis of type");
        return inner;
      }
      default:
        fail(t.pos, "expected a type, found " + describe(t), {"type"});
    }
  }

  // ---- values ----

  std::string parseBinder() {
    if (check(Tok::Dummy)) {
      next();
      return "_";
    }
    return expect(Tok::Ident, "binder").text;
  }

  // Argument list after an operation name: '(' value ')', with '()' short
  // for '(*)'.
  ValuePtr parseOpArg() {
    Pos p = expect(Tok::LParen, "operation argument").pos;
    if (accept(Tok::RParen)) return v_star(p);
    ValuePtr arg = parseValue();
    expect(Tok::RParen, "operation argument");
    return arg;
  }

  ValuePtr parseValue() { return parseAValue(); }

  ValuePtr parseAValue() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        next();
        if (check(Tok::LParen) && (isValueOp(t.text) || isEffectOp(t.text))) {
          if (isEffectOp(t.text))
            fail(t.pos, "effect operation '" + t.text +
                            "' can only head a computation, not appear inside a value");
          return v_prim(t.text, parseOpArg(), t.pos);
        }
        return v_var(t.text, t.pos);
      }
      case Tok::Star:
        next();
        return v_star(t.pos);
      case Tok::Nat: {
        next();
        return v_nat(std::stoull(t.text), t.pos);
      }
      case Tok::KwInl:
      case Tok::KwInr: {
        next();
        ValuePtr inner = parseAValue();
        return t.kind == Tok::KwInl ? v_inl(inner, nullptr, t.pos) : v_inr(inner, nullptr, t.pos);
      }
      case Tok::KwFun: {
        next();
        expect(Tok::LParen, "function parameter");
        std::string param = parseBinder();
        expect(Tok::Colon, "parameter type");
        TypePtr paramType = parseType();
        expect(Tok::RParen, "function parameter");
        expect(Tok::LBrack, "function exception context");
        ExcContext exc;
        if (!check(Tok::RBrack)) exc = parseExcEntries();
        expect(Tok::RBrack, "function exception context");
        expect(Tok::FatArrow, "function body");
        CompPtr body = parseComp();
        return v_lambda(param, paramType, std::move(exc), body, t.pos);
      }
      case Tok::LParen: {
        next();
        ValuePtr inner = parseValue();
        if (accept(Tok::Comma)) {
          ValuePtr snd = parseValue();
          expect(Tok::RParen, "pair");
          return v_pair(inner, snd, t.pos);
        }
        if (accept(Tok::Colon)) {
          TypePtr ty = parseType();
          expect(Tok::RParen, "ascribed value");
          if (auto* il = std::get_if<Value::Inl>(&inner->node))
            return v_inl(il->val, ty, inner->pos);
          if (auto* ir = std::get_if<Value::Inr>(&inner->node))
            return v_inr(ir->val, ty, inner->pos);
          fail(t.pos, "type ascription is only for inl/inr values");
        }
        expect(Tok::RParen, "parenthesized value");
        return inner;
      }
      case Tok::Dummy:
        fail(t.pos, "'_' is a binder, not a value");
      default:
        fail(t.pos, "expected a value, found " + describe(t), {"value"});
    }
  }

  // ---- computations ----

  bool parenOpensComp() const {
    // '(' starts a computation when the first token inside could not begin
    // a value, or names an effect operation call (which only heads comps).
    if (!check(Tok::LParen)) return false;
    const Token& in = peek(1);
    if (comp_start_keyword(in.kind)) return true;
    if (in.kind == Tok::Ident && check(Tok::LParen, 2) && isEffectOp(in.text)) return true;
    return false;
  }

  CompPtr parseComp() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwRet:
        next();
        return c_ret(parseAValue(), t.pos);
      case Tok::KwInit:
        next();
        return c_init(parseAValue(), t.pos);
      case Tok::RaiseTag:
        next();
        return c_raise(t.text, parseAValue(), t.pos);
      case Tok::KwDo:
        next();
        return parseChain(t.pos);
      case Tok::KwGcase: {
        next();
        Token op = expect(Tok::Ident, "operation name");
        ValuePtr arg = parseOpArg();
        expect(Tok::KwOf, "gcase branches");
        auto [lv, lc, rv, rc] = parseSumBranches();
        return c_gcase(op.text, arg, lv, lc, rv, rc, t.pos);
      }
      case Tok::KwCase: {
        next();
        ValuePtr scrut = parseAValue();
        expect(Tok::KwOf, "case branches");
        auto [lv, lc, rv, rc] = parseSumBranches();
        return c_case(scrut, lv, lc, rv, rc, t.pos);
      }
      case Tok::KwPcase: {
        next();
        ValuePtr scrut = parseAValue();
        expect(Tok::KwOf, "pair pattern");
        expect(Tok::LParen, "pair pattern");
        std::string x = parseBinder();
        expect(Tok::Comma, "pair pattern");
        std::string y = parseBinder();
        expect(Tok::RParen, "pair pattern");
        expect(Tok::FatArrow, "pcase body");
        return c_pcase(scrut, x, y, parseComp(), t.pos);
      }
      case Tok::KwHandle: {
        next();
        Token exc = expect(Tok::Ident, "exception name");
        expect(Tok::Colon, "exception payload type");
        TypePtr ty = parseType();
        expect(Tok::KwIn, "handle body");
        CompPtr body = parseComp();
        expect(Tok::KwWith, "handler");
        CompPtr handler = parseComp();
        return c_handle(exc.text, ty, body, exc.text, handler, t.pos);
      }
      case Tok::KwHandleit: {
        next();
        Token exc = expect(Tok::Ident, "exception name");
        TypePtr ty = nullptr;
        if (accept(Tok::Colon)) ty = parseType();
        expect(Tok::Eq, "loop seed");
        ValuePtr seed = parseAValue();
        expect(Tok::KwIn, "handleit body");
        CompPtr body = parseComp();
        return c_handleit(seed, exc.text, ty, body, t.pos);
      }
      case Tok::KwIf: {
        next();
        ValuePtr cond = parseAValue();
        expect(Tok::KwThen, "then branch");
        CompPtr thenB = parseComp();
        expect(Tok::KwElse, "else branch");
        CompPtr elseB = parseComp();
        return c_if(cond, thenB, elseB, t.pos);
      }
      case Tok::KwTry: {
        next();
        std::string var = parseBinder();
        expect(Tok::TryArrow, "tried computation");
        CompPtr bound = parseComp();
        expect(Tok::KwIn, "try body");
        CompPtr body = parseComp();
        expect(Tok::KwUnless, "try handler");
        Token exc = expect(Tok::Ident, "exception name");
        expect(Tok::Colon, "exception payload type");
        TypePtr ty = parseType();
        expect(Tok::FatArrow, "try handler");
        CompPtr handler = parseComp();
        return c_try(var, bound, body, exc.text, ty, handler, t.pos);
      }
      case Tok::LParen:
        if (parenOpensComp()) {
          next();
          CompPtr inner = parseComp();
          if (accept(Tok::Colon)) {
            TypePtr ty = parseType();
            expect(Tok::RParen, "ascribed computation");
            return c_ann(inner, ty, t.pos);
          }
          expect(Tok::RParen, "parenthesized computation");
          return inner;
        }
        return parseValueLed();
      case Tok::Ident:
      case Tok::Star:
      case Tok::Nat:
      case Tok::KwInl:
      case Tok::KwInr:
      case Tok::KwFun:
        return parseValueLed();
      default:
        fail(t.pos, "expected a computation, found " + describe(t), {"computation"});
    }
  }

  // do-chain after the 'do' keyword:  (binder '<-' comp ';')* comp
  CompPtr parseChain(Pos p) {
    bool boundForm = (check(Tok::Ident) || check(Tok::Dummy)) && check(Tok::BindArrow, 1);
    if (boundForm) {
      std::string var = parseBinder();
      next(); // <-
      CompPtr bound = parseComp();
      expect(Tok::Semi, "rest of do chain");
      return c_do(var, bound, parseChain(peek().pos), p);
    }
    CompPtr head = parseComp();
    if (accept(Tok::Semi)) return c_do("_", head, parseChain(peek().pos), p);
    return head;
  }

  // 'inl' binder '=>' comp '|' 'inr' binder '=>' comp
  std::tuple<std::string, CompPtr, std::string, CompPtr> parseSumBranches() {
    expect(Tok::KwInl, "left branch");
    std::string lv = parseBinder();
    expect(Tok::FatArrow, "left branch");
    CompPtr lc = parseComp();
    expect(Tok::Pipe, "right branch");
    expect(Tok::KwInr, "right branch");
    std::string rv = parseBinder();
    expect(Tok::FatArrow, "right branch");
    CompPtr rc = parseComp();
    return {lv, lc, rv, rc};
  }

  // A computation introduced by a value or an effect-operation call:
  //   f(v)            operation call, desugared by signature shape
  //   f(v) & p        guard: proceed with p behind the event
  //   v w             application
  CompPtr parseValueLed() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && check(Tok::LParen, 1) && isEffectOp(t.text)) {
      next();
      ValuePtr arg = parseOpArg();
      if (accept(Tok::Amp)) return c_guard(t.text, arg, parseComp(), t.pos);
      return c_call(t.text, arg, t.pos);
    }
    ValuePtr fn = parseAValue();
    if (value_start(peek().kind)) return c_app(fn, parseAValue(), t.pos);
    if (check(Tok::Amp))
      fail(peek().pos, "'&' follows an effect operation call, not a plain value");
    fail(t.pos, "a bare value is not a computation; write 'ret' in front of it");
  }
};

} // namespace

Program parse_program(const std::string& text) {
  Parser p(lex(text), nullptr);
  return p.parseProgram();
}

CompPtr parse_comp(const std::string& text, const Program& sigContext) {
  Parser p(lex(text), &sigContext);
  return p.parseCompOnly();
}

ValuePtr parse_value(const std::string& text, const Program& sigContext) {
  Parser p(lex(text), &sigContext);
  return p.parseValueOnly();
}

TypePtr parse_type(const std::string& text) {
  Parser p(lex(text), nullptr);
  return p.parseTypeOnly();
}

} // namespace gml
