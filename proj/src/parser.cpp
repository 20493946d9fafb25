#include "stt/parser.hpp"

#include <algorithm>

namespace stt {

namespace {

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  std::vector<std::string> termScope;
  std::vector<std::string> cubeScope;

  explicit Parser(std::vector<Token> t) : toks(std::move(t)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos + ahead, toks.size() - 1);
    return toks[i];
  }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& advance() { return toks[std::min(pos++, toks.size() - 1)]; }
  bool accept(Tok k) {
    if (at(k)) {
      ++pos;
      return true;
    }
    return false;
  }
  const Token& expect(Tok k, const std::string& context) {
    if (!at(k)) {
      throw ParseError("expected " + std::string(tokenName(k)) + " " + context +
                           ", found " + std::string(tokenName(peek().kind)),
                       peek().span, tokenName(k));
    }
    return toks[pos++];
  }
  [[noreturn]] void fail(const std::string& msg, const std::string& expected = {}) const {
    throw ParseError(msg + " (found " + tokenName(peek().kind) + ")", peek().span,
                     expected);
  }

  // --- scopes ------------------------------------------------------------

  ExprPtr resolveName(const std::string& n, Span sp) {
    if (n != "_") {
      for (std::size_t i = termScope.size(); i-- > 0;) {
        if (termScope[i] == n)
          return withSpan(mkVar(static_cast<int>(termScope.size() - 1 - i)), sp);
      }
      for (std::size_t i = cubeScope.size(); i-- > 0;) {
        if (cubeScope[i] == n)
          return withSpan(
              mkCubePoint({CubeTerm::bvar(static_cast<int>(cubeScope.size() - 1 - i))}),
              sp);
      }
    }
    return withSpan(mkDef(n), sp);
  }

  CubeTerm resolveCubeName(const std::string& n, Span sp) const {
    for (std::size_t i = cubeScope.size(); i-- > 0;) {
      if (cubeScope[i] == n)
        return CubeTerm::bvar(static_cast<int>(cubeScope.size() - 1 - i));
    }
    throw ParseError("unknown cube variable '" + n + "'", sp);
  }

  // --- cube terms and topes ------------------------------------------------

  CubeTerm parseCubeTerm() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      advance();
      if (t.lexeme == "0") return CubeTerm::zero();
      if (t.lexeme == "1") return CubeTerm::one();
      throw ParseError("cube constants are 0 and 1", t.span);
    }
    if (t.kind == Tok::Ident) {
      advance();
      return resolveCubeName(t.lexeme, t.span);
    }
    fail("expected a cube term", "cube term");
  }

  TopePtr parseTope() { return parseTopeOr(); }

  TopePtr parseTopeOr() {
    TopePtr l = parseTopeAnd();
    while (accept(Tok::OrOr)) l = Tope::disj(l, parseTopeAnd());
    return l;
  }
  TopePtr parseTopeAnd() {
    TopePtr l = parseTopeAtom();
    while (accept(Tok::AndAnd)) l = Tope::conj(l, parseTopeAtom());
    return l;
  }
  TopePtr parseTopeAtom() {
    if (accept(Tok::KwTop)) return Tope::top();
    if (accept(Tok::KwBot)) return Tope::bot();
    if (accept(Tok::LParen)) {
      TopePtr t = parseTope();
      expect(Tok::RParen, "after tope");
      return t;
    }
    CubeTerm a = parseCubeTerm();
    if (accept(Tok::EqEqEq)) return Tope::eq(a, parseCubeTerm());
    if (accept(Tok::Leq)) return Tope::leq(a, parseCubeTerm());
    fail("expected '===' or '<=' in tope atom", "'===' or '<='");
  }

  // --- shapes ----------------------------------------------------------------

  std::vector<std::string> parseBinderNames(bool& tupled) {
    tupled = false;
    if (at(Tok::Ident) || at(Tok::Underscore)) {
      return {advance().lexeme};
    }
    expect(Tok::LParen, "in binder");
    tupled = true;
    std::vector<std::string> names;
    if (accept(Tok::RParen)) return names;
    while (true) {
      if (at(Tok::Ident) || at(Tok::Underscore)) {
        names.push_back(advance().lexeme);
      } else {
        fail("expected binder name", "identifier");
      }
      if (accept(Tok::Comma)) continue;
      expect(Tok::RParen, "after binder names");
      break;
    }
    return names;
  }

  // {(t, s) : I * I | tope}; the tope is closed over the binder names.
  Shape parseShapeLiteral() {
    expect(Tok::LBrace, "at shape");
    bool tupled = false;
    std::vector<std::string> names = parseBinderNames(tupled);
    expect(Tok::Colon, "in shape");
    if (at(Tok::Number) && peek().lexeme == "1") {
      advance();
      if (!names.empty())
        throw ParseError("terminal cube '1' takes an empty binder '()'", peek().span);
    } else {
      expect(Tok::KwI, "in cube sort");
      std::size_t arity = 1;
      while (accept(Tok::Star)) {
        expect(Tok::KwI, "in cube sort");
        ++arity;
      }
      if (arity != names.size())
        throw ParseError("cube sort arity " + std::to_string(arity) +
                             " does not match " + std::to_string(names.size()) +
                             " binder name(s)",
                         peek().span);
    }
    expect(Tok::Bar, "before shape tope");
    std::vector<std::string> saved = std::move(cubeScope);
    cubeScope = names;
    TopePtr tope;
    try {
      tope = parseTope();
    } catch (...) {
      cubeScope = std::move(saved);
      throw;
    }
    cubeScope = std::move(saved);
    expect(Tok::RBrace, "after shape");
    Shape s;
    s.cubeVars = std::move(names);
    s.tope = reindexShapeTope(tope, static_cast<int>(s.cubeVars.size()));
    return s;
  }

  // --- expressions ---------------------------------------------------------

  // Lookahead: '(' names ':' ... ')' followed by -> or *.
  bool binderAhead() const {
    if (!at(Tok::LParen)) return false;
    std::size_t i = pos + 1;
    bool sawName = false;
    while (i < toks.size() &&
           (toks[i].kind == Tok::Ident || toks[i].kind == Tok::Underscore)) {
      ++i;
      sawName = true;
    }
    if (!sawName || i >= toks.size() || toks[i].kind != Tok::Colon) return false;
    int depth = 1;
    ++i;
    while (i < toks.size() && depth > 0) {
      if (toks[i].kind == Tok::LParen) ++depth;
      if (toks[i].kind == Tok::RParen) --depth;
      if (toks[i].kind == Tok::End) return false;
      ++i;
    }
    if (i >= toks.size()) return false;
    return toks[i].kind == Tok::Arrow || toks[i].kind == Tok::Star;
  }

  ExprPtr parseExpr() {
    Span sp = peek().span;
    if (at(Tok::Lambda)) return parseLambda();
    if (at(Tok::KwExt)) return parseExtFormer();
    if (binderAhead()) {
      expect(Tok::LParen, "at binder");
      std::vector<std::string> names;
      while (at(Tok::Ident) || at(Tok::Underscore)) names.push_back(advance().lexeme);
      expect(Tok::Colon, "in binder");
      ExprPtr ty = parseExpr();
      expect(Tok::RParen, "after binder");
      if (accept(Tok::Arrow)) {
        for (const auto& n : names) termScope.push_back(n);
        ExprPtr cod = parseExpr();
        for (std::size_t i = 0; i < names.size(); ++i) termScope.pop_back();
        // (x y : A) -> B nests with the shared domain shifted as we go deeper.
        ExprPtr out = cod;
        for (std::size_t i = names.size(); i-- > 0;)
          out = withSpan(mkPi(shiftTerm(ty, static_cast<int>(i)), out), sp);
        return out;
      }
      expect(Tok::Star, "after dependent pair binder");
      if (names.size() != 1)
        throw ParseError("dependent pair binder takes one name", sp);
      termScope.push_back(names[0]);
      ExprPtr snd = parseProd();
      termScope.pop_back();
      return withSpan(mkSigma(ty, snd), sp);
    }
    ExprPtr e = parseProd();
    if (accept(Tok::Arrow)) {
      termScope.push_back("_");
      ExprPtr cod = parseExpr();
      termScope.pop_back();
      return withSpan(mkPi(e, cod), sp);
    }
    return e;
  }

  ExprPtr parseLambda() {
    Span sp = peek().span;
    expect(Tok::Lambda, "at lambda");
    struct Binder {
      std::vector<std::string> names;
      bool tupled;
    };
    std::vector<Binder> groups;
    while (at(Tok::Ident) || at(Tok::Underscore) || at(Tok::LParen)) {
      bool tupled = false;
      std::vector<std::string> names = parseBinderNames(tupled);
      groups.push_back({std::move(names), tupled});
    }
    if (groups.empty()) fail("expected lambda binder", "identifier");
    expect(Tok::Arrow, "after lambda binders");
    int pushed = 0;
    for (const auto& g : groups)
      for (const auto& n : g.names) {
        termScope.push_back(n);
        cubeScope.push_back(n);
        ++pushed;
      }
    ExprPtr body;
    try {
      body = parseExpr();
    } catch (...) {
      for (int i = 0; i < pushed; ++i) {
        termScope.pop_back();
        cubeScope.pop_back();
      }
      throw;
    }
    for (int i = 0; i < pushed; ++i) {
      termScope.pop_back();
      cubeScope.pop_back();
    }
    ExprPtr out = body;
    for (std::size_t i = groups.size(); i-- > 0;) {
      const Binder& g = groups[i];
      if (g.tupled) {
        out = mkLam(g.names, out, /*phantom=*/true,
                    /*tupleArity=*/static_cast<int>(g.names.size()));
      } else {
        out = mkLam(g.names, out, /*phantom=*/true);
      }
    }
    return withSpan(out, sp);
  }

  ExprPtr parseExtFormer() {
    Span sp = peek().span;
    expect(Tok::KwExt, "at ext");
    expect(Tok::LParen, "after ext");
    bool tupled = false;
    std::vector<std::string> names = parseBinderNames(tupled);
    expect(Tok::Colon, "in ext binder");
    ExprPtr shapeExpr = parseProd();
    expect(Tok::RParen, "after ext binder");
    expect(Tok::Arrow, "after ext binder");
    for (const auto& n : names) cubeScope.push_back(n);
    ExprPtr family;
    try {
      family = parseExpr();
    } catch (...) {
      for (std::size_t i = 0; i < names.size(); ++i) cubeScope.pop_back();
      throw;
    }
    TopePtr phi;
    ExprPtr partial;
    if (at(Tok::LBracket)) {
      advance();
      // The boundary tope may only mention the ext binder variables.
      std::vector<std::string> saved = std::move(cubeScope);
      cubeScope = names;
      try {
        phi = parseTope();
      } catch (...) {
        cubeScope = std::move(saved);
        throw;
      }
      cubeScope = std::move(saved);
      expect(Tok::MapsTo, "in ext boundary");
      try {
        partial = parseExpr();
      } catch (...) {
        for (std::size_t i = 0; i < names.size(); ++i) cubeScope.pop_back();
        throw;
      }
      expect(Tok::RBracket, "after ext boundary");
    }
    for (std::size_t i = 0; i < names.size(); ++i) cubeScope.pop_back();
    return withSpan(mkExtSurface(names, shapeExpr, phi, family, partial), sp);
  }

  ExprPtr parseProd() {
    Span sp = peek().span;
    ExprPtr e = parseApp();
    if (accept(Tok::Star)) {
      ExprPtr rhs = parseProd();
      return withSpan(mkProd(e, rhs), sp);
    }
    return e;
  }

  bool atAtomStart() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Number:
      case Tok::KwU:
      case Tok::KwShape:
      case Tok::KwUnit:
      case Tok::KwTt:
      case Tok::LParen:
      case Tok::LBrace:
      case Tok::KwFst:
      case Tok::KwSnd:
      case Tok::KwRefl:
      case Tok::KwId:
      case Tok::KwIdJ:
      case Tok::KwRecBD:
      case Tok::KwRecOR:
        return true;
      default:
        return false;
    }
  }

  ExprPtr parseApp() {
    Span sp = peek().span;
    ExprPtr e = parseAtom();
    while (atAtomStart()) e = withSpan(mkApp(e, parseAtom()), sp);
    return e;
  }

  ExprPtr parseAtom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwU:
      case Tok::KwShape:
        advance();
        return withSpan(mkUniverse(), t.span);
      case Tok::KwUnit:
        advance();
        return withSpan(mkUnitType(), t.span);
      case Tok::KwTt:
        advance();
        return withSpan(mkUnitTt(), t.span);
      case Tok::Ident:
        advance();
        return resolveName(t.lexeme, t.span);
      case Tok::Number: {
        advance();
        if (t.lexeme == "0") return withSpan(mkCubePoint({CubeTerm::zero()}), t.span);
        if (t.lexeme == "1") return withSpan(mkCubePoint({CubeTerm::one()}), t.span);
        throw ParseError("cube constants are 0 and 1", t.span);
      }
      case Tok::KwFst:
        advance();
        return withSpan(mkFst(parseAtom()), t.span);
      case Tok::KwSnd:
        advance();
        return withSpan(mkSnd(parseAtom()), t.span);
      case Tok::KwRefl:
        advance();
        return withSpan(mkRefl(parseAtom()), t.span);
      case Tok::KwId: {
        advance();
        ExprPtr a = parseAtom();
        ExprPtr b = parseAtom();
        ExprPtr c = parseAtom();
        return withSpan(mkId(a, b, c), t.span);
      }
      case Tok::KwIdJ: {
        advance();
        expect(Tok::LParen, "after idJ");
        ExprPtr motive = parseExpr();
        expect(Tok::Comma, "in idJ");
        ExprPtr base = parseExpr();
        expect(Tok::Comma, "in idJ");
        ExprPtr path = parseExpr();
        expect(Tok::RParen, "after idJ arguments");
        return withSpan(mkIdJ(motive, base, path), t.span);
      }
      case Tok::KwRecBD: {
        advance();
        CubeTerm scrut = parseCubeTerm();
        ExprPtr a = parseAtom();
        ExprPtr b = parseAtom();
        std::vector<RecOrBranch> branches;
        branches.push_back({Tope::eq(scrut, CubeTerm::zero()), a});
        branches.push_back({Tope::eq(scrut, CubeTerm::one()), b});
        return withSpan(mkRecOr(std::move(branches)), t.span);
      }
      case Tok::KwRecOR: {
        advance();
        expect(Tok::LParen, "after recOR");
        std::vector<RecOrBranch> branches;
        while (true) {
          TopePtr tope = parseTope();
          expect(Tok::MapsTo, "in recOR branch");
          ExprPtr body = parseExpr();
          branches.push_back({tope, body});
          if (accept(Tok::Bar)) continue;
          break;
        }
        expect(Tok::RParen, "after recOR branches");
        return withSpan(mkRecOr(std::move(branches)), t.span);
      }
      case Tok::LBrace:
        return withSpan(mkShapeType(parseShapeLiteral()), t.span);
      case Tok::LParen: {
        advance();
        if (accept(Tok::RParen)) return withSpan(mkCubePoint({}), t.span);
        ExprPtr e = parseExpr();
        if (accept(Tok::Colon)) {
          ExprPtr ty = parseExpr();
          expect(Tok::RParen, "after annotation");
          return withSpan(mkAnn(e, ty), t.span);
        }
        if (accept(Tok::Comma)) {
          std::vector<ExprPtr> items{e};
          while (true) {
            items.push_back(parseExpr());
            if (accept(Tok::Comma)) continue;
            break;
          }
          expect(Tok::RParen, "after pair");
          ExprPtr out = items.back();
          for (std::size_t i = items.size() - 1; i-- > 0;)
            out = withSpan(mkPair(items[i], out), t.span);
          return out;
        }
        expect(Tok::RParen, "after expression");
        return e;
      }
      default:
        fail("expected an expression", "expression");
    }
  }

  // --- declarations ----------------------------------------------------------

  std::vector<std::pair<std::vector<std::string>, ExprPtr>> parseParams() {
    std::vector<std::pair<std::vector<std::string>, ExprPtr>> params;
    while (at(Tok::LParen)) {
      advance();
      std::vector<std::string> names;
      while (at(Tok::Ident) || at(Tok::Underscore)) names.push_back(advance().lexeme);
      if (names.empty()) fail("expected parameter name", "identifier");
      expect(Tok::Colon, "in parameter");
      ExprPtr ty = parseExpr();
      expect(Tok::RParen, "after parameter");
      params.emplace_back(names, ty);
      for (const auto& n : names) termScope.push_back(n);
    }
    return params;
  }

  void popParams(const std::vector<std::pair<std::vector<std::string>, ExprPtr>>& params) {
    for (const auto& p : params)
      for (std::size_t i = 0; i < p.first.size(); ++i) termScope.pop_back();
  }

  // Wrap a declared type/body in the parameter telescope. Types were parsed
  // in scope, so indices are already correct.
  static ExprPtr wrapPi(const std::vector<std::pair<std::vector<std::string>, ExprPtr>>& params,
                        ExprPtr ty) {
    for (std::size_t i = params.size(); i-- > 0;) {
      const auto& [names, domain] = params[i];
      for (std::size_t j = names.size(); j-- > 0;)
        ty = mkPi(shiftTerm(domain, static_cast<int>(j)), ty);
    }
    return ty;
  }
  static ExprPtr wrapLam(const std::vector<std::pair<std::vector<std::string>, ExprPtr>>& params,
                         ExprPtr body) {
    for (std::size_t i = params.size(); i-- > 0;) {
      const auto& [names, domain] = params[i];
      (void)domain;
      for (std::size_t j = names.size(); j-- > 0;)
        body = mkLam({names[j]}, body, /*phantom=*/false);
    }
    return body;
  }

  Decl parseDecl() {
    Decl d;
    const Token& t = peek();
    d.span = t.span;
    switch (t.kind) {
      case Tok::KwImport: {
        advance();
        d.kind = Decl::Kind::Import;
        d.name = expect(Tok::Ident, "after import").lexeme;
        expect(Tok::Semi, "after import");
        return d;
      }
      case Tok::KwDef:
      case Tok::KwPostulate: {
        bool isDef = t.kind == Tok::KwDef;
        advance();
        d.kind = isDef ? Decl::Kind::Def : Decl::Kind::Postulate;
        d.name = expect(Tok::Ident, "after keyword").lexeme;
        auto params = parseParams();
        expect(Tok::Colon, "before declared type");
        ExprPtr ty;
        ExprPtr body;
        try {
          ty = parseExpr();
          if (isDef) {
            expect(Tok::ColonEq, "before definition body");
            body = parseExpr();
          }
        } catch (...) {
          popParams(params);
          throw;
        }
        popParams(params);
        expect(Tok::Semi, "after declaration");
        d.type = wrapPi(params, ty);
        if (isDef) d.body = wrapLam(params, body);
        return d;
      }
      case Tok::DirCheck: {
        advance();
        d.kind = Decl::Kind::Check;
        d.body = parseExpr();
        if (accept(Tok::Colon)) d.type = parseExpr();
        expect(Tok::Semi, "after #check");
        return d;
      }
      case Tok::DirNormalize: {
        advance();
        d.kind = Decl::Kind::Normalize;
        d.body = parseExpr();
        expect(Tok::Semi, "after #normalize");
        return d;
      }
      case Tok::DirEntails: {
        advance();
        d.kind = Decl::Kind::Entails;
        expect(Tok::LBracket, "after #entails");
        if (!accept(Tok::RBracket)) {
          while (true) {
            d.entailsVars.push_back(expect(Tok::Ident, "in #entails variables").lexeme);
            if (accept(Tok::Comma)) continue;
            expect(Tok::RBracket, "after #entails variables");
            break;
          }
        }
        std::vector<std::string> saved = std::move(cubeScope);
        cubeScope = d.entailsVars;
        try {
          d.entailsHyp = parseTope();
          expect(Tok::Turnstile, "between topes");
          d.entailsGoal = parseTope();
        } catch (...) {
          cubeScope = std::move(saved);
          throw;
        }
        cubeScope = std::move(saved);
        int n = static_cast<int>(d.entailsVars.size());
        d.entailsHyp = reindexShapeTope(d.entailsHyp, n);
        d.entailsGoal = reindexShapeTope(d.entailsGoal, n);
        expect(Tok::Semi, "after #entails");
        return d;
      }
      default:
        fail("expected a declaration", "'def', 'postulate', 'import' or directive");
    }
  }

  SourceModule parseModule(std::string path) {
    SourceModule m;
    m.path = std::move(path);
    while (!at(Tok::End)) m.decls.push_back(parseDecl());
    return m;
  }
};

}  // namespace

SourceModule parseModule(const std::vector<Token>& tokens, std::string path) {
  Parser p(tokens);
  return p.parseModule(std::move(path));
}

SourceModule parseModuleText(const std::string& text, std::string path) {
  return parseModule(tokenize(text), std::move(path));
}

ExprPtr parseExpressionText(const std::string& text) {
  Parser p(tokenize(text));
  ExprPtr e = p.parseExpr();
  if (!p.at(Tok::End)) p.fail("trailing input after expression");
  return e;
}

TopePtr parseTopeText(const std::string& text, const std::vector<std::string>& vars) {
  Parser p(tokenize(text));
  p.cubeScope = vars;
  TopePtr t = p.parseTope();
  if (!p.at(Tok::End)) p.fail("trailing input after tope");
  return reindexShapeTope(t, static_cast<int>(vars.size()));
}

std::pair<Shape, Shape> parseInclusionText(const std::string& text) {
  Parser p(tokenize(text));
  Shape sub = p.parseShapeLiteral();
  p.expect(Tok::Leq, "between shapes");
  Shape super = p.parseShapeLiteral();
  if (!p.at(Tok::End)) p.fail("trailing input after inclusion");
  return {std::move(sub), std::move(super)};
}

}  // namespace stt
