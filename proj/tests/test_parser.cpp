#include "doctest.h"

#include "stt/lexer.hpp"
#include "stt/parser.hpp"
#include "stt/printer.hpp"

using namespace stt;

TEST_CASE("tokenize a lambda") {
  auto toks = tokenize("\\t -> x");
  REQUIRE(toks.size() == 5);  // includes End
  CHECK(toks[0].kind == Tok::Lambda);
  CHECK(toks[1].kind == Tok::Ident);
  CHECK(toks[1].lexeme == "t");
  CHECK(toks[2].kind == Tok::Arrow);
  CHECK(toks[3].kind == Tok::Ident);
}

TEST_CASE("tokenize tope atoms") {
  auto toks = tokenize("t <= s /\\ s === 0");
  REQUIRE(toks.size() == 8);
  CHECK(toks[1].kind == Tok::Leq);
  CHECK(toks[3].kind == Tok::AndAnd);
  CHECK(toks[5].kind == Tok::EqEqEq);
  CHECK(toks[6].kind == Tok::Number);
}

TEST_CASE("unicode aliases tokenize like ASCII") {
  auto uni = tokenize("t ≤ s ∧ s ≡ 0 ∨ ⊤ ∧ ⊥");
  auto ascii = tokenize("t <= s /\\ s === 0 \\/ TOP /\\ BOT");
  REQUIRE(uni.size() == ascii.size());
  for (std::size_t i = 0; i < uni.size(); ++i) CHECK(uni[i].kind == ascii[i].kind);
}

TEST_CASE("token spans tile the non-whitespace source") {
  std::string src = "def id (A : U) : U := A;";
  auto toks = tokenize(src);
  std::size_t covered = 0;
  for (const auto& t : toks) {
    if (t.kind == Tok::End) break;
    CHECK(t.span.begin < t.span.end);
    CHECK(t.span.end <= src.size());
    covered += t.span.end - t.span.begin;
  }
  std::size_t nonWs = 0;
  for (char c : src)
    if (c != ' ') ++nonWs;
  CHECK(covered == nonWs);
}

TEST_CASE("lex error carries a span inside the source") {
  try {
    tokenize("def ? x");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.span.begin < std::string("def ? x").size());
  }
}

TEST_CASE("parse a shape declaration") {
  auto mod = parseModuleText(
      "def Delta2 : SHAPE := {(t, s) : I * I | s <= t};", "test.stt");
  REQUIRE(mod.decls.size() == 1);
  const Decl& d = mod.decls[0];
  CHECK(d.kind == Decl::Kind::Def);
  CHECK(d.name == "Delta2");
  REQUIRE(d.body->kind == Expr::Kind::ShapeType);
  CHECK(d.body->shape->cubeVars.size() == 2);
  // level form: s <= t is bvar(1) <= bvar(0)
  CHECK(d.body->shape->tope->kind == Tope::Kind::Leq);
  CHECK(d.body->shape->tope->a == CubeTerm::bvar(1));
  CHECK(d.body->shape->tope->b == CubeTerm::bvar(0));
}

TEST_CASE("parse an extension type with boundary") {
  auto mod = parseModuleText(
      "def hom (A : U) (x : A) (y : A) : U := "
      "ext (t : {t : I | TOP}) -> A [ t === 0 \\/ t === 1 |-> recBD t x y ];",
      "test.stt");
  REQUIRE(mod.decls.size() == 1);
  // Unwrap the three parameter lambdas.
  ExprPtr body = mod.decls[0].body;
  for (int i = 0; i < 3; ++i) {
    REQUIRE(body->kind == Expr::Kind::Lam);
    body = body->a;
  }
  REQUIRE(body->kind == Expr::Kind::Ext);
  CHECK(body->arity == 1);
  CHECK(body->topePhi != nullptr);
  REQUIRE(body->b->kind == Expr::Kind::RecOr);
  CHECK(body->b->branches.size() == 2);
}

TEST_CASE("unbalanced brackets fail with a span") {
  try {
    parseModuleText("def f : U := (U;", "test.stt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.span.begin <= std::string("def f : U := (U;").size());
  }
}

TEST_CASE("print round-trips simple expressions through the parser") {
  const char* cases[] = {
      "\\x -> x",
      "(x : U) -> x",
      "(x : U) * x",
      "Unit -> Unit",
      "fst (tt , tt)",
      "Id Unit tt tt",
      "refl tt",
      "{(t, s) : I * I | s <= t \\/ s === 0}",
  };
  for (const char* c : cases) {
    ExprPtr e = parseExpressionText(c);
    ExprPtr again = parseExpressionText(printExpr(e));
    CHECK(alphaEq(e, again));
  }
}

TEST_CASE("parse standalone topes in level form") {
  TopePtr t = parseTopeText("s === 0 \\/ t === 1", {"t", "s"});
  REQUIRE(t->kind == Tope::Kind::Or);
  CHECK(t->lhs->a == CubeTerm::bvar(1));  // s is level 1
  CHECK(t->rhs->a == CubeTerm::bvar(0));  // t is level 0
}

TEST_CASE("parse inclusion specs") {
  auto [sub, super] = parseInclusionText(
      "{t : I | t === 0 \\/ t === 1} <= {t : I | TOP}");
  CHECK(sub.cubeVars.size() == 1);
  CHECK(super.tope->kind == Tope::Kind::Top);
}
