#include "doctest.h"

#include "stt/checker.hpp"
#include "stt/printer.hpp"
#include "stt/session.hpp"

using namespace stt;

namespace {

// A tiny environment: a type with two points and an arrow between them.
const char* kArrowEnv =
    "postulate B : U;\n"
    "postulate x : B;\n"
    "postulate y : B;\n"
    "def hom (A : U) (a : A) (b : A) : U := ext (t : {t : I | TOP}) -> A "
    "[ t === 0 \\/ t === 1 |-> recBD t a b ];\n"
    "postulate f : hom B x y;\n";

struct Fixture {
  Session session;
  Fixture() { REQUIRE(session.checkSource(kArrowEnv, "fixture.stt")); }
  Checker checker() { return Checker(session.env(), session.solver()); }
};

}  // namespace

TEST_CASE("whnf beta-reduces applications") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  auto [core, ty] = checker.infer(ctx, parseExpressionText("(\\a -> a : B -> B) x"));
  (void)ty;
  ExprPtr w = checker.whnf(ctx, core);
  CHECK(printExpr(w) == "x");
}

TEST_CASE("whnf reduces an extension application on the boundary") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  auto [core, ty] = checker.infer(ctx, parseExpressionText("f 0"));
  CHECK(printExpr(checker.whnf(ctx, core)) == "x");
  auto [core1, ty1] = checker.infer(ctx, parseExpressionText("f 1"));
  CHECK(printExpr(checker.whnf(ctx, core1)) == "y");
  (void)ty;
  (void)ty1;
}

TEST_CASE("whnf computes J on refl") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  auto [core, ty] =
      checker.infer(ctx, parseExpressionText("idJ(\\b p -> B, x, refl y)"));
  (void)ty;
  CHECK(printExpr(checker.whnf(ctx, core)) == "x");
}

TEST_CASE("eta for extension lambdas") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  auto [f1, ty] = checker.infer(ctx, parseExpressionText("f"));
  ExprPtr f2 = checker.check(ctx, parseExpressionText("\\t -> f t"), ty);
  CHECK(checker.convertible(ctx, f1, f2, ty));
}

TEST_CASE("everything is convertible under a false tope context") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  ctx.tope = Tope::bot();
  ExprPtr a = parseExpressionText("x");
  ExprPtr b = parseExpressionText("y");
  CHECK(checker.convertible(ctx, a, b, mkDef("B")));
}

TEST_CASE("boundary evaluation under an entailed tope") {
  // Under the tope t === 0 the application f t converts to x.
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  ctx.cubeNames = {"t"};
  ctx.tope = Tope::eq(CubeTerm::fvar(0), CubeTerm::zero());
  ExprPtr ft = mkApp(mkDef("f"), mkCubePoint({CubeTerm::fvar(0)}));
  CHECK(checker.convertible(ctx, ft, mkDef("x"), mkDef("B")));
  // Cross-check by substituting the endpoint and renormalizing.
  Ctx plain;
  ExprPtr f0 = mkApp(mkDef("f"), mkCubePoint({CubeTerm::zero()}));
  CHECK(printExpr(checker.whnf(plain, f0)) == "x");
}

TEST_CASE("infer gives Refl an identity type") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  auto [core, ty] = checker.infer(ctx, parseExpressionText("refl x"));
  (void)core;
  ExprPtr w = checker.whnf(ctx, ty);
  REQUIRE(w->kind == Expr::Kind::Id);
  CHECK(printExpr(w->b) == "x");
}

TEST_CASE("infer projects pair components") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  auto [core, ty] = checker.infer(ctx, parseExpressionText("fst (x , y)"));
  (void)core;
  CHECK(printExpr(checker.whnf(ctx, ty)) == "B");
}

TEST_CASE("an extension application infers the family instance") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  auto [core, ty] = checker.infer(ctx, parseExpressionText("f 0"));
  CHECK(printExpr(checker.whnf(ctx, ty)) == "B");
  CHECK(checker.convertible(ctx, core, mkDef("x"), mkDef("B")));
}

TEST_CASE("the constant map checks as an identity arrow") {
  Fixture fx;
  CHECK(fx.session.checkSource("def idx : hom B x x := \\t -> x;", "idarr.stt"));
}

TEST_CASE("a boundary mismatch raises BoundaryViolation") {
  Fixture fx;
  bool ok = fx.session.checkSource("def bad : hom B x y := \\t -> y;", "bad.stt");
  CHECK_FALSE(ok);
  REQUIRE_FALSE(fx.session.diagnostics().empty());
  CHECK(fx.session.diagnostics().front().category == "BoundaryViolation");
}

TEST_CASE("pairs check against dependent pair types") {
  Fixture fx;
  CHECK(fx.session.checkSource(
      "def withPoint : (A : U) * (A -> U) := (B , \\b -> hom B x x);",
      "pair.stt"));
}

TEST_CASE("extension formation requires the boundary to be a subshape") {
  Fixture fx;
  bool ok = fx.session.checkSource(
      "def bad : U := ext (t : {t : I | t === 0}) -> B [ t === 1 |-> y ];",
      "badform.stt");
  CHECK_FALSE(ok);
  REQUIRE_FALSE(fx.session.diagnostics().empty());
  CHECK(fx.session.diagnostics().front().category == "TopeFalse");
}

TEST_CASE("formation with a false boundary is plain shape-Pi") {
  Fixture fx;
  CHECK(fx.session.checkSource("def cyl : U := ext (t : {t : I | TOP}) -> B;",
                               "plain.stt"));
}

TEST_CASE("dependent family formation over an arrow") {
  Fixture fx;
  CHECK(fx.session.checkSource(
      "postulate P : B -> U;\n"
      "postulate d : P x;\n"
      "postulate e : P y;\n"
      "def dhom : U := ext (t : {t : I | TOP}) -> P (f t) "
      "[ t === 0 \\/ t === 1 |-> recBD t d e ];\n",
      "dhom.stt"));
}

TEST_CASE("checkDecl rejects duplicate names") {
  Fixture fx;
  bool ok = fx.session.checkSource("postulate B : U;", "dup.stt");
  CHECK_FALSE(ok);
  CHECK(fx.session.diagnostics().front().message.find("redefinition") !=
        std::string::npos);
}

TEST_CASE("tope-false application is rejected") {
  Fixture fx;
  bool ok = fx.session.checkSource(
      "postulate g : ext (t : {t : I | t === 0}) -> B;\n"
      "def bad : B := g 1;\n",
      "topefalse.stt");
  CHECK_FALSE(ok);
  CHECK(fx.session.diagnostics().front().category == "TopeFalse");
}

TEST_CASE("infer and check agree on the arrow fixture") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  auto [core, ty] = checker.infer(ctx, parseExpressionText("f"));
  (void)core;
  CHECK_NOTHROW(checker.check(ctx, parseExpressionText("f"), ty));
}

TEST_CASE("subject reduction for a beta redex") {
  Fixture fx;
  auto checker = fx.checker();
  Ctx ctx;
  auto [core, ty] = checker.infer(ctx, parseExpressionText("(\\a -> a : B -> B) x"));
  ExprPtr w = checker.whnf(ctx, core);
  CHECK_NOTHROW(checker.check(ctx, w, ty));
}
