#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "stt/printer.hpp"
#include "stt/term.hpp"

using namespace stt;

namespace {

ExprPtr var(int i) { return mkVar(i); }

// Random closed-ish expression generator over a small grammar, used for the
// substitution and alpha-equivalence properties.
ExprPtr randomExpr(std::mt19937& rng, int termDepth, int cubeDepth, int fuel) {
  std::uniform_int_distribution<int> pick(0, 9);
  if (fuel <= 0) {
    if (termDepth > 0 && pick(rng) < 7)
      return mkVar(std::uniform_int_distribution<int>(0, termDepth - 1)(rng));
    return mkUnitTt();
  }
  switch (pick(rng)) {
    case 0:
      return mkLam({"x"}, randomExpr(rng, termDepth + 1, cubeDepth, fuel - 1));
    case 1:
      return mkApp(randomExpr(rng, termDepth, cubeDepth, fuel - 1),
                   randomExpr(rng, termDepth, cubeDepth, fuel - 1));
    case 2:
      return mkPair(randomExpr(rng, termDepth, cubeDepth, fuel - 1),
                    randomExpr(rng, termDepth, cubeDepth, fuel - 1));
    case 3:
      return mkFst(randomExpr(rng, termDepth, cubeDepth, fuel - 1));
    case 4:
      return mkSnd(randomExpr(rng, termDepth, cubeDepth, fuel - 1));
    case 5:
      return mkPi(randomExpr(rng, termDepth, cubeDepth, fuel - 1),
                  randomExpr(rng, termDepth + 1, cubeDepth, fuel - 1));
    case 6: {
      TopePtr phi = Tope::eq(CubeTerm::bvar(0), CubeTerm::zero());
      return mkExt({"t"}, Tope::top(), phi,
                   randomExpr(rng, termDepth, cubeDepth + 1, fuel - 1),
                   randomExpr(rng, termDepth, cubeDepth + 1, fuel - 1));
    }
    case 7:
      return mkExtLam(1, {"t"}, randomExpr(rng, termDepth, cubeDepth + 1, fuel - 1));
    case 8:
      if (cubeDepth > 0)
        return mkApp(randomExpr(rng, termDepth, cubeDepth, fuel - 1),
                     mkCubePoint({CubeTerm::bvar(
                         std::uniform_int_distribution<int>(0, cubeDepth - 1)(rng))}));
      return mkRefl(randomExpr(rng, termDepth, cubeDepth, fuel - 1));
    default:
      if (termDepth > 0)
        return mkVar(std::uniform_int_distribution<int>(0, termDepth - 1)(rng));
      return mkUnitType();
  }
}

}  // namespace

TEST_CASE("substVar replaces the target index") {
  // (Var 0)[0 := b] = b
  ExprPtr b = mkUnitTt();
  CHECK(alphaEq(substVar(var(0), 0, b), b));
}

TEST_CASE("substVar shifts the replacement under binders") {
  // (\. (1 0))[0 := b]  =  \. (b' 0) with b' shifted by one binder
  ExprPtr body = mkApp(var(1), var(0));
  ExprPtr lam = mkLam({"x"}, body);
  ExprPtr repl = var(2);  // some outer variable
  ExprPtr out = substVar(lam, 0, repl);
  ExprPtr expected = mkLam({"x"}, mkApp(var(3), var(0)));
  CHECK(alphaEq(out, expected));
}

TEST_CASE("substVar under Pi adjusts untouched indices") {
  // (Pi A (Var 1))[0 := c]: the codomain variable pointing past the binder
  // drops by one.
  ExprPtr pi = mkPi(var(0), var(2));
  ExprPtr out = substVar(pi, 0, mkUnitTt());
  CHECK(alphaEq(out, mkPi(mkUnitTt(), var(1))));
}

TEST_CASE("substVar against a naive named-style reference on random terms") {
  // Reference: substitute by explicit recursion, tracking depth.
  std::function<ExprPtr(const ExprPtr&, int, const ExprPtr&)> ref =
      [&](const ExprPtr& e, int target, const ExprPtr& repl) -> ExprPtr {
    switch (e->kind) {
      case Expr::Kind::Var:
        if (e->idx == target) return repl;
        if (e->idx > target) return mkVar(e->idx - 1);
        return e;
      case Expr::Kind::Lam:
        return mkLam(e->binders, ref(e->a, target + 1, shiftTerm(repl, 1)), e->phantom,
                     e->arity);
      case Expr::Kind::Pi:
        return mkPi(ref(e->a, target, repl), ref(e->b, target + 1, shiftTerm(repl, 1)));
      case Expr::Kind::App:
        return mkApp(ref(e->a, target, repl), ref(e->b, target, repl));
      case Expr::Kind::Pair:
        return mkPair(ref(e->a, target, repl), ref(e->b, target, repl));
      case Expr::Kind::Fst:
        return mkFst(ref(e->a, target, repl));
      case Expr::Kind::Snd:
        return mkSnd(ref(e->a, target, repl));
      case Expr::Kind::Refl:
        return mkRefl(ref(e->a, target, repl));
      case Expr::Kind::Ext:
        return mkExt(e->binders, e->topePsi, e->topePhi,
                     ref(e->a, target, shiftCube(repl, e->arity)),
                     e->b ? ref(e->b, target, shiftCube(repl, e->arity)) : nullptr);
      case Expr::Kind::ExtLam:
        return mkExtLam(e->arity, e->binders,
                        ref(e->a, target, shiftCube(repl, e->arity)));
      default:
        return e;
    }
  };
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    ExprPtr e = randomExpr(rng, 3, 0, 5);
    ExprPtr repl = randomExpr(rng, 2, 0, 3);
    // Substitute index 2 (an "outer" variable) so both paths agree on scope.
    CHECK(alphaEq(substVar(e, 2, repl), ref(e, 2, repl)));
  }
}

TEST_CASE("substVar leaves closed expressions unchanged") {
  // Corpus expressions are closed, so substitution at any position is the
  // identity on them.
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    ExprPtr e = randomExpr(rng, 0, 0, 5);
    CHECK(alphaEq(substVar(e, 1, mkVar(1)), e));
    CHECK(alphaEq(substVar(e, 0, mkUnitTt()), e));
  }
}

TEST_CASE("substCube rewrites tope atoms") {
  // (t <= 1)[t := 0] = 0 <= 1
  TopePtr t = Tope::leq(CubeTerm::bvar(0), CubeTerm::one());
  TopePtr out = substCubeTope(t, 0, CubeTerm::zero());
  CHECK(topeEqual(out, Tope::leq(CubeTerm::zero(), CubeTerm::one())));
}

TEST_CASE("substCubes instantiates a boundary case split") {
  // recBD t x y with t := 0 keeps the branch topes instantiated at 0.
  ExprPtr x = mkDef("x"), y = mkDef("y");
  std::vector<RecOrBranch> branches;
  branches.push_back({Tope::eq(CubeTerm::bvar(0), CubeTerm::zero()), x});
  branches.push_back({Tope::eq(CubeTerm::bvar(0), CubeTerm::one()), y});
  ExprPtr split = mkRecOr(branches);
  ExprPtr inst = substCubes(split, {CubeTerm::zero()});
  REQUIRE(inst->kind == Expr::Kind::RecOr);
  CHECK(topeEqual(inst->branches[0].tope,
                  Tope::eq(CubeTerm::zero(), CubeTerm::zero())));
  CHECK(topeEqual(inst->branches[1].tope, Tope::eq(CubeTerm::zero(), CubeTerm::one())));
}

TEST_CASE("substCube is a no-op when the variable does not occur") {
  std::mt19937 rng(23);
  for (int i = 0; i < 100; ++i) {
    ExprPtr e = randomExpr(rng, 2, 1, 4);
    if (cubeVarOccurs(e, 1)) continue;
    // Substituting an absent variable only renumbers; doing it after a shift
    // that reintroduces the slot gives back the original.
    ExprPtr once = substCube(shiftCube(e, 1, 1), 1, CubeTerm::zero());
    CHECK(alphaEq(once, e));
  }
}

TEST_CASE("alphaEq is positional") {
  CHECK(alphaEq(mkLam({"x"}, var(0)), mkLam({"y"}, var(0))));
  CHECK_FALSE(alphaEq(mkLam({"x"}, var(0)),
                      mkLam({"x"}, mkApp(mkLam({"y"}, var(0)), var(0)))));
}

TEST_CASE("alphaEq is an equivalence relation on random terms") {
  std::mt19937 rng(41);
  for (int i = 0; i < 60; ++i) {
    ExprPtr a = randomExpr(rng, 2, 1, 4);
    ExprPtr b = randomExpr(rng, 2, 1, 4);
    ExprPtr c = randomExpr(rng, 2, 1, 4);
    CHECK(alphaEq(a, a));
    CHECK(alphaEq(a, b) == alphaEq(b, a));
    if (alphaEq(a, b) && alphaEq(b, c)) CHECK(alphaEq(a, c));
  }
}

TEST_CASE("closeTermVar inverts opening") {
  std::mt19937 rng(59);
  for (int i = 0; i < 100; ++i) {
    ExprPtr body = randomExpr(rng, 1, 0, 4);
    ExprPtr opened = substVar(body, 0, mkFVar(17));
    CHECK(alphaEq(closeTermVar(opened, 17), body));
  }
}

TEST_CASE("closeCubeVars inverts opening") {
  std::mt19937 rng(61);
  for (int i = 0; i < 100; ++i) {
    ExprPtr body = randomExpr(rng, 0, 2, 4);
    ExprPtr opened = substCubes(body, {CubeTerm::fvar(4), CubeTerm::fvar(5)});
    CHECK(alphaEq(closeCubeVars(opened, 4, 2), body));
  }
}
