#include "doctest.h"

#include <random>

#include "stt/parser.hpp"
#include "stt/printer.hpp"
#include "stt/solver.hpp"

using namespace stt;

namespace {

const std::vector<std::string> kTS = {"t", "s"};

TopePtr tp(const std::string& text, const std::vector<std::string>& vars = kTS) {
  return parseTopeText(text, vars);
}

// Random tope over `vars` variables with the given connective budget.
TopePtr randomTope(std::mt19937& rng, int vars, int fuel) {
  std::uniform_int_distribution<int> pick(0, 5);
  auto term = [&]() {
    int v = std::uniform_int_distribution<int>(0, vars + 1)(rng);
    if (v < vars) return CubeTerm::bvar(v);
    return v == vars ? CubeTerm::zero() : CubeTerm::one();
  };
  if (fuel <= 0) {
    switch (pick(rng)) {
      case 0: return Tope::top();
      case 1: return Tope::bot();
      case 2: case 3: return Tope::eq(term(), term());
      default: return Tope::leq(term(), term());
    }
  }
  switch (pick(rng)) {
    case 0: return Tope::conj(randomTope(rng, vars, fuel - 1), randomTope(rng, vars, fuel - 1));
    case 1: return Tope::disj(randomTope(rng, vars, fuel - 1), randomTope(rng, vars, fuel - 1));
    case 2: return Tope::eq(term(), term());
    case 3: return Tope::leq(term(), term());
    default: return randomTope(rng, vars, 0);
  }
}

// Oracle evaluation of a DNF: a conjunct list evaluates like the conjunction.
TopePtr dnfToTope(const std::vector<std::vector<Atom>>& dnf) {
  TopePtr out = Tope::bot();
  bool first = true;
  for (const auto& conj : dnf) {
    TopePtr c = Tope::top();
    for (const auto& a : conj) {
      TopePtr at = a.kind == Atom::Kind::Eq   ? Tope::eq(a.a, a.b)
                   : a.kind == Atom::Kind::Leq ? Tope::leq(a.a, a.b)
                                               : Tope::bot();
      c = Tope::conj(c, at);
    }
    out = first ? c : Tope::disj(out, c);
    first = false;
  }
  return first ? Tope::bot() : out;
}

}  // namespace

TEST_CASE("dnf of TOP and BOT") {
  CHECK(Solver::dnf(Tope::top()).size() == 1);
  CHECK(Solver::dnf(Tope::top())[0].empty());
  CHECK(Solver::dnf(Tope::bot()).empty());
}

TEST_CASE("dnf distributes") {
  // (t≡0 ∨ t≡1) ∧ s≤t -> two conjuncts of two atoms each
  auto d = Solver::dnf(tp("(t === 0 \\/ t === 1) /\\ s <= t"));
  REQUIRE(d.size() == 2);
  CHECK(d[0].size() == 2);
  CHECK(d[1].size() == 2);
}

TEST_CASE("dnf is oracle-equivalent to its input") {
  std::mt19937 rng(3);
  Solver solver;
  for (int i = 0; i < 120; ++i) {
    TopePtr phi = randomTope(rng, 3, 3);
    TopePtr psi = dnfToTope(Solver::dnf(phi));
    CHECK(solver.oracle(3, phi, psi, 5));
    CHECK(solver.oracle(3, psi, phi, 5));
  }
}

TEST_CASE("saturate records antisymmetry consequences") {
  Solver solver;
  std::vector<Atom> atoms = {Atom::leq(CubeTerm::bvar(0), CubeTerm::bvar(1)),
                             Atom::leq(CubeTerm::bvar(1), CubeTerm::bvar(0))};
  Leaf leaf = solver.saturate(atoms, 2);
  CHECK_FALSE(leaf.inconsistent);
  CHECK(leaf.holdsEq(0, 1));
}

TEST_CASE("saturate detects endpoint clashes") {
  Solver solver(true);
  std::vector<Atom> atoms = {Atom::eq(CubeTerm::bvar(0), CubeTerm::zero()),
                             Atom::leq(CubeTerm::one(), CubeTerm::bvar(0))};
  CHECK(solver.saturate(atoms, 1).inconsistent);
  Solver loose(false);
  CHECK_FALSE(loose.saturate(atoms, 1).inconsistent);
}

TEST_CASE("saturate of nothing has only reflexive and bound facts") {
  Solver solver;
  Leaf leaf = solver.saturate({}, 1);
  CHECK_FALSE(leaf.inconsistent);
  CHECK(leaf.holdsLeq(0, 0));
  CHECK(leaf.holdsLeq(leaf.zeroId(), 0));
  CHECK(leaf.holdsLeq(0, leaf.oneId()));
  CHECK_FALSE(leaf.holdsLeq(leaf.oneId(), 0));
}

TEST_CASE("entails: reflexivity of the order") {
  Solver solver;
  CHECK(solver.entails(1, Tope::top(), tp("t <= t", {"t"})));
}

TEST_CASE("entails: the inner horn lies in the triangle") {
  Solver solver;
  CHECK(solver.entails(2, tp("s === 0 \\/ t === 1"), tp("s <= t")));
  CHECK_FALSE(solver.entails(2, tp("s <= t"), tp("s === 0 \\/ t === 1")));
}

TEST_CASE("entails: ex falso and endpoint separation") {
  Solver solver;
  CHECK(solver.entails(2, Tope::bot(), tp("t === s")));
  CHECK(solver.entails(1, tp("t === 0 /\\ t === 1", {"t"}), Tope::bot()));
  Solver loose(false);
  CHECK_FALSE(loose.entails(1, tp("t === 0 /\\ t === 1", {"t"}), Tope::bot()));
}

TEST_CASE("entails: cut on random triples") {
  std::mt19937 rng(17);
  Solver solver;
  int hits = 0;
  for (int i = 0; i < 300; ++i) {
    TopePtr a = randomTope(rng, 2, 2);
    TopePtr b = randomTope(rng, 2, 2);
    TopePtr c = randomTope(rng, 2, 2);
    if (solver.entails(2, a, b) && solver.entails(2, b, c)) {
      ++hits;
      CHECK(solver.entails(2, a, c));
    }
    CHECK(solver.entails(2, a, a));
  }
  CHECK(hits > 0);
}

TEST_CASE("entails is monotone under hypothesis strengthening") {
  std::mt19937 rng(19);
  Solver solver;
  for (int i = 0; i < 200; ++i) {
    TopePtr hyp = randomTope(rng, 2, 2);
    TopePtr goal = randomTope(rng, 2, 2);
    TopePtr extra = randomTope(rng, 2, 1);
    if (solver.entails(2, hyp, goal))
      CHECK(solver.entails(2, Tope::conj(hyp, extra), goal));
  }
}

TEST_CASE("shapeIncluded on named shapes") {
  Solver solver;
  Shape bd1{{"t"}, tp("t === 0 \\/ t === 1", {"t"})};
  Shape d1{{"t"}, Tope::top()};
  Shape d2{kTS, tp("s <= t")};
  Shape horn1{kTS, tp("s === 0 \\/ t === 1")};
  Shape bd2{kTS, tp("s === t \\/ s === 0 \\/ t === 1")};
  CHECK(solver.shapeIncluded(bd1, d1));
  CHECK(solver.shapeIncluded(bd2, d2));
  CHECK_FALSE(solver.shapeIncluded(d2, horn1));
  CHECK_THROWS_AS(solver.shapeIncluded(bd1, d2), ContextMismatch);
}

TEST_CASE("pushout product of the interval boundary with itself") {
  Solver solver;
  ShapeInclusion b1 = solver.mkInclusion({"t"}, tp("t === 0 \\/ t === 1", {"t"}),
                                         Tope::top());
  ShapeInclusion b2 = solver.mkInclusion({"s"}, tp("s === 0 \\/ s === 1", {"s"}),
                                         Tope::top());
  ShapeInclusion out = solver.pushoutProduct(b1, b2);
  REQUIRE(out.cubeVars.size() == 2);
  // Solver-equivalent to the boundary of the square.
  TopePtr square = tp("t === 0 \\/ t === 1 \\/ s === 0 \\/ s === 1");
  CHECK(solver.entails(2, out.sub, square));
  CHECK(solver.entails(2, square, out.sub));
  // The formula shape is the literal instantiation (φ∧ζ)∨(ψ∧χ).
  TopePtr expected = Tope::disj(
      Tope::conj(tp("t === 0 \\/ t === 1"), Tope::top()),
      Tope::conj(Tope::top(), tp("s === 0 \\/ s === 1")));
  CHECK(topeEqual(out.sub, expected));
  CHECK(topeEqual(out.super, Tope::conj(Tope::top(), Tope::top())));
}

TEST_CASE("pushout product with a trivial inclusion absorbs") {
  Solver solver;
  ShapeInclusion j = solver.mkInclusion({"t"}, tp("t === 0", {"t"}), Tope::top());
  ShapeInclusion triv = solver.mkInclusion({"s"}, Tope::top(), Tope::top());
  ShapeInclusion out = solver.pushoutProduct(j, triv);
  CHECK(solver.entails(2, out.sub, out.super));
  CHECK(solver.entails(2, out.super, out.sub));
}

TEST_CASE("pushout product builds the lifting boundary pattern") {
  // (vertex ⊆ interval) pushout (interval boundary ⊆ interval)
  Solver solver;
  ShapeInclusion j = solver.mkInclusion({"t"}, tp("t === 0", {"t"}), Tope::top());
  ShapeInclusion b = solver.mkInclusion({"s"}, tp("s === 0 \\/ s === 1", {"s"}),
                                        Tope::top());
  ShapeInclusion out = solver.pushoutProduct(j, b);
  TopePtr expected = Tope::disj(Tope::conj(tp("t === 0"), Tope::top()),
                                Tope::conj(Tope::top(), tp("s === 0 \\/ s === 1")));
  CHECK(topeEqual(out.sub, expected));
  // sub always entails super
  CHECK(solver.entails(2, out.sub, out.super));
}

TEST_CASE("pushout product sub entails super on random inclusions") {
  std::mt19937 rng(29);
  Solver solver;
  int built = 0;
  for (int i = 0; i < 100 && built < 40; ++i) {
    TopePtr s1 = randomTope(rng, 1, 1);
    TopePtr s2 = randomTope(rng, 1, 1);
    if (!solver.entails(1, s1, Tope::top())) continue;
    if (!solver.entails(1, s2, Tope::top())) continue;
    ShapeInclusion j = solver.mkInclusion({"t"}, s1, Tope::top());
    ShapeInclusion k = solver.mkInclusion({"s"}, s2, Tope::top());
    ShapeInclusion out = solver.pushoutProduct(j, k);
    CHECK(solver.entails(2, out.sub, out.super));
    ++built;
  }
  CHECK(built > 0);
}

TEST_CASE("oracle matches entails on random sequents") {
  std::mt19937 rng(31);
  Solver solver;
  for (int i = 0; i < 400; ++i) {
    TopePtr hyp = randomTope(rng, 2, 2);
    TopePtr goal = randomTope(rng, 2, 2);
    CHECK(solver.entails(2, hyp, goal) == solver.oracle(2, hyp, goal, 4));
  }
  Solver loose(false);
  for (int i = 0; i < 200; ++i) {
    TopePtr hyp = randomTope(rng, 2, 2);
    TopePtr goal = randomTope(rng, 2, 2);
    CHECK(loose.entails(2, hyp, goal) == loose.oracle(2, hyp, goal, 4));
  }
}

TEST_CASE("memoized entails stays deterministic") {
  Solver solver;
  TopePtr hyp = tp("s === 0 \\/ t === 1");
  TopePtr goal = tp("s <= t");
  bool first = solver.entails(2, hyp, goal);
  for (int i = 0; i < 5; ++i) CHECK(solver.entails(2, hyp, goal) == first);
  solver.clearMemo();
  CHECK(solver.entails(2, hyp, goal) == first);
}
