#pragma once

#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "stt/term.hpp"

namespace stt {

// Atomic tope facts as used by the decision procedure.
struct Atom {
  enum class Kind : uint8_t { Eq, Leq, Bot };
  Kind kind = Kind::Bot;
  CubeTerm a, b;

  static Atom eq(CubeTerm x, CubeTerm y) { return {Kind::Eq, x, y}; }
  static Atom leq(CubeTerm x, CubeTerm y) { return {Kind::Leq, x, y}; }
  static Atom bot() { return {Kind::Bot, {}, {}}; }
};

// A saturated set of Leq facts over the terms {variables, 0, 1}, closed under
// reflexivity, transitivity and the bound axioms, or an inconsistency marker.
// Terms are numbered 0..n-1 for the variables, n for 0 and n+1 for 1.
struct Leaf {
  int numVars = 0;
  bool inconsistent = false;
  std::vector<bool> leq;  // (n+2)^2 adjacency matrix, row-major

  int termCount() const { return numVars + 2; }
  int zeroId() const { return numVars; }
  int oneId() const { return numVars + 1; }
  bool holdsLeq(int x, int y) const { return leq[static_cast<std::size_t>(x) * termCount() + y]; }
  bool holdsEq(int x, int y) const { return holdsLeq(x, y) && holdsLeq(y, x); }
};

struct ContextMismatch : std::runtime_error {
  explicit ContextMismatch(const std::string& what) : std::runtime_error(what) {}
};

// A verified shape inclusion sub ⊆ super over a common cube context.
struct ShapeInclusion {
  std::vector<std::string> cubeVars;
  TopePtr sub;
  TopePtr super;
};

// Decision procedure for tope sequents over the strict interval: a bounded
// total order with bottom 0 and top 1. Distinct endpoints (0 ≢ 1) is an axiom
// by default and can be switched off.
class Solver {
 public:
  explicit Solver(bool distinctEndpoints = true)
      : distinctEndpoints_(distinctEndpoints) {}

  bool distinctEndpoints() const { return distinctEndpoints_; }

  // Disjunctive normal form. Top yields one empty conjunct, Bot none.
  static std::vector<std::vector<Atom>> dnf(const TopePtr& phi);

  // Close a conjunct under the interval axioms.
  Leaf saturate(const std::vector<Atom>& atoms, int numVars) const;

  // Ξ | hyp ⊢ goal over every bounded total order (endpoints distinct iff the
  // flag is on). Complete via totality case splits; results are memoized.
  bool entails(int numVars, const TopePtr& hyp, const TopePtr& goal) const;

  bool shapeIncluded(const Shape& sub, const Shape& super) const;

  // Checked constructor for inclusions.
  ShapeInclusion mkInclusion(std::vector<std::string> cubeVars, TopePtr sub,
                             TopePtr super) const;

  // Pushout product of two inclusions: over the concatenated cube context,
  // sub = (φ ∧ ζ) ∨ (ψ ∧ χ) and super = ψ ∧ ζ.
  ShapeInclusion pushoutProduct(const ShapeInclusion& j, const ShapeInclusion& k) const;

  // Brute-force semantics: enumerate assignments into finite chains of size
  // 2..maxChain (1..maxChain without distinct endpoints). Chains of size
  // numVars+2 are enough to separate any two complete linear preorders, so
  // agreement with entails at that bound is exact; the acceptance suite tests
  // this claim.
  bool oracle(int numVars, const TopePtr& hyp, const TopePtr& goal, int maxChain) const;

  void clearMemo();

 private:
  bool entailsUncached(int numVars, const TopePtr& hyp, const TopePtr& goal) const;
  bool searchLeaf(std::vector<Atom>& atoms, int numVars,
                  const std::vector<int>& terms, const TopePtr& goal) const;
  static bool goalHolds(const Leaf& leaf, const TopePtr& goal, int numVars);

  bool distinctEndpoints_;
  mutable std::shared_mutex memoLock_;
  mutable std::unordered_map<std::string, bool> memo_;
};

// Canonical text form of a tope, also used as memo key.
std::string topeKey(const TopePtr& t);

}  // namespace stt
