#include "stt/solver.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>

namespace stt {

namespace {

// Term numbering inside leaves: vars 0..n-1, then 0, then 1.
int termId(const CubeTerm& t, int numVars) {
  switch (t.kind) {
    case CubeTerm::Kind::BVar:
    case CubeTerm::Kind::FVar:
      return t.idx;
    case CubeTerm::Kind::Zero:
      return numVars;
    case CubeTerm::Kind::One:
      return numVars + 1;
  }
  return 0;
}

}  // namespace

std::string topeKey(const TopePtr& t) {
  if (!t) return "?";
  auto ct = [](const CubeTerm& c) {
    switch (c.kind) {
      case CubeTerm::Kind::BVar: return "v" + std::to_string(c.idx);
      case CubeTerm::Kind::FVar: return "f" + std::to_string(c.idx);
      case CubeTerm::Kind::Zero: return std::string("0");
      case CubeTerm::Kind::One: return std::string("1");
    }
    return std::string("?");
  };
  switch (t->kind) {
    case Tope::Kind::Top: return "T";
    case Tope::Kind::Bot: return "F";
    case Tope::Kind::And: return "(" + topeKey(t->lhs) + "&" + topeKey(t->rhs) + ")";
    case Tope::Kind::Or: return "(" + topeKey(t->lhs) + "|" + topeKey(t->rhs) + ")";
    case Tope::Kind::Eq: return "(" + ct(t->a) + "=" + ct(t->b) + ")";
    case Tope::Kind::Leq: return "(" + ct(t->a) + "<" + ct(t->b) + ")";
  }
  return "?";
}

std::vector<std::vector<Atom>> Solver::dnf(const TopePtr& phi) {
  if (!phi) return {{}};
  switch (phi->kind) {
    case Tope::Kind::Top:
      return {{}};
    case Tope::Kind::Bot:
      return {};
    case Tope::Kind::Eq:
      return {{Atom::eq(phi->a, phi->b)}};
    case Tope::Kind::Leq:
      return {{Atom::leq(phi->a, phi->b)}};
    case Tope::Kind::Or: {
      auto l = dnf(phi->lhs);
      auto r = dnf(phi->rhs);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case Tope::Kind::And: {
      auto l = dnf(phi->lhs);
      auto r = dnf(phi->rhs);
      std::vector<std::vector<Atom>> out;
      out.reserve(l.size() * r.size());
      for (const auto& lc : l)
        for (const auto& rc : r) {
          std::vector<Atom> c = lc;
          c.insert(c.end(), rc.begin(), rc.end());
          out.push_back(std::move(c));
        }
      return out;
    }
  }
  return {};
}

Leaf Solver::saturate(const std::vector<Atom>& atoms, int numVars) const {
  Leaf leaf;
  leaf.numVars = numVars;
  int m = leaf.termCount();
  leaf.leq.assign(static_cast<std::size_t>(m) * m, false);
  auto at = [&](int x, int y) -> std::vector<bool>::reference {
    return leaf.leq[static_cast<std::size_t>(x) * m + y];
  };

  // Reflexivity and the bound axioms 0 ≤ x ≤ 1.
  for (int x = 0; x < m; ++x) {
    at(x, x) = true;
    at(leaf.zeroId(), x) = true;
    at(x, leaf.oneId()) = true;
  }
  for (const auto& a : atoms) {
    switch (a.kind) {
      case Atom::Kind::Bot:
        leaf.inconsistent = true;
        return leaf;
      case Atom::Kind::Leq:
        at(termId(a.a, numVars), termId(a.b, numVars)) = true;
        break;
      case Atom::Kind::Eq:
        at(termId(a.a, numVars), termId(a.b, numVars)) = true;
        at(termId(a.b, numVars), termId(a.a, numVars)) = true;
        break;
    }
  }
  // Transitive closure. Equality congruence and antisymmetry consequences are
  // subsumed: x ≡ y is stored as both inequalities, and any fact about x then
  // transfers to y through transitivity.
  for (int k = 0; k < m; ++k)
    for (int x = 0; x < m; ++x) {
      if (!at(x, k)) continue;
      for (int y = 0; y < m; ++y)
        if (at(k, y)) at(x, y) = true;
    }
  if (distinctEndpoints_ && leaf.holdsLeq(leaf.oneId(), leaf.zeroId()))
    leaf.inconsistent = true;
  return leaf;
}

bool Solver::goalHolds(const Leaf& leaf, const TopePtr& goal, int numVars) {
  switch (goal->kind) {
    case Tope::Kind::Top:
      return true;
    case Tope::Kind::Bot:
      return false;
    case Tope::Kind::And:
      return goalHolds(leaf, goal->lhs, numVars) && goalHolds(leaf, goal->rhs, numVars);
    case Tope::Kind::Or:
      return goalHolds(leaf, goal->lhs, numVars) || goalHolds(leaf, goal->rhs, numVars);
    case Tope::Kind::Eq:
      return leaf.holdsEq(termId(goal->a, numVars), termId(goal->b, numVars));
    case Tope::Kind::Leq:
      return leaf.holdsLeq(termId(goal->a, numVars), termId(goal->b, numVars));
  }
  return false;
}

namespace {

void collectTerms(const TopePtr& t, int numVars, std::vector<bool>& seen) {
  if (!t) return;
  switch (t->kind) {
    case Tope::Kind::Top:
    case Tope::Kind::Bot:
      return;
    case Tope::Kind::And:
    case Tope::Kind::Or:
      collectTerms(t->lhs, numVars, seen);
      collectTerms(t->rhs, numVars, seen);
      return;
    case Tope::Kind::Eq:
    case Tope::Kind::Leq:
      seen[static_cast<std::size_t>(termId(t->a, numVars))] = true;
      seen[static_cast<std::size_t>(termId(t->b, numVars))] = true;
      return;
  }
}

}  // namespace

// Case-split totality on undecided pairs until the leaf is a complete linear
// preorder on the mentioned terms, then evaluate the goal atom-wise.
bool Solver::searchLeaf(std::vector<Atom>& atoms, int numVars,
                        const std::vector<int>& terms, const TopePtr& goal) const {
  Leaf leaf = saturate(atoms, numVars);
  if (leaf.inconsistent) return true;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      int x = terms[i], y = terms[j];
      if (leaf.holdsLeq(x, y) || leaf.holdsLeq(y, x)) continue;
      auto lift = [&](int id) {
        if (id == leaf.zeroId()) return CubeTerm::zero();
        if (id == leaf.oneId()) return CubeTerm::one();
        return CubeTerm::bvar(id);
      };
      atoms.push_back(Atom::leq(lift(x), lift(y)));
      bool left = searchLeaf(atoms, numVars, terms, goal);
      atoms.pop_back();
      if (!left) return false;
      atoms.push_back(Atom::leq(lift(y), lift(x)));
      bool right = searchLeaf(atoms, numVars, terms, goal);
      atoms.pop_back();
      return right;
    }
  return goalHolds(leaf, goal, numVars);
}

bool Solver::entailsUncached(int numVars, const TopePtr& hyp, const TopePtr& goal) const {
  std::vector<bool> seen(static_cast<std::size_t>(numVars) + 2, false);
  collectTerms(hyp, numVars, seen);
  collectTerms(goal, numVars, seen);
  seen[static_cast<std::size_t>(numVars)] = true;      // 0
  seen[static_cast<std::size_t>(numVars) + 1] = true;  // 1
  std::vector<int> terms;
  for (int i = 0; i < numVars + 2; ++i)
    if (seen[static_cast<std::size_t>(i)]) terms.push_back(i);

  for (auto& conj : dnf(hyp)) {
    if (!searchLeaf(conj, numVars, terms, goal)) return false;
  }
  return true;
}

bool Solver::entails(int numVars, const TopePtr& hyp, const TopePtr& goal) const {
  std::string key = std::to_string(numVars) + ";" + topeKey(hyp) + ";" + topeKey(goal);
  {
    std::shared_lock lock(memoLock_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  bool result = entailsUncached(numVars, hyp, goal);
  {
    std::unique_lock lock(memoLock_);
    memo_.emplace(std::move(key), result);
  }
  return result;
}

void Solver::clearMemo() {
  std::unique_lock lock(memoLock_);
  memo_.clear();
}

bool Solver::shapeIncluded(const Shape& sub, const Shape& super) const {
  if (sub.cubeVars.size() != super.cubeVars.size())
    throw ContextMismatch("shape inclusion: cube contexts differ in length (" +
                          std::to_string(sub.cubeVars.size()) + " vs " +
                          std::to_string(super.cubeVars.size()) + ")");
  return entails(static_cast<int>(sub.cubeVars.size()), sub.tope, super.tope);
}

ShapeInclusion Solver::mkInclusion(std::vector<std::string> cubeVars, TopePtr sub,
                                   TopePtr super) const {
  if (!entails(static_cast<int>(cubeVars.size()), sub, super))
    throw ContextMismatch("not a shape inclusion: sub tope does not entail super tope");
  return ShapeInclusion{std::move(cubeVars), std::move(sub), std::move(super)};
}

ShapeInclusion Solver::pushoutProduct(const ShapeInclusion& j, const ShapeInclusion& k) const {
  int nj = static_cast<int>(j.cubeVars.size());
  std::vector<std::string> vars = j.cubeVars;
  vars.insert(vars.end(), k.cubeVars.begin(), k.cubeVars.end());
  TopePtr chi = shiftCubeTope(k.sub, nj);
  TopePtr zeta = shiftCubeTope(k.super, nj);
  TopePtr sub = Tope::disj(Tope::conj(j.sub, zeta), Tope::conj(j.super, chi));
  TopePtr super = Tope::conj(j.super, zeta);
  return mkInclusion(std::move(vars), std::move(sub), std::move(super));
}

namespace {

bool evalTope(const TopePtr& t, const std::vector<int>& assign, int numVars, int top) {
  switch (t->kind) {
    case Tope::Kind::Top:
      return true;
    case Tope::Kind::Bot:
      return false;
    case Tope::Kind::And:
      return evalTope(t->lhs, assign, numVars, top) && evalTope(t->rhs, assign, numVars, top);
    case Tope::Kind::Or:
      return evalTope(t->lhs, assign, numVars, top) || evalTope(t->rhs, assign, numVars, top);
    case Tope::Kind::Eq:
    case Tope::Kind::Leq: {
      auto val = [&](const CubeTerm& c) {
        switch (c.kind) {
          case CubeTerm::Kind::BVar:
          case CubeTerm::Kind::FVar:
            return assign[static_cast<std::size_t>(c.idx)];
          case CubeTerm::Kind::Zero:
            return 0;
          case CubeTerm::Kind::One:
            return top;
        }
        return 0;
      };
      int x = val(t->a), y = val(t->b);
      return t->kind == Tope::Kind::Eq ? x == y : x <= y;
    }
  }
  return false;
}

}  // namespace

bool Solver::oracle(int numVars, const TopePtr& hyp, const TopePtr& goal, int maxChain) const {
  int minChain = distinctEndpoints_ ? 2 : 1;
  for (int size = minChain; size <= maxChain; ++size) {
    std::vector<int> assign(static_cast<std::size_t>(numVars), 0);
    while (true) {
      if (evalTope(hyp, assign, numVars, size - 1) &&
          !evalTope(goal, assign, numVars, size - 1))
        return false;
      int pos = 0;
      while (pos < numVars) {
        if (++assign[static_cast<std::size_t>(pos)] < size) break;
        assign[static_cast<std::size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == numVars) break;
    }
  }
  return true;
}

}  // namespace stt
