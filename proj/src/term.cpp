#include "stt/term.hpp"

#include <functional>
#include <stdexcept>

namespace stt {

namespace {

TopePtr mkTope(Tope t) { return std::make_shared<const Tope>(std::move(t)); }

ExprPtr mk(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

TopePtr Tope::top() {
  static TopePtr t = mkTope(Tope{Kind::Top, nullptr, nullptr, {}, {}});
  return t;
}
TopePtr Tope::bot() {
  static TopePtr t = mkTope(Tope{Kind::Bot, nullptr, nullptr, {}, {}});
  return t;
}
TopePtr Tope::conj(TopePtr l, TopePtr r) {
  return mkTope(Tope{Kind::And, std::move(l), std::move(r), {}, {}});
}
TopePtr Tope::disj(TopePtr l, TopePtr r) {
  return mkTope(Tope{Kind::Or, std::move(l), std::move(r), {}, {}});
}
TopePtr Tope::eq(CubeTerm x, CubeTerm y) {
  return mkTope(Tope{Kind::Eq, nullptr, nullptr, x, y});
}
TopePtr Tope::leq(CubeTerm x, CubeTerm y) {
  return mkTope(Tope{Kind::Leq, nullptr, nullptr, x, y});
}

bool topeEqual(const TopePtr& a, const TopePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Tope::Kind::Top:
    case Tope::Kind::Bot:
      return true;
    case Tope::Kind::And:
    case Tope::Kind::Or:
      return topeEqual(a->lhs, b->lhs) && topeEqual(a->rhs, b->rhs);
    case Tope::Kind::Eq:
    case Tope::Kind::Leq:
      return a->a == b->a && a->b == b->b;
  }
  return false;
}

bool shapeEqual(const Shape& a, const Shape& b) {
  return a.cubeVars.size() == b.cubeVars.size() && topeEqual(a.tope, b.tope);
}

ExprPtr mkUniverse() {
  static ExprPtr u = mk(Expr{Expr::Kind::Universe});
  return u;
}
ExprPtr mkVar(int idx) {
  Expr e{Expr::Kind::Var};
  e.idx = idx;
  return mk(std::move(e));
}
ExprPtr mkFVar(int level) {
  Expr e{Expr::Kind::FVar};
  e.idx = level;
  return mk(std::move(e));
}
ExprPtr mkDef(std::string name) {
  Expr e{Expr::Kind::Def};
  e.name = std::move(name);
  return mk(std::move(e));
}
ExprPtr mkPi(ExprPtr dom, ExprPtr cod) {
  Expr e{Expr::Kind::Pi};
  e.a = std::move(dom);
  e.b = std::move(cod);
  return mk(std::move(e));
}
ExprPtr mkLam(std::vector<std::string> binders, ExprPtr body, bool phantom,
              int tupleArity) {
  Expr e{Expr::Kind::Lam};
  e.binders = std::move(binders);
  e.a = std::move(body);
  e.phantom = phantom;
  e.arity = tupleArity;
  return mk(std::move(e));
}
ExprPtr mkApp(ExprPtr fn, ExprPtr arg) {
  Expr e{Expr::Kind::App};
  e.a = std::move(fn);
  e.b = std::move(arg);
  return mk(std::move(e));
}
ExprPtr mkSigma(ExprPtr fst, ExprPtr snd) {
  Expr e{Expr::Kind::Sigma};
  e.a = std::move(fst);
  e.b = std::move(snd);
  return mk(std::move(e));
}
ExprPtr mkPair(ExprPtr a, ExprPtr b) {
  Expr e{Expr::Kind::Pair};
  e.a = std::move(a);
  e.b = std::move(b);
  return mk(std::move(e));
}
ExprPtr mkFst(ExprPtr p) {
  Expr e{Expr::Kind::Fst};
  e.a = std::move(p);
  return mk(std::move(e));
}
ExprPtr mkSnd(ExprPtr p) {
  Expr e{Expr::Kind::Snd};
  e.a = std::move(p);
  return mk(std::move(e));
}
ExprPtr mkId(ExprPtr ty, ExprPtr lhs, ExprPtr rhs) {
  Expr e{Expr::Kind::Id};
  e.a = std::move(ty);
  e.b = std::move(lhs);
  e.c = std::move(rhs);
  return mk(std::move(e));
}
ExprPtr mkRefl(ExprPtr tm) {
  Expr e{Expr::Kind::Refl};
  e.a = std::move(tm);
  return mk(std::move(e));
}
ExprPtr mkIdJ(ExprPtr motive, ExprPtr base, ExprPtr path) {
  Expr e{Expr::Kind::IdJ};
  e.a = std::move(motive);
  e.b = std::move(base);
  e.c = std::move(path);
  return mk(std::move(e));
}
ExprPtr mkUnitType() {
  static ExprPtr u = mk(Expr{Expr::Kind::UnitType});
  return u;
}
ExprPtr mkUnitTt() {
  static ExprPtr u = mk(Expr{Expr::Kind::UnitTt});
  return u;
}
ExprPtr mkExt(std::vector<std::string> binders, TopePtr psi, TopePtr phi,
              ExprPtr family, ExprPtr partial) {
  Expr e{Expr::Kind::Ext};
  e.arity = static_cast<int>(binders.size());
  e.binders = std::move(binders);
  e.topePsi = std::move(psi);
  e.topePhi = std::move(phi);
  e.a = std::move(family);
  e.b = std::move(partial);
  return mk(std::move(e));
}
ExprPtr mkExtSurface(std::vector<std::string> binders, ExprPtr shapeExpr, TopePtr phi,
                     ExprPtr family, ExprPtr partial) {
  Expr e{Expr::Kind::Ext};
  e.arity = static_cast<int>(binders.size());
  e.binders = std::move(binders);
  e.c = std::move(shapeExpr);
  e.topePhi = std::move(phi);
  e.a = std::move(family);
  e.b = std::move(partial);
  return mk(std::move(e));
}

ExprPtr mkExtLam(int arity, std::vector<std::string> binders, ExprPtr body) {
  Expr e{Expr::Kind::ExtLam};
  e.arity = arity;
  e.binders = std::move(binders);
  e.a = std::move(body);
  return mk(std::move(e));
}
ExprPtr mkCubePoint(std::vector<CubeTerm> pt) {
  Expr e{Expr::Kind::CubePoint};
  e.arity = static_cast<int>(pt.size());
  e.cubes = std::move(pt);
  return mk(std::move(e));
}
ExprPtr mkShapeType(Shape s) {
  Expr e{Expr::Kind::ShapeType};
  e.arity = static_cast<int>(s.cubeVars.size());
  e.shape = std::move(s);
  return mk(std::move(e));
}
ExprPtr mkRecOr(std::vector<RecOrBranch> branches) {
  Expr e{Expr::Kind::RecOr};
  e.branches = std::move(branches);
  return mk(std::move(e));
}
ExprPtr mkProd(ExprPtr a, ExprPtr b) {
  Expr e{Expr::Kind::Prod};
  e.a = std::move(a);
  e.b = std::move(b);
  return mk(std::move(e));
}
ExprPtr mkAnn(ExprPtr tm, ExprPtr ty) {
  Expr e{Expr::Kind::Ann};
  e.a = std::move(tm);
  e.b = std::move(ty);
  return mk(std::move(e));
}

ExprPtr withSpan(ExprPtr e, Span s) {
  Expr copy = *e;
  copy.span = s;
  return mk(std::move(copy));
}

// ---------------------------------------------------------------------------
// Generic traversal: rewrite term variables and cube terms, tracking how many
// term/cube binders have been crossed.

namespace {

// Hooks receive every (free or bound) variable node plus the number of term
// and cube binders crossed to reach it.
using TermVarFn = std::function<ExprPtr(const Expr& var, int termDepth, int cubeDepth)>;
using CubeVarFn = std::function<CubeTerm(const CubeTerm&, int termDepth, int cubeDepth)>;

CubeTerm mapCubeTerm(const CubeTerm& t, const CubeVarFn& cf, int td, int cd) {
  if (t.kind == CubeTerm::Kind::BVar || t.kind == CubeTerm::Kind::FVar)
    return cf(t, td, cd);
  return t;
}

TopePtr mapTope(const TopePtr& t, const CubeVarFn& cf, int td, int cd) {
  if (!t) return t;
  switch (t->kind) {
    case Tope::Kind::Top:
    case Tope::Kind::Bot:
      return t;
    case Tope::Kind::And:
      return Tope::conj(mapTope(t->lhs, cf, td, cd), mapTope(t->rhs, cf, td, cd));
    case Tope::Kind::Or:
      return Tope::disj(mapTope(t->lhs, cf, td, cd), mapTope(t->rhs, cf, td, cd));
    case Tope::Kind::Eq:
      return Tope::eq(mapCubeTerm(t->a, cf, td, cd), mapCubeTerm(t->b, cf, td, cd));
    case Tope::Kind::Leq:
      return Tope::leq(mapCubeTerm(t->a, cf, td, cd), mapCubeTerm(t->b, cf, td, cd));
  }
  return t;
}

ExprPtr mapExpr(const ExprPtr& e, const TermVarFn& tf, const CubeVarFn& cf,
                int td, int cd) {
  if (!e) return e;
  switch (e->kind) {
    case Expr::Kind::Universe:
    case Expr::Kind::UnitType:
    case Expr::Kind::UnitTt:
    case Expr::Kind::Def:
    case Expr::Kind::ShapeType:
      return e;
    case Expr::Kind::Var:
    case Expr::Kind::FVar:
      return tf(*e, td, cd);
    case Expr::Kind::Pi: {
      Expr out = *e;
      out.a = mapExpr(e->a, tf, cf, td, cd);
      out.b = mapExpr(e->b, tf, cf, td + 1, cd);
      return mk(std::move(out));
    }
    case Expr::Kind::Sigma: {
      Expr out = *e;
      out.a = mapExpr(e->a, tf, cf, td, cd);
      out.b = mapExpr(e->b, tf, cf, td + 1, cd);
      return mk(std::move(out));
    }
    case Expr::Kind::Lam: {
      Expr out = *e;
      int n = static_cast<int>(e->binders.size());
      // Surface lambdas also reserve cube slots until elaboration sorts the
      // binder into a term or cube binder.
      out.a = mapExpr(e->a, tf, cf, td + n, cd + (e->phantom ? n : 0));
      return mk(std::move(out));
    }
    case Expr::Kind::App:
    case Expr::Kind::Pair:
    case Expr::Kind::Prod:
    case Expr::Kind::Ann: {
      Expr out = *e;
      out.a = mapExpr(e->a, tf, cf, td, cd);
      out.b = mapExpr(e->b, tf, cf, td, cd);
      return mk(std::move(out));
    }
    case Expr::Kind::Fst:
    case Expr::Kind::Snd:
    case Expr::Kind::Refl: {
      Expr out = *e;
      out.a = mapExpr(e->a, tf, cf, td, cd);
      return mk(std::move(out));
    }
    case Expr::Kind::Id:
    case Expr::Kind::IdJ: {
      Expr out = *e;
      out.a = mapExpr(e->a, tf, cf, td, cd);
      out.b = mapExpr(e->b, tf, cf, td, cd);
      out.c = mapExpr(e->c, tf, cf, td, cd);
      return mk(std::move(out));
    }
    case Expr::Kind::Ext: {
      Expr out = *e;
      // topePsi/topePhi are closed over the k binder variables; only the
      // family and partial term can see the outside.
      out.a = mapExpr(e->a, tf, cf, td, cd + e->arity);
      out.b = mapExpr(e->b, tf, cf, td, cd + e->arity);
      return mk(std::move(out));
    }
    case Expr::Kind::ExtLam: {
      Expr out = *e;
      out.a = mapExpr(e->a, tf, cf, td, cd + e->arity);
      return mk(std::move(out));
    }
    case Expr::Kind::CubePoint: {
      Expr out = *e;
      for (auto& t : out.cubes) t = mapCubeTerm(t, cf, td, cd);
      return mk(std::move(out));
    }
    case Expr::Kind::RecOr: {
      Expr out = *e;
      for (auto& br : out.branches) {
        br.tope = mapTope(br.tope, cf, td, cd);
        br.body = mapExpr(br.body, tf, cf, td, cd);
      }
      return mk(std::move(out));
    }
  }
  return e;
}

}  // namespace

namespace {

ExprPtr keepTermVar(const Expr& v, int, int) {
  return std::make_shared<const Expr>(v);
}
CubeTerm keepCubeVar(const CubeTerm& c, int, int) { return c; }

}  // namespace

ExprPtr shiftTerm(const ExprPtr& e, int by, int cutoff) {
  if (by == 0) return e;
  TermVarFn tf = [&](const Expr& v, int td, int) -> ExprPtr {
    if (v.kind == Expr::Kind::FVar) return std::make_shared<const Expr>(v);
    if (v.idx >= td + cutoff) return mkVar(v.idx + by);
    return mkVar(v.idx);
  };
  return mapExpr(e, tf, keepCubeVar, 0, 0);
}

TopePtr shiftCubeTope(const TopePtr& t, int by, int cutoff) {
  if (by == 0) return t;
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) {
    if (c.kind != CubeTerm::Kind::BVar) return c;
    if (c.idx >= cd + cutoff) return CubeTerm::bvar(c.idx + by);
    return c;
  };
  return mapTope(t, cf, 0, 0);
}

ExprPtr shiftCube(const ExprPtr& e, int by, int cutoff) {
  if (by == 0) return e;
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) {
    if (c.kind != CubeTerm::Kind::BVar) return c;
    if (c.idx >= cd + cutoff) return CubeTerm::bvar(c.idx + by);
    return c;
  };
  return mapExpr(e, keepTermVar, cf, 0, 0);
}

ExprPtr substVar(const ExprPtr& e, int index, const ExprPtr& repl) {
  TermVarFn tf = [&](const Expr& v, int td, int cd) -> ExprPtr {
    if (v.kind == Expr::Kind::FVar) return std::make_shared<const Expr>(v);
    int target = index + td;
    if (v.idx == target) {
      // The replacement crosses td term binders and cd cube binders.
      return shiftCube(shiftTerm(repl, td), cd);
    }
    if (v.idx > target) return mkVar(v.idx - 1);
    return mkVar(v.idx);
  };
  return mapExpr(e, tf, keepCubeVar, 0, 0);
}

namespace {

CubeTerm substCubesOne(const CubeTerm& c, const std::vector<CubeTerm>& pt, int cd) {
  if (c.kind != CubeTerm::Kind::BVar) return c;
  int k = static_cast<int>(pt.size());
  int rel = c.idx - cd;
  if (rel >= 0 && rel < k) {
    // bvar(cd + i) refers to binder variable #(k-1-i); pt is in binder order.
    CubeTerm out = pt[static_cast<std::size_t>(k - 1 - rel)];
    if (out.kind == CubeTerm::Kind::BVar) out.idx += cd;
    return out;
  }
  if (rel >= k) return CubeTerm::bvar(c.idx - k);
  return c;
}

}  // namespace

TopePtr substCubesTope(const TopePtr& t, const std::vector<CubeTerm>& pt) {
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) { return substCubesOne(c, pt, cd); };
  return mapTope(t, cf, 0, 0);
}

ExprPtr substCubes(const ExprPtr& e, const std::vector<CubeTerm>& pt) {
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) { return substCubesOne(c, pt, cd); };
  return mapExpr(e, keepTermVar, cf, 0, 0);
}

ExprPtr substCube(const ExprPtr& e, int index, CubeTerm t) {
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) -> CubeTerm {
    if (c.kind != CubeTerm::Kind::BVar) return c;
    int target = index + cd;
    if (c.idx == target) {
      CubeTerm out = t;
      if (out.kind == CubeTerm::Kind::BVar) out.idx += cd;
      return out;
    }
    if (c.idx > target) return CubeTerm::bvar(c.idx - 1);
    return c;
  };
  return mapExpr(e, keepTermVar, cf, 0, 0);
}

TopePtr substCubeTope(const TopePtr& tope, int index, CubeTerm t) {
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) -> CubeTerm {
    if (c.kind != CubeTerm::Kind::BVar) return c;
    int target = index + cd;
    if (c.idx == target) {
      CubeTerm out = t;
      if (out.kind == CubeTerm::Kind::BVar) out.idx += cd;
      return out;
    }
    if (c.idx > target) return CubeTerm::bvar(c.idx - 1);
    return c;
  };
  return mapTope(tope, cf, 0, 0);
}

ExprPtr closeTermVar(const ExprPtr& e, int level) {
  TermVarFn tf = [&](const Expr& v, int td, int) -> ExprPtr {
    if (v.kind == Expr::Kind::FVar && v.idx == level) return mkVar(td);
    if (v.kind == Expr::Kind::Var && v.idx >= td) return mkVar(v.idx + 1);
    return std::make_shared<const Expr>(v);
  };
  return mapExpr(e, tf, keepCubeVar, 0, 0);
}

ExprPtr closeCubeVars(const ExprPtr& e, int firstLevel, int k) {
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) -> CubeTerm {
    if (c.kind == CubeTerm::Kind::FVar && c.idx >= firstLevel && c.idx < firstLevel + k)
      return CubeTerm::bvar(cd + (k - 1 - (c.idx - firstLevel)));
    if (c.kind == CubeTerm::Kind::BVar && c.idx >= cd) return CubeTerm::bvar(c.idx + k);
    return c;
  };
  return mapExpr(e, keepTermVar, cf, 0, 0);
}

TopePtr closeCubeVarsTope(const TopePtr& t, int firstLevel, int k) {
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) -> CubeTerm {
    if (c.kind == CubeTerm::Kind::FVar && c.idx >= firstLevel && c.idx < firstLevel + k)
      return CubeTerm::bvar(cd + (k - 1 - (c.idx - firstLevel)));
    if (c.kind == CubeTerm::Kind::BVar && c.idx >= cd) return CubeTerm::bvar(c.idx + k);
    return c;
  };
  return mapTope(t, cf, 0, 0);
}

bool alphaEq(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Universe:
    case Expr::Kind::UnitType:
    case Expr::Kind::UnitTt:
      return true;
    case Expr::Kind::Var:
    case Expr::Kind::FVar:
      return a->idx == b->idx;
    case Expr::Kind::Def:
      return a->name == b->name;
    case Expr::Kind::Pi:
    case Expr::Kind::Sigma:
    case Expr::Kind::App:
    case Expr::Kind::Pair:
    case Expr::Kind::Prod:
    case Expr::Kind::Ann:
      return alphaEq(a->a, b->a) && alphaEq(a->b, b->b);
    case Expr::Kind::Lam:
      return a->binders.size() == b->binders.size() && a->phantom == b->phantom &&
             a->arity == b->arity && alphaEq(a->a, b->a);
    case Expr::Kind::Fst:
    case Expr::Kind::Snd:
    case Expr::Kind::Refl:
      return alphaEq(a->a, b->a);
    case Expr::Kind::Id:
    case Expr::Kind::IdJ:
      return alphaEq(a->a, b->a) && alphaEq(a->b, b->b) && alphaEq(a->c, b->c);
    case Expr::Kind::Ext:
      return a->arity == b->arity && topeEqual(a->topePsi, b->topePsi) &&
             topeEqual(a->topePhi, b->topePhi) && alphaEq(a->a, b->a) &&
             alphaEq(a->b, b->b);
    case Expr::Kind::ExtLam:
      return a->arity == b->arity && alphaEq(a->a, b->a);
    case Expr::Kind::CubePoint:
      return a->cubes == b->cubes;
    case Expr::Kind::ShapeType:
      return shapeEqual(*a->shape, *b->shape);
    case Expr::Kind::RecOr: {
      if (a->branches.size() != b->branches.size()) return false;
      for (std::size_t i = 0; i < a->branches.size(); ++i) {
        if (!topeEqual(a->branches[i].tope, b->branches[i].tope)) return false;
        if (!alphaEq(a->branches[i].body, b->branches[i].body)) return false;
      }
      return true;
    }
  }
  return false;
}

TopePtr reindexShapeTope(const TopePtr& t, int k) {
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) -> CubeTerm {
    // Only closed topes are reindexed; cd is 0 throughout.
    (void)cd;
    if (c.kind != CubeTerm::Kind::BVar) return c;
    return CubeTerm::bvar(k - 1 - c.idx);
  };
  return mapTope(t, cf, 0, 0);
}

bool cubeVarOccursTope(const TopePtr& t, int index) {
  if (!t) return false;
  switch (t->kind) {
    case Tope::Kind::Top:
    case Tope::Kind::Bot:
      return false;
    case Tope::Kind::And:
    case Tope::Kind::Or:
      return cubeVarOccursTope(t->lhs, index) || cubeVarOccursTope(t->rhs, index);
    case Tope::Kind::Eq:
    case Tope::Kind::Leq: {
      auto hit = [&](const CubeTerm& c) {
        return c.kind == CubeTerm::Kind::BVar && c.idx == index;
      };
      return hit(t->a) || hit(t->b);
    }
  }
  return false;
}

bool cubeVarOccurs(const ExprPtr& e, int index) {
  bool found = false;
  CubeVarFn cf = [&](const CubeTerm& c, int, int cd) {
    if (c.kind == CubeTerm::Kind::BVar && c.idx == index + cd) found = true;
    return c;
  };
  mapExpr(e, keepTermVar, cf, 0, 0);
  return found;
}

}  // namespace stt
