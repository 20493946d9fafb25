#include "stt/checker.hpp"

#include <algorithm>

#include "stt/printer.hpp"

namespace stt {

const char* categoryName(Category c) {
  switch (c) {
    case Category::Mismatch: return "Mismatch";
    case Category::NotAFunction: return "NotAFunction";
    case Category::BoundaryViolation: return "BoundaryViolation";
    case Category::TopeFalse: return "TopeFalse";
    case Category::UnboundName: return "UnboundName";
    case Category::UniverseError: return "UniverseError";
  }
  return "?";
}

std::optional<Category> categoryFromName(const std::string& name) {
  static const std::pair<const char*, Category> table[] = {
      {"Mismatch", Category::Mismatch},
      {"NotAFunction", Category::NotAFunction},
      {"BoundaryViolation", Category::BoundaryViolation},
      {"TopeFalse", Category::TopeFalse},
      {"UnboundName", Category::UnboundName},
      {"UniverseError", Category::UniverseError},
  };
  for (const auto& [n, c] : table)
    if (name == n) return c;
  return std::nullopt;
}

Ctx Ctx::pushCubes(const std::vector<std::string>& names, TopePtr extraTope) const {
  Ctx out = *this;
  for (const auto& n : names) out.cubeNames.push_back(n);
  if (extraTope) out.tope = Tope::conj(out.tope, std::move(extraTope));
  return out;
}

Ctx Ctx::withTope(TopePtr t) const {
  Ctx out = *this;
  out.tope = std::move(t);
  return out;
}

Ctx Ctx::pushTerm(std::string name, ExprPtr type, ExprPtr value) const {
  Ctx out = *this;
  out.terms.push_back(TermEntry{std::move(name), std::move(type), std::move(value)});
  return out;
}

std::string describeSequent(const Ctx& ctx, const TopePtr& hyp, const std::string& goal) {
  std::string vars = "[";
  for (std::size_t i = 0; i < ctx.cubeNames.size(); ++i) {
    if (i) vars += ", ";
    vars += ctx.cubeNames[i];
  }
  vars += "]";
  return vars + " | " + printTope(hyp, ctx.cubeNames) + " : " + goal;
}

namespace {

std::vector<CubeTerm> freshCubePoint(int firstLevel, int k) {
  std::vector<CubeTerm> pt;
  pt.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pt.push_back(CubeTerm::fvar(firstLevel + i));
  return pt;
}

TopePtr atomsToTope(const std::vector<Atom>& atoms) {
  TopePtr t = Tope::top();
  bool first = true;
  for (const auto& a : atoms) {
    TopePtr at;
    switch (a.kind) {
      case Atom::Kind::Eq: at = Tope::eq(a.a, a.b); break;
      case Atom::Kind::Leq: at = Tope::leq(a.a, a.b); break;
      case Atom::Kind::Bot: at = Tope::bot(); break;
    }
    t = first ? at : Tope::conj(t, at);
    first = false;
  }
  return t;
}

TopePtr orFold(const std::vector<RecOrBranch>& branches) {
  TopePtr t;
  for (const auto& br : branches) t = t ? Tope::disj(t, br.tope) : br.tope;
  return t ? t : Tope::bot();
}

bool isBotTope(const TopePtr& t) { return !t || t->kind == Tope::Kind::Bot; }

}  // namespace

bool Checker::topeHolds(const Ctx& ctx, const TopePtr& goal) const {
  return solver_.entails(ctx.cubeDepth(), ctx.tope, goal);
}

bool Checker::ctxConsistent(const Ctx& ctx) const {
  return !solver_.entails(ctx.cubeDepth(), ctx.tope, Tope::bot());
}

// ---------------------------------------------------------------------------
// Weak head normal form.

ExprPtr Checker::apply(const ExprPtr& f, const ExprPtr& arg) const {
  if (f->kind == Expr::Kind::Lam && !f->phantom) return substVar(f->a, 0, arg);
  if (f->kind == Expr::Kind::ExtLam && arg->kind == Expr::Kind::CubePoint)
    return substCubes(f->a, arg->cubes);
  return mkApp(f, arg);
}

std::optional<ExprPtr> Checker::inferNeutralType(const Ctx& ctx, const ExprPtr& e) const {
  switch (e->kind) {
    case Expr::Kind::FVar: {
      if (e->idx < 0 || e->idx >= static_cast<int>(ctx.terms.size())) return std::nullopt;
      ExprPtr ty = ctx.terms[static_cast<std::size_t>(e->idx)].type;
      if (!ty) return std::nullopt;
      return ty;
    }
    case Expr::Kind::Def: {
      const auto* entry = env_.lookup(e->name);
      if (!entry) return std::nullopt;
      return entry->type;
    }
    case Expr::Kind::App: {
      auto tf = inferNeutralType(ctx, e->a);
      if (!tf) return std::nullopt;
      ExprPtr tfW = whnf(ctx, *tf);
      if (tfW->kind == Expr::Kind::Pi) return substVar(tfW->b, 0, e->b);
      if (tfW->kind == Expr::Kind::Ext && e->b->kind == Expr::Kind::CubePoint)
        return substCubes(tfW->a, e->b->cubes);
      return std::nullopt;
    }
    case Expr::Kind::Fst: {
      auto tp = inferNeutralType(ctx, e->a);
      if (!tp) return std::nullopt;
      ExprPtr tpW = whnf(ctx, *tp);
      if (tpW->kind == Expr::Kind::Sigma) return tpW->a;
      return std::nullopt;
    }
    case Expr::Kind::Snd: {
      auto tp = inferNeutralType(ctx, e->a);
      if (!tp) return std::nullopt;
      ExprPtr tpW = whnf(ctx, *tp);
      if (tpW->kind == Expr::Kind::Sigma) return substVar(tpW->b, 0, mkFst(e->a));
      return std::nullopt;
    }
    case Expr::Kind::IdJ: {
      auto tp = inferNeutralType(ctx, e->c);
      if (!tp) return std::nullopt;
      ExprPtr tpW = whnf(ctx, *tp);
      if (tpW->kind == Expr::Kind::Id)
        return mkApp(mkApp(e->a, tpW->c), e->c);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

ExprPtr Checker::whnf(const Ctx& ctx, const ExprPtr& e0) const {
  ExprPtr e = e0;
  while (true) {
    switch (e->kind) {
      case Expr::Kind::Def: {
        const auto* entry = env_.lookup(e->name);
        if (entry && entry->value) {
          e = entry->value;
          continue;
        }
        return e;
      }
      case Expr::Kind::Ann:
        e = e->a;
        continue;
      case Expr::Kind::App: {
        ExprPtr f = whnf(ctx, e->a);
        if (f->kind == Expr::Kind::Lam && !f->phantom) {
          e = substVar(f->a, 0, e->b);
          continue;
        }
        if (f->kind == Expr::Kind::ExtLam && e->b->kind == Expr::Kind::CubePoint) {
          e = substCubes(f->a, e->b->cubes);
          continue;
        }
        // Strict boundary computation: an application of a neutral term of
        // extension type reduces to the partial term whenever the current
        // tope context puts the argument on the boundary.
        if (e->b->kind == Expr::Kind::CubePoint) {
          if (auto ty = inferNeutralType(ctx, f)) {
            ExprPtr tyW = whnf(ctx, *ty);
            if (tyW->kind == Expr::Kind::Ext && tyW->topePhi && tyW->b) {
              TopePtr phiInst = substCubesTope(tyW->topePhi, e->b->cubes);
              if (topeHolds(ctx, phiInst)) {
                e = substCubes(tyW->b, e->b->cubes);
                continue;
              }
            }
          }
        }
        if (f == e->a) return e;
        return mkApp(f, e->b);
      }
      case Expr::Kind::Fst: {
        ExprPtr p = whnf(ctx, e->a);
        if (p->kind == Expr::Kind::Pair) {
          e = p->a;
          continue;
        }
        if (p == e->a) return e;
        return mkFst(p);
      }
      case Expr::Kind::Snd: {
        ExprPtr p = whnf(ctx, e->a);
        if (p->kind == Expr::Kind::Pair) {
          e = p->b;
          continue;
        }
        if (p == e->a) return e;
        return mkSnd(p);
      }
      case Expr::Kind::IdJ: {
        ExprPtr p = whnf(ctx, e->c);
        if (p->kind == Expr::Kind::Refl) {
          e = e->b;
          continue;
        }
        if (p == e->c) return e;
        return mkIdJ(e->a, e->b, p);
      }
      case Expr::Kind::RecOr: {
        bool taken = false;
        for (const auto& br : e->branches) {
          if (topeHolds(ctx, br.tope)) {
            e = br.body;
            taken = true;
            break;
          }
        }
        if (taken) continue;
        return e;
      }
      default:
        return e;
    }
  }
}

// ---------------------------------------------------------------------------
// Conversion.

bool Checker::cubeTermsEqual(const Ctx& ctx, const CubeTerm& x, const CubeTerm& y) const {
  if (x == y) return true;
  return solver_.entails(ctx.cubeDepth(), ctx.tope, Tope::eq(x, y));
}

bool Checker::convertible(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b,
                          const ExprPtr& type) const {
  auto conjuncts = Solver::dnf(ctx.tope);
  for (auto& conj : conjuncts) {
    Leaf leaf = solver_.saturate(conj, ctx.cubeDepth());
    if (leaf.inconsistent) continue;
    if (!convLeaf(ctx.withTope(atomsToTope(conj)), a, b, type)) return false;
  }
  return true;
}

bool Checker::convertibleTypes(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b) const {
  return convertible(ctx, a, b, mkUniverse());
}

bool Checker::convLeaf(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b,
                       const ExprPtr& type) const {
  ExprPtr tyW = type ? whnf(ctx, type) : nullptr;
  if (!tyW) return convUntyped(ctx, a, b);
  switch (tyW->kind) {
    case Expr::Kind::Pi: {
      int l = static_cast<int>(ctx.terms.size());
      Ctx ctx2 = ctx.pushTerm("_x", tyW->a);
      ExprPtr v = mkFVar(l);
      return convLeaf(ctx2, apply(whnf(ctx, a), v), apply(whnf(ctx, b), v),
                      substVar(tyW->b, 0, v));
    }
    case Expr::Kind::Ext: {
      int k = tyW->arity;
      int L = ctx.cubeDepth();
      auto pt = freshCubePoint(L, k);
      TopePtr psiInst = substCubesTope(tyW->topePsi, pt);
      std::vector<std::string> names;
      for (int i = 0; i < k; ++i)
        names.push_back("_c" + std::to_string(L + i));
      Ctx ctx2 = ctx.pushCubes(names, psiInst);
      ExprPtr ptE = mkCubePoint(pt);
      // The shape tope may be disjunctive, so split again.
      return convertible(ctx2, apply(whnf(ctx, a), ptE), apply(whnf(ctx, b), ptE),
                         substCubes(tyW->a, pt));
    }
    case Expr::Kind::Sigma: {
      ExprPtr aw = whnf(ctx, a), bw = whnf(ctx, b);
      auto proj1 = [&](const ExprPtr& x) {
        return x->kind == Expr::Kind::Pair ? x->a : mkFst(x);
      };
      auto proj2 = [&](const ExprPtr& x) {
        return x->kind == Expr::Kind::Pair ? x->b : mkSnd(x);
      };
      if (!convLeaf(ctx, proj1(aw), proj1(bw), tyW->a)) return false;
      return convLeaf(ctx, proj2(aw), proj2(bw), substVar(tyW->b, 0, proj1(aw)));
    }
    case Expr::Kind::UnitType:
      return true;
    case Expr::Kind::Universe:
      return convType(ctx, whnf(ctx, a), whnf(ctx, b));
    case Expr::Kind::Id: {
      ExprPtr aw = whnf(ctx, a), bw = whnf(ctx, b);
      if (aw->kind == Expr::Kind::Refl && bw->kind == Expr::Kind::Refl)
        return convLeaf(ctx, aw->a, bw->a, tyW->a);
      return convUntyped(ctx, aw, bw);
    }
    case Expr::Kind::ShapeType: {
      ExprPtr aw = whnf(ctx, a), bw = whnf(ctx, b);
      if (aw->kind == Expr::Kind::CubePoint && bw->kind == Expr::Kind::CubePoint) {
        if (aw->cubes.size() != bw->cubes.size()) return false;
        for (std::size_t i = 0; i < aw->cubes.size(); ++i)
          if (!cubeTermsEqual(ctx, aw->cubes[i], bw->cubes[i])) return false;
        return true;
      }
      return convUntyped(ctx, aw, bw);
    }
    default:
      return convUntyped(ctx, a, b);
  }
}

bool Checker::convType(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b) const {
  if (a->kind != b->kind) return convUntyped(ctx, a, b);
  switch (a->kind) {
    case Expr::Kind::Universe:
    case Expr::Kind::UnitType:
      return true;
    case Expr::Kind::Pi:
    case Expr::Kind::Sigma: {
      if (!convType(ctx, whnf(ctx, a->a), whnf(ctx, b->a))) return false;
      int l = static_cast<int>(ctx.terms.size());
      Ctx ctx2 = ctx.pushTerm("_x", a->a);
      ExprPtr v = mkFVar(l);
      return convertibleTypes(ctx2, substVar(a->b, 0, v), substVar(b->b, 0, v));
    }
    case Expr::Kind::Id: {
      if (!convType(ctx, whnf(ctx, a->a), whnf(ctx, b->a))) return false;
      return convLeaf(ctx, a->b, b->b, a->a) && convLeaf(ctx, a->c, b->c, a->a);
    }
    case Expr::Kind::Ext: {
      if (a->arity != b->arity) return false;
      int k = a->arity;
      int L = ctx.cubeDepth();
      auto pt = freshCubePoint(L, k);
      TopePtr psiA = substCubesTope(a->topePsi, pt);
      TopePtr psiB = substCubesTope(b->topePsi, pt);
      int n = L + k;
      if (!solver_.entails(n, Tope::conj(ctx.tope, psiA), psiB)) return false;
      if (!solver_.entails(n, Tope::conj(ctx.tope, psiB), psiA)) return false;
      std::vector<std::string> names;
      for (int i = 0; i < k; ++i) names.push_back("_c" + std::to_string(L + i));
      Ctx ctx2 = ctx.pushCubes(names, psiA);
      if (!convertibleTypes(ctx2, substCubes(a->a, pt), substCubes(b->a, pt)))
        return false;
      TopePtr phiA = a->topePhi ? substCubesTope(a->topePhi, pt) : Tope::bot();
      TopePtr phiB = b->topePhi ? substCubesTope(b->topePhi, pt) : Tope::bot();
      if (!solver_.entails(n, Tope::conj(ctx.tope, phiA), phiB)) return false;
      if (!solver_.entails(n, Tope::conj(ctx.tope, phiB), phiA)) return false;
      if (a->b && b->b) {
        Ctx ctxP = ctx2.withTope(Tope::conj(ctx.tope, phiA));
        return convertible(ctxP, substCubes(a->b, pt), substCubes(b->b, pt),
                           substCubes(a->a, pt));
      }
      // One side lacks a partial term: fine only if the boundary is empty.
      if (a->b || b->b)
        return solver_.entails(n, phiA, Tope::bot()) &&
               solver_.entails(n, phiB, Tope::bot());
      return true;
    }
    case Expr::Kind::ShapeType: {
      const Shape& sa = *a->shape;
      const Shape& sb = *b->shape;
      if (sa.cubeVars.size() != sb.cubeVars.size()) return false;
      int k = static_cast<int>(sa.cubeVars.size());
      return solver_.entails(k, sa.tope, sb.tope) &&
             solver_.entails(k, sb.tope, sa.tope);
    }
    default:
      return convUntyped(ctx, a, b);
  }
}

bool Checker::convNeutral(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b) const {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::FVar:
      return a->idx == b->idx;
    case Expr::Kind::Var:
      return a->idx == b->idx;
    case Expr::Kind::Def:
      return a->name == b->name;
    case Expr::Kind::App: {
      if (!convNeutral(ctx, a->a, b->a)) return false;
      if (a->b->kind == Expr::Kind::CubePoint && b->b->kind == Expr::Kind::CubePoint) {
        if (a->b->cubes.size() != b->b->cubes.size()) return false;
        for (std::size_t i = 0; i < a->b->cubes.size(); ++i)
          if (!cubeTermsEqual(ctx, a->b->cubes[i], b->b->cubes[i])) return false;
        return true;
      }
      return convUntyped(ctx, a->b, b->b);
    }
    case Expr::Kind::Fst:
    case Expr::Kind::Snd:
      return convNeutral(ctx, a->a, b->a);
    case Expr::Kind::IdJ:
      return convUntyped(ctx, a->a, b->a) && convUntyped(ctx, a->b, b->b) &&
             convUntyped(ctx, a->c, b->c);
    case Expr::Kind::RecOr: {
      if (a->branches.size() != b->branches.size()) return false;
      for (std::size_t i = 0; i < a->branches.size(); ++i) {
        if (!topeEqual(a->branches[i].tope, b->branches[i].tope)) return false;
        Ctx ctx2 = ctx.withTope(Tope::conj(ctx.tope, a->branches[i].tope));
        if (!convUntyped(ctx2, a->branches[i].body, b->branches[i].body)) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

bool Checker::convUntyped(const Ctx& ctx, const ExprPtr& a0, const ExprPtr& b0) const {
  ExprPtr a = whnf(ctx, a0);
  ExprPtr b = whnf(ctx, b0);

  auto etaLam = [&](const ExprPtr& lam, const ExprPtr& other) {
    int l = static_cast<int>(ctx.terms.size());
    Ctx ctx2 = ctx.pushTerm("_x", nullptr);
    ExprPtr v = mkFVar(l);
    return convUntyped(ctx2, apply(lam, v), apply(other, v));
  };
  auto etaExtLam = [&](const ExprPtr& lam, const ExprPtr& other) {
    int k = lam->arity;
    int L = ctx.cubeDepth();
    auto pt = freshCubePoint(L, k);
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back("_c" + std::to_string(L + i));
    Ctx ctx2 = ctx.pushCubes(names, nullptr);
    ExprPtr ptE = mkCubePoint(pt);
    return convUntyped(ctx2, apply(lam, ptE), apply(other, ptE));
  };

  if (a->kind == Expr::Kind::Lam || b->kind == Expr::Kind::Lam) {
    const ExprPtr& lam = a->kind == Expr::Kind::Lam ? a : b;
    const ExprPtr& other = a->kind == Expr::Kind::Lam ? b : a;
    return etaLam(lam, other);
  }
  if (a->kind == Expr::Kind::ExtLam || b->kind == Expr::Kind::ExtLam) {
    const ExprPtr& lam = a->kind == Expr::Kind::ExtLam ? a : b;
    const ExprPtr& other = a->kind == Expr::Kind::ExtLam ? b : a;
    if (other->kind == Expr::Kind::ExtLam && other->arity != lam->arity) return false;
    return etaExtLam(lam, other);
  }
  if (a->kind == Expr::Kind::Pair || b->kind == Expr::Kind::Pair) {
    const ExprPtr& pair = a->kind == Expr::Kind::Pair ? a : b;
    const ExprPtr& other = a->kind == Expr::Kind::Pair ? b : a;
    auto proj1 = [&](const ExprPtr& x) {
      return x->kind == Expr::Kind::Pair ? x->a : mkFst(x);
    };
    auto proj2 = [&](const ExprPtr& x) {
      return x->kind == Expr::Kind::Pair ? x->b : mkSnd(x);
    };
    return convUntyped(ctx, proj1(pair), proj1(other)) &&
           convUntyped(ctx, proj2(pair), proj2(other));
  }
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Universe:
    case Expr::Kind::UnitType:
    case Expr::Kind::UnitTt:
      return true;
    case Expr::Kind::Refl:
      return convUntyped(ctx, a->a, b->a);
    case Expr::Kind::CubePoint: {
      if (a->cubes.size() != b->cubes.size()) return false;
      for (std::size_t i = 0; i < a->cubes.size(); ++i)
        if (!cubeTermsEqual(ctx, a->cubes[i], b->cubes[i])) return false;
      return true;
    }
    case Expr::Kind::Pi:
    case Expr::Kind::Sigma:
    case Expr::Kind::Id:
    case Expr::Kind::Ext:
    case Expr::Kind::ShapeType:
      return convType(ctx, a, b);
    default:
      return convNeutral(ctx, a, b);
  }
}

// ---------------------------------------------------------------------------
// Bidirectional checking / elaboration.

ExprPtr Checker::checkIsType(const Ctx& ctx, const ExprPtr& e) const {
  auto [core, ty] = infer(ctx, e);
  ExprPtr tyW = whnf(ctx, ty);
  if (tyW->kind != Expr::Kind::Universe)
    throw TypeError(Category::UniverseError,
                    "expected a type, but '" + printExpr(core) + "' has type '" +
                        printExpr(tyW) + "'",
                    e->span);
  return core;
}

Shape Checker::resolveShape(const Ctx& ctx, const ExprPtr& e) const {
  ExprPtr core = checkIsType(ctx, e);
  ExprPtr w = whnf(ctx, core);
  if (w->kind == Expr::Kind::ShapeType) return *w->shape;
  throw TypeError(Category::Mismatch,
                  "expected a shape, found '" + printExpr(w) + "'", e->span);
}

std::vector<CubeTerm> Checker::coerceCubePoint(const Ctx& ctx, const ExprPtr& arg, int k,
                                               Span span) const {
  std::vector<CubeTerm> pt;
  std::function<bool(const ExprPtr&)> flatten = [&](const ExprPtr& x) -> bool {
    if (x->kind == Expr::Kind::CubePoint) {
      pt.insert(pt.end(), x->cubes.begin(), x->cubes.end());
      return true;
    }
    if (x->kind == Expr::Kind::Pair) return flatten(x->a) && flatten(x->b);
    return false;
  };
  if (!flatten(arg))
    throw TypeError(Category::Mismatch, "expected a cube point argument", span);
  if (static_cast<int>(pt.size()) != k)
    throw TypeError(Category::Mismatch,
                    "expected a cube point of arity " + std::to_string(k) + ", got " +
                        std::to_string(pt.size()),
                    span);
  return pt;
}

std::pair<ExprPtr, ExprPtr> Checker::inferApp(const Ctx& ctx, const ExprPtr& e) const {
  auto [fnCore, fnTy] = infer(ctx, e->a);
  ExprPtr tfW = whnf(ctx, fnTy);
  if (tfW->kind == Expr::Kind::Pi) {
    ExprPtr domW = whnf(ctx, tfW->a);
    if (domW->kind == Expr::Kind::ShapeType) {
      const Shape& sh = *domW->shape;
      int k = static_cast<int>(sh.cubeVars.size());
      auto pt = coerceCubePoint(ctx, e->b, k, e->span);
      TopePtr inst = substCubesTope(reindexShapeTope(sh.tope, k), pt);
      if (!topeHolds(ctx, inst))
        throw TypeError(Category::TopeFalse,
                        "cube point is not contained in the shape: " +
                            describeSequent(ctx, ctx.tope,
                                            printTope(inst, ctx.cubeNames)),
                        e->span);
      ExprPtr ptE = mkCubePoint(pt);
      return {mkApp(fnCore, ptE), substVar(tfW->b, 0, ptE)};
    }
    ExprPtr argCore = check(ctx, e->b, tfW->a);
    return {mkApp(fnCore, argCore), substVar(tfW->b, 0, argCore)};
  }
  if (tfW->kind == Expr::Kind::Ext) {
    int k = tfW->arity;
    auto pt = coerceCubePoint(ctx, e->b, k, e->span);
    TopePtr psiInst = substCubesTope(tfW->topePsi, pt);
    if (!topeHolds(ctx, psiInst))
      throw TypeError(Category::TopeFalse,
                      "application point lies outside the shape of the extension "
                      "type: " +
                          describeSequent(ctx, ctx.tope,
                                          printTope(psiInst, ctx.cubeNames)),
                      e->span);
    return {mkApp(fnCore, mkCubePoint(pt)), substCubes(tfW->a, pt)};
  }
  throw TypeError(Category::NotAFunction,
                  "cannot apply a term of type '" + printExpr(tfW) + "'", e->span);
}

std::pair<ExprPtr, ExprPtr> Checker::inferExt(const Ctx& ctx, const ExprPtr& e) const {
  int k = e->arity;
  std::vector<std::string> names = e->binders;
  TopePtr psiIdx;
  if (e->c) {
    Shape sh = resolveShape(ctx, e->c);
    if (static_cast<int>(sh.cubeVars.size()) != k)
      throw TypeError(Category::Mismatch,
                      "shape has " + std::to_string(sh.cubeVars.size()) +
                          " cube variable(s), but the binder introduces " +
                          std::to_string(k),
                      e->span);
    psiIdx = reindexShapeTope(sh.tope, k);
  } else {
    psiIdx = e->topePsi;
  }
  int L = ctx.cubeDepth();
  auto pt = freshCubePoint(L, k);
  TopePtr psiInst = substCubesTope(psiIdx, pt);
  TopePtr phiInst;
  if (e->topePhi) {
    phiInst = substCubesTope(e->topePhi, pt);
    // The boundary must carve a subshape: φ ⊢ ψ absolutely.
    if (!solver_.entails(L + k, phiInst, psiInst))
      throw TypeError(Category::TopeFalse,
                      "boundary tope is not included in the shape: " +
                          describeSequent(ctx.pushCubes(names, nullptr), phiInst,
                                          printTope(psiInst, ctx.cubeNames)),
                      e->span);
  }
  Ctx ctxF = ctx.pushCubes(names, psiInst);
  ExprPtr famCore = checkIsType(ctxF, substCubes(e->a, pt));
  ExprPtr partCore;
  if (e->topePhi && e->b) {
    Ctx ctxP = ctxF.withTope(Tope::conj(ctx.tope, phiInst));
    partCore = check(ctxP, substCubes(e->b, pt), famCore);
  }
  ExprPtr core = mkExt(names, psiIdx, e->topePhi,
                       closeCubeVars(famCore, L, k),
                       partCore ? closeCubeVars(partCore, L, k) : nullptr);
  return {withSpan(core, e->span), mkUniverse()};
}

std::pair<ExprPtr, ExprPtr> Checker::infer(const Ctx& ctx, const ExprPtr& e) const {
  switch (e->kind) {
    case Expr::Kind::Universe:
      return {e, mkUniverse()};  // single universe with U : U
    case Expr::Kind::UnitType:
      return {e, mkUniverse()};
    case Expr::Kind::UnitTt:
      return {e, mkUnitType()};
    case Expr::Kind::FVar: {
      if (e->idx < 0 || e->idx >= static_cast<int>(ctx.terms.size()))
        throw TypeError(Category::UnboundName, "free variable out of scope", e->span);
      ExprPtr ty = ctx.terms[static_cast<std::size_t>(e->idx)].type;
      if (!ty)
        throw TypeError(Category::UnboundName, "variable has no declared type", e->span);
      return {e, ty};
    }
    case Expr::Kind::Var:
      throw TypeError(Category::UnboundName, "unresolved bound variable", e->span);
    case Expr::Kind::Def: {
      const auto* entry = env_.lookup(e->name);
      if (!entry)
        throw TypeError(Category::UnboundName, "unknown name '" + e->name + "'",
                        e->span);
      return {e, entry->type};
    }
    case Expr::Kind::Pi: {
      ExprPtr dom = checkIsType(ctx, e->a);
      int l = static_cast<int>(ctx.terms.size());
      Ctx ctx2 = ctx.pushTerm(e->binders.empty() ? "_x" : e->binders[0], dom);
      ExprPtr cod = checkIsType(ctx2, substVar(e->b, 0, mkFVar(l)));
      return {withSpan(mkPi(dom, closeTermVar(cod, l)), e->span), mkUniverse()};
    }
    case Expr::Kind::Sigma: {
      ExprPtr fst = checkIsType(ctx, e->a);
      int l = static_cast<int>(ctx.terms.size());
      Ctx ctx2 = ctx.pushTerm("_x", fst);
      ExprPtr snd = checkIsType(ctx2, substVar(e->b, 0, mkFVar(l)));
      return {withSpan(mkSigma(fst, closeTermVar(snd, l)), e->span), mkUniverse()};
    }
    case Expr::Kind::Prod: {
      // Surface "A * B": a shape product when A is a shape, otherwise a
      // non-dependent pair type.
      ExprPtr a = checkIsType(ctx, e->a);
      ExprPtr aW = whnf(ctx, a);
      ExprPtr b = checkIsType(ctx, e->b);
      ExprPtr bW = whnf(ctx, b);
      if (aW->kind == Expr::Kind::ShapeType) {
        if (bW->kind != Expr::Kind::ShapeType)
          throw TypeError(Category::Mismatch,
                          "cannot form the product of a shape and a type", e->span);
        const Shape& sa = *aW->shape;
        const Shape& sb = *bW->shape;
        Shape out;
        out.cubeVars = sa.cubeVars;
        out.cubeVars.insert(out.cubeVars.end(), sb.cubeVars.begin(), sb.cubeVars.end());
        out.tope = Tope::conj(
            sa.tope, shiftCubeTope(sb.tope, static_cast<int>(sa.cubeVars.size())));
        return {withSpan(mkShapeType(std::move(out)), e->span), mkUniverse()};
      }
      return {withSpan(mkSigma(a, shiftTerm(b, 1)), e->span), mkUniverse()};
    }
    case Expr::Kind::Ext:
      return inferExt(ctx, e);
    case Expr::Kind::ShapeType:
      return {e, mkUniverse()};
    case Expr::Kind::App:
      return inferApp(ctx, e);
    case Expr::Kind::Fst: {
      auto [core, ty] = infer(ctx, e->a);
      ExprPtr tyW = whnf(ctx, ty);
      if (tyW->kind != Expr::Kind::Sigma)
        throw TypeError(Category::Mismatch,
                        "fst expects a pair, got type '" + printExpr(tyW) + "'",
                        e->span);
      return {mkFst(core), tyW->a};
    }
    case Expr::Kind::Snd: {
      auto [core, ty] = infer(ctx, e->a);
      ExprPtr tyW = whnf(ctx, ty);
      if (tyW->kind != Expr::Kind::Sigma)
        throw TypeError(Category::Mismatch,
                        "snd expects a pair, got type '" + printExpr(tyW) + "'",
                        e->span);
      return {mkSnd(core), substVar(tyW->b, 0, mkFst(core))};
    }
    case Expr::Kind::Pair: {
      auto [a, ta] = infer(ctx, e->a);
      auto [b, tb] = infer(ctx, e->b);
      return {withSpan(mkPair(a, b), e->span), mkSigma(ta, shiftTerm(tb, 1))};
    }
    case Expr::Kind::Id: {
      ExprPtr ty = checkIsType(ctx, e->a);
      ExprPtr lhs = check(ctx, e->b, ty);
      ExprPtr rhs = check(ctx, e->c, ty);
      return {withSpan(mkId(ty, lhs, rhs), e->span), mkUniverse()};
    }
    case Expr::Kind::Refl: {
      auto [core, ty] = infer(ctx, e->a);
      return {withSpan(mkRefl(core), e->span), mkId(ty, core, core)};
    }
    case Expr::Kind::IdJ: {
      auto [path, tp] = infer(ctx, e->c);
      ExprPtr tpW = whnf(ctx, tp);
      if (tpW->kind != Expr::Kind::Id)
        throw TypeError(Category::Mismatch,
                        "idJ expects an identification, got type '" + printExpr(tpW) +
                            "'",
                        e->span);
      ExprPtr A = tpW->a, x = tpW->b, y = tpW->c;
      ExprPtr motiveTy =
          mkPi(A, mkPi(mkId(shiftTerm(A, 1), shiftTerm(x, 1), mkVar(0)), mkUniverse()));
      ExprPtr motive = check(ctx, e->a, motiveTy);
      ExprPtr base = check(ctx, e->b, mkApp(mkApp(motive, x), mkRefl(x)));
      return {withSpan(mkIdJ(motive, base, path), e->span),
              mkApp(mkApp(motive, y), path)};
    }
    case Expr::Kind::Ann: {
      ExprPtr ty = checkIsType(ctx, e->b);
      ExprPtr core = check(ctx, e->a, ty);
      return {core, ty};
    }
    case Expr::Kind::Lam:
    case Expr::Kind::ExtLam:
      throw TypeError(Category::Mismatch,
                      "cannot infer the type of a lambda; add an annotation", e->span);
    case Expr::Kind::CubePoint:
      throw TypeError(Category::Mismatch,
                      "cannot infer the type of a cube point", e->span);
    case Expr::Kind::RecOr:
      throw TypeError(Category::Mismatch,
                      "tope case splits only appear in checked positions", e->span);
  }
  throw TypeError(Category::Mismatch, "unhandled expression", e->span);
}

ExprPtr Checker::checkLamAgainstExt(const Ctx& ctx, const ExprPtr& lam,
                                    const ExprPtr& tyW) const {
  int k = tyW->arity;
  std::vector<std::string> names;
  ExprPtr body;
  if (lam->kind == Expr::Kind::Lam) {
    int nb = static_cast<int>(lam->binders.size());
    bool tupled = lam->arity != 0;
    if ((tupled && nb != k) || (!tupled && (k != 1 || nb != 1)))
      throw TypeError(Category::Mismatch,
                      "binder arity " + std::to_string(nb) +
                          " does not match extension type arity " + std::to_string(k),
                      lam->span);
    if (!lam->phantom)
      throw TypeError(Category::Mismatch,
                      "term abstraction checked against an extension type",
                      lam->span);
    names = lam->binders;
    body = lam->a;
    // Sort the surface binder into cube binders: each term occurrence becomes
    // the corresponding cube point, innermost first.
    for (int m = 0; m < k; ++m)
      body = substVar(body, 0, mkCubePoint({CubeTerm::bvar(m)}));
  } else {  // ExtLam (already elaborated)
    if (lam->arity != k)
      throw TypeError(Category::Mismatch, "extension lambda arity mismatch", lam->span);
    names = lam->binders;
    body = lam->a;
  }
  int L = ctx.cubeDepth();
  auto pt = freshCubePoint(L, k);
  TopePtr psiInst = substCubesTope(tyW->topePsi, pt);
  Ctx ctxBody = ctx.pushCubes(names, psiInst);
  ExprPtr famInst = substCubes(tyW->a, pt);
  ExprPtr core = check(ctxBody, substCubes(body, pt), famInst);
  if (tyW->topePhi && tyW->b) {
    TopePtr phiInst = substCubesTope(tyW->topePhi, pt);
    Ctx ctxB = ctxBody.withTope(Tope::conj(ctx.tope, phiInst));
    ExprPtr partInst = substCubes(tyW->b, pt);
    if (!convertible(ctxB, core, partInst, famInst)) {
      throw TypeError(
          Category::BoundaryViolation,
          "body does not agree with the required boundary term on " +
              describeSequent(ctxB, phiInst,
                              printExpr(core, PrintEnv{ctxB.cubeNames, {}}) + " === " +
                                  printExpr(partInst, PrintEnv{ctxB.cubeNames, {}})),
          lam->span);
    }
  }
  return mkExtLam(k, names, closeCubeVars(core, L, k));
}

ExprPtr Checker::check(const Ctx& ctx, const ExprPtr& e, const ExprPtr& type) const {
  ExprPtr tyW = whnf(ctx, type);
  switch (e->kind) {
    case Expr::Kind::Lam: {
      if (tyW->kind == Expr::Kind::Ext) return checkLamAgainstExt(ctx, e, tyW);
      if (tyW->kind != Expr::Kind::Pi)
        throw TypeError(Category::Mismatch,
                        "lambda checked against non-function type '" + printExpr(tyW) +
                            "'",
                        e->span);
      if (e->arity != 0)
        throw TypeError(Category::Mismatch,
                        "tuple binder checked against a function type", e->span);
      if (e->binders.size() != 1)
        throw TypeError(Category::Mismatch, "unexpected binder group", e->span);
      ExprPtr body = e->a;
      if (e->phantom) {
        if (cubeVarOccurs(body, 0))
          throw TypeError(Category::Mismatch,
                          "binder '" + e->binders[0] +
                              "' is used as a cube variable but checked against a "
                              "function type",
                          e->span);
        body = substCube(body, 0, CubeTerm::zero());  // drop the phantom slot
      }
      int l = static_cast<int>(ctx.terms.size());
      Ctx ctx2 = ctx.pushTerm(e->binders[0], tyW->a);
      ExprPtr core = check(ctx2, substVar(body, 0, mkFVar(l)), substVar(tyW->b, 0, mkFVar(l)));
      return mkLam(e->binders, closeTermVar(core, l));
    }
    case Expr::Kind::ExtLam: {
      if (tyW->kind != Expr::Kind::Ext)
        throw TypeError(Category::Mismatch,
                        "extension lambda checked against '" + printExpr(tyW) + "'",
                        e->span);
      return checkLamAgainstExt(ctx, e, tyW);
    }
    case Expr::Kind::Pair: {
      if (tyW->kind == Expr::Kind::Sigma) {
        ExprPtr a = check(ctx, e->a, tyW->a);
        ExprPtr b = check(ctx, e->b, substVar(tyW->b, 0, a));
        return withSpan(mkPair(a, b), e->span);
      }
      if (tyW->kind == Expr::Kind::ShapeType) {
        const Shape& sh = *tyW->shape;
        int k = static_cast<int>(sh.cubeVars.size());
        auto pt = coerceCubePoint(ctx, e, k, e->span);
        TopePtr inst = substCubesTope(reindexShapeTope(sh.tope, k), pt);
        if (!topeHolds(ctx, inst))
          throw TypeError(Category::TopeFalse,
                          "cube point is not contained in the shape", e->span);
        return mkCubePoint(pt);
      }
      throw TypeError(Category::Mismatch,
                      "pair checked against non-pair type '" + printExpr(tyW) + "'",
                      e->span);
    }
    case Expr::Kind::CubePoint: {
      if (tyW->kind == Expr::Kind::ShapeType) {
        const Shape& sh = *tyW->shape;
        int k = static_cast<int>(sh.cubeVars.size());
        if (static_cast<int>(e->cubes.size()) != k)
          throw TypeError(Category::Mismatch, "cube point arity mismatch", e->span);
        TopePtr inst = substCubesTope(reindexShapeTope(sh.tope, k), e->cubes);
        if (!topeHolds(ctx, inst))
          throw TypeError(Category::TopeFalse,
                          "cube point is not contained in the shape", e->span);
        return e;
      }
      throw TypeError(Category::Mismatch,
                      "cube point checked against '" + printExpr(tyW) + "'", e->span);
    }
    case Expr::Kind::RecOr: {
      if (!topeHolds(ctx, orFold(e->branches)))
        throw TypeError(Category::TopeFalse,
                        "case split does not cover the current tope context: " +
                            describeSequent(ctx, ctx.tope,
                                            printTope(orFold(e->branches), ctx.cubeNames)),
                        e->span);
      std::vector<RecOrBranch> cores;
      for (const auto& br : e->branches) {
        Ctx ctxB = ctx.withTope(Tope::conj(ctx.tope, br.tope));
        cores.push_back({br.tope, check(ctxB, br.body, tyW)});
      }
      for (std::size_t i = 0; i < cores.size(); ++i)
        for (std::size_t j = i + 1; j < cores.size(); ++j) {
          Ctx ctxIJ = ctx.withTope(
              Tope::conj(Tope::conj(ctx.tope, cores[i].tope), cores[j].tope));
          if (!convertible(ctxIJ, cores[i].body, cores[j].body, tyW))
            throw TypeError(
                Category::BoundaryViolation,
                "overlapping cases disagree on " +
                    describeSequent(ctxIJ, Tope::conj(cores[i].tope, cores[j].tope),
                                    printExpr(cores[i].body,
                                              PrintEnv{ctxIJ.cubeNames, {}}) +
                                        " === " +
                                        printExpr(cores[j].body,
                                                  PrintEnv{ctxIJ.cubeNames, {}})),
                e->span);
        }
      return withSpan(mkRecOr(std::move(cores)), e->span);
    }
    case Expr::Kind::Ann: {
      ExprPtr ty = checkIsType(ctx, e->b);
      if (!convertibleTypes(ctx, ty, tyW))
        throw TypeError(Category::Mismatch,
                        "annotation '" + printExpr(ty) + "' does not match expected '" +
                            printExpr(tyW) + "'",
                        e->span);
      return check(ctx, e->a, ty);
    }
    default: {
      auto [core, inferred] = infer(ctx, e);
      if (!convertibleTypes(ctx, inferred, tyW))
        throw TypeError(Category::Mismatch,
                        "type mismatch: expected '" +
                            printExpr(tyW, PrintEnv{ctx.cubeNames, {}}) + "', got '" +
                            printExpr(whnf(ctx, inferred), PrintEnv{ctx.cubeNames, {}}) +
                            "'",
                        e->span);
      return core;
    }
  }
}

}  // namespace stt
