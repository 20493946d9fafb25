#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stt {

// Source position, byte offsets end-exclusive. line/col are 1-based.
struct Span {
  int line = 0;
  int col = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// ---------------------------------------------------------------------------
// Cube layer. A cube context is a flat list of interval variables; cube terms
// are variables, 0 or 1. Bound variables are de Bruijn indices, free variables
// (used while checking under opened binders) are absolute levels.

struct CubeTerm {
  enum class Kind : uint8_t { BVar, FVar, Zero, One };
  Kind kind = Kind::Zero;
  int idx = 0;  // index for BVar, level for FVar

  static CubeTerm bvar(int i) { return {Kind::BVar, i}; }
  static CubeTerm fvar(int l) { return {Kind::FVar, l}; }
  static CubeTerm zero() { return {Kind::Zero, 0}; }
  static CubeTerm one() { return {Kind::One, 0}; }

  bool operator==(const CubeTerm& o) const { return kind == o.kind && idx == o.idx; }
  bool operator!=(const CubeTerm& o) const { return !(*this == o); }
};

// ---------------------------------------------------------------------------
// Tope layer: the positive fragment over cube terms. No negation exists.

struct Tope;
using TopePtr = std::shared_ptr<const Tope>;

struct Tope {
  enum class Kind : uint8_t { Top, Bot, And, Or, Eq, Leq };
  Kind kind = Kind::Top;
  TopePtr lhs, rhs;    // And/Or
  CubeTerm a, b;       // Eq/Leq

  static TopePtr top();
  static TopePtr bot();
  static TopePtr conj(TopePtr l, TopePtr r);
  static TopePtr disj(TopePtr l, TopePtr r);
  static TopePtr eq(CubeTerm x, CubeTerm y);
  static TopePtr leq(CubeTerm x, CubeTerm y);
};

bool topeEqual(const TopePtr& a, const TopePtr& b);

// Standalone shapes address their k variables by level (0 = first listed);
// topes stored inside Ext/ExtLam nodes use de Bruijn indices (0 = innermost,
// i.e. the last listed binder variable). This flips between the two; it is an
// involution on closed topes.
TopePtr reindexShapeTope(const TopePtr& t, int k);

// Shape: a cube context together with a tope carving out a subpolytope.
// The tope is closed over exactly the listed variables; variable i of the
// context appears as CubeTerm::bvar(i) with 0 the *first* listed name.
struct Shape {
  std::vector<std::string> cubeVars;
  TopePtr tope;
};

bool shapeEqual(const Shape& a, const Shape& b);

// ---------------------------------------------------------------------------
// Expressions: one tree for terms and types.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct RecOrBranch;

struct Expr {
  enum class Kind : uint8_t {
    Universe,   //
    Var,        // bound term variable (de Bruijn index)
    FVar,       // free term variable (level), checker-internal
    Def,        // reference to a top-level name
    Pi,         // a = domain, b = codomain (+1 term var)
    Lam,        // binders = surface names (>=1); body binds |binders| term vars
                // until elaboration, exactly 1 after
    App,        // a = fn, b = arg
    Sigma,      // a = first, b = second (+1 term var)
    Pair,       // a, b
    Fst, Snd,   // a
    Id,         // a = type, b = lhs, c = rhs
    Refl,       // a
    IdJ,        // a = motive, b = base, c = path
    UnitType,
    UnitTt,
    Ext,        // extension type: arity k cube binder; topePsi/topePhi over the
                // k innermost cube vars; a = family (+k cube vars),
                // b = partial term (+k cube vars), absent when topePhi is Bot
    ExtLam,     // arity k; a = body (+k cube vars)
    CubePoint,  // a point of a k-cube (argument of an ext application)
    ShapeType,  // a shape coerced to a type
    RecOr,      // tope-directed case split; branches scoped like the term itself
    Prod,       // surface "A * B": shape product or non-dependent Sigma
    Ann,        // a = term, b = type
  };

  Kind kind = Kind::Universe;
  Span span;

  int idx = 0;                          // Var/FVar
  int arity = 0;                        // Ext/ExtLam/CubePoint arity; Lam tuple arity
  bool phantom = false;                 // Lam: binder also occupies a cube slot
                                        // (surface lambdas, until elaboration)
  std::string name;                     // Def
  std::vector<std::string> binders;     // Lam/Ext/ExtLam binder names
  ExprPtr a, b, c;
  TopePtr topePsi, topePhi;             // Ext
  std::optional<Shape> shape;           // ShapeType
  std::vector<CubeTerm> cubes;          // CubePoint
  std::vector<RecOrBranch> branches;    // RecOr
};

struct RecOrBranch {
  TopePtr tope;
  ExprPtr body;
};

// Builders.
ExprPtr mkUniverse();
ExprPtr mkVar(int idx);
ExprPtr mkFVar(int level);
ExprPtr mkDef(std::string name);
ExprPtr mkPi(ExprPtr dom, ExprPtr cod);
ExprPtr mkLam(std::vector<std::string> binders, ExprPtr body, bool phantom = false,
              int tupleArity = 0);
ExprPtr mkApp(ExprPtr fn, ExprPtr arg);
ExprPtr mkSigma(ExprPtr fst, ExprPtr snd);
ExprPtr mkPair(ExprPtr a, ExprPtr b);
ExprPtr mkFst(ExprPtr p);
ExprPtr mkSnd(ExprPtr p);
ExprPtr mkId(ExprPtr ty, ExprPtr lhs, ExprPtr rhs);
ExprPtr mkRefl(ExprPtr tm);
ExprPtr mkIdJ(ExprPtr motive, ExprPtr base, ExprPtr path);
ExprPtr mkUnitType();
ExprPtr mkUnitTt();
ExprPtr mkExt(std::vector<std::string> binders, TopePtr psi, TopePtr phi,
              ExprPtr family, ExprPtr partial);
// Pre-elaboration ext former carrying the unresolved shape expression.
ExprPtr mkExtSurface(std::vector<std::string> binders, ExprPtr shapeExpr, TopePtr phi,
                     ExprPtr family, ExprPtr partial);
ExprPtr mkExtLam(int arity, std::vector<std::string> binders, ExprPtr body);
ExprPtr mkCubePoint(std::vector<CubeTerm> pt);
ExprPtr mkShapeType(Shape s);
ExprPtr mkRecOr(std::vector<RecOrBranch> branches);
ExprPtr mkProd(ExprPtr a, ExprPtr b);
ExprPtr mkAnn(ExprPtr tm, ExprPtr ty);

ExprPtr withSpan(ExprPtr e, Span s);

// ---------------------------------------------------------------------------
// Shifting and substitution. All operations are capture-free; binders adjust
// indices for the namespace they bind (term binders leave cube indices alone
// and vice versa).

ExprPtr shiftTerm(const ExprPtr& e, int by, int cutoff = 0);
ExprPtr shiftCube(const ExprPtr& e, int by, int cutoff = 0);
TopePtr shiftCubeTope(const TopePtr& t, int by, int cutoff = 0);

// Replace term variable `index` by `repl`; variables above shift down.
ExprPtr substVar(const ExprPtr& e, int index, const ExprPtr& repl);

// Instantiate the k innermost cube variables all at once: bvar(i) for i < k
// becomes pt[k-1-i] (pt is listed binder order). Indices above shift down by k.
ExprPtr substCubes(const ExprPtr& e, const std::vector<CubeTerm>& pt);
TopePtr substCubesTope(const TopePtr& t, const std::vector<CubeTerm>& pt);

// Single-variable cube substitution (index form).
ExprPtr substCube(const ExprPtr& e, int index, CubeTerm t);
TopePtr substCubeTope(const TopePtr& tope, int index, CubeTerm t);

// Abstract a free variable back into the innermost binder slot. Used when
// rebuilding binder bodies after checking under opened binders.
ExprPtr closeTermVar(const ExprPtr& e, int level);
ExprPtr closeCubeVars(const ExprPtr& e, int firstLevel, int k);
TopePtr closeCubeVarsTope(const TopePtr& t, int firstLevel, int k);

bool alphaEq(const ExprPtr& a, const ExprPtr& b);

// True if cube bvar `index` (relative to the root of e) occurs in e.
bool cubeVarOccurs(const ExprPtr& e, int index);
bool cubeVarOccursTope(const TopePtr& t, int index);

}  // namespace stt
