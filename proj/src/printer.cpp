#include "stt/printer.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace stt {

namespace {

void collectDefNames(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Def) out.insert(e->name);
  collectDefNames(e->a, out);
  collectDefNames(e->b, out);
  collectDefNames(e->c, out);
  for (const auto& br : e->branches) collectDefNames(br.body, out);
}

bool termVarOccursIn(const ExprPtr& e, int index, int td) {
  if (!e) return false;
  switch (e->kind) {
    case Expr::Kind::Var:
      return e->idx == index + td;
    case Expr::Kind::Pi:
    case Expr::Kind::Sigma:
      return termVarOccursIn(e->a, index, td) || termVarOccursIn(e->b, index, td + 1);
    case Expr::Kind::Lam:
      return termVarOccursIn(e->a, index, td + static_cast<int>(e->binders.size()));
    default: {
      if (termVarOccursIn(e->a, index, td)) return true;
      if (termVarOccursIn(e->b, index, td)) return true;
      if (termVarOccursIn(e->c, index, td)) return true;
      for (const auto& br : e->branches)
        if (termVarOccursIn(br.body, index, td)) return true;
      return false;
    }
  }
}

struct Printer {
  std::set<std::string> reserved;
  std::vector<std::string> cubeNames;
  std::vector<std::string> termNames;

  std::string freshen(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    auto inScope = [&](const std::string& n) {
      if (reserved.count(n)) return true;
      for (const auto& c : cubeNames)
        if (c == n) return true;
      for (const auto& t : termNames)
        if (t == n) return true;
      return false;
    };
    if (!inScope(base)) return base;
    for (int i = 1;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!inScope(cand)) return cand;
    }
  }

  std::string cube(const CubeTerm& t) {
    switch (t.kind) {
      case CubeTerm::Kind::Zero:
        return "0";
      case CubeTerm::Kind::One:
        return "1";
      case CubeTerm::Kind::FVar:
        if (t.idx >= 0 && t.idx < static_cast<int>(cubeNames.size()))
          return cubeNames[static_cast<std::size_t>(t.idx)];
        return "?c" + std::to_string(t.idx);
      case CubeTerm::Kind::BVar: {
        int level = static_cast<int>(cubeNames.size()) - 1 - t.idx;
        if (level >= 0 && level < static_cast<int>(cubeNames.size()))
          return cubeNames[static_cast<std::size_t>(level)];
        return "?b" + std::to_string(t.idx);
      }
    }
    return "?";
  }

  std::string tope(const TopePtr& t, int prec) {
    switch (t->kind) {
      case Tope::Kind::Top:
        return "TOP";
      case Tope::Kind::Bot:
        return "BOT";
      case Tope::Kind::Or: {
        std::string s = tope(t->lhs, 1) + " \\/ " + tope(t->rhs, 0);
        return prec > 0 ? "(" + s + ")" : s;
      }
      case Tope::Kind::And: {
        std::string s = tope(t->lhs, 2) + " /\\ " + tope(t->rhs, 1);
        return prec > 1 ? "(" + s + ")" : s;
      }
      case Tope::Kind::Eq:
        return cube(t->a) + " === " + cube(t->b);
      case Tope::Kind::Leq:
        return cube(t->a) + " <= " + cube(t->b);
    }
    return "?";
  }

  // Shape binder of an ext former or shape literal: {(t, s) : I * I | tope}.
  std::string shapeBinder(const std::vector<std::string>& names, const TopePtr& psi) {
    std::ostringstream os;
    os << "{";
    if (names.empty()) {
      os << "() : 1";
    } else if (names.size() == 1) {
      os << names[0] << " : I";
    } else {
      os << "(";
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os << ", ";
        os << names[i];
      }
      os << ") : I";
      for (std::size_t i = 1; i < names.size(); ++i) os << " * I";
    }
    os << " | " << tope(psi, 0) << "}";
    return os.str();
  }

  // prec: 0 lambda/arrow level, 1 product, 2 application, 3 atom.
  std::string expr(const ExprPtr& e, int prec) {
    switch (e->kind) {
      case Expr::Kind::Universe:
        return "U";
      case Expr::Kind::UnitType:
        return "Unit";
      case Expr::Kind::UnitTt:
        return "tt";
      case Expr::Kind::Def:
        return e->name;
      case Expr::Kind::FVar:
        if (e->idx >= 0 && e->idx < static_cast<int>(termNames.size()))
          return termNames[static_cast<std::size_t>(e->idx)];
        return "?v" + std::to_string(e->idx);
      case Expr::Kind::Var: {
        int level = static_cast<int>(termNames.size()) - 1 - e->idx;
        if (level >= 0 && level < static_cast<int>(termNames.size()))
          return termNames[static_cast<std::size_t>(level)];
        return "?u" + std::to_string(e->idx);
      }
      case Expr::Kind::Pi: {
        std::string dom, out;
        if (termVarOccursIn(e->b, 0, 0)) {
          std::string n = freshen(e->binders.empty() ? "x" : e->binders[0]);
          dom = "(" + n + " : " + expr(e->a, 0) + ")";
          termNames.push_back(n);
          out = dom + " -> " + expr(e->b, 0);
          termNames.pop_back();
        } else {
          dom = expr(e->a, 1);
          termNames.push_back("_");
          out = dom + " -> " + expr(e->b, 0);
          termNames.pop_back();
        }
        return prec > 0 ? "(" + out + ")" : out;
      }
      case Expr::Kind::Sigma: {
        std::string out;
        if (termVarOccursIn(e->b, 0, 0)) {
          std::string n = freshen("x");
          out = "(" + n + " : " + expr(e->a, 0) + ") * ";
          termNames.push_back(n);
          out += expr(e->b, 1);
          termNames.pop_back();
        } else {
          out = expr(e->a, 2) + " * ";
          termNames.push_back("_");
          out += expr(e->b, 1);
          termNames.pop_back();
        }
        return prec > 1 ? "(" + out + ")" : out;
      }
      case Expr::Kind::Prod: {
        std::string out = expr(e->a, 2) + " * " + expr(e->b, 1);
        return prec > 1 ? "(" + out + ")" : out;
      }
      case Expr::Kind::Lam: {
        std::vector<std::string> ns;
        for (const auto& hint : e->binders.empty() ? std::vector<std::string>{"x"} : e->binders) {
          std::string n = freshen(hint);
          ns.push_back(n);
          termNames.push_back(n);
        }
        std::string out = "\\";
        for (std::size_t i = 0; i < ns.size(); ++i) {
          if (i) out += " ";
          out += ns[i];
        }
        out += " -> " + expr(e->a, 0);
        for (std::size_t i = 0; i < ns.size(); ++i) termNames.pop_back();
        return prec > 0 ? "(" + out + ")" : out;
      }
      case Expr::Kind::ExtLam: {
        std::vector<std::string> ns;
        std::vector<std::string> hints = e->binders;
        while (static_cast<int>(hints.size()) < e->arity)
          hints.push_back(hints.empty() ? "t" : "s");
        for (int i = 0; i < e->arity; ++i) {
          std::string n = freshen(hints[static_cast<std::size_t>(i)]);
          ns.push_back(n);
          cubeNames.push_back(n);
        }
        std::string out = "\\";
        if (e->arity == 1) {
          out += ns[0];
        } else {
          out += "(";
          for (std::size_t i = 0; i < ns.size(); ++i) {
            if (i) out += ", ";
            out += ns[i];
          }
          out += ")";
        }
        out += " -> " + expr(e->a, 0);
        for (int i = 0; i < e->arity; ++i) cubeNames.pop_back();
        return prec > 0 ? "(" + out + ")" : out;
      }
      case Expr::Kind::Ext: {
        std::vector<std::string> ns;
        std::vector<std::string> hints = e->binders;
        while (static_cast<int>(hints.size()) < e->arity)
          hints.push_back(hints.empty() ? "t" : "s");
        for (int i = 0; i < e->arity; ++i) {
          std::string n = freshen(hints[static_cast<std::size_t>(i)]);
          ns.push_back(n);
          cubeNames.push_back(n);
        }
        std::ostringstream os;
        os << "ext (";
        if (e->arity == 0) {
          os << "()";
        } else if (e->arity == 1) {
          os << ns[0];
        } else {
          os << "(";
          for (std::size_t i = 0; i < ns.size(); ++i) {
            if (i) os << ", ";
            os << ns[i];
          }
          os << ")";
        }
        os << " : ";
        if (e->topePsi) {
          os << shapeBinder(ns, e->topePsi);
        } else if (e->c) {
          os << expr(e->c, 1);  // unresolved surface shape
        } else {
          os << "?";
        }
        os << ") -> " << expr(e->a, 1);
        if (e->b && e->topePhi && e->topePhi->kind != Tope::Kind::Bot) {
          os << " [ " << tope(e->topePhi, 0) << " |-> " << expr(e->b, 0) << " ]";
        }
        for (int i = 0; i < e->arity; ++i) cubeNames.pop_back();
        std::string out = os.str();
        return prec > 0 ? "(" + out + ")" : out;
      }
      case Expr::Kind::App: {
        std::string out = expr(e->a, 2) + " " + expr(e->b, 3);
        return prec > 2 ? "(" + out + ")" : out;
      }
      case Expr::Kind::Fst: {
        std::string out = "fst " + expr(e->a, 3);
        return prec > 2 ? "(" + out + ")" : out;
      }
      case Expr::Kind::Snd: {
        std::string out = "snd " + expr(e->a, 3);
        return prec > 2 ? "(" + out + ")" : out;
      }
      case Expr::Kind::Refl: {
        std::string out = "refl " + expr(e->a, 3);
        return prec > 2 ? "(" + out + ")" : out;
      }
      case Expr::Kind::Id: {
        std::string out =
            "Id " + expr(e->a, 3) + " " + expr(e->b, 3) + " " + expr(e->c, 3);
        return prec > 2 ? "(" + out + ")" : out;
      }
      case Expr::Kind::IdJ:
        return "idJ(" + expr(e->a, 0) + ", " + expr(e->b, 0) + ", " + expr(e->c, 0) + ")";
      case Expr::Kind::Pair:
        return "(" + expr(e->a, 0) + " , " + expr(e->b, 0) + ")";
      case Expr::Kind::CubePoint: {
        if (e->cubes.size() == 1) {
          std::string out = cube(e->cubes[0]);
          return out;
        }
        std::string out = "(";
        for (std::size_t i = 0; i < e->cubes.size(); ++i) {
          if (i) out += ", ";
          out += cube(e->cubes[i]);
        }
        out += ")";
        return out;
      }
      case Expr::Kind::ShapeType: {
        const Shape& s = *e->shape;
        std::vector<std::string> ns;
        for (const auto& hint : s.cubeVars) {
          std::string n = freshen(hint);
          ns.push_back(n);
        }
        // Shape topes address variables by level; flip to index form so the
        // shared binder printing applies.
        std::vector<std::string> saved = cubeNames;
        cubeNames = ns;
        std::string out =
            shapeBinder(ns, reindexShapeTope(s.tope, static_cast<int>(ns.size())));
        cubeNames = saved;
        return out;
      }
      case Expr::Kind::RecOr: {
        std::string out = "recOR(";
        for (std::size_t i = 0; i < e->branches.size(); ++i) {
          if (i) out += " | ";
          out += tope(e->branches[i].tope, 0) + " |-> " + expr(e->branches[i].body, 0);
        }
        out += ")";
        return out;
      }
      case Expr::Kind::Ann: {
        return "(" + expr(e->a, 0) + " : " + expr(e->b, 0) + ")";
      }
    }
    return "?";
  }
};

}  // namespace

std::string printCubeTerm(const CubeTerm& t, const std::vector<std::string>& cubeNames) {
  Printer p;
  p.cubeNames = cubeNames;
  return p.cube(t);
}

std::string printTope(const TopePtr& t, const std::vector<std::string>& cubeNames) {
  Printer p;
  p.cubeNames = cubeNames;
  return p.tope(t, 0);
}

std::string printShape(const Shape& s) {
  Printer p;
  return p.expr(mkShapeType(s), 0);
}

std::string printExpr(const ExprPtr& e, const PrintEnv& env) {
  Printer p;
  collectDefNames(e, p.reserved);
  p.cubeNames = env.cubeNames;
  p.termNames = env.termNames;
  return p.expr(e, 0);
}

std::string printExpr(const ExprPtr& e) { return printExpr(e, PrintEnv{}); }

}  // namespace stt
