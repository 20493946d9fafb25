#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stt/parser.hpp"
#include "stt/solver.hpp"
#include "stt/term.hpp"

namespace stt {

enum class Category : uint8_t {
  Mismatch,
  NotAFunction,
  BoundaryViolation,
  TopeFalse,
  UnboundName,
  UniverseError,
};

const char* categoryName(Category c);
std::optional<Category> categoryFromName(const std::string& name);

struct TypeError : std::runtime_error {
  Category category;
  Span span;
  TypeError(Category c, const std::string& what, Span s)
      : std::runtime_error(what), category(c), span(s) {}
};

// Checked top-level declarations, in dependency order.
class Environment {
 public:
  struct Entry {
    std::string name;
    ExprPtr type;   // closed, elaborated
    ExprPtr value;  // null for postulates
  };

  const Entry* lookup(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  void add(Entry e) {
    index_[e.name] = entries_.size();
    entries_.push_back(std::move(e));
  }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Typing context for a single judgment: cube variables and the current tope
// constraint (both level-addressed), plus typed term variables. Everything
// stored here is fully opened (free variables only).
struct Ctx {
  struct TermEntry {
    std::string name;
    ExprPtr type;
    ExprPtr value;  // optional definiens
  };

  std::vector<std::string> cubeNames;
  TopePtr tope = Tope::top();
  std::vector<TermEntry> terms;

  int cubeDepth() const { return static_cast<int>(cubeNames.size()); }

  Ctx pushCubes(const std::vector<std::string>& names, TopePtr extraTope) const;
  Ctx withTope(TopePtr t) const;
  Ctx pushTerm(std::string name, ExprPtr type, ExprPtr value = nullptr) const;
};

// Bidirectional checking and tope-sensitive definitional equality. check() and
// infer() elaborate as they go: surface binders are sorted into term or cube
// binders and shape expressions are resolved against the environment.
class Checker {
 public:
  Checker(Environment& env, Solver& solver) : env_(env), solver_(solver) {}

  Environment& env() { return env_; }
  const Environment& env() const { return env_; }
  Solver& solver() { return solver_; }

  ExprPtr whnf(const Ctx& ctx, const ExprPtr& e) const;

  bool convertible(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b,
                   const ExprPtr& type) const;
  bool convertibleTypes(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b) const;

  // Returns the elaborated core and its type.
  std::pair<ExprPtr, ExprPtr> infer(const Ctx& ctx, const ExprPtr& e) const;
  ExprPtr check(const Ctx& ctx, const ExprPtr& e, const ExprPtr& type) const;

  // e must elaborate to a type (sort Universe).
  ExprPtr checkIsType(const Ctx& ctx, const ExprPtr& e) const;

  // Resolve a surface shape expression (literal, name or product) to a shape.
  Shape resolveShape(const Ctx& ctx, const ExprPtr& e) const;

  bool topeHolds(const Ctx& ctx, const TopePtr& goal) const;
  bool ctxConsistent(const Ctx& ctx) const;

 private:
  std::optional<ExprPtr> inferNeutralType(const Ctx& ctx, const ExprPtr& e) const;
  bool convLeaf(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b,
                const ExprPtr& type) const;
  bool convType(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b) const;
  bool convNeutral(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b) const;
  bool convUntyped(const Ctx& ctx, const ExprPtr& a, const ExprPtr& b) const;
  bool cubeTermsEqual(const Ctx& ctx, const CubeTerm& x, const CubeTerm& y) const;
  ExprPtr apply(const ExprPtr& f, const ExprPtr& arg) const;
  std::pair<ExprPtr, ExprPtr> inferApp(const Ctx& ctx, const ExprPtr& e) const;
  std::pair<ExprPtr, ExprPtr> inferExt(const Ctx& ctx, const ExprPtr& e) const;
  ExprPtr checkLamAgainstExt(const Ctx& ctx, const ExprPtr& lam, const ExprPtr& extTy) const;
  std::vector<CubeTerm> coerceCubePoint(const Ctx& ctx, const ExprPtr& arg, int k,
                                        Span span) const;

  Environment& env_;
  Solver& solver_;
};

std::string describeSequent(const Ctx& ctx, const TopePtr& hyp, const std::string& goal);

}  // namespace stt
