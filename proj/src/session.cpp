#include "stt/session.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stt/printer.hpp"

#include "json.hpp"

namespace stt {

std::string Diagnostic::render() const {
  std::ostringstream os;
  os << severity << " " << file << ":" << line << ":" << col << " " << category
     << ": " << message;
  return os.str();
}

std::string Diagnostic::renderJson() const {
  nlohmann::json j;
  j["severity"] = severity;
  j["file"] = file;
  j["line"] = line;
  j["col"] = col;
  j["category"] = category;
  j["message"] = message;
  return j.dump();
}

std::string readFileOrThrow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Session::report(const std::string& file, Span span, const std::string& category,
                     const std::string& message) {
  Diagnostic d;
  d.file = file;
  d.line = span.line;
  d.col = span.col;
  d.category = category;
  d.message = message;
  diags_.push_back(std::move(d));
}

void Session::importPrelude(const std::string& fromFile, Span span) {
  std::string path = preludePath_;
  if (path.empty()) {
    if (const char* envp = std::getenv("STT_PRELUDE"); envp && *envp) {
      path = envp;
    } else {
      auto dir = std::filesystem::path(fromFile).parent_path();
      path = (dir / "prelude.stt").string();
    }
  }
  std::error_code ec;
  auto canon = std::filesystem::weakly_canonical(path, ec);
  std::string key = ec ? path : canon.string();
  if (loadedFiles_.count(key)) return;
  loadedFiles_.insert(key);
  if (!checkFile(path))
    throw TypeError(Category::UnboundName, "prelude failed to check: " + path, span);
}

bool Session::runDecl(const Decl& d, const std::string& path) {
  Checker checker(env_, solver_);
  Ctx ctx;
  switch (d.kind) {
    case Decl::Kind::Import: {
      if (d.name != "prelude")
        throw TypeError(Category::UnboundName,
                        "only the prelude can be imported, not '" + d.name + "'",
                        d.span);
      importPrelude(path, d.span);
      return true;
    }
    case Decl::Kind::Def:
    case Decl::Kind::Postulate: {
      if (env_.contains(d.name))
        throw TypeError(Category::Mismatch, "redefinition of '" + d.name + "'", d.span);
      ExprPtr ty = checker.checkIsType(ctx, d.type);
      ExprPtr value;
      if (d.kind == Decl::Kind::Def) value = checker.check(ctx, d.body, ty);
      env_.add(Environment::Entry{d.name, ty, value});
      return true;
    }
    case Decl::Kind::Check: {
      ExprPtr core, ty;
      if (d.type) {
        ty = checker.checkIsType(ctx, d.type);
        core = checker.check(ctx, d.body, ty);
      } else {
        std::tie(core, ty) = checker.infer(ctx, d.body);
      }
      directiveOut_.push_back("CHECK " + printExpr(core) + " : " + printExpr(ty));
      return true;
    }
    case Decl::Kind::Normalize: {
      auto [core, ty] = checker.infer(ctx, d.body);
      (void)ty;
      directiveOut_.push_back("NORMALIZE " + printExpr(core) + " ==> " +
                              printExpr(checker.whnf(ctx, core)));
      return true;
    }
    case Decl::Kind::Entails: {
      int n = static_cast<int>(d.entailsVars.size());
      bool valid = solver_.entails(n, d.entailsHyp, d.entailsGoal);
      std::string vars = "[";
      for (std::size_t i = 0; i < d.entailsVars.size(); ++i) {
        if (i) vars += ", ";
        vars += d.entailsVars[i];
      }
      vars += "]";
      std::string line = "ENTAILS " + vars + " " +
                         printTope(reindexShapeTope(d.entailsHyp, n), d.entailsVars) +
                         " |- " +
                         printTope(reindexShapeTope(d.entailsGoal, n), d.entailsVars) +
                         " : " + (valid ? "VALID" : "INVALID");
      directiveOut_.push_back(line);
      if (!valid)
        throw TypeError(Category::TopeFalse, "asserted entailment is invalid", d.span);
      return true;
    }
  }
  return false;
}

bool Session::checkSource(const std::string& text, const std::string& path) {
  SourceModule mod;
  try {
    mod = parseModuleText(text, path);
  } catch (const LexError& e) {
    sawParseError_ = true;
    report(path, e.span, "LexError", e.what());
    return false;
  } catch (const ParseError& e) {
    sawParseError_ = true;
    report(path, e.span, "ParseError", e.what());
    return false;
  }
  for (const auto& d : mod.decls) {
    try {
      if (!runDecl(d, path)) return false;
    } catch (const TypeError& e) {
      Span sp = e.span.line ? e.span : d.span;
      report(path, sp, categoryName(e.category), e.what());
      return false;
    } catch (const ContextMismatch& e) {
      report(path, d.span, categoryName(Category::TopeFalse), e.what());
      return false;
    } catch (const LexError& e) {
      sawParseError_ = true;
      report(path, e.span, "LexError", e.what());
      return false;
    } catch (const ParseError& e) {
      sawParseError_ = true;
      report(path, e.span, "ParseError", e.what());
      return false;
    }
  }
  return true;
}

bool Session::checkFile(const std::string& path) {
  std::error_code ec;
  auto canon = std::filesystem::weakly_canonical(path, ec);
  loadedFiles_.insert(ec ? path : canon.string());
  std::string text;
  try {
    text = readFileOrThrow(path);
  } catch (const std::exception& e) {
    report(path, Span{}, "IOError", e.what());
    return false;
  }
  return checkSource(text, path);
}

std::pair<ExprPtr, ExprPtr> Session::elaborateExpression(const std::string& text) {
  ExprPtr e = parseExpressionText(text);
  Checker checker(env_, solver_);
  Ctx ctx;
  return checker.infer(ctx, e);
}

namespace {

// Best-effort elaboration for the untyped reduction path: surface lambdas
// whose binder is never used as a cube variable become ordinary term lambdas.
ExprPtr looseElaborate(const ExprPtr& e) {
  if (!e) return e;
  Expr out = *e;
  out.a = looseElaborate(e->a);
  out.b = looseElaborate(e->b);
  out.c = looseElaborate(e->c);
  for (auto& br : out.branches) br.body = looseElaborate(br.body);
  if (e->kind == Expr::Kind::Lam && e->phantom && e->binders.size() == 1 &&
      !cubeVarOccurs(out.a, 0)) {
    out.a = substCube(out.a, 0, CubeTerm::zero());
    out.phantom = false;
  }
  return std::make_shared<const Expr>(std::move(out));
}

}  // namespace

ExprPtr Session::reduceExpression(const std::string& text) {
  ExprPtr e = parseExpressionText(text);
  Checker checker(env_, solver_);
  Ctx ctx;
  try {
    auto [core, ty] = checker.infer(ctx, e);
    (void)ty;
    return checker.whnf(ctx, core);
  } catch (const TypeError&) {
    return checker.whnf(ctx, looseElaborate(e));
  }
}

}  // namespace stt
