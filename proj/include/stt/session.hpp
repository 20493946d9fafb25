#pragma once

#include <set>
#include <string>
#include <vector>

#include "stt/checker.hpp"

namespace stt {

struct Diagnostic {
  std::string severity = "error";
  std::string file;
  int line = 0;
  int col = 0;
  std::string category;
  std::string message;

  // One line per diagnostic: `SEVERITY file:line:col category: message`,
  // splittable on the first five fields.
  std::string render() const;
  std::string renderJson() const;
};

// An accumulating checking session: files checked through one session share a
// single environment, in order. `import prelude;` loads the configured prelude
// file once.
class Session {
 public:
  explicit Session(bool distinctEndpoints = true) : solver_(distinctEndpoints) {}

  Solver& solver() { return solver_; }
  Environment& env() { return env_; }
  const Environment& env() const { return env_; }

  void setPreludePath(std::string path) { preludePath_ = std::move(path); }

  // Check one file (or source string) against the current environment,
  // extending it with the checked declarations. Stops at the first error.
  bool checkFile(const std::string& path);
  bool checkSource(const std::string& text, const std::string& path);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  const std::vector<std::string>& directiveOutput() const { return directiveOut_; }
  void clearOutput() {
    diags_.clear();
    directiveOut_.clear();
  }

  // Elaborate one expression in the current environment; returns the core and
  // its type. Throws TypeError / ParseError.
  std::pair<ExprPtr, ExprPtr> elaborateExpression(const std::string& text);

  // Parse and reduce without requiring the expression to typecheck.
  ExprPtr reduceExpression(const std::string& text);

  bool hasParseError() const { return sawParseError_; }

 private:
  bool runDecl(const Decl& d, const std::string& path);
  void importPrelude(const std::string& fromFile, Span span);
  void report(const std::string& file, Span span, const std::string& category,
              const std::string& message);

  Solver solver_;
  Environment env_;
  std::vector<Diagnostic> diags_;
  std::vector<std::string> directiveOut_;
  std::set<std::string> loadedFiles_;
  std::string preludePath_;
  bool sawParseError_ = false;
};

std::string readFileOrThrow(const std::string& path);

}  // namespace stt
