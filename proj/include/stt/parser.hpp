#pragma once

#include <string>
#include <vector>

#include "stt/lexer.hpp"
#include "stt/term.hpp"

namespace stt {

struct ParseError : std::runtime_error {
  Span span;
  std::string expected;
  ParseError(const std::string& what, Span s, std::string exp = {})
      : std::runtime_error(what), span(s), expected(std::move(exp)) {}
};

struct Decl {
  enum class Kind { Def, Postulate, Check, Normalize, Entails, Import };
  Kind kind = Kind::Def;
  std::string name;  // Def/Postulate/Import
  Span span;
  ExprPtr type;  // Def/Postulate: full Pi chain; Check: optional ascription
  ExprPtr body;  // Def: full binder chain; Check/Normalize: the expression
  std::vector<std::string> entailsVars;
  TopePtr entailsHyp, entailsGoal;  // level-form over entailsVars
};

struct SourceModule {
  std::string path;
  std::vector<Decl> decls;
};

SourceModule parseModule(const std::vector<Token>& tokens, std::string path);
SourceModule parseModuleText(const std::string& text, std::string path);

// One standalone expression (for the CLI and directives). Free names parse as
// global references.
ExprPtr parseExpressionText(const std::string& text);

// One standalone tope over the given variables, returned in level form.
TopePtr parseTopeText(const std::string& text, const std::vector<std::string>& vars);

// A shape inclusion spec "shape <= shape" (both literals, same arity).
std::pair<Shape, Shape> parseInclusionText(const std::string& text);

}  // namespace stt
