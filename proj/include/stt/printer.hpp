#pragma once

#include <string>
#include <vector>

#include "stt/term.hpp"

namespace stt {

// Pretty-printing back to surface syntax. Output is parseable and round-trips
// up to alphaEq (binder names are freshened against globals and outer scopes).
// `cubeNames`/`termNames` give names to free variables by level.
struct PrintEnv {
  std::vector<std::string> cubeNames;
  std::vector<std::string> termNames;
};

std::string printCubeTerm(const CubeTerm& t, const std::vector<std::string>& cubeNames);
std::string printTope(const TopePtr& t, const std::vector<std::string>& cubeNames);
std::string printShape(const Shape& s);
std::string printExpr(const ExprPtr& e);
std::string printExpr(const ExprPtr& e, const PrintEnv& env);

}  // namespace stt
