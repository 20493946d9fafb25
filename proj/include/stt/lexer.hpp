#pragma once

#include <string>
#include <vector>

#include "stt/term.hpp"

namespace stt {

enum class Tok : uint8_t {
  Ident, Number,
  KwDef, KwPostulate, KwImport, KwExt, KwRecBD, KwRecOR, KwIdJ,
  KwFst, KwSnd, KwRefl, KwId, KwU, KwShape, KwUnit, KwTt, KwI, KwTop, KwBot,
  DirCheck, DirNormalize, DirEntails,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semi, Colon, ColonEq, Star, Arrow, Lambda, Bar, MapsTo, Turnstile,
  EqEqEq, Leq, AndAnd, OrOr, Underscore,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string lexeme;
  Span span;
};

struct LexError : std::runtime_error {
  Span span;
  LexError(const std::string& what, Span s) : std::runtime_error(what), span(s) {}
};

// Tokenize UTF-8 source. Unicode aliases (≤ ≡ ∧ ∨ ⊤ ⊥ → λ Σ ↦ ⊢) lex to the
// same tokens as their ASCII forms. Line comments start with `--`.
std::vector<Token> tokenize(const std::string& text);

const char* tokenName(Tok t);

}  // namespace stt
