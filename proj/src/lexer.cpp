#include "stt/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace stt {

const char* tokenName(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::KwDef: return "'def'";
    case Tok::KwPostulate: return "'postulate'";
    case Tok::KwImport: return "'import'";
    case Tok::KwExt: return "'ext'";
    case Tok::KwRecBD: return "'recBD'";
    case Tok::KwRecOR: return "'recOR'";
    case Tok::KwIdJ: return "'idJ'";
    case Tok::KwFst: return "'fst'";
    case Tok::KwSnd: return "'snd'";
    case Tok::KwRefl: return "'refl'";
    case Tok::KwId: return "'Id'";
    case Tok::KwU: return "'U'";
    case Tok::KwShape: return "'SHAPE'";
    case Tok::KwUnit: return "'Unit'";
    case Tok::KwTt: return "'tt'";
    case Tok::KwI: return "'I'";
    case Tok::KwTop: return "'TOP'";
    case Tok::KwBot: return "'BOT'";
    case Tok::DirCheck: return "'#check'";
    case Tok::DirNormalize: return "'#normalize'";
    case Tok::DirEntails: return "'#entails'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::ColonEq: return "':='";
    case Tok::Star: return "'*'";
    case Tok::Arrow: return "'->'";
    case Tok::Lambda: return "'\\'";
    case Tok::Bar: return "'|'";
    case Tok::MapsTo: return "'|->'";
    case Tok::Turnstile: return "'|-'";
    case Tok::EqEqEq: return "'==='";
    case Tok::Leq: return "'<='";
    case Tok::AndAnd: return "'/\\'";
    case Tok::OrOr: return "'\\/'";
    case Tok::Underscore: return "'_'";
    case Tok::End: return "end of input";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string, Tok> kKeywords = {
    {"def", Tok::KwDef},       {"postulate", Tok::KwPostulate},
    {"import", Tok::KwImport}, {"ext", Tok::KwExt},
    {"recBD", Tok::KwRecBD},   {"recOR", Tok::KwRecOR},
    {"idJ", Tok::KwIdJ},       {"fst", Tok::KwFst},
    {"snd", Tok::KwSnd},       {"refl", Tok::KwRefl},
    {"Id", Tok::KwId},         {"U", Tok::KwU},
    {"SHAPE", Tok::KwShape},   {"Unit", Tok::KwUnit},
    {"tt", Tok::KwTt},         {"I", Tok::KwI},
    {"TOP", Tok::KwTop},       {"BOT", Tok::KwBot},
};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool identCont(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;

  auto spanFrom = [&](std::size_t begin, int bline, int bcol) {
    Span s;
    s.line = bline;
    s.col = bcol;
    s.begin = begin;
    s.end = i;
    return s;
  };
  auto push = [&](Tok k, std::size_t begin, int bline, int bcol) {
    Token t;
    t.kind = k;
    t.lexeme = text.substr(begin, i - begin);
    t.span = spanFrom(begin, bline, bcol);
    out.push_back(std::move(t));
  };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto startsWith = [&](const char* s) {
    return text.compare(i, std::char_traits<char>::length(s), s) == 0;
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    std::size_t begin = i;
    int bline = line, bcol = col;

    // Unicode aliases.
    struct Uni { const char* seq; Tok tok; };
    static const Uni kUni[] = {
        {"≤", Tok::Leq},      // ≤
        {"≡", Tok::EqEqEq},   // ≡
        {"∧", Tok::AndAnd},   // ∧
        {"∨", Tok::OrOr},     // ∨
        {"⊤", Tok::KwTop},    // ⊤
        {"⊥", Tok::KwBot},    // ⊥
        {"→", Tok::Arrow},    // →
        {"λ", Tok::Lambda},   // λ
        {"↦", Tok::MapsTo},   // ↦
        {"⊢", Tok::Turnstile},// ⊢
        {"×", Tok::Star},     // ×
    };
    bool matched = false;
    for (const auto& u : kUni) {
      std::size_t len = std::char_traits<char>::length(u.seq);
      if (text.compare(i, len, u.seq) == 0) {
        advance(len);
        push(u.tok, begin, bline, bcol);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (startsWith("Σ")) {  // Σ lexes as the identifier "Sigma"
      advance(2);
      Token t;
      t.kind = Tok::Ident;
      t.lexeme = "Sigma";
      t.span = spanFrom(begin, bline, bcol);
      out.push_back(std::move(t));
      continue;
    }

    if (identStart(c)) {
      while (i < text.size() && identCont(text[i])) advance(1);
      std::string word = text.substr(begin, i - begin);
      auto it = kKeywords.find(word);
      Token t;
      t.kind = it == kKeywords.end() ? Tok::Ident : it->second;
      t.lexeme = std::move(word);
      t.span = spanFrom(begin, bline, bcol);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) advance(1);
      push(Tok::Number, begin, bline, bcol);
      continue;
    }

    auto two = [&](const char* s, Tok k) {
      if (startsWith(s)) {
        advance(std::char_traits<char>::length(s));
        push(k, begin, bline, bcol);
        return true;
      }
      return false;
    };
    if (two("===", Tok::EqEqEq)) continue;
    if (two("<=", Tok::Leq)) continue;
    if (two("/\\", Tok::AndAnd)) continue;
    if (two("\\/", Tok::OrOr)) continue;
    if (two(":=", Tok::ColonEq)) continue;
    if (two("->", Tok::Arrow)) continue;
    if (two("|->", Tok::MapsTo)) continue;
    if (two("|-", Tok::Turnstile)) continue;
    if (two("#check", Tok::DirCheck)) continue;
    if (two("#normalize", Tok::DirNormalize)) continue;
    if (two("#entails", Tok::DirEntails)) continue;

    Tok single = Tok::End;
    switch (c) {
      case '(': single = Tok::LParen; break;
      case ')': single = Tok::RParen; break;
      case '{': single = Tok::LBrace; break;
      case '}': single = Tok::RBrace; break;
      case '[': single = Tok::LBracket; break;
      case ']': single = Tok::RBracket; break;
      case ',': single = Tok::Comma; break;
      case ';': single = Tok::Semi; break;
      case ':': single = Tok::Colon; break;
      case '*': single = Tok::Star; break;
      case '\\': single = Tok::Lambda; break;
      case '|': single = Tok::Bar; break;
      case '_': single = Tok::Underscore; break;
      default: break;
    }
    if (single != Tok::End) {
      advance(1);
      push(single, begin, bline, bcol);
      continue;
    }
    Span s;
    s.line = bline;
    s.col = bcol;
    s.begin = begin;
    s.end = begin + 1;
    throw LexError("illegal character '" + text.substr(begin, 1) + "'", s);
  }

  Token end;
  end.kind = Tok::End;
  end.span = Span{line, col, i, i};
  out.push_back(std::move(end));
  return out;
}

}  // namespace stt
