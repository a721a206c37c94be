#include "foleval/lexer.h"

#include <array>
#include <cstdint>

namespace foleval {

namespace {

struct Glyph {
  std::string_view text;
  TokenKind kind;
  std::string_view canonical;
  bool ascii;
};

// Longest spellings first so "<->" wins over "-" prefixes.
constexpr std::array<Glyph, 15> kGlyphs = {{
    {"∀", TokenKind::kQuantifier, "∀", false},
    {"∃", TokenKind::kQuantifier, "∃", false},
    {"∧", TokenKind::kConnective, "∧", false},
    {"∨", TokenKind::kConnective, "∨", false},
    {"→", TokenKind::kConnective, "→", false},
    {"↔", TokenKind::kConnective, "↔", false},
    {"¬", TokenKind::kNegation, "¬", false},
    {"⊕", TokenKind::kXor, "⊕", false},
    {"<->", TokenKind::kConnective, "↔", true},
    {"->", TokenKind::kConnective, "→", true},
    {"&", TokenKind::kConnective, "∧", true},
    {"|", TokenKind::kConnective, "∨", true},
    {"~", TokenKind::kNegation, "¬", true},
    {"=", TokenKind::kEquality, "=", false},
    {",", TokenKind::kComma, ",", false},
}};

struct Keyword {
  std::string_view word;
  TokenKind kind;
  std::string_view canonical;
};

constexpr std::array<Keyword, 3> kKeywords = {{
    {"forall", TokenKind::kQuantifier, "∀"},
    {"exists", TokenKind::kQuantifier, "∃"},
    {"xor", TokenKind::kXor, "⊕"},
}};

bool IsWordChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Length in bytes of the UTF-8 sequence starting at s[i], or 0 if malformed.
std::size_t Utf8Length(std::string_view s, std::size_t i) {
  auto byte = static_cast<std::uint8_t>(s[i]);
  std::size_t len = 0;
  if (byte < 0x80) return 1;
  if ((byte & 0xE0) == 0xC0) len = 2;
  else if ((byte & 0xF0) == 0xE0) len = 3;
  else if ((byte & 0xF8) == 0xF0) len = 4;
  else return 0;
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<std::uint8_t>(s[i + k]) & 0xC0) != 0x80) return 0;
  }
  return len;
}

TokenKind WordKind(std::string_view word) {
  bool digits = true;
  for (char c : word) digits = digits && c >= '0' && c <= '9';
  if (digits) return TokenKind::kConstant;
  if (word.size() == 1 && word[0] >= 'a' && word[0] <= 'z') {
    return TokenKind::kVariable;
  }
  return TokenKind::kIdentifier;
}

}  // namespace

std::string_view TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kQuantifier: return "quantifier";
    case TokenKind::kConnective: return "connective";
    case TokenKind::kNegation: return "negation";
    case TokenKind::kEquality: return "equality";
    case TokenKind::kXor: return "xor";
    case TokenKind::kIdentifier: return "identifier";
    case TokenKind::kVariable: return "variable";
    case TokenKind::kConstant: return "constant";
    case TokenKind::kLParen: return "(";
    case TokenKind::kRParen: return ")";
    case TokenKind::kComma: return ",";
  }
  return "";
}

TokenSeq Tokenize(std::string_view source, Notation notation) {
  const bool allow_ascii = notation != Notation::kUnicode;
  const bool allow_unicode = notation != Notation::kAscii;
  TokenSeq tokens;
  std::size_t i = 0;
  while (i < source.size()) {
    char c = source[i];
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      tokens.push_back({c == '(' ? TokenKind::kLParen : TokenKind::kRParen,
                        std::string(1, c), {i, i + 1}});
      ++i;
      continue;
    }
    if (IsWordChar(c)) {
      std::size_t j = i;
      while (j < source.size() && IsWordChar(source[j])) ++j;
      std::string_view word = source.substr(i, j - i);
      TokenKind kind = WordKind(word);
      if (allow_ascii) {
        for (const Keyword &kw : kKeywords) {
          if (word == kw.word) kind = kw.kind;
        }
      }
      tokens.push_back({kind, std::string(word), {i, j}});
      i = j;
      continue;
    }
    bool matched = false;
    for (const Glyph &g : kGlyphs) {
      if (source.substr(i, g.text.size()) != g.text) continue;
      const bool neutral = g.kind == TokenKind::kEquality ||
                           g.kind == TokenKind::kComma;
      if (!neutral && (g.ascii ? !allow_ascii : !allow_unicode)) continue;
      tokens.push_back({g.kind, std::string(g.text), {i, i + g.text.size()}});
      i += g.text.size();
      matched = true;
      break;
    }
    if (matched) continue;
    std::size_t len = Utf8Length(source, i);
    if (len == 0) {
      throw LexError("malformed UTF-8 at byte " + std::to_string(i),
                     {i, i + 1});
    }
    throw LexError("unrecognized glyph '" + std::string(source.substr(i, len)) +
                       "' at byte " + std::to_string(i),
                   {i, i + len});
  }
  return tokens;
}

std::string_view CanonicalText(const Token &token) {
  for (const Glyph &g : kGlyphs) {
    if (g.text == token.text) return g.canonical;
  }
  if (token.kind == TokenKind::kQuantifier || token.kind == TokenKind::kXor) {
    for (const Keyword &kw : kKeywords) {
      if (kw.word == token.text) return kw.canonical;
    }
  }
  return token.text;
}

}  // namespace foleval
