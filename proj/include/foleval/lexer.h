#ifndef FOLEVAL_LEXER_H_
#define FOLEVAL_LEXER_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace foleval {

enum class TokenKind {
  kQuantifier,   // ∀ ∃ forall exists
  kConnective,   // ∧ ∨ → ↔ & | -> <->
  kNegation,     // ¬ ~
  kEquality,     // =
  kXor,          // ⊕ xor
  kIdentifier,   // predicate, function or constant name
  kVariable,     // single lowercase letter
  kConstant,     // numeric literal
  kLParen,
  kRParen,
  kComma,
};

std::string_view TokenKindName(TokenKind kind);

// Half-open byte range into the source string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Span &other) const = default;
};

struct Token {
  TokenKind kind;
  std::string text;
  Span span;
};

using TokenSeq = std::vector<Token>;

// Which operator spellings the lexer accepts. Unicode glyphs only, the ASCII
// aliases (forall exists & | ~ -> <-> xor) only, or both.
enum class Notation { kUnicode, kAscii, kMixed };

// Base for errors that point into the source text.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string &message, Span span)
      : std::runtime_error(message), span_(span) {}

  Span span() const { return span_; }

 private:
  Span span_;
};

class LexError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

// Splits source into tokens. Throws LexError on a glyph the notation does not
// accept or on malformed UTF-8.
TokenSeq Tokenize(std::string_view source, Notation notation = Notation::kMixed);

// Unicode spelling of an operator token ("->" becomes "→"); other tokens are
// returned unchanged.
std::string_view CanonicalText(const Token &token);

}  // namespace foleval

#endif  // FOLEVAL_LEXER_H_
