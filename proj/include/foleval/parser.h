#ifndef FOLEVAL_PARSER_H_
#define FOLEVAL_PARSER_H_

#include <string>
#include <string_view>
#include <vector>

#include "foleval/formula.h"
#include "foleval/lexer.h"

namespace foleval {

class ParseError : public SyntaxError {
 public:
  enum class Kind {
    kUnexpectedToken,
    kUnexpectedEnd,
    kUnbalancedParens,
    kDanglingQuantifier,
  };

  ParseError(Kind kind, const std::string &message, Span span,
             std::vector<std::string> expected = {})
      : SyntaxError(message, span), kind_(kind), expected_(std::move(expected)) {}

  Kind kind() const { return kind_; }
  const std::vector<std::string> &expected() const { return expected_; }

 private:
  Kind kind_;
  std::vector<std::string> expected_;
};

std::string_view ParseErrorKindName(ParseError::Kind kind);

// Builds a Formula from a token stream.
//
// Precedence, tightest first: ¬ and quantifiers, ∧, {∨, ⊕}, {→, ↔}. ∧, ∨ and
// ⊕ associate to the left, → and ↔ to the right. A quantifier takes the
// following unary formula as its body, which is normally a parenthesized
// group. "=" relates two terms and never two formulas.
//
// A name in term position is a Variable when an enclosing quantifier binds it
// or when it is a single lowercase letter; every other name is a Constant.
Formula Parse(const TokenSeq &tokens);

// Tokenize followed by Parse.
Formula ParseFormula(std::string_view source,
                     Notation notation = Notation::kMixed);

}  // namespace foleval

#endif  // FOLEVAL_PARSER_H_
