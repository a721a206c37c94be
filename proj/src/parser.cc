#include "foleval/parser.h"

#include <algorithm>
#include <utility>

namespace foleval {

namespace {

class Parser {
 public:
  explicit Parser(const TokenSeq &tokens) : tokens_(tokens) {}

  Formula Run() {
    if (tokens_.empty()) {
      throw ParseError(ParseError::Kind::kUnexpectedEnd, "empty formula", {},
                       {"formula"});
    }
    Formula f = ParseImplication();
    if (!AtEnd()) {
      const Token &t = Peek();
      if (t.kind == TokenKind::kRParen) {
        throw ParseError(ParseError::Kind::kUnbalancedParens,
                         "unmatched ')'", t.span);
      }
      throw ParseError(ParseError::Kind::kUnexpectedToken,
                       "unexpected '" + t.text + "' after complete formula",
                       t.span, {"connective", "end of input"});
    }
    return f;
  }

 private:
  bool AtEnd() const { return pos_ >= tokens_.size(); }
  const Token &Peek() const { return tokens_[pos_]; }

  Span EndSpan() const {
    std::size_t end = tokens_.empty() ? 0 : tokens_.back().span.end;
    return {end, end};
  }

  bool PeekConnective(std::string_view glyph) const {
    if (AtEnd()) return false;
    const Token &t = Peek();
    if (t.kind != TokenKind::kConnective && t.kind != TokenKind::kXor) {
      return false;
    }
    return CanonicalText(t) == glyph;
  }

  [[noreturn]] void FailExpected(std::vector<std::string> expected) const {
    std::string what;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) what += ", ";
      what += expected[i];
    }
    if (AtEnd()) {
      auto kind = open_parens_ > 0 ? ParseError::Kind::kUnbalancedParens
                                   : ParseError::Kind::kUnexpectedEnd;
      std::string message = open_parens_ > 0
                                ? "missing ')' at end of input"
                                : "unexpected end of input, expected " + what;
      throw ParseError(kind, message, EndSpan(), std::move(expected));
    }
    const Token &t = Peek();
    if (t.kind == TokenKind::kRParen && open_parens_ == 0) {
      throw ParseError(ParseError::Kind::kUnbalancedParens, "unmatched ')'",
                       t.span, std::move(expected));
    }
    throw ParseError(ParseError::Kind::kUnexpectedToken,
                     "unexpected '" + t.text + "', expected " + what, t.span,
                     std::move(expected));
  }

  void ExpectRParen() {
    if (AtEnd() || Peek().kind != TokenKind::kRParen) FailExpected({")"});
    ++pos_;
    --open_parens_;
  }

  // implication := disjunction (('→' | '↔') implication)?
  Formula ParseImplication() {
    Formula lhs = ParseDisjunction();
    if (PeekConnective("→") || PeekConnective("↔")) {
      FormulaKind kind =
          PeekConnective("→") ? FormulaKind::kImplies : FormulaKind::kIff;
      ++pos_;
      Formula rhs = ParseImplication();
      return Formula::Binary(kind, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  // disjunction := conjunction (('∨' | '⊕') conjunction)*
  Formula ParseDisjunction() {
    Formula lhs = ParseConjunction();
    while (PeekConnective("∨") || PeekConnective("⊕")) {
      FormulaKind kind =
          PeekConnective("∨") ? FormulaKind::kOr : FormulaKind::kXor;
      ++pos_;
      Formula rhs = ParseConjunction();
      lhs = Formula::Binary(kind, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  // conjunction := unary ('∧' unary)*
  Formula ParseConjunction() {
    Formula lhs = ParseUnary();
    while (PeekConnective("∧")) {
      ++pos_;
      Formula rhs = ParseUnary();
      lhs = Formula::And(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  // unary := '¬' unary | quantifier name unary | primary
  Formula ParseUnary() {
    if (AtEnd()) FailExpected({"formula"});
    const Token &t = Peek();
    if (t.kind == TokenKind::kNegation) {
      ++pos_;
      return Formula::Not(ParseUnary());
    }
    if (t.kind == TokenKind::kQuantifier) {
      const Span quant_span = t.span;
      FormulaKind kind = CanonicalText(t) == "∀" ? FormulaKind::kForAll
                                                  : FormulaKind::kExists;
      ++pos_;
      if (AtEnd() || (Peek().kind != TokenKind::kVariable &&
                      Peek().kind != TokenKind::kIdentifier)) {
        FailExpected({"variable"});
      }
      std::string var = Peek().text;
      const Span var_span = Peek().span;
      ++pos_;
      if (AtEnd() || Peek().kind == TokenKind::kRParen ||
          Peek().kind == TokenKind::kConnective ||
          Peek().kind == TokenKind::kXor || Peek().kind == TokenKind::kComma) {
        throw ParseError(ParseError::Kind::kDanglingQuantifier,
                         "quantifier over '" + var + "' has no body",
                         {quant_span.begin, var_span.end}, {"formula"});
      }
      bound_.push_back(var);
      Formula body = ParseUnary();
      bound_.pop_back();
      return Formula::Quantified(kind, std::move(var), std::move(body));
    }
    return ParsePrimary();
  }

  // primary := '(' implication ')' | atom | term '=' term
  Formula ParsePrimary() {
    const Token &t = Peek();
    if (t.kind == TokenKind::kLParen) {
      ++pos_;
      ++open_parens_;
      Formula inner = ParseImplication();
      ExpectRParen();
      return inner;
    }
    if (t.kind == TokenKind::kConstant) {
      Term lhs = ParseTerm();
      return ParseEqualityRest(std::move(lhs));
    }
    if (t.kind != TokenKind::kIdentifier && t.kind != TokenKind::kVariable) {
      FailExpected({"formula"});
    }
    std::string name = t.text;
    ++pos_;
    std::vector<Term> args;
    bool has_parens = false;
    if (!AtEnd() && Peek().kind == TokenKind::kLParen) {
      has_parens = true;
      args = ParseArgs();
    }
    if (!AtEnd() && Peek().kind == TokenKind::kEquality) {
      Term lhs = has_parens ? Term::Function(name, std::move(args))
                            : NameTerm(name);
      return ParseEqualityRest(std::move(lhs));
    }
    return Formula::Atom(std::move(name), std::move(args));
  }

  Formula ParseEqualityRest(Term lhs) {
    if (AtEnd() || Peek().kind != TokenKind::kEquality) FailExpected({"="});
    ++pos_;
    Term rhs = ParseTerm();
    return Formula::Equals(std::move(lhs), std::move(rhs));
  }

  // '(' [term (',' term)*] ')'
  std::vector<Term> ParseArgs() {
    ++pos_;
    ++open_parens_;
    std::vector<Term> args;
    if (!AtEnd() && Peek().kind == TokenKind::kRParen) {
      ExpectRParen();
      return args;
    }
    args.push_back(ParseTerm());
    while (!AtEnd() && Peek().kind == TokenKind::kComma) {
      ++pos_;
      args.push_back(ParseTerm());
    }
    if (AtEnd() || Peek().kind != TokenKind::kRParen) FailExpected({",", ")"});
    ExpectRParen();
    return args;
  }

  Term ParseTerm() {
    if (AtEnd()) FailExpected({"term"});
    const Token &t = Peek();
    if (t.kind == TokenKind::kConstant) {
      ++pos_;
      return Term::Constant(t.text);
    }
    if (t.kind != TokenKind::kIdentifier && t.kind != TokenKind::kVariable) {
      FailExpected({"term"});
    }
    std::string name = t.text;
    ++pos_;
    if (!AtEnd() && Peek().kind == TokenKind::kLParen) {
      std::vector<Term> args = ParseArgs();
      if (!args.empty()) return Term::Function(std::move(name), std::move(args));
    }
    return NameTerm(name);
  }

  Term NameTerm(const std::string &name) const {
    bool bound = std::find(bound_.begin(), bound_.end(), name) != bound_.end();
    bool single_lower = name.size() == 1 && name[0] >= 'a' && name[0] <= 'z';
    if (bound || single_lower) return Term::Variable(name);
    return Term::Constant(name);
  }

  const TokenSeq &tokens_;
  std::size_t pos_ = 0;
  int open_parens_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace

std::string_view ParseErrorKindName(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::kUnexpectedToken: return "UnexpectedToken";
    case ParseError::Kind::kUnexpectedEnd: return "UnexpectedEnd";
    case ParseError::Kind::kUnbalancedParens: return "UnbalancedParens";
    case ParseError::Kind::kDanglingQuantifier: return "DanglingQuantifier";
  }
  return "";
}

Formula Parse(const TokenSeq &tokens) { return Parser(tokens).Run(); }

Formula ParseFormula(std::string_view source, Notation notation) {
  return Parse(Tokenize(source, notation));
}

}  // namespace foleval
