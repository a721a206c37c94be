#include <gtest/gtest.h>

#include "foleval/lexer.h"
#include "foleval/parser.h"
#include "foleval/printer.h"
#include "formula_gen.h"

namespace foleval {
namespace {

std::vector<std::string> Lexemes(const TokenSeq &tokens) {
  std::vector<std::string> out;
  for (const Token &t : tokens) out.push_back(t.text);
  return out;
}

std::vector<TokenKind> Kinds(const TokenSeq &tokens) {
  std::vector<TokenKind> out;
  for (const Token &t : tokens) out.push_back(t.kind);
  return out;
}

Formula WXC(const char *pred) {
  return Formula::Atom(pred, {Term::Variable("x"), Term::Constant("C")});
}

TEST(LexerTest, EelExample) {
  TokenSeq tokens = Tokenize("∀x (Eel(x) → Fish(x))");
  EXPECT_EQ(Lexemes(tokens),
            (std::vector<std::string>{"∀", "x", "(", "Eel", "(", "x", ")", "→",
                                      "Fish", "(", "x", ")", ")"}));
  EXPECT_EQ(tokens[0].kind, TokenKind::kQuantifier);
  EXPECT_EQ(tokens[1].kind, TokenKind::kVariable);
  EXPECT_EQ(tokens[3].kind, TokenKind::kIdentifier);
  EXPECT_EQ(tokens[7].kind, TokenKind::kConnective);
}

TEST(LexerTest, EmptyInput) { EXPECT_TRUE(Tokenize("").empty()); }

TEST(LexerTest, AsciiMatchesUnicodeKinds) {
  TokenSeq ascii = Tokenize("forall x (P(x) -> Q(x))", Notation::kAscii);
  TokenSeq unicode = Tokenize("∀x (P(x) → Q(x))", Notation::kUnicode);
  EXPECT_EQ(Kinds(ascii), Kinds(unicode));
  std::vector<std::string> canonical;
  for (const Token &t : ascii) canonical.emplace_back(CanonicalText(t));
  EXPECT_EQ(canonical, Lexemes(unicode));
}

TEST(LexerTest, AllAliases) {
  TokenSeq t = Tokenize("exists y (~A & B | C <-> D xor E)", Notation::kAscii);
  std::vector<std::string> canonical;
  for (const Token &tok : t) canonical.emplace_back(CanonicalText(tok));
  EXPECT_EQ(canonical,
            (std::vector<std::string>{"∃", "y", "(", "¬", "A", "∧", "B", "∨", "C",
                                      "↔", "D", "⊕", "E", ")"}));
}

TEST(LexerTest, SpansAreMonotoneAndInBounds) {
  const std::string src = "∀x (¬W(x, C) → A(x, C)) ⊕ y = 42";
  TokenSeq tokens = Tokenize(src);
  std::size_t prev = 0;
  for (const Token &t : tokens) {
    EXPECT_LE(prev, t.span.begin);
    EXPECT_LT(t.span.begin, t.span.end);
    EXPECT_LE(t.span.end, src.size());
    EXPECT_EQ(src.substr(t.span.begin, t.span.end - t.span.begin), t.text);
    prev = t.span.end;
  }
  EXPECT_EQ(tokens.back().kind, TokenKind::kConstant);
}

TEST(LexerTest, RelexingIsIdempotent) {
  const std::string src = "∀x(¬W(x,C)→A(x,C))∧forall y (P(y) <-> Q(y))";
  TokenSeq first = Tokenize(src);
  std::string joined;
  for (const Token &t : first) joined += t.text + " ";
  TokenSeq second = Tokenize(joined);
  EXPECT_EQ(Kinds(first), Kinds(second));
  EXPECT_EQ(Lexemes(first), Lexemes(second));
}

TEST(LexerTest, UnknownGlyphIsLexErrorWithSpan) {
  try {
    Tokenize("P(x) § Q(x)");
    FAIL() << "expected LexError";
  } catch (const LexError &e) {
    EXPECT_EQ(e.span().begin, 5u);
    EXPECT_EQ(e.span().end, 7u);
  }
  EXPECT_THROW(Tokenize("P ∧ Q", Notation::kAscii), LexError);
  EXPECT_THROW(Tokenize("P & Q", Notation::kUnicode), LexError);
  EXPECT_THROW(Tokenize("P\xff"), LexError);
}

TEST(ParserTest, QuantifierExample) {
  Formula f = ParseFormula("∀x (W(x, C) → A(x, C))");
  EXPECT_EQ(f, Formula::ForAll("x", Formula::Implies(WXC("W"), WXC("A"))));
}

TEST(ParserTest, StandalonePredicate) {
  EXPECT_EQ(ParseFormula("P"), Formula::Atom("P"));
}

TEST(ParserTest, Precedence) {
  Formula expected = Formula::Or(
      Formula::And(Formula::Not(Formula::Atom("A")), Formula::Atom("B")),
      Formula::Atom("C"));
  EXPECT_EQ(ParseFormula("¬A ∧ B ∨ C"), expected);
  EXPECT_EQ(ParseFormula("((¬A ∧ B) ∨ C)"), expected);
}

TEST(ParserTest, ImplicationIsRightAssociative) {
  Formula a = Formula::Atom("A"), b = Formula::Atom("B"), c = Formula::Atom("C");
  EXPECT_EQ(ParseFormula("A → B → C"),
            Formula::Implies(a, Formula::Implies(b, c)));
  EXPECT_EQ(ParseFormula("A ∨ B ⊕ C"), Formula::Xor(Formula::Or(a, b), c));
  EXPECT_EQ(ParseFormula("A ∧ B → C ↔ A"),
            Formula::Implies(Formula::And(a, b), Formula::Iff(c, a)));
}

TEST(ParserTest, VariableClassification) {
  Formula f = ParseFormula("∀person (Likes(person, caffeine) ∧ Knows(y, C, 3))");
  const Formula &like = f.body().lhs();
  const Formula &knows = f.body().rhs();
  EXPECT_EQ(like.terms()[0], Term::Variable("person"));
  EXPECT_EQ(like.terms()[1], Term::Constant("caffeine"));
  EXPECT_EQ(knows.terms()[0], Term::Variable("y"));
  EXPECT_EQ(knows.terms()[1], Term::Constant("C"));
  EXPECT_EQ(knows.terms()[2], Term::Constant("3"));
  // Outside its quantifier a multi-letter name is a constant again.
  Formula g = ParseFormula("∃person (P(person)) ∧ Q(person)");
  EXPECT_EQ(g.rhs().terms()[0], Term::Constant("person"));
}

TEST(ParserTest, EqualityAndFunctions) {
  Formula f = ParseFormula("∀x (father(x) = bob ∨ ¬(x = y))");
  Formula expected = Formula::ForAll(
      "x", Formula::Or(Formula::Equals(Term::Function("father", {Term::Variable("x")}),
                                       Term::Constant("bob")),
                       Formula::Not(Formula::Equals(Term::Variable("x"),
                                                    Term::Variable("y")))));
  EXPECT_EQ(f, expected);
}

TEST(ParserTest, EmptyArgumentList) {
  EXPECT_EQ(ParseFormula("P()"), Formula::Atom("P", {}));
}

ParseError::Kind ErrorKind(const std::string &text) {
  try {
    ParseFormula(text);
  } catch (const ParseError &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no ParseError for " << text;
  return ParseError::Kind::kUnexpectedToken;
}

TEST(ParserTest, Errors) {
  EXPECT_EQ(ErrorKind("∀x (P(x"), ParseError::Kind::kUnbalancedParens);
  EXPECT_EQ(ErrorKind("P(x))"), ParseError::Kind::kUnbalancedParens);
  EXPECT_EQ(ErrorKind("∀x"), ParseError::Kind::kDanglingQuantifier);
  EXPECT_EQ(ErrorKind("(∀x) ∧ P"), ParseError::Kind::kDanglingQuantifier);
  EXPECT_EQ(ErrorKind("P ∧"), ParseError::Kind::kUnexpectedEnd);
  EXPECT_EQ(ErrorKind(""), ParseError::Kind::kUnexpectedEnd);
  EXPECT_EQ(ErrorKind("P Q"), ParseError::Kind::kUnexpectedToken);
  EXPECT_EQ(ErrorKind("a = b = c"), ParseError::Kind::kUnexpectedToken);
  try {
    ParseFormula("P ∧ ∧ Q");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.span().begin, 6u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(PrinterTest, Examples) {
  Formula eel = Formula::ForAll(
      "x", Formula::Implies(Formula::Atom("Eel", {Term::Variable("x")}),
                            Formula::Atom("Fish", {Term::Variable("x")})));
  EXPECT_EQ(Print(eel), "∀x (Eel(x) → Fish(x))");
  EXPECT_EQ(Print(Formula::Atom("P")), "P");
  EXPECT_EQ(Print(eel, {Notation::kAscii}), "forall x (Eel(x) -> Fish(x))");
  EXPECT_EQ(Print(ParseFormula("¬A ∧ B ∨ C")), "¬A ∧ B ∨ C");
  EXPECT_EQ(Print(ParseFormula("(A ∨ B) ∧ C")), "(A ∨ B) ∧ C");
  EXPECT_EQ(Print(ParseFormula("(A → B) → C")), "(A → B) → C");
  EXPECT_EQ(Print(ParseFormula("¬(x = y)")), "¬(x = y)");
  EXPECT_EQ(Print(ParseFormula("∀x ∃y R(x, y)")), "∀x ∃y (R(x, y))");
  EXPECT_EQ(Print(ParseFormula("A ∧ B ∨ C"), {Notation::kUnicode, true}),
            "(A ∧ B) ∨ C");
}

TEST(PrinterTest, ProfileCounts) {
  OperatorProfile p = Profile(ParseFormula("∀x (W(x, C) → A(x, C))"));
  EXPECT_EQ(p.total, 2);
  EXPECT_EQ(p.counts.size(), 2u);
  EXPECT_EQ(p.counts[FormulaKind::kForAll], 1);
  EXPECT_EQ(p.counts[FormulaKind::kImplies], 1);
  EXPECT_EQ(Profile(Formula::Atom("P")).total, 0);
  EXPECT_TRUE(Profile(Formula::Atom("P")).counts.empty());
}

TEST(RoundTripTest, RandomFormulas) {
  testing::GenOptions options;
  options.max_depth = 7;
  testing::FormulaGenerator gen(1, options);
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.Next();
    for (Notation n : {Notation::kUnicode, Notation::kAscii}) {
      const std::string text = Print(f, {n});
      ASSERT_EQ(Parse(Tokenize(text)), f) << text;
    }
  }
}

TEST(RoundTripTest, MinimalAndFullParensAgree) {
  testing::FormulaGenerator gen(2);
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.Next();
    const std::string minimal = Print(f);
    const std::string full = Print(f, {Notation::kUnicode, true});
    ASSERT_EQ(ParseFormula(minimal), ParseFormula(full)) << minimal << "\n" << full;
  }
}

TEST(RoundTripTest, GeneratorCoversAllOperators) {
  testing::GenOptions options;
  options.max_depth = 7;
  testing::FormulaGenerator gen(1, options);
  std::map<FormulaKind, int> seen;
  int max_depth = 0;
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.Next();
    for (const auto &[k, n] : Profile(f).counts) seen[k] += n;
    max_depth = std::max(max_depth, testing::Depth(f));
  }
  EXPECT_EQ(seen.size(), 9u);
  EXPECT_EQ(max_depth, 7);
}

}  // namespace
}  // namespace foleval
