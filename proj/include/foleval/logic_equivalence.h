#ifndef FOLEVAL_LOGIC_EQUIVALENCE_H_
#define FOLEVAL_LOGIC_EQUIVALENCE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "foleval/formula.h"
#include "foleval/lexer.h"

namespace foleval {

struct LEConfig {
  int domain_size = 3;
  // Enumerate every interpretation when the ground atoms (plus constant
  // assignments, counted in bits) fit in this many bits; sample otherwise.
  int exhaustive_atom_limit = 16;
  int sample_count = 2048;
  std::uint64_t seed = 17;
  double predicate_align_threshold = 0.5;

  void Validate() const;
};

enum class SyntaxIssueKind {
  kLexError,
  kUnexpectedToken,
  kUnexpectedEnd,
  kUnbalancedParens,
  kDanglingQuantifier,
  kUnusedQuantifiedVariable,
};

std::string_view SyntaxIssueName(SyntaxIssueKind kind);

struct SyntaxIssue {
  SyntaxIssueKind kind;
  std::string message;
  Span span;
};

struct SyntaxReport {
  bool valid = false;
  std::optional<SyntaxIssue> error;
  std::optional<Formula> formula;  // set whenever parsing succeeded
};

// Parses text and checks that every quantified variable occurs free in its
// body. Never throws; problems come back as data.
SyntaxReport SyntaxCheck(std::string_view text);

// Variable names bound by some quantifier in f but not used in its body.
std::optional<std::string> FindUnusedQuantifiedVariable(const Formula &f);

// 1 - Levenshtein(a, b) / max(|a|, |b|).
double NormalizedLevenshteinSimilarity(std::string_view a, std::string_view b);

// A predicate symbol is its name together with its arity.
using PredicateSymbol = std::pair<std::string, int>;

// Greedy one-to-one alignment of candidate predicates onto gold predicates of
// the same arity, most similar names first, keeping pairs whose similarity
// reaches the threshold. Returns candidate symbol -> gold symbol; unaligned
// candidate symbols map to a fresh name that no gold predicate uses.
std::map<PredicateSymbol, PredicateSymbol> AlignPredicates(
    const Formula &gold, const Formula &cand, double threshold);

struct LEResult {
  double score = 0.0;
  bool exhaustive = false;
  std::uint64_t interpretations = 0;
  int ground_atoms = 0;
};

class GroundingOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fraction of finite interpretations on which gold and cand get the same
// truth value, after aligning the candidate's predicate names onto gold's.
// Free variables are treated as constants.
LEResult LogicalEquivalence(const Formula &gold, const Formula &cand,
                            const LEConfig &cfg = {});

inline double LeScore(const Formula &gold, const Formula &cand,
                      const LEConfig &cfg = {}) {
  return LogicalEquivalence(gold, cand, cfg).score;
}

}  // namespace foleval

#endif  // FOLEVAL_LOGIC_EQUIVALENCE_H_
