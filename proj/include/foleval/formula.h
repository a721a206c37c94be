#ifndef FOLEVAL_FORMULA_H_
#define FOLEVAL_FORMULA_H_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace foleval {

enum class TermKind { kVariable, kConstant, kFunction };

// A term inside an atom or an equality. Value type.
class Term {
 public:
  static Term Variable(std::string name);
  static Term Constant(std::string name);
  static Term Function(std::string name, std::vector<Term> args);

  TermKind kind() const { return kind_; }
  const std::string &name() const { return name_; }
  const std::vector<Term> &args() const { return args_; }

  bool operator==(const Term &other) const = default;

 private:
  Term(TermKind kind, std::string name, std::vector<Term> args);

  TermKind kind_ = TermKind::kConstant;
  std::string name_;
  std::vector<Term> args_;
};

// Node kinds. Everything except kAtom is one of the nine operators.
enum class FormulaKind {
  kForAll,
  kExists,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kIff,
  kXor,
  kEquals,
  kAtom,
};

inline constexpr FormulaKind kOperatorKinds[] = {
    FormulaKind::kForAll,  FormulaKind::kExists, FormulaKind::kNot,
    FormulaKind::kAnd,     FormulaKind::kOr,     FormulaKind::kImplies,
    FormulaKind::kIff,     FormulaKind::kXor,    FormulaKind::kEquals,
};

bool IsQuantifier(FormulaKind kind);
bool IsBinaryConnective(FormulaKind kind);

// Lowercase operator name used in triples and reports ("forall", "and", ...).
std::string_view OperatorName(FormulaKind kind);

// Immutable FOL syntax tree. Copies share structure, so a Formula is cheap to
// pass by value and safe to read from several threads.
class Formula {
 public:
  static Formula ForAll(std::string var, Formula body);
  static Formula Exists(std::string var, Formula body);
  static Formula Quantified(FormulaKind kind, std::string var, Formula body);
  static Formula Not(Formula body);
  static Formula And(Formula lhs, Formula rhs);
  static Formula Or(Formula lhs, Formula rhs);
  static Formula Implies(Formula lhs, Formula rhs);
  static Formula Iff(Formula lhs, Formula rhs);
  static Formula Xor(Formula lhs, Formula rhs);
  static Formula Binary(FormulaKind kind, Formula lhs, Formula rhs);
  static Formula Equals(Term lhs, Term rhs);
  static Formula Atom(std::string predicate, std::vector<Term> args = {});

  FormulaKind kind() const;

  // Bound variable for quantifiers, predicate name for atoms, empty otherwise.
  const std::string &name() const;

  // Subformulas: one for quantifiers and negation, two for binary
  // connectives, none for atoms and equalities.
  const std::vector<Formula> &children() const;

  // Atom arguments, or the two sides of an equality.
  const std::vector<Term> &terms() const;

  const Formula &body() const { return children().front(); }
  const Formula &lhs() const { return children().front(); }
  const Formula &rhs() const { return children().back(); }

  friend bool operator==(const Formula &a, const Formula &b);
  friend bool operator!=(const Formula &a, const Formula &b) {
    return !(a == b);
  }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

// Operator occurrence counts for one formula.
struct OperatorProfile {
  std::map<FormulaKind, int> counts;
  int total = 0;

  bool operator==(const OperatorProfile &other) const = default;
};

OperatorProfile Profile(const Formula &f);

// Number of atoms (predicate applications) in f.
int CountAtoms(const Formula &f);

}  // namespace foleval

#endif  // FOLEVAL_FORMULA_H_
