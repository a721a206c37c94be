#include "foleval/formula.h"

#include <stdexcept>
#include <utility>

namespace foleval {

Term::Term(TermKind kind, std::string name, std::vector<Term> args)
    : kind_(kind), name_(std::move(name)), args_(std::move(args)) {
  if (name_.empty()) throw std::invalid_argument("term name must be nonempty");
}

Term Term::Variable(std::string name) {
  return Term(TermKind::kVariable, std::move(name), {});
}

Term Term::Constant(std::string name) {
  return Term(TermKind::kConstant, std::move(name), {});
}

Term Term::Function(std::string name, std::vector<Term> args) {
  if (args.empty()) return Constant(std::move(name));
  return Term(TermKind::kFunction, std::move(name), std::move(args));
}

bool IsQuantifier(FormulaKind kind) {
  return kind == FormulaKind::kForAll || kind == FormulaKind::kExists;
}

bool IsBinaryConnective(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies:
    case FormulaKind::kIff:
    case FormulaKind::kXor:
      return true;
    default:
      return false;
  }
}

std::string_view OperatorName(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::kForAll: return "forall";
    case FormulaKind::kExists: return "exists";
    case FormulaKind::kNot: return "not";
    case FormulaKind::kAnd: return "and";
    case FormulaKind::kOr: return "or";
    case FormulaKind::kImplies: return "implies";
    case FormulaKind::kIff: return "iff";
    case FormulaKind::kXor: return "xor";
    case FormulaKind::kEquals: return "equals";
    case FormulaKind::kAtom: return "atom";
  }
  return "";
}

struct Formula::Node {
  FormulaKind kind;
  std::string name;
  std::vector<Formula> children;
  std::vector<Term> terms;
};

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::Quantified(FormulaKind kind, std::string var, Formula body) {
  if (!IsQuantifier(kind)) throw std::invalid_argument("not a quantifier");
  if (var.empty()) throw std::invalid_argument("quantifier needs a variable");
  return Formula(std::make_shared<const Node>(
      Node{kind, std::move(var), {std::move(body)}, {}}));
}

Formula Formula::ForAll(std::string var, Formula body) {
  return Quantified(FormulaKind::kForAll, std::move(var), std::move(body));
}

Formula Formula::Exists(std::string var, Formula body) {
  return Quantified(FormulaKind::kExists, std::move(var), std::move(body));
}

Formula Formula::Not(Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kNot, {}, {std::move(body)}, {}}));
}

Formula Formula::Binary(FormulaKind kind, Formula lhs, Formula rhs) {
  if (!IsBinaryConnective(kind)) {
    throw std::invalid_argument("not a binary connective");
  }
  return Formula(std::make_shared<const Node>(
      Node{kind, {}, {std::move(lhs), std::move(rhs)}, {}}));
}

Formula Formula::And(Formula lhs, Formula rhs) {
  return Binary(FormulaKind::kAnd, std::move(lhs), std::move(rhs));
}
Formula Formula::Or(Formula lhs, Formula rhs) {
  return Binary(FormulaKind::kOr, std::move(lhs), std::move(rhs));
}
Formula Formula::Implies(Formula lhs, Formula rhs) {
  return Binary(FormulaKind::kImplies, std::move(lhs), std::move(rhs));
}
Formula Formula::Iff(Formula lhs, Formula rhs) {
  return Binary(FormulaKind::kIff, std::move(lhs), std::move(rhs));
}
Formula Formula::Xor(Formula lhs, Formula rhs) {
  return Binary(FormulaKind::kXor, std::move(lhs), std::move(rhs));
}

Formula Formula::Equals(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kEquals, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::Atom(std::string predicate, std::vector<Term> args) {
  if (predicate.empty()) throw std::invalid_argument("empty predicate name");
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kAtom, std::move(predicate), {}, std::move(args)}));
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string &Formula::name() const { return node_->name; }
const std::vector<Formula> &Formula::children() const {
  return node_->children;
}
const std::vector<Term> &Formula::terms() const { return node_->terms; }

bool operator==(const Formula &a, const Formula &b) {
  if (a.node_ == b.node_) return true;
  return a.node_->kind == b.node_->kind && a.node_->name == b.node_->name &&
         a.node_->terms == b.node_->terms &&
         a.node_->children == b.node_->children;
}

namespace {

void CollectProfile(const Formula &f, OperatorProfile *profile) {
  if (f.kind() != FormulaKind::kAtom) {
    ++profile->counts[f.kind()];
    ++profile->total;
  }
  for (const Formula &child : f.children()) CollectProfile(child, profile);
}

}  // namespace

OperatorProfile Profile(const Formula &f) {
  OperatorProfile profile;
  CollectProfile(f, &profile);
  return profile;
}

int CountAtoms(const Formula &f) {
  if (f.kind() == FormulaKind::kAtom) return 1;
  int n = 0;
  for (const Formula &child : f.children()) n += CountAtoms(child);
  return n;
}

}  // namespace foleval
