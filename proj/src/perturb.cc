#include "foleval/perturb.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace foleval {

namespace {

PerturbationOutcome NotApplied(PerturbationKind kind) {
  PerturbationOutcome out;
  out.kind = kind;
  return out;
}

PerturbationOutcome Applied(PerturbationKind kind, Formula result, int sites) {
  PerturbationOutcome out;
  out.kind = kind;
  out.applied = true;
  out.result = std::move(result);
  out.sites = sites;
  return out;
}

// Rebuilds f with each child replaced by fn(child).
template <typename Fn>
Formula MapChildren(const Formula &f, Fn &&fn) {
  switch (f.kind()) {
    case FormulaKind::kAtom:
    case FormulaKind::kEquals:
      return f;
    case FormulaKind::kNot:
      return Formula::Not(fn(f.body()));
    case FormulaKind::kForAll:
    case FormulaKind::kExists:
      return Formula::Quantified(f.kind(), f.name(), fn(f.body()));
    default:
      return Formula::Binary(f.kind(), fn(f.lhs()), fn(f.rhs()));
  }
}

Formula SwapKinds(const Formula &f, FormulaKind a, FormulaKind b, int *sites) {
  auto recurse = [&](const Formula &c) { return SwapKinds(c, a, b, sites); };
  if (f.kind() == a || f.kind() == b) {
    ++*sites;
    FormulaKind swapped = f.kind() == a ? b : a;
    if (IsQuantifier(swapped)) {
      return Formula::Quantified(swapped, f.name(), recurse(f.body()));
    }
    return Formula::Binary(swapped, recurse(f.lhs()), recurse(f.rhs()));
  }
  return MapChildren(f, recurse);
}

Formula ToggleAtomNegation(const Formula &f, int *sites) {
  if (f.kind() == FormulaKind::kNot &&
      f.body().kind() == FormulaKind::kAtom) {
    ++*sites;
    return f.body();
  }
  if (f.kind() == FormulaKind::kAtom) {
    ++*sites;
    return Formula::Not(f);
  }
  return MapChildren(f,
                     [&](const Formula &c) { return ToggleAtomNegation(c, sites); });
}

void CollectLeaves(const Formula &f, std::vector<Formula> *leaves) {
  if (f.kind() == FormulaKind::kAtom || f.kind() == FormulaKind::kEquals) {
    leaves->push_back(f);
    return;
  }
  for (const Formula &child : f.children()) CollectLeaves(child, leaves);
}

bool HasKind(const Formula &f, FormulaKind a, FormulaKind b) {
  if (f.kind() == a || f.kind() == b) return true;
  return std::any_of(f.children().begin(), f.children().end(),
                     [&](const Formula &c) { return HasKind(c, a, b); });
}

// Consistent renaming for the text-minus-variable perturbation.
class Renamer {
 public:
  explicit Renamer(const Formula &f) {
    CollectBound(f);
    std::vector<std::string> scope;
    CollectPredicates(f);
    CollectTermNames(f, &scope);
  }

  Formula Apply(const Formula &f) {
    std::vector<std::string> scope;
    return Rename(f, &scope);
  }

  bool empty() const { return mapping_.empty(); }
  int sites() const { return sites_; }
  bool overflowed() const { return overflowed_; }

 private:
  void CollectBound(const Formula &f) {
    if (IsQuantifier(f.kind())) bound_names_.insert(f.name());
    for (const Formula &c : f.children()) CollectBound(c);
  }

  void CollectPredicates(const Formula &f) {
    if (f.kind() == FormulaKind::kAtom) Assign(f.name());
    for (const Formula &c : f.children()) CollectPredicates(c);
  }

  void CollectTermNames(const Formula &f, std::vector<std::string> *scope) {
    if (IsQuantifier(f.kind())) {
      scope->push_back(f.name());
      CollectTermNames(f.body(), scope);
      scope->pop_back();
      return;
    }
    for (const Term &t : f.terms()) CollectTerm(t, *scope);
    for (const Formula &c : f.children()) CollectTermNames(c, scope);
  }

  void CollectTerm(const Term &t, const std::vector<std::string> &scope) {
    if (!IsBoundVariable(t, scope)) Assign(t.name());
    for (const Term &a : t.args()) CollectTerm(a, scope);
  }

  static bool IsBoundVariable(const Term &t,
                              const std::vector<std::string> &scope) {
    return t.kind() == TermKind::kVariable &&
           std::find(scope.begin(), scope.end(), t.name()) != scope.end();
  }

  void Assign(const std::string &name) {
    if (mapping_.count(name)) return;
    mapping_[name] = NextFresh();
  }

  std::string NextFresh() {
    while (true) {
      std::string candidate;
      if (next_ < 26) {
        candidate = std::string(1, static_cast<char>('A' + next_));
      } else {
        overflowed_ = true;
        candidate = "A" + std::to_string(next_ - 25);
      }
      ++next_;
      if (!bound_names_.count(candidate)) return candidate;
    }
  }

  Formula Rename(const Formula &f, std::vector<std::string> *scope) {
    switch (f.kind()) {
      case FormulaKind::kAtom: {
        ++sites_;
        std::vector<Term> args;
        for (const Term &t : f.terms()) args.push_back(RenameTerm(t, *scope));
        return Formula::Atom(mapping_.at(f.name()), std::move(args));
      }
      case FormulaKind::kEquals:
        return Formula::Equals(RenameTerm(f.terms()[0], *scope),
                               RenameTerm(f.terms()[1], *scope));
      case FormulaKind::kForAll:
      case FormulaKind::kExists: {
        scope->push_back(f.name());
        Formula body = Rename(f.body(), scope);
        scope->pop_back();
        return Formula::Quantified(f.kind(), f.name(), std::move(body));
      }
      default:
        return MapChildren(f, [&](const Formula &c) { return Rename(c, scope); });
    }
  }

  Term RenameTerm(const Term &t, const std::vector<std::string> &scope) {
    if (IsBoundVariable(t, scope)) return t;
    ++sites_;
    const std::string &fresh = mapping_.at(t.name());
    if (t.kind() == TermKind::kFunction) {
      std::vector<Term> args;
      for (const Term &a : t.args()) args.push_back(RenameTerm(a, scope));
      return Term::Function(fresh, std::move(args));
    }
    return Term::Constant(fresh);
  }

  std::set<std::string> bound_names_;
  std::map<std::string, std::string> mapping_;
  int next_ = 0;
  int sites_ = 0;
  bool overflowed_ = false;
};

}  // namespace

std::string_view PerturbationName(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kOpQuantifier: return "op-quantifier";
    case PerturbationKind::kOpNegation: return "op-negation";
    case PerturbationKind::kOpAndOr: return "op-andor";
    case PerturbationKind::kTextMinusOperator: return "t-operator";
    case PerturbationKind::kTextMinusVariable: return "t-variable";
  }
  return "";
}

std::optional<PerturbationKind> PerturbationFromName(std::string_view name) {
  for (PerturbationKind kind : kAllPerturbations) {
    if (PerturbationName(kind) == name) return kind;
  }
  return std::nullopt;
}

PerturbationOutcome PerturbQuantifier(const Formula &f) {
  constexpr auto kind = PerturbationKind::kOpQuantifier;
  if (!HasKind(f, FormulaKind::kForAll, FormulaKind::kExists)) {
    return NotApplied(kind);
  }
  int sites = 0;
  Formula result =
      SwapKinds(f, FormulaKind::kForAll, FormulaKind::kExists, &sites);
  return Applied(kind, std::move(result), sites);
}

PerturbationOutcome PerturbNegation(const Formula &f) {
  constexpr auto kind = PerturbationKind::kOpNegation;
  if (CountAtoms(f) == 0) return NotApplied(kind);
  int sites = 0;
  Formula result = ToggleAtomNegation(f, &sites);
  return Applied(kind, std::move(result), sites);
}

PerturbationOutcome PerturbAndOr(const Formula &f) {
  constexpr auto kind = PerturbationKind::kOpAndOr;
  if (!HasKind(f, FormulaKind::kAnd, FormulaKind::kOr)) return NotApplied(kind);
  int sites = 0;
  Formula result = SwapKinds(f, FormulaKind::kAnd, FormulaKind::kOr, &sites);
  return Applied(kind, std::move(result), sites);
}

PerturbationOutcome PerturbTextMinusOperator(const Formula &f) {
  constexpr auto kind = PerturbationKind::kTextMinusOperator;
  OperatorProfile profile = Profile(f);
  auto eq = profile.counts.find(FormulaKind::kEquals);
  int removed = profile.total - (eq == profile.counts.end() ? 0 : eq->second);
  if (removed == 0) return NotApplied(kind);
  std::vector<Formula> leaves;
  CollectLeaves(f, &leaves);
  Formula result = leaves.front();
  for (std::size_t i = 1; i < leaves.size(); ++i) {
    result = Formula::Or(std::move(result), leaves[i]);
  }
  return Applied(kind, std::move(result), removed);
}

PerturbationOutcome PerturbTextMinusVariable(const Formula &f) {
  constexpr auto kind = PerturbationKind::kTextMinusVariable;
  Renamer renamer(f);
  if (renamer.empty()) return NotApplied(kind);
  Formula result = renamer.Apply(f);
  PerturbationOutcome out = Applied(kind, std::move(result), renamer.sites());
  if (renamer.overflowed()) out.warnings.push_back("NameOverflow");
  return out;
}

PerturbationOutcome ApplyPerturbation(PerturbationKind kind, const Formula &f) {
  switch (kind) {
    case PerturbationKind::kOpQuantifier: return PerturbQuantifier(f);
    case PerturbationKind::kOpNegation: return PerturbNegation(f);
    case PerturbationKind::kOpAndOr: return PerturbAndOr(f);
    case PerturbationKind::kTextMinusOperator:
      return PerturbTextMinusOperator(f);
    case PerturbationKind::kTextMinusVariable:
      return PerturbTextMinusVariable(f);
  }
  return NotApplied(kind);
}

std::map<PerturbationKind, double> ApplicabilityReport(
    std::span<const Formula> corpus) {
  if (corpus.empty()) throw EmptyCorpusError();
  std::map<PerturbationKind, double> report;
  for (PerturbationKind kind : kAllPerturbations) {
    std::size_t applied = 0;
    for (const Formula &f : corpus) {
      if (ApplyPerturbation(kind, f).applied) ++applied;
    }
    double pct = 100.0 * static_cast<double>(applied) /
                 static_cast<double>(corpus.size());
    report[kind] = std::round(pct * 100.0) / 100.0;
  }
  return report;
}

}  // namespace foleval
