#ifndef FOLEVAL_PERTURB_H_
#define FOLEVAL_PERTURB_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "foleval/formula.h"

namespace foleval {

enum class PerturbationKind {
  kOpQuantifier,
  kOpNegation,
  kOpAndOr,
  kTextMinusOperator,
  kTextMinusVariable,
};

inline constexpr std::array<PerturbationKind, 5> kAllPerturbations = {
    PerturbationKind::kOpQuantifier, PerturbationKind::kOpNegation,
    PerturbationKind::kOpAndOr, PerturbationKind::kTextMinusOperator,
    PerturbationKind::kTextMinusVariable,
};

// "op-quantifier", "op-negation", "op-andor", "t-operator", "t-variable".
std::string_view PerturbationName(PerturbationKind kind);
std::optional<PerturbationKind> PerturbationFromName(std::string_view name);

struct PerturbationOutcome {
  PerturbationKind kind;
  bool applied = false;
  std::optional<Formula> result;  // set iff applied
  int sites = 0;                  // modified nodes
  // Non-fatal conditions, e.g. "NameOverflow" when more than 26 fresh names
  // were needed.
  std::vector<std::string> warnings;
};

// ∀ <-> ∃ at every quantifier.
PerturbationOutcome PerturbQuantifier(const Formula &f);

// Removes the ¬ directly above each atom, or inserts one where there is none.
// ¬ over compound subformulas is left alone.
PerturbationOutcome PerturbNegation(const Formula &f);

// ∧ <-> ∨ at every conjunction and disjunction.
PerturbationOutcome PerturbAndOr(const Formula &f);

// Drops every operator and joins the atoms, in left-to-right order and with
// negations stripped, by ∨. Equalities are kept as leaves.
PerturbationOutcome PerturbTextMinusOperator(const Formula &f);

// Renames predicates to A, B, C, ... in first-occurrence order, then
// constants, function symbols and free variables continuing the same
// sequence. Quantifier-bound variables keep their names.
PerturbationOutcome PerturbTextMinusVariable(const Formula &f);

PerturbationOutcome ApplyPerturbation(PerturbationKind kind, const Formula &f);

class EmptyCorpusError : public std::invalid_argument {
 public:
  EmptyCorpusError() : std::invalid_argument("EmptyCorpus: corpus is empty") {}
};

// Percentage of formulas each perturbation applies to, rounded to two
// decimals. Throws EmptyCorpusError.
std::map<PerturbationKind, double> ApplicabilityReport(
    std::span<const Formula> corpus);

}  // namespace foleval

#endif  // FOLEVAL_PERTURB_H_
