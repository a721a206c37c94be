#include "foleval/logic_equivalence.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "foleval/parser.h"

namespace foleval {

namespace {

bool OccursFree(const Term &t, const std::string &var) {
  if (t.kind() == TermKind::kVariable && t.name() == var) return true;
  return std::any_of(t.args().begin(), t.args().end(),
                     [&](const Term &a) { return OccursFree(a, var); });
}

bool OccursFree(const Formula &f, const std::string &var) {
  if (IsQuantifier(f.kind()) && f.name() == var) return false;
  for (const Term &t : f.terms()) {
    if (OccursFree(t, var)) return true;
  }
  return std::any_of(f.children().begin(), f.children().end(),
                     [&](const Formula &c) { return OccursFree(c, var); });
}

void CollectPredicates(const Formula &f, std::vector<PredicateSymbol> *out) {
  if (f.kind() == FormulaKind::kAtom) {
    PredicateSymbol sym{f.name(), static_cast<int>(f.terms().size())};
    if (std::find(out->begin(), out->end(), sym) == out->end()) {
      out->push_back(sym);
    }
  }
  for (const Formula &c : f.children()) CollectPredicates(c, out);
}

// ---------------------------------------------------------------------------
// Grounded evaluation.

struct CompiledTerm {
  enum Kind { kSlot, kConstant, kFunction } kind;
  int index;  // variable slot, constant index or function index
  std::vector<CompiledTerm> args;
};

struct CompiledFormula {
  FormulaKind kind;
  int index = 0;  // predicate index for atoms, variable slot for quantifiers
  std::vector<CompiledFormula> children;
  std::vector<CompiledTerm> terms;
};

struct SymbolTable {
  std::map<PredicateSymbol, int> predicates;
  std::vector<int> predicate_arity;
  std::map<std::string, int> constants;
  std::map<PredicateSymbol, int> functions;
  std::vector<int> function_arity;
};

class Compiler {
 public:
  explicit Compiler(SymbolTable *symbols) : symbols_(symbols) {}

  CompiledFormula Compile(const Formula &f,
                          const std::map<PredicateSymbol, PredicateSymbol>
                              &rename) {
    rename_ = &rename;
    scope_.clear();
    return CompileNode(f);
  }

  int max_slots() const { return max_slots_; }

 private:
  CompiledFormula CompileNode(const Formula &f) {
    CompiledFormula out;
    out.kind = f.kind();
    switch (f.kind()) {
      case FormulaKind::kAtom: {
        PredicateSymbol sym{f.name(), static_cast<int>(f.terms().size())};
        auto it = rename_->find(sym);
        if (it != rename_->end()) sym = it->second;
        auto [pos, fresh] =
            symbols_->predicates.emplace(sym, symbols_->predicates.size());
        if (fresh) symbols_->predicate_arity.push_back(sym.second);
        out.index = pos->second;
        for (const Term &t : f.terms()) out.terms.push_back(CompileTerm(t));
        return out;
      }
      case FormulaKind::kEquals:
        for (const Term &t : f.terms()) out.terms.push_back(CompileTerm(t));
        return out;
      case FormulaKind::kForAll:
      case FormulaKind::kExists:
        out.index = static_cast<int>(scope_.size());
        scope_.push_back(f.name());
        max_slots_ = std::max(max_slots_, static_cast<int>(scope_.size()));
        out.children.push_back(CompileNode(f.body()));
        scope_.pop_back();
        return out;
      default:
        for (const Formula &c : f.children()) {
          out.children.push_back(CompileNode(c));
        }
        return out;
    }
  }

  CompiledTerm CompileTerm(const Term &t) {
    if (t.kind() == TermKind::kVariable) {
      for (int slot = static_cast<int>(scope_.size()) - 1; slot >= 0; --slot) {
        if (scope_[slot] == t.name()) return {CompiledTerm::kSlot, slot, {}};
      }
    }
    if (t.kind() == TermKind::kFunction) {
      PredicateSymbol sym{t.name(), static_cast<int>(t.args().size())};
      auto [pos, fresh] =
          symbols_->functions.emplace(sym, symbols_->functions.size());
      if (fresh) symbols_->function_arity.push_back(sym.second);
      CompiledTerm out{CompiledTerm::kFunction, pos->second, {}};
      for (const Term &a : t.args()) out.args.push_back(CompileTerm(a));
      return out;
    }
    // Constants and free variables share one namespace.
    auto [pos, fresh] =
        symbols_->constants.emplace(t.name(), symbols_->constants.size());
    return {CompiledTerm::kConstant, pos->second, {}};
  }

  SymbolTable *symbols_;
  const std::map<PredicateSymbol, PredicateSymbol> *rename_ = nullptr;
  std::vector<std::string> scope_;
  int max_slots_ = 0;
};

struct Interpretation {
  int domain = 1;
  std::vector<std::size_t> predicate_offset;
  std::vector<std::size_t> function_offset;
  std::vector<std::uint8_t> atoms;  // truth value per ground atom
  std::vector<int> constants;       // domain element per constant
  std::vector<int> functions;       // concatenated function tables
};

class Evaluator {
 public:
  Evaluator(const Interpretation &interp, int slots)
      : interp_(interp), env_(std::max(slots, 1), 0) {}

  bool Eval(const CompiledFormula &f) {
    switch (f.kind) {
      case FormulaKind::kAtom: {
        std::size_t index = 0, stride = 1;
        for (const CompiledTerm &t : f.terms) {
          index += stride * static_cast<std::size_t>(Value(t));
          stride *= static_cast<std::size_t>(interp_.domain);
        }
        return interp_.atoms[interp_.predicate_offset[f.index] + index] != 0;
      }
      case FormulaKind::kEquals:
        return Value(f.terms[0]) == Value(f.terms[1]);
      case FormulaKind::kNot:
        return !Eval(f.children[0]);
      case FormulaKind::kAnd:
        return Eval(f.children[0]) && Eval(f.children[1]);
      case FormulaKind::kOr:
        return Eval(f.children[0]) || Eval(f.children[1]);
      case FormulaKind::kImplies:
        return !Eval(f.children[0]) || Eval(f.children[1]);
      case FormulaKind::kIff:
        return Eval(f.children[0]) == Eval(f.children[1]);
      case FormulaKind::kXor:
        return Eval(f.children[0]) != Eval(f.children[1]);
      case FormulaKind::kForAll:
      case FormulaKind::kExists: {
        const bool universal = f.kind == FormulaKind::kForAll;
        const int saved = env_[f.index];
        bool result = universal;
        for (int e = 0; e < interp_.domain; ++e) {
          env_[f.index] = e;
          if (Eval(f.children[0]) != universal) {
            result = !universal;
            break;
          }
        }
        env_[f.index] = saved;
        return result;
      }
    }
    return false;
  }

 private:
  int Value(const CompiledTerm &t) {
    switch (t.kind) {
      case CompiledTerm::kSlot:
        return env_[t.index];
      case CompiledTerm::kConstant:
        return interp_.constants[t.index];
      case CompiledTerm::kFunction: {
        std::size_t index = 0, stride = 1;
        for (const CompiledTerm &a : t.args) {
          index += stride * static_cast<std::size_t>(Value(a));
          stride *= static_cast<std::size_t>(interp_.domain);
        }
        return interp_.functions[interp_.function_offset[t.index] + index];
      }
    }
    return 0;
  }

  const Interpretation &interp_;
  std::vector<int> env_;
};

std::size_t IntPow(std::size_t base, int exp, std::size_t cap) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > cap / std::max<std::size_t>(base, 1)) return cap + 1;
    out *= base;
  }
  return out;
}

}  // namespace

void LEConfig::Validate() const {
  if (domain_size < 1) throw std::invalid_argument("domain_size must be >= 1");
  if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
  if (exhaustive_atom_limit < 0 || exhaustive_atom_limit > 30) {
    throw std::invalid_argument("exhaustive_atom_limit must be in [0, 30]");
  }
  if (predicate_align_threshold < 0 || predicate_align_threshold > 1) {
    throw std::invalid_argument("predicate_align_threshold must be in [0, 1]");
  }
}

std::string_view SyntaxIssueName(SyntaxIssueKind kind) {
  switch (kind) {
    case SyntaxIssueKind::kLexError: return "LexError";
    case SyntaxIssueKind::kUnexpectedToken: return "UnexpectedToken";
    case SyntaxIssueKind::kUnexpectedEnd: return "UnexpectedEnd";
    case SyntaxIssueKind::kUnbalancedParens: return "UnbalancedParens";
    case SyntaxIssueKind::kDanglingQuantifier: return "DanglingQuantifier";
    case SyntaxIssueKind::kUnusedQuantifiedVariable:
      return "UnusedQuantifiedVariable";
  }
  return "";
}

std::optional<std::string> FindUnusedQuantifiedVariable(const Formula &f) {
  if (IsQuantifier(f.kind()) && !OccursFree(f.body(), f.name())) {
    return f.name();
  }
  for (const Formula &c : f.children()) {
    if (auto var = FindUnusedQuantifiedVariable(c)) return var;
  }
  return std::nullopt;
}

SyntaxReport SyntaxCheck(std::string_view text) {
  SyntaxReport report;
  try {
    report.formula = ParseFormula(text);
  } catch (const LexError &e) {
    report.error = SyntaxIssue{SyntaxIssueKind::kLexError, e.what(), e.span()};
    return report;
  } catch (const ParseError &e) {
    SyntaxIssueKind kind = SyntaxIssueKind::kUnexpectedToken;
    switch (e.kind()) {
      case ParseError::Kind::kUnexpectedToken:
        kind = SyntaxIssueKind::kUnexpectedToken;
        break;
      case ParseError::Kind::kUnexpectedEnd:
        kind = SyntaxIssueKind::kUnexpectedEnd;
        break;
      case ParseError::Kind::kUnbalancedParens:
        kind = SyntaxIssueKind::kUnbalancedParens;
        break;
      case ParseError::Kind::kDanglingQuantifier:
        kind = SyntaxIssueKind::kDanglingQuantifier;
        break;
    }
    report.error = SyntaxIssue{kind, e.what(), e.span()};
    return report;
  }
  if (auto var = FindUnusedQuantifiedVariable(*report.formula)) {
    report.error =
        SyntaxIssue{SyntaxIssueKind::kUnusedQuantifiedVariable,
                    "quantified variable '" + *var + "' is not used", {}};
    return report;
  }
  report.valid = true;
  return report;
}

double NormalizedLevenshteinSimilarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  const double dist = static_cast<double>(row[b.size()]);
  return 1.0 - dist / static_cast<double>(std::max(a.size(), b.size()));
}

std::map<PredicateSymbol, PredicateSymbol> AlignPredicates(
    const Formula &gold, const Formula &cand, double threshold) {
  std::vector<PredicateSymbol> gold_syms, cand_syms;
  CollectPredicates(gold, &gold_syms);
  CollectPredicates(cand, &cand_syms);

  struct Pair {
    double sim;
    std::size_t g, c;
  };
  std::vector<Pair> pairs;
  for (std::size_t g = 0; g < gold_syms.size(); ++g) {
    for (std::size_t c = 0; c < cand_syms.size(); ++c) {
      if (gold_syms[g].second != cand_syms[c].second) continue;
      double sim =
          NormalizedLevenshteinSimilarity(gold_syms[g].first, cand_syms[c].first);
      if (sim >= threshold) pairs.push_back({sim, g, c});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair &x, const Pair &y) {
    return std::tie(y.sim, x.g, x.c) < std::tie(x.sim, y.g, y.c);
  });

  std::map<PredicateSymbol, PredicateSymbol> mapping;
  std::vector<bool> gold_used(gold_syms.size()), cand_used(cand_syms.size());
  for (const Pair &p : pairs) {
    if (gold_used[p.g] || cand_used[p.c]) continue;
    gold_used[p.g] = cand_used[p.c] = true;
    mapping[cand_syms[p.c]] = gold_syms[p.g];
  }
  // Unaligned candidate symbols must not collide with a gold symbol.
  for (std::size_t c = 0; c < cand_syms.size(); ++c) {
    if (cand_used[c]) continue;
    mapping[cand_syms[c]] = {"\x01" + cand_syms[c].first, cand_syms[c].second};
  }
  return mapping;
}

LEResult LogicalEquivalence(const Formula &gold, const Formula &cand,
                            const LEConfig &cfg) {
  cfg.Validate();
  SymbolTable symbols;
  Compiler compiler(&symbols);
  const std::map<PredicateSymbol, PredicateSymbol> identity;
  CompiledFormula g = compiler.Compile(gold, identity);
  int slots = compiler.max_slots();
  CompiledFormula c = compiler.Compile(
      cand, AlignPredicates(gold, cand, cfg.predicate_align_threshold));
  slots = std::max(slots, compiler.max_slots());

  constexpr std::size_t kMaxGroundAtoms = std::size_t{1} << 24;
  const std::size_t d = static_cast<std::size_t>(cfg.domain_size);
  Interpretation interp;
  interp.domain = cfg.domain_size;
  std::size_t atom_count = 0;
  for (int arity : symbols.predicate_arity) {
    interp.predicate_offset.push_back(atom_count);
    atom_count += IntPow(d, arity, kMaxGroundAtoms);
    if (atom_count > kMaxGroundAtoms) {
      throw GroundingOverflowError("GroundingOverflow: too many ground atoms");
    }
  }
  std::size_t function_cells = 0;
  for (int arity : symbols.function_arity) {
    interp.function_offset.push_back(function_cells);
    function_cells += IntPow(d, arity, kMaxGroundAtoms);
    if (function_cells > kMaxGroundAtoms) {
      throw GroundingOverflowError("GroundingOverflow: function tables too big");
    }
  }
  interp.atoms.assign(atom_count, 0);
  interp.constants.assign(symbols.constants.size(), 0);
  interp.functions.assign(function_cells, 0);

  LEResult result;
  result.ground_atoms = static_cast<int>(atom_count);

  // Interpretation space in bits: one per ground atom plus log2(d) per
  // constant. Function tables always force sampling.
  const double bits = static_cast<double>(atom_count) +
                      static_cast<double>(symbols.constants.size()) *
                          std::log2(static_cast<double>(d));
  const bool exhaustive = symbols.functions.empty() &&
                          bits <= cfg.exhaustive_atom_limit + 1e-9;

  Evaluator eval(interp, slots);
  std::uint64_t agree = 0, total = 0;
  if (exhaustive) {
    const std::uint64_t atom_masks = std::uint64_t{1} << atom_count;
    const std::size_t assignments =
        IntPow(d, static_cast<int>(symbols.constants.size()), SIZE_MAX / 2);
    for (std::size_t a = 0; a < assignments; ++a) {
      std::size_t rest = a;
      for (int &value : interp.constants) {
        value = static_cast<int>(rest % d);
        rest /= d;
      }
      for (std::uint64_t mask = 0; mask < atom_masks; ++mask) {
        for (std::size_t k = 0; k < atom_count; ++k) {
          interp.atoms[k] = static_cast<std::uint8_t>((mask >> k) & 1);
        }
        agree += eval.Eval(g) == eval.Eval(c) ? 1 : 0;
        ++total;
      }
    }
  } else {
    std::mt19937_64 rng(cfg.seed);
    for (int s = 0; s < cfg.sample_count; ++s) {
      for (std::size_t k = 0; k < atom_count; k += 64) {
        std::uint64_t word = rng();
        for (std::size_t b = 0; b < 64 && k + b < atom_count; ++b) {
          interp.atoms[k + b] = static_cast<std::uint8_t>((word >> b) & 1);
        }
      }
      for (int &value : interp.constants) value = static_cast<int>(rng() % d);
      for (int &value : interp.functions) value = static_cast<int>(rng() % d);
      agree += eval.Eval(g) == eval.Eval(c) ? 1 : 0;
      ++total;
    }
  }
  result.exhaustive = exhaustive;
  result.interpretations = total;
  result.score = static_cast<double>(agree) / static_cast<double>(total);
  return result;
}

}  // namespace foleval
