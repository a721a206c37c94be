// Acceptance report: one PASS/FAIL line per criterion, plus a detail report.
//
//   acceptance [--strict] [--report PATH]
//
// Exits 0 in report mode; --strict exits 1 when any criterion fails.
// FOLEVAL_FOLIO_PATH (and optionally FOLEVAL_FOLIO_FORMAT) enables the
// dataset check; it is skipped otherwise.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "foleval/corpus.h"
#include "foleval/embedding.h"
#include "foleval/lexer.h"
#include "foleval/logic_equivalence.h"
#include "foleval/parser.h"
#include "foleval/perturb.h"
#include "foleval/printer.h"
#include "foleval/ranking.h"
#include "foleval/scoring.h"
#include "foleval/stats.h"
#include "foleval/triple_graph.h"
#include "formula_gen.h"
#include "le_oracle.h"

namespace foleval {
namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Check {
  std::string name;
  Verdict verdict = Verdict::kFail;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::vector<Record> Fixture() {
  return LoadCorpus(std::string(FOLEVAL_TEST_DATA) + "/fixture_corpus.jsonl",
                    CorpusFormat::kRecords)
      .records;
}

Check ParserRoundTrip() {
  Check c{"parser round trip (1000 random formulas, < 5 s)"};
  testing::FormulaGenerator gen(2024);
  const auto start = Clock::now();
  int ok = 0;
  std::string first_bad;
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.Next();
    const std::string text = Print(f);
    bool same = false;
    try {
      same = Parse(Tokenize(text)) == f;
    } catch (const std::exception &) {
    }
    ok += same;
    if (!same && first_bad.empty()) first_bad = text;
  }
  const double secs = Seconds(start);
  c.verdict = ok == 1000 && secs < 5 ? Verdict::kPass : Verdict::kFail;
  c.detail = std::to_string(ok) + "/1000 round-tripped in " + Fixed(secs, 3) + " s";
  if (!first_bad.empty()) c.detail += "; first failure: " + first_bad;
  return c;
}

Check PerturbationFidelity() {
  Check c{"perturbation worked examples reproduce byte-for-byte"};
  struct Case {
    PerturbationKind kind;
    std::string in, want;
  };
  const std::vector<Case> cases = {
      {PerturbationKind::kOpQuantifier, "∀x (W(x, C) → A(x, C))", "∃x (W(x, C) → A(x, C))"},
      {PerturbationKind::kOpNegation, "∀x (¬W(x, C) → A(x, C))", "∀x (W(x, C) → ¬A(x, C))"},
      {PerturbationKind::kTextMinusOperator, "∀x (¬W(x, C) → A(x, C))", "W(x, C) ∨ A(x, C)"},
      {PerturbationKind::kTextMinusVariable,
       "∀x (¬WantToBeAddictedTo(x, caffeine) → AwareThatDrug(x, caffeine))",
       "∀x (¬A(x, C) → B(x, C))"},
  };
  int ok = 0;
  for (const Case &k : cases) {
    PerturbationOutcome o = ApplyPerturbation(k.kind, ParseFormula(k.in));
    const std::string got = o.applied ? Print(*o.result) : "<not applied>";
    if (got == k.want) {
      ++ok;
    } else {
      c.detail += std::string(PerturbationName(k.kind)) + " gave " + got + "; ";
    }
  }
  c.verdict = ok == static_cast<int>(cases.size()) ? Verdict::kPass : Verdict::kFail;
  c.detail += std::to_string(ok) + "/" + std::to_string(cases.size()) + " exact";
  return c;
}

Check SelfMatch() {
  Check c{"self-match: normalized (gold, gold) == 1.0 for every metric"};
  std::vector<Record> corpus = Fixture();
  for (Record &r : corpus) r.samples = {r.gold};
  FallbackEmbedder embedder;
  ScoringConfig cfg;
  cfg.provider = &embedder;
  const std::vector<Metric> metrics(std::begin(kAllMetrics), std::end(kAllMetrics));
  std::vector<ScoreRecord> scores = ScoreCorpus(corpus, metrics, cfg);
  int bad = 0;
  for (const ScoreRecord &s : scores) {
    if (s.normalized != 1.0) {
      if (bad == 0) c.detail += "first miss " + s.record_id + " " + s.metric + "; ";
      ++bad;
    }
  }
  const bool complete = scores.size() == corpus.size() * metrics.size();
  c.verdict = bad == 0 && complete ? Verdict::kPass : Verdict::kFail;
  c.detail += std::to_string(scores.size() - bad) + "/" + std::to_string(scores.size()) +
              " scores exactly 1.0 over " + std::to_string(corpus.size()) + " golds";
  return c;
}

Check LeOracle() {
  Check c{"LE equals exhaustive enumerator (200 pairs, <= 10 ground atoms, d=2)"};
  testing::GenOptions options;
  options.max_depth = 4;
  options.predicates = {{"P", 1}, {"Q", 1}, {"R", 2}, {"S", 0}};
  options.constants = {"ann", "C"};
  options.functions.clear();
  options.free_names.clear();
  options.bound_names = {"x", "y"};
  options.use_bound_variables = true;
  testing::FormulaGenerator gen(2024, options);
  LEConfig cfg;
  cfg.domain_size = 2;
  int compared = 0, equal = 0;
  for (int i = 0; compared < 200 && i < 5000; ++i) {
    Formula a = gen.Next(), b = gen.Next();
    if (FindUnusedQuantifiedVariable(a) || FindUnusedQuantifiedVariable(b)) continue;
    testing::Enumerator oracle(a, b, 2);
    if (oracle.Bits() > 10) continue;
    ++compared;
    LEResult r = LogicalEquivalence(a, b, cfg);
    equal += r.exhaustive && r.score == oracle.Agreement(a, b);
  }
  const std::vector<std::pair<std::string, std::string>> equivalences = {
      {"¬(P ∧ Q)", "¬P ∨ ¬Q"},
      {"¬(P ∨ Q)", "¬P ∧ ¬Q"},
      {"P → Q", "¬Q → ¬P"},
      {"∀x (P(x) → Q(x))", "∀x (¬Q(x) → ¬P(x))"},
      {"P(ann) ∧ Q(bob)", "Q(bob) ∧ P(ann)"},
      {"P ∨ Q", "Q ∨ P"},
      {"P ↔ Q", "Q ↔ P"},
  };
  int ones = 0;
  for (const auto &[a, b] : equivalences) {
    ones += LeScore(ParseFormula(a), ParseFormula(b)) == 1.0;
  }
  c.verdict = compared == 200 && equal == 200 &&
                      ones == static_cast<int>(equivalences.size())
                  ? Verdict::kPass
                  : Verdict::kFail;
  c.detail = std::to_string(equal) + "/" + std::to_string(compared) +
             " exact oracle matches; " + std::to_string(ones) + "/" +
             std::to_string(equivalences.size()) + " equivalences score 1.0";
  return c;
}

Check SmatchOracle() {
  Check c{"Smatch hill-climbing f1 (4 restarts) equals exhaustive (100 pairs, <= 8 nodes)"};
  testing::GenOptions options;
  options.max_depth = 3;
  options.predicates = {{"P", 1}, {"Q", 1}, {"R", 2}};
  options.constants = {"ann", "C"};
  options.bound_names = {"x", "y"};
  testing::FormulaGenerator gen(2024, options);
  SmatchOptions climb;
  climb.mode = SmatchOptions::Mode::kHillClimb;
  climb.restarts = 4;
  SmatchOptions exact;
  exact.mode = SmatchOptions::Mode::kExhaustive;
  int compared = 0, equal = 0;
  while (compared < 100) {
    TripleGraph a = FolToTriples(gen.Next()), b = FolToTriples(gen.Next());
    if (a.mappable_count() > 8 || b.mappable_count() > 8) continue;
    ++compared;
    equal += SmatchScore(a, b, climb).f1 == SmatchScore(a, b, exact).f1;
  }
  c.verdict = equal == 100 ? Verdict::kPass : Verdict::kFail;
  c.detail = std::to_string(equal) + "/100 equal";
  return c;
}

// Mean normalized score per metric for one perturbation over the fixture.
std::map<Metric, double> SensitivityRow(PerturbationKind kind, int *applied) {
  std::vector<Record> corpus;
  for (Record r : Fixture()) {
    PerturbationOutcome o = ApplyPerturbation(kind, ParseFormula(r.gold));
    if (!o.applied) continue;
    r.samples = {Print(*o.result)};
    corpus.push_back(std::move(r));
  }
  *applied = static_cast<int>(corpus.size());
  FallbackEmbedder embedder;
  ScoringConfig cfg;
  cfg.provider = &embedder;
  const std::vector<Metric> metrics(std::begin(kAllMetrics), std::end(kAllMetrics));
  std::map<std::string, double> sum;
  for (const ScoreRecord &s : ScoreCorpus(corpus, metrics, cfg)) sum[s.metric] += s.normalized;
  std::map<Metric, double> row;
  for (Metric m : metrics) row[m] = sum[std::string(MetricCode(m))] / corpus.size();
  return row;
}

std::string RowText(const std::map<Metric, double> &row) {
  std::string out;
  for (const auto &[m, v] : row) out += std::string(MetricCode(m)) + "=" + Fixed(v, 3) + " ";
  return out;
}

bool StrictMinimum(const std::map<Metric, double> &row, Metric m) {
  for (const auto &[other, v] : row) {
    if (other != m && !(row.at(m) < v)) return false;
  }
  return true;
}

std::vector<Check> Directional(std::ostream &report) {
  report << "\nsensitivity table (mean normalized score, fallback embeddings)\n";
  std::map<PerturbationKind, std::map<Metric, double>> rows;
  for (PerturbationKind kind : kAllPerturbations) {
    int applied = 0;
    rows[kind] = SensitivityRow(kind, &applied);
    report << "  " << std::left << std::setw(14) << PerturbationName(kind) << " n=" << applied
           << "  " << RowText(rows[kind]) << "\n";
  }
  auto check = [&](const std::string &name, std::vector<PerturbationKind> kinds, Metric m) {
    Check c{name};
    bool ok = true;
    for (PerturbationKind k : kinds) {
      ok = ok && StrictMinimum(rows[k], m);
      c.detail += std::string(PerturbationName(k)) + ": " + RowText(rows[k]);
    }
    c.verdict = ok ? Verdict::kPass : Verdict::kFail;
    return c;
  };
  return {
      check("directional (a): BLEU is the minimum under t-operator and t-variable",
            {PerturbationKind::kTextMinusOperator, PerturbationKind::kTextMinusVariable},
            Metric::kBleu),
      check("directional (b): Smatch is the minimum under op-negation",
            {PerturbationKind::kOpNegation}, Metric::kSmatch),
      check("directional (c): LE is the minimum under op-andor", {PerturbationKind::kOpAndOr},
            Metric::kLe),
  };
}

Check TieAndRmse() {
  Check c{"tie rule and RMSE fixtures"};
  const std::vector<double> scores = {0.9, 0.9, 0.2};
  const std::vector<int> ranks = Rank(scores);
  const std::vector<int> a = {1, 2, 3}, b = {3, 2, 1};
  const double r = Rmse(a, b);
  const double self = Rmse(a, a);
  const bool ok = ranks == std::vector<int>{1, 1, 3} && std::abs(r - std::sqrt(8.0 / 3)) <= 1e-9 &&
                  self == 0.0;
  c.verdict = ok ? Verdict::kPass : Verdict::kFail;
  c.detail = "ranks [" + std::to_string(ranks[0]) + "," + std::to_string(ranks[1]) + "," +
             std::to_string(ranks[2]) + "], rmse " + Fixed(r, 12) + ", rmse(A,A) " +
             Fixed(self, 1);
  return c;
}

Check DisagreementFormula() {
  Check c{"disagreement equals mean absolute difference (50 random lists)"};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> length(1, 12);
  int equal = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = length(rng);
    std::vector<double> x(n), y(n);
    for (int k = 0; k < n; ++k) {
      x[k] = unit(rng);
      y[k] = unit(rng);
    }
    double sum = 0;
    for (int k = 0; k < n; ++k) sum += std::abs(x[k] - y[k]);
    equal += Disagreement(x, y) == sum / n;
  }
  c.verdict = equal == 50 ? Verdict::kPass : Verdict::kFail;
  c.detail = std::to_string(equal) + "/50 exact";
  return c;
}

Check Dataset() {
  Check c{"dataset: decomposed FOLIO train (1689 records, applicability)"};
  const char *path = std::getenv("FOLEVAL_FOLIO_PATH");
  if (path == nullptr || *path == '\0') {
    c.verdict = Verdict::kSkip;
    c.detail = "FOLEVAL_FOLIO_PATH not set";
    return c;
  }
  const char *format = std::getenv("FOLEVAL_FOLIO_FORMAT");
  const auto start = Clock::now();
  LoadResult loaded = LoadCorpus(path, CorpusFormatFromName(format ? format : "flat-fol"));
  CorpusStats stats = ComputeCorpusStats(loaded.records);
  const double secs = Seconds(start);
  const double quant = stats.applicability[PerturbationKind::kOpQuantifier];
  const double andor = stats.applicability[PerturbationKind::kOpAndOr];
  const bool ok = stats.records == 1689 && std::abs(quant - 61.40) <= 0.5 &&
                  std::abs(andor - 54.29) <= 0.5 && secs < 60;
  c.verdict = ok ? Verdict::kPass : Verdict::kFail;
  c.detail = std::to_string(stats.records) + " records (" +
             std::to_string(stats.parse_failures) + " unparsed), op-quantifier " +
             Fixed(quant, 2) + ", op-andor " + Fixed(andor, 2) + ", " + Fixed(secs, 2) + " s";
  return c;
}

const char *VerdictText(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kSkip: return "SKIP";
  }
  return "";
}

int Main(int argc, char **argv) {
  bool strict = false;
  std::string report_path = "acceptance_report.txt";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--strict") {
      strict = true;
    } else if (arg == "--report" && i + 1 < argc) {
      report_path = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--strict] [--report PATH]\n";
      return 2;
    }
  }

  std::ostringstream report;
  std::vector<std::function<Check()>> simple = {ParserRoundTrip, PerturbationFidelity,
                                                SelfMatch,       LeOracle,
                                                SmatchOracle};
  std::vector<Check> checks;
  auto run = [&](const std::function<Check()> &fn, const std::string &name) {
    try {
      checks.push_back(fn());
    } catch (const std::exception &e) {
      checks.push_back({name, Verdict::kFail, std::string("threw: ") + e.what()});
    }
  };
  for (const auto &fn : simple) run(fn, "check");
  try {
    for (Check &c : Directional(report)) checks.push_back(std::move(c));
  } catch (const std::exception &e) {
    checks.push_back({"directional", Verdict::kFail, std::string("threw: ") + e.what()});
  }
  run(TieAndRmse, "tie rule and RMSE fixtures");
  run(DisagreementFormula, "disagreement");
  run(Dataset, "dataset");

  int failed = 0;
  std::ostringstream lines;
  for (const Check &c : checks) {
    failed += c.verdict == Verdict::kFail;
    lines << VerdictText(c.verdict) << "  " << c.name << "\n";
  }
  std::cout << lines.str();
  std::cout << failed << " failed of " << checks.size() << "\n";

  std::ofstream out(report_path);
  out << lines.str() << "\ndetails\n";
  for (const Check &c : checks) out << "  " << c.name << ": " << c.detail << "\n";
  out << report.str();
  std::cout << "report: " << report_path << "\n";
  return strict && failed > 0 ? 1 : 0;
}

}  // namespace
}  // namespace foleval

int main(int argc, char **argv) { return foleval::Main(argc, argv); }
