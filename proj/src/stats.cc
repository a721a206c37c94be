#include "foleval/stats.h"

#include <algorithm>
#include <cmath>

#include "foleval/parser.h"

namespace foleval {

CorpusStats ComputeCorpusStats(const std::vector<Record> &corpus) {
  if (corpus.empty()) throw EmptyCorpusError();
  CorpusStats stats;
  stats.records = static_cast<int>(corpus.size());
  for (int k = 0; k <= kHistogramCap; ++k) stats.operator_histogram[k] = 0;
  std::vector<Formula> parsed;
  for (const Record &r : corpus) {
    try {
      parsed.push_back(ParseFormula(r.gold));
    } catch (const SyntaxError &) {
      ++stats.parse_failures;
      continue;
    }
    ++stats.operator_histogram[std::min(Profile(parsed.back()).total, kHistogramCap)];
  }
  // Golds that do not parse count as not perturbed.
  for (PerturbationKind kind : kAllPerturbations) {
    int applied = 0;
    for (const Formula &f : parsed) applied += ApplyPerturbation(kind, f).applied;
    stats.applicability[kind] =
        std::round(10000.0 * applied / stats.records) / 100.0;
  }
  return stats;
}

}  // namespace foleval
