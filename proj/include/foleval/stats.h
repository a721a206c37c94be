#ifndef FOLEVAL_STATS_H_
#define FOLEVAL_STATS_H_

#include <map>
#include <vector>

#include "foleval/corpus.h"
#include "foleval/perturb.h"

namespace foleval {

inline constexpr int kHistogramCap = 7;  // last bucket holds 7 or more

struct CorpusStats {
  int records = 0;
  int parse_failures = 0;
  // Operator count -> number of parsed golds; every bucket 0..7 is present.
  std::map<int, int> operator_histogram;
  // Percent of all records, two decimals.
  std::map<PerturbationKind, double> applicability;
};

// Throws EmptyCorpusError on an empty corpus.
CorpusStats ComputeCorpusStats(const std::vector<Record> &corpus);

}  // namespace foleval

#endif  // FOLEVAL_STATS_H_
