#ifndef FOLEVAL_RANKING_H_
#define FOLEVAL_RANKING_H_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "foleval/scoring.h"

namespace foleval {

inline constexpr double kTieTolerance = 1e-6;

struct RankVector {
  std::string record_id;
  std::string ranker;
  // One rank per sample. Empty means the ranker gave no answer for this
  // record (for instance an unparseable judge reply).
  std::vector<int> ranks;
};

// Higher score, better (lower) rank. Scores are sorted in decreasing order and
// each one within the tolerance of its predecessor joins its group; a group
// takes the rank of its first position, so [0.9, 0.9, 0.2] gives [1, 1, 3].
std::vector<int> Rank(std::span<const double> scores,
                      double tolerance = kTieTolerance);

// Ranks the normalized scores of one metric id, one vector per record, in
// order of first appearance.
std::vector<RankVector> RankScores(const std::vector<ScoreRecord> &scores,
                                   const std::string &metric);

class CoverageMismatch : public std::invalid_argument {
 public:
  explicit CoverageMismatch(const std::string &what)
      : std::invalid_argument("CoverageMismatch: " + what) {}
};

class LengthMismatch : public std::invalid_argument {
 public:
  explicit LengthMismatch(const std::string &what)
      : std::invalid_argument("LengthMismatch: " + what) {}
};

struct AlignmentReport {
  std::string ranker_a;
  std::string ranker_b;
  double rmse = 0.0;
  int n_pairs = 0;
  // Records left out because one side has no ranks.
  int excluded = 0;
};

// Pooled RMSE over every (record, sample) rank pair. Both sides must cover
// the same record ids with equal sample counts; records where either side is
// empty are excluded and counted.
AlignmentReport RmseAlignment(const std::vector<RankVector> &a,
                              const std::vector<RankVector> &b);

// Root mean square difference of two equally long rank lists.
double Rmse(std::span<const int> a, std::span<const int> b);

// Mean absolute difference. Throws LengthMismatch on unequal or empty input.
double Disagreement(std::span<const double> a, std::span<const double> b);

}  // namespace foleval

#endif  // FOLEVAL_RANKING_H_
