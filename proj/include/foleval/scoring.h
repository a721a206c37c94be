#ifndef FOLEVAL_SCORING_H_
#define FOLEVAL_SCORING_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "foleval/corpus.h"
#include "foleval/embedding.h"
#include "foleval/logic_equivalence.h"
#include "foleval/text_metrics.h"
#include "foleval/triple_graph.h"

namespace foleval {

enum class Metric { kBleu, kRouge, kMeteor, kLe, kBertScore, kSmatch };

inline constexpr Metric kAllMetrics[] = {Metric::kBleu,   Metric::kRouge,
                                         Metric::kMeteor, Metric::kLe,
                                         Metric::kBertScore, Metric::kSmatch};

// Two-letter code used in metric ids: BL RO ME LE BS SP.
std::string_view MetricCode(Metric m);
// Long name: bleu rouge meteor le bertscore smatchpp.
std::string_view MetricName(Metric m);
// Accepts long names and two-letter codes, case-insensitively.
std::optional<Metric> MetricFromName(std::string_view name);

// Id of the mean of two metrics: both codes in alphabetical order, e.g.
// "BS-LE".
std::string PairId(Metric a, Metric b);

enum class Normalization {
  // Each raw score is divided by metric(gold, gold) for its own record.
  kPerRecord,
  // Each raw score is divided by the corpus mean of metric(gold, gold).
  kCorpusMean,
};

struct ScoringConfig {
  TextMetricConfig text;
  LEConfig le;
  SmatchOptions smatch;
  Normalization normalization = Normalization::kPerRecord;
  int workers = 1;
  // Required when BERTScore is requested. Not owned.
  EmbeddingProvider *provider = nullptr;
};

struct ScoreRecord {
  std::string record_id;
  std::string metric;  // metric code or pair id
  int sample_index = 0;
  double raw = 0.0;
  double normalized = 0.0;
  std::vector<std::string> flags;
};

struct RawScore {
  double value = 0.0;
  std::vector<std::string> flags;
};

// Per-gold data shared by all samples of one record.
class GoldContext {
 public:
  GoldContext(const std::string &gold, const ScoringConfig &cfg);

  const std::string &text() const { return text_; }
  const std::vector<std::string> &tokens() const { return tokens_; }
  // Set when the gold passes the syntax check.
  const std::optional<Formula> &formula() const { return formula_; }
  const std::optional<TripleGraph> &graph() const { return graph_; }

 private:
  std::string text_;
  std::vector<std::string> tokens_;
  std::optional<Formula> formula_;
  std::optional<TripleGraph> graph_;
};

// metric(gold, candidate) before normalization. embeddings holds the gold's
// and the candidate's token embeddings and is only read for BERTScore.
RawScore ScoreRaw(Metric m, const GoldContext &gold,
                  const std::string &candidate, const ScoringConfig &cfg,
                  const TokenEmbeddings *gold_embedding = nullptr,
                  const TokenEmbeddings *candidate_embedding = nullptr);

// Raw metric(gold, gold) for every record, in corpus order.
std::vector<double> SelfMatchScores(Metric m, const std::vector<Record> &corpus,
                                    const ScoringConfig &cfg);

// Mean raw metric(gold, gold) over the corpus. Throws EmptyCorpusError.
double SelfMatchConstant(Metric m, const std::vector<Record> &corpus,
                         const ScoringConfig &cfg);

// One ScoreRecord per (record, metric, sample), sorted by record id, metric
// and sample index. Throws std::invalid_argument on an empty metric list and
// rethrows provider errors.
std::vector<ScoreRecord> ScoreCorpus(const std::vector<Record> &corpus,
                                     const std::vector<Metric> &metrics,
                                     const ScoringConfig &cfg);

class MismatchedPair : public std::invalid_argument {
 public:
  explicit MismatchedPair(const std::string &what)
      : std::invalid_argument("MismatchedPair: " + what) {}
};

// Weighted mean of two normalized scores for the same (record, sample).
// weight_a applies to a; the result's id lists both codes alphabetically.
// Raw is set to the combined normalized value.
ScoreRecord Combine(const ScoreRecord &a, const ScoreRecord &b,
                    double weight_a = 0.5);

// Combines each a score with the b score of the same (record, sample).
// Output follows the order of the a scores. Throws MismatchedPair when an a
// score has no partner.
std::vector<ScoreRecord> CombineScores(const std::vector<ScoreRecord> &scores,
                                       Metric a, Metric b,
                                       double weight_a = 0.5);

// Stable sort by record id, metric and sample index.
void SortScores(std::vector<ScoreRecord> &scores);

}  // namespace foleval

#endif  // FOLEVAL_SCORING_H_
