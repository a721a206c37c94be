#ifndef FOLEVAL_TEXT_METRICS_H_
#define FOLEVAL_TEXT_METRICS_H_

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "foleval/lexer.h"

namespace foleval {

struct TextMetricConfig {
  int bleu_max_n = 4;
  // Add-k smoothing on the n >= 2 precisions.
  double bleu_smoothing_k = 1.0;
  // Numerator used for the unigram precision when no unigram matches, so
  // disjoint sequences score just above zero instead of exactly zero.
  double bleu_unigram_floor = 0.1;
  double meteor_alpha = 0.9;
  double meteor_beta = 3.0;
  double meteor_gamma = 0.5;
  bool split_camel_case = false;

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

class EmptySequenceError : public std::invalid_argument {
 public:
  EmptySequenceError()
      : std::invalid_argument("EmptySequence: metric input is empty") {}
};

// Token lexemes as seen by the text and embedding metrics: operators in their
// Unicode spelling, one token per operator, parenthesis, comma and name.
std::vector<std::string> MetricTokens(const TokenSeq &tokens,
                                      bool split_camel_case = false);

// Same, straight from text. Glyphs the lexer rejects become single tokens
// rather than errors, so malformed candidates can still be scored.
std::vector<std::string> MetricTokens(std::string_view text,
                                      bool split_camel_case = false);

// "WantToBeAddictedTo" -> {"Want", "To", "Be", "Addicted", "To"}.
std::vector<std::string> SplitCamelCase(std::string_view word);

// Sentence-level BLEU: geometric mean of clipped n-gram precisions times the
// brevity penalty.
double Bleu(std::span<const std::string> reference,
            std::span<const std::string> candidate,
            const TextMetricConfig &cfg = {});

// ROUGE-L: LCS-based F-measure with equal weight on precision and recall.
double Rouge(std::span<const std::string> reference,
             std::span<const std::string> candidate,
             const TextMetricConfig &cfg = {});

struct MeteorAlignment {
  int matches = 0;
  int chunks = 0;
};

// Exact-match unigram alignment with the most matches and, among those, the
// fewest chunks.
MeteorAlignment AlignUnigrams(std::span<const std::string> reference,
                              std::span<const std::string> candidate);

double Meteor(std::span<const std::string> reference,
              std::span<const std::string> candidate,
              const TextMetricConfig &cfg = {});

// Score of Meteor(x, x) for a sequence of the given length.
double MeteorSelfMatch(int length, const TextMetricConfig &cfg = {});

}  // namespace foleval

#endif  // FOLEVAL_TEXT_METRICS_H_
