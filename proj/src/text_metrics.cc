#include "foleval/text_metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>

namespace foleval {

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, int> CountNgrams(std::span<const std::string> tokens, int n) {
  std::map<Ngram, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

void RequireNonEmpty(std::span<const std::string> a,
                     std::span<const std::string> b) {
  if (a.empty() || b.empty()) throw EmptySequenceError();
}

void AppendToken(std::string_view text, bool split,
                 std::vector<std::string> *out) {
  if (split) {
    for (std::string &piece : SplitCamelCase(text)) out->push_back(piece);
  } else {
    out->emplace_back(text);
  }
}

// Branch-and-bound search over unigram alignments. Matches are fixed at their
// maximum, so the search maximizes the number of candidate positions that
// continue the previous position's chunk.
class ChunkSearch {
 public:
  ChunkSearch(std::span<const std::string> reference,
              std::span<const std::string> candidate)
      : cand_(candidate), used_(reference.size(), false) {
    std::unordered_map<std::string, int> type_ids;
    for (std::size_t j = 0; j < reference.size(); ++j) {
      auto [it, fresh] = type_ids.emplace(reference[j], type_ids.size());
      if (fresh) ref_positions_.emplace_back();
      ref_positions_[it->second].push_back(static_cast<int>(j));
    }
    cand_type_.assign(candidate.size(), -1);
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      auto it = type_ids.find(candidate[i]);
      if (it != type_ids.end()) cand_type_[i] = it->second;
    }
    remaining_ref_.resize(ref_positions_.size());
    remaining_cand_.assign(ref_positions_.size(), 0);
    for (std::size_t t = 0; t < ref_positions_.size(); ++t) {
      remaining_ref_[t] = static_cast<int>(ref_positions_[t].size());
    }
    for (int t : cand_type_) {
      if (t >= 0) ++remaining_cand_[t];
    }
    for (std::size_t t = 0; t < ref_positions_.size(); ++t) {
      matches_ += std::min(remaining_ref_[t], remaining_cand_[t]);
    }
  }

  MeteorAlignment Run() {
    if (matches_ == 0) return {0, 0};
    Search(0, -2, 0);
    return {matches_, matches_ - best_continuations_};
  }

 private:
  static constexpr long kNodeBudget = 500000;

  void Search(std::size_t i, int prev_ref, int continuations) {
    if (++nodes_ > kNodeBudget && best_continuations_ >= 0) return;
    if (i == cand_.size()) {
      best_continuations_ = std::max(best_continuations_, continuations);
      return;
    }
    // Each remaining position adds at most one continuation.
    if (continuations + static_cast<int>(cand_.size() - i) <=
        best_continuations_) {
      return;
    }
    const int type = cand_type_[i];
    if (type < 0) {
      Search(i + 1, -2, continuations);
      return;
    }
    --remaining_cand_[type];
    const auto &positions = ref_positions_[type];
    // Extending the current chunk first finds good solutions early.
    if (prev_ref >= -1) {
      auto it = std::find(positions.begin(), positions.end(), prev_ref + 1);
      if (it != positions.end() && !used_[*it]) {
        Take(*it, type);
        Search(i + 1, *it, continuations + 1);
        Release(*it, type);
      }
    }
    for (int j : positions) {
      if (used_[j] || j == prev_ref + 1) continue;
      Take(j, type);
      Search(i + 1, j, continuations);
      Release(j, type);
    }
    // Leaving this position unaligned only when the rest can still reach
    // the maximum number of matches.
    if (remaining_cand_[type] >= remaining_ref_[type]) {
      Search(i + 1, -2, continuations);
    }
    ++remaining_cand_[type];
  }

  void Take(int j, int type) {
    used_[j] = true;
    --remaining_ref_[type];
  }
  void Release(int j, int type) {
    used_[j] = false;
    ++remaining_ref_[type];
  }

  std::span<const std::string> cand_;
  std::vector<std::vector<int>> ref_positions_;
  std::vector<int> cand_type_;
  std::vector<bool> used_;
  std::vector<int> remaining_ref_;
  std::vector<int> remaining_cand_;
  int matches_ = 0;
  int best_continuations_ = -1;
  long nodes_ = 0;
};

}  // namespace

void TextMetricConfig::Validate() const {
  if (bleu_max_n < 1) throw std::invalid_argument("bleu_max_n must be >= 1");
  if (bleu_smoothing_k < 0) {
    throw std::invalid_argument("bleu_smoothing_k must be >= 0");
  }
  if (!(meteor_alpha > 0 && meteor_alpha < 1)) {
    throw std::invalid_argument("meteor_alpha must be in (0, 1)");
  }
}

std::vector<std::string> SplitCamelCase(std::string_view word) {
  std::vector<std::string> pieces;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) pieces.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < word.size(); ++i) {
    char c = word[i];
    if (c == '_') {
      flush();
      continue;
    }
    if (!current.empty() && std::isupper(static_cast<unsigned char>(c)) &&
        std::islower(static_cast<unsigned char>(current.back()))) {
      flush();
    }
    current += c;
  }
  flush();
  if (pieces.empty()) pieces.emplace_back(word);
  return pieces;
}

std::vector<std::string> MetricTokens(const TokenSeq &tokens,
                                      bool split_camel_case) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token &t : tokens) {
    AppendToken(CanonicalText(t),
                split_camel_case && t.kind == TokenKind::kIdentifier, &out);
  }
  return out;
}

std::vector<std::string> MetricTokens(std::string_view text,
                                      bool split_camel_case) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::string_view rest = text.substr(pos);
    try {
      for (std::string &s : MetricTokens(Tokenize(rest), split_camel_case)) {
        out.push_back(std::move(s));
      }
      break;
    } catch (const LexError &e) {
      Span bad = e.span();
      std::vector<std::string> prefix =
          MetricTokens(Tokenize(rest.substr(0, bad.begin)), split_camel_case);
      for (std::string &s : prefix) out.push_back(std::move(s));
      out.emplace_back(rest.substr(bad.begin, bad.end - bad.begin));
      pos += bad.end;
    }
  }
  return out;
}

double Bleu(std::span<const std::string> reference,
            std::span<const std::string> candidate,
            const TextMetricConfig &cfg) {
  RequireNonEmpty(reference, candidate);
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= cfg.bleu_max_n; ++n) {
    std::map<Ngram, int> ref_counts = CountNgrams(reference, n);
    std::map<Ngram, int> cand_counts = CountNgrams(candidate, n);
    double matched = 0.0, total = 0.0;
    for (const auto &[gram, count] : cand_counts) {
      total += count;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    double precision;
    if (n == 1) {
      precision = std::max(matched, cfg.bleu_unigram_floor) / total;
    } else if (cfg.bleu_smoothing_k > 0) {
      precision = (matched + cfg.bleu_smoothing_k) /
                  (total + cfg.bleu_smoothing_k);
    } else if (total == 0) {
      continue;  // order longer than the candidate
    } else {
      precision = matched / total;
    }
    if (precision <= 0) return 0.0;
    log_sum += std::log(precision);
    ++orders;
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  double score = brevity * std::exp(log_sum / orders);
  return std::clamp(score, 0.0, 1.0);
}

double Rouge(std::span<const std::string> reference,
             std::span<const std::string> candidate,
             const TextMetricConfig & /*cfg*/) {
  RequireNonEmpty(reference, candidate);
  const std::size_t m = reference.size(), n = candidate.size();
  std::vector<int> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      cur[j] = reference[i - 1] == candidate[j - 1]
                   ? prev[j - 1] + 1
                   : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = prev[n];
  if (lcs == 0) return 0.0;
  const double precision = lcs / static_cast<double>(n);
  const double recall = lcs / static_cast<double>(m);
  return 2 * precision * recall / (precision + recall);
}

MeteorAlignment AlignUnigrams(std::span<const std::string> reference,
                              std::span<const std::string> candidate) {
  return ChunkSearch(reference, candidate).Run();
}

double Meteor(std::span<const std::string> reference,
              std::span<const std::string> candidate,
              const TextMetricConfig &cfg) {
  RequireNonEmpty(reference, candidate);
  MeteorAlignment a = AlignUnigrams(reference, candidate);
  if (a.matches == 0) return 0.0;
  const double m = a.matches;
  const double precision = m / static_cast<double>(candidate.size());
  const double recall = m / static_cast<double>(reference.size());
  const double fmean = precision * recall /
                       (cfg.meteor_alpha * precision +
                        (1 - cfg.meteor_alpha) * recall);
  const double penalty =
      cfg.meteor_gamma * std::pow(a.chunks / m, cfg.meteor_beta);
  return std::clamp(fmean * (1 - penalty), 0.0, 1.0);
}

double MeteorSelfMatch(int length, const TextMetricConfig &cfg) {
  if (length <= 0) throw EmptySequenceError();
  return 1.0 - cfg.meteor_gamma * std::pow(1.0 / length, cfg.meteor_beta);
}

}  // namespace foleval
