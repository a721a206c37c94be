#include "foleval/scoring.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <map>
#include <numeric>
#include <thread>
#include <tuple>

#include "foleval/parser.h"
#include "foleval/perturb.h"

namespace foleval {

namespace {

struct MetricInfo {
  Metric metric;
  std::string_view code;
  std::string_view name;
};

constexpr MetricInfo kMetricInfo[] = {
    {Metric::kBleu, "BL", "bleu"},        {Metric::kRouge, "RO", "rouge"},
    {Metric::kMeteor, "ME", "meteor"},    {Metric::kLe, "LE", "le"},
    {Metric::kBertScore, "BS", "bertscore"}, {Metric::kSmatch, "SP", "smatchpp"},
};

const MetricInfo &Info(Metric m) {
  for (const MetricInfo &info : kMetricInfo) {
    if (info.metric == m) return info;
  }
  throw std::logic_error("unknown metric");
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool NeedsEmbeddings(const std::vector<Metric> &metrics) {
  return std::find(metrics.begin(), metrics.end(), Metric::kBertScore) !=
         metrics.end();
}

// Gold and sample embeddings of one record. Entries for empty token lists
// stay empty.
struct RecordEmbeddings {
  TokenEmbeddings gold;
  std::vector<TokenEmbeddings> samples;
};

RecordEmbeddings EmbedRecord(const GoldContext &gold,
                             const std::vector<std::string> &samples,
                             const ScoringConfig &cfg) {
  if (cfg.provider == nullptr) {
    throw std::invalid_argument("BERTScore requested without an embedding provider");
  }
  std::vector<std::vector<std::string>> sentences;
  std::vector<int> slot;  // index into sentences, or -1
  auto add = [&](const std::vector<std::string> &tokens) {
    if (tokens.empty()) {
      slot.push_back(-1);
    } else {
      slot.push_back(static_cast<int>(sentences.size()));
      sentences.push_back(tokens);
    }
  };
  add(gold.tokens());
  for (const std::string &s : samples) {
    add(MetricTokens(s, cfg.text.split_camel_case));
  }
  std::vector<TokenEmbeddings> embedded = EmbedMany(sentences, *cfg.provider);
  RecordEmbeddings out;
  auto take = [&](std::size_t k) {
    return slot[k] < 0 ? TokenEmbeddings{} : std::move(embedded[slot[k]]);
  };
  out.gold = take(0);
  for (std::size_t k = 1; k < slot.size(); ++k) out.samples.push_back(take(k));
  return out;
}

struct RecordResult {
  // self[m] and raw[m][sample] follow the order of the metrics list.
  std::vector<double> self;
  std::vector<std::vector<RawScore>> raw;
};

RecordResult ScoreRecordMetrics(const Record &record,
                                const std::vector<Metric> &metrics,
                                const ScoringConfig &cfg) {
  GoldContext gold(record.gold, cfg);
  RecordEmbeddings emb;
  if (NeedsEmbeddings(metrics)) emb = EmbedRecord(gold, record.samples, cfg);
  RecordResult out;
  for (Metric m : metrics) {
    out.self.push_back(ScoreRaw(m, gold, record.gold, cfg, &emb.gold, &emb.gold).value);
    std::vector<RawScore> row;
    for (std::size_t s = 0; s < record.samples.size(); ++s) {
      const TokenEmbeddings *cand = emb.samples.empty() ? nullptr : &emb.samples[s];
      row.push_back(ScoreRaw(m, gold, record.samples[s], cfg, &emb.gold, cand));
    }
    out.raw.push_back(std::move(row));
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// by index is rethrown after all threads finish.
template <typename Fn>
void ParallelFor(std::size_t n, int workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(std::max(workers, 1), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run);
    for (std::thread &t : pool) t.join();
  }
  for (const std::exception_ptr &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double Normalize(double raw, double divisor, std::vector<std::string> &flags) {
  if (!(divisor > 0)) {
    flags.push_back("zero-self-match");
    return 0.0;
  }
  return std::clamp(raw / divisor, 0.0, 1.0);
}

}  // namespace

std::string_view MetricCode(Metric m) { return Info(m).code; }
std::string_view MetricName(Metric m) { return Info(m).name; }

std::optional<Metric> MetricFromName(std::string_view name) {
  const std::string lower = Lower(name);
  for (const MetricInfo &info : kMetricInfo) {
    if (lower == info.name || lower == Lower(info.code)) return info.metric;
  }
  if (lower == "smatch") return Metric::kSmatch;
  return std::nullopt;
}

std::string PairId(Metric a, Metric b) {
  std::string x(MetricCode(a)), y(MetricCode(b));
  if (y < x) std::swap(x, y);
  return x + "-" + y;
}

GoldContext::GoldContext(const std::string &gold, const ScoringConfig &cfg)
    : text_(gold), tokens_(MetricTokens(gold, cfg.text.split_camel_case)) {
  SyntaxReport report = SyntaxCheck(gold);
  if (report.formula) graph_ = FolToTriples(*report.formula);
  if (report.valid) formula_ = std::move(report.formula);
}

RawScore ScoreRaw(Metric m, const GoldContext &gold,
                  const std::string &candidate, const ScoringConfig &cfg,
                  const TokenEmbeddings *gold_embedding,
                  const TokenEmbeddings *candidate_embedding) {
  RawScore out;
  switch (m) {
    case Metric::kBleu:
    case Metric::kRouge:
    case Metric::kMeteor: {
      std::vector<std::string> cand =
          MetricTokens(candidate, cfg.text.split_camel_case);
      if (cand.empty() || gold.tokens().empty()) {
        out.flags.push_back("empty-input");
        return out;
      }
      out.value = m == Metric::kBleu    ? Bleu(gold.tokens(), cand, cfg.text)
                  : m == Metric::kRouge ? Rouge(gold.tokens(), cand, cfg.text)
                                        : Meteor(gold.tokens(), cand, cfg.text);
      return out;
    }
    case Metric::kLe: {
      if (!gold.formula()) {
        out.flags.push_back("gold-invalid");
        return out;
      }
      SyntaxReport report = SyntaxCheck(candidate);
      if (!report.valid) {
        out.flags.push_back("invalid-syntax:" +
                            std::string(SyntaxIssueName(report.error->kind)));
        return out;
      }
      try {
        out.value = LeScore(*gold.formula(), *report.formula, cfg.le);
      } catch (const GroundingOverflowError &) {
        out.flags.push_back("grounding-overflow");
      }
      return out;
    }
    case Metric::kSmatch: {
      if (!gold.graph()) {
        out.flags.push_back("gold-invalid");
        return out;
      }
      std::optional<Formula> cand;
      try {
        cand = ParseFormula(candidate);
      } catch (const SyntaxError &) {
        out.flags.push_back("unparseable");
        return out;
      }
      out.value = SmatchScore(*gold.graph(), FolToTriples(*cand), cfg.smatch).f1;
      return out;
    }
    case Metric::kBertScore: {
      if (gold_embedding == nullptr || candidate_embedding == nullptr ||
          gold_embedding->vectors.empty() || candidate_embedding->vectors.empty()) {
        out.flags.push_back("empty-input");
        return out;
      }
      out.value = BertScore(*gold_embedding, *candidate_embedding).score;
      return out;
    }
  }
  return out;
}

std::vector<double> SelfMatchScores(Metric m, const std::vector<Record> &corpus,
                                    const ScoringConfig &cfg) {
  std::vector<double> out(corpus.size());
  ParallelFor(corpus.size(), cfg.workers, [&](std::size_t i) {
    GoldContext gold(corpus[i].gold, cfg);
    RecordEmbeddings emb;
    if (m == Metric::kBertScore) emb = EmbedRecord(gold, {}, cfg);
    out[i] = ScoreRaw(m, gold, corpus[i].gold, cfg, &emb.gold, &emb.gold).value;
  });
  return out;
}

double SelfMatchConstant(Metric m, const std::vector<Record> &corpus,
                         const ScoringConfig &cfg) {
  if (corpus.empty()) throw EmptyCorpusError();
  std::vector<double> scores = SelfMatchScores(m, corpus, cfg);
  return std::accumulate(scores.begin(), scores.end(), 0.0) /
         static_cast<double>(scores.size());
}

std::vector<ScoreRecord> ScoreCorpus(const std::vector<Record> &corpus,
                                     const std::vector<Metric> &metrics,
                                     const ScoringConfig &cfg) {
  if (metrics.empty()) throw std::invalid_argument("no metrics requested");
  std::vector<RecordResult> results(corpus.size());
  ParallelFor(corpus.size(), cfg.workers, [&](std::size_t i) {
    results[i] = ScoreRecordMetrics(corpus[i], metrics, cfg);
  });

  std::vector<double> corpus_self(metrics.size(), 0.0);
  if (cfg.normalization == Normalization::kCorpusMean) {
    if (corpus.empty()) throw EmptyCorpusError();
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      for (const RecordResult &r : results) corpus_self[k] += r.self[k];
      corpus_self[k] /= static_cast<double>(corpus.size());
    }
  }

  std::vector<ScoreRecord> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      const double divisor = cfg.normalization == Normalization::kPerRecord
                                 ? results[i].self[k]
                                 : corpus_self[k];
      for (std::size_t s = 0; s < results[i].raw[k].size(); ++s) {
        RawScore &raw = results[i].raw[k][s];
        ScoreRecord rec;
        rec.record_id = corpus[i].id;
        rec.metric = std::string(MetricCode(metrics[k]));
        rec.sample_index = static_cast<int>(s);
        rec.raw = raw.value;
        rec.flags = std::move(raw.flags);
        rec.normalized = Normalize(raw.value, divisor, rec.flags);
        out.push_back(std::move(rec));
      }
    }
  }
  SortScores(out);
  return out;
}

ScoreRecord Combine(const ScoreRecord &a, const ScoreRecord &b,
                    double weight_a) {
  if (a.record_id != b.record_id || a.sample_index != b.sample_index) {
    throw MismatchedPair(a.record_id + "#" + std::to_string(a.sample_index) +
                         " vs " + b.record_id + "#" +
                         std::to_string(b.sample_index));
  }
  if (!(weight_a >= 0 && weight_a <= 1)) {
    throw std::invalid_argument("combination weight must be in [0, 1]");
  }
  ScoreRecord out;
  out.record_id = a.record_id;
  out.sample_index = a.sample_index;
  out.metric = std::min(a.metric, b.metric) + "-" + std::max(a.metric, b.metric);
  out.normalized = weight_a == 0.5 ? (a.normalized + b.normalized) / 2
                                   : weight_a * a.normalized +
                                         (1 - weight_a) * b.normalized;
  out.normalized = std::clamp(out.normalized, 0.0, 1.0);
  out.raw = out.normalized;
  out.flags = a.flags;
  for (const std::string &f : b.flags) {
    if (std::find(out.flags.begin(), out.flags.end(), f) == out.flags.end()) {
      out.flags.push_back(f);
    }
  }
  return out;
}

std::vector<ScoreRecord> CombineScores(const std::vector<ScoreRecord> &scores,
                                       Metric a, Metric b, double weight_a) {
  const std::string code_a(MetricCode(a)), code_b(MetricCode(b));
  std::map<std::pair<std::string, int>, const ScoreRecord *> b_scores;
  for (const ScoreRecord &s : scores) {
    if (s.metric == code_b) b_scores[{s.record_id, s.sample_index}] = &s;
  }
  std::vector<ScoreRecord> out;
  for (const ScoreRecord &s : scores) {
    if (s.metric != code_a) continue;
    auto it = b_scores.find({s.record_id, s.sample_index});
    if (it == b_scores.end()) {
      throw MismatchedPair("no " + code_b + " score for " + s.record_id + "#" +
                           std::to_string(s.sample_index));
    }
    out.push_back(Combine(s, *it->second, weight_a));
  }
  return out;
}

void SortScores(std::vector<ScoreRecord> &scores) {
  std::stable_sort(scores.begin(), scores.end(),
                   [](const ScoreRecord &x, const ScoreRecord &y) {
                     return std::tie(x.record_id, x.metric, x.sample_index) <
                            std::tie(y.record_id, y.metric, y.sample_index);
                   });
}

}  // namespace foleval
