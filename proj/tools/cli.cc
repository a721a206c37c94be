#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "foleval/corpus.h"
#include "foleval/embedding.h"
#include "foleval/io.h"
#include "foleval/judge.h"
#include "foleval/parser.h"
#include "foleval/perturb.h"
#include "foleval/printer.h"
#include "foleval/ranking.h"
#include "foleval/scoring.h"
#include "foleval/stats.h"

namespace foleval {

namespace {

namespace fs = std::filesystem;

// Bad flag values that CLI11 cannot catch by itself.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> SplitList(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string Join(const std::vector<std::string> &items, const char *sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string Stem(const std::string &path) {
  std::string stem = fs::path(path).filename().string();
  for (const char *ext : {".jsonl", ".json"}) {
    const std::string e(ext);
    if (stem.size() > e.size() && stem.ends_with(e)) {
      return stem.substr(0, stem.size() - e.size());
    }
  }
  return stem;
}

int DefaultWorkers() {
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

struct GlobalOptions {
  std::uint64_t seed = 17;
  int workers = DefaultWorkers();
};

std::vector<Record> LoadOrFail(const std::string &path,
                               const std::string &format_name,
                               std::ostream &err) {
  CorpusFormat format;
  try {
    format = CorpusFormatFromName(format_name);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  LoadResult loaded = LoadCorpus(path, format);
  if (!loaded.errors.empty()) {
    for (const SchemaError &e : loaded.errors) {
      err << path << ":" << e.line << ": SchemaError: " << e.message << "\n";
    }
    throw DataError(std::to_string(loaded.errors.size()) +
                    " malformed line(s) in " + path);
  }
  return std::move(loaded.records);
}

// ---- perturb ---------------------------------------------------------------

struct PerturbArgs {
  std::string in;
  std::string format = "records";
  std::string kinds = "all";
  std::string out;
};

std::vector<PerturbationKind> ParseKinds(const std::string &text) {
  if (text == "all") return {kAllPerturbations.begin(), kAllPerturbations.end()};
  std::vector<PerturbationKind> kinds;
  for (const std::string &name : SplitList(text)) {
    std::optional<PerturbationKind> k = PerturbationFromName(name);
    if (!k) throw UsageError("unknown perturbation kind: " + name);
    if (std::find(kinds.begin(), kinds.end(), *k) == kinds.end()) kinds.push_back(*k);
  }
  if (kinds.empty()) throw UsageError("--kinds is empty");
  return kinds;
}

int RunPerturb(const PerturbArgs &args, const GlobalOptions &global,
               std::ostream &out, std::ostream &err) {
  const std::vector<PerturbationKind> kinds = ParseKinds(args.kinds);
  const std::vector<Record> corpus = LoadOrFail(args.in, args.format, err);
  if (corpus.empty()) throw EmptyCorpusError();

  std::vector<std::optional<Formula>> golds;
  int parse_failures = 0;
  for (const Record &r : corpus) {
    try {
      golds.push_back(ParseFormula(r.gold));
    } catch (const SyntaxError &) {
      golds.push_back(std::nullopt);
      ++parse_failures;
    }
  }

  std::vector<Json> applicability;
  std::vector<std::string> header = {""};
  std::vector<std::string> row = {"applied %"};
  for (PerturbationKind kind : kinds) {
    std::vector<Json> lines;
    int applied = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      Json j = ToJson(corpus[i]);
      j["samples"] = Json::array();
      j["applied"] = false;
      j["sites"] = 0;
      if (!golds[i]) {
        j["flags"] = {"gold-unparseable"};
      } else {
        PerturbationOutcome o = ApplyPerturbation(kind, *golds[i]);
        if (o.applied) {
          ++applied;
          j["samples"].push_back(Print(*o.result));
          j["applied"] = true;
          j["sites"] = o.sites;
        }
        if (!o.warnings.empty()) j["flags"] = o.warnings;
      }
      lines.push_back(std::move(j));
    }
    const std::string name(PerturbationName(kind));
    WriteJsonLines((fs::path(args.out) / (name + ".jsonl")).string(), lines);
    const double percent =
        std::round(10000.0 * applied / static_cast<double>(corpus.size())) / 100.0;
    applicability.push_back({{"kind", name}, {"percent", percent},
                             {"applied", applied},
                             {"records", corpus.size()}});
    header.push_back(name);
    row.push_back(FormatFixed(percent));
  }
  WriteJsonLines((fs::path(args.out) / "applicability.jsonl").string(), applicability);
  const ConfigEntries config = {
      {"command", "perturb"},        {"input", args.in},
      {"format", args.format},       {"kinds", args.kinds},
      {"seed", std::to_string(global.seed)},
      {"records", std::to_string(corpus.size())},
      {"parse_failures", std::to_string(parse_failures)},
  };
  const std::string table = ConfigHeader(config) + FormatTable(header, {row});
  WriteText((fs::path(args.out) / "applicability.txt").string(), table);
  out << FormatTable(header, {row});
  return kExitOk;
}

// ---- score -----------------------------------------------------------------

struct ScoreArgs {
  std::vector<std::string> in;
  std::string format = "records";
  std::string metrics = "all";
  std::string combine;
  std::string weights = "1,1";
  std::string provider = "fallback";
  std::string endpoint;
  std::string model;
  int dim = 0;
  int batch_size = 32;
  int max_in_flight = 4;
  std::string normalization = "per-record";
  bool split_camel_case = false;
  int le_domain = 3;
  int le_samples = 2048;
  int le_exhaustive_limit = 16;
  int smatch_restarts = 4;
  std::string out;
};

std::vector<Metric> ParseMetrics(const std::string &text) {
  std::vector<Metric> metrics;
  if (text == "all") return {std::begin(kAllMetrics), std::end(kAllMetrics)};
  for (const std::string &name : SplitList(text)) {
    std::optional<Metric> m = MetricFromName(name);
    if (!m) throw UsageError("unknown metric: " + name);
    if (std::find(metrics.begin(), metrics.end(), *m) == metrics.end()) metrics.push_back(*m);
  }
  if (metrics.empty()) throw UsageError("--metrics is empty");
  return metrics;
}

std::vector<std::pair<Metric, Metric>> ParseCombine(
    const std::string &text, const std::vector<Metric> &metrics) {
  std::vector<std::pair<Metric, Metric>> pairs;
  if (text.empty()) return pairs;
  if (text == "all") {
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      for (std::size_t j = i + 1; j < metrics.size(); ++j) {
        pairs.emplace_back(metrics[i], metrics[j]);
      }
    }
    return pairs;
  }
  for (const std::string &item : SplitList(text)) {
    const std::size_t plus = item.find('+');
    if (plus == std::string::npos) throw UsageError("--combine expects a+b: " + item);
    std::optional<Metric> a = MetricFromName(item.substr(0, plus));
    std::optional<Metric> b = MetricFromName(item.substr(plus + 1));
    if (!a || !b || *a == *b) throw UsageError("bad --combine pair: " + item);
    for (Metric m : {*a, *b}) {
      if (std::find(metrics.begin(), metrics.end(), m) == metrics.end()) {
        throw UsageError("--combine uses " + std::string(MetricName(m)) +
                         ", which is not in --metrics");
      }
    }
    pairs.emplace_back(*a, *b);
  }
  return pairs;
}

double ParseWeightA(const std::string &text) {
  std::vector<std::string> parts = SplitList(text);
  try {
    if (parts.size() != 2) throw std::invalid_argument("");
    const double a = std::stod(parts[0]), b = std::stod(parts[1]);
    if (!(a >= 0 && b >= 0 && a + b > 0)) throw std::invalid_argument("");
    return a == b ? 0.5 : a / (a + b);
  } catch (const std::exception &) {
    throw UsageError("--weights expects two nonnegative numbers a,b: " + text);
  }
}

int RunScore(const ScoreArgs &args, const GlobalOptions &global,
             std::ostream &out, std::ostream &err) {
  const std::vector<Metric> metrics = ParseMetrics(args.metrics);
  const auto pairs = ParseCombine(args.combine, metrics);
  const double weight_a = ParseWeightA(args.weights);

  ScoringConfig cfg;
  cfg.workers = global.workers;
  cfg.text.split_camel_case = args.split_camel_case;
  cfg.le.domain_size = args.le_domain;
  cfg.le.sample_count = args.le_samples;
  cfg.le.exhaustive_atom_limit = args.le_exhaustive_limit;
  cfg.le.seed = global.seed;
  cfg.smatch.restarts = args.smatch_restarts;
  cfg.smatch.seed = global.seed;
  if (args.normalization == "per-record") {
    cfg.normalization = Normalization::kPerRecord;
  } else if (args.normalization == "corpus") {
    cfg.normalization = Normalization::kCorpusMean;
  } else {
    throw UsageError("--normalization must be per-record or corpus");
  }
  try {
    cfg.text.Validate();
    cfg.le.Validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }

  std::unique_ptr<EmbeddingProvider> provider;
  const bool needs_provider =
      std::find(metrics.begin(), metrics.end(), Metric::kBertScore) != metrics.end();
  if (args.provider == "fallback") {
    provider = std::make_unique<FallbackEmbedder>(
        args.dim > 0 ? args.dim : FallbackEmbedder::kDefaultDim);
  } else if (args.provider == "remote") {
    if (args.endpoint.empty()) throw UsageError("--provider remote needs --endpoint");
    RemoteEmbedderOptions o;
    o.endpoint = args.endpoint;
    o.model = args.model;
    o.expected_dim = args.dim;
    o.batch_size = args.batch_size;
    o.max_in_flight = args.max_in_flight;
    provider = std::make_unique<RemoteEmbedder>(o);
  } else {
    throw UsageError("--provider must be fallback or remote");
  }
  cfg.provider = provider.get();
  // Probes a remote provider before any scoring.
  const std::string provider_desc = needs_provider ? provider->Describe() : "unused";

  std::vector<std::string> columns;
  for (Metric m : metrics) columns.emplace_back(MetricCode(m));
  for (const auto &[a, b] : pairs) columns.push_back(PairId(a, b));

  std::vector<Json> mean_lines;
  std::vector<std::vector<std::string>> table_rows;
  for (const std::string &path : args.in) {
    const std::vector<Record> corpus = LoadOrFail(path, args.format, err);
    std::vector<ScoreRecord> scores = ScoreCorpus(corpus, metrics, cfg);
    for (const auto &[a, b] : pairs) {
      for (ScoreRecord &s : CombineScores(scores, a, b, weight_a)) {
        scores.push_back(std::move(s));
      }
    }
    SortScores(scores);

    std::vector<Json> lines;
    std::map<std::string, std::pair<double, int>> sums;
    for (const ScoreRecord &s : scores) {
      lines.push_back(ToJson(s));
      auto &[sum, n] = sums[s.metric];
      sum += s.normalized;
      ++n;
    }
    const std::string stem = Stem(path);
    WriteJsonLines((fs::path(args.out) / (stem + ".scores.jsonl")).string(), lines);

    std::vector<std::string> row = {stem};
    for (const std::string &id : columns) {
      auto [sum, n] = sums[id];
      const double mean = n > 0 ? sum / n : 0.0;
      mean_lines.push_back({{"input", stem}, {"metric", id}, {"mean", mean}, {"n", n}});
      row.push_back(n > 0 ? FormatFixed(mean) : "-");
    }
    table_rows.push_back(std::move(row));
  }

  std::vector<std::string> metric_names;
  for (Metric m : metrics) metric_names.emplace_back(MetricName(m));
  std::vector<std::string> pair_names;
  for (const auto &[a, b] : pairs) pair_names.push_back(PairId(a, b));
  const ConfigEntries config = {
      {"command", "score"},
      {"inputs", Join(args.in)},
      {"format", args.format},
      {"metrics", Join(metric_names)},
      {"combine", pair_names.empty() ? "none" : Join(pair_names)},
      {"combine_weights", FormatFixed(weight_a, 4) + "," + FormatFixed(1 - weight_a, 4)},
      {"seed", std::to_string(global.seed)},
      {"normalization", args.normalization},
      {"bleu", "max_n=" + std::to_string(cfg.text.bleu_max_n) +
                   " smoothing=add-" + FormatFixed(cfg.text.bleu_smoothing_k, 1) +
                   " unigram_floor=" + FormatFixed(cfg.text.bleu_unigram_floor, 1)},
      {"meteor", "alpha=" + FormatFixed(cfg.text.meteor_alpha, 2) +
                     " beta=" + FormatFixed(cfg.text.meteor_beta, 2) +
                     " gamma=" + FormatFixed(cfg.text.meteor_gamma, 2)},
      {"split_camel_case", args.split_camel_case ? "true" : "false"},
      {"le", "domain=" + std::to_string(cfg.le.domain_size) +
                 " exhaustive_limit=" + std::to_string(cfg.le.exhaustive_atom_limit) +
                 " samples=" + std::to_string(cfg.le.sample_count) +
                 " align_threshold=" + FormatFixed(cfg.le.predicate_align_threshold, 2)},
      {"smatch", "restarts=" + std::to_string(cfg.smatch.restarts) +
                     " exhaustive_cutoff=" + std::to_string(cfg.smatch.exhaustive_cutoff)},
      {"bertscore", "greedy matching, no idf, no baseline rescaling"},
      {"provider", provider_desc},
  };
  std::vector<std::string> header = {"input"};
  header.insert(header.end(), columns.begin(), columns.end());
  const std::string table = FormatTable(header, table_rows);
  WriteJsonLines((fs::path(args.out) / "means.jsonl").string(), mean_lines);
  WriteText((fs::path(args.out) / "means.txt").string(), ConfigHeader(config) + table);
  out << table;
  return kExitOk;
}

// ---- rank ------------------------------------------------------------------

struct RankArgs {
  std::string scores;
  std::vector<std::string> metrics;
  std::string out;
};

int RunRank(const RankArgs &args, std::ostream &out) {
  const std::vector<ScoreRecord> scores = LoadScores(args.scores);
  std::vector<std::string> ids = args.metrics;
  if (ids.empty()) {
    for (const ScoreRecord &s : scores) {
      if (std::find(ids.begin(), ids.end(), s.metric) == ids.end()) ids.push_back(s.metric);
    }
  }
  std::vector<RankVector> ranks;
  for (const std::string &id : ids) {
    std::vector<RankVector> r = RankScores(scores, id);
    if (r.empty()) throw DataError("no scores for metric " + id + " in " + args.scores);
    ranks.insert(ranks.end(), r.begin(), r.end());
  }
  std::stable_sort(ranks.begin(), ranks.end(), [](const RankVector &x, const RankVector &y) {
    return std::tie(x.record_id, x.ranker) < std::tie(y.record_id, y.ranker);
  });
  std::vector<Json> lines;
  for (const RankVector &r : ranks) lines.push_back(ToJson(r));
  if (args.out.empty()) {
    for (const Json &j : lines) out << j.dump() << "\n";
  } else {
    WriteJsonLines(args.out, lines);
  }
  return kExitOk;
}

// ---- align -----------------------------------------------------------------

struct AlignArgs {
  std::string a, b;
  std::string ranker_a, ranker_b;
  std::string out;
};

std::vector<RankVector> SelectRanker(const std::vector<RankVector> &ranks,
                                     const std::string &ranker,
                                     const std::string &path) {
  std::set<std::string> present;
  for (const RankVector &r : ranks) present.insert(r.ranker);
  std::string chosen = ranker;
  if (chosen.empty()) {
    if (present.size() > 1) {
      throw UsageError(path + " holds several rankers; pick one with --ranker-a/--ranker-b");
    }
    if (!present.empty()) chosen = *present.begin();
  }
  std::vector<RankVector> out;
  for (const RankVector &r : ranks) {
    if (r.ranker == chosen) out.push_back(r);
  }
  if (out.empty()) throw DataError("no ranks for " + chosen + " in " + path);
  return out;
}

int RunAlign(const AlignArgs &args, std::ostream &out) {
  const auto a = SelectRanker(LoadRanks(args.a), args.ranker_a, args.a);
  const auto b = SelectRanker(LoadRanks(args.b), args.ranker_b, args.b);
  const AlignmentReport report = RmseAlignment(a, b);
  const std::string line = ToJson(report).dump() + "\n";
  if (!args.out.empty()) WriteText(args.out, line);
  out << line;
  return kExitOk;
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
  std::string in;
  std::string format = "records";
  std::string out;
};

int RunStats(const StatsArgs &args, std::ostream &out, std::ostream &err) {
  const std::vector<Record> corpus = LoadOrFail(args.in, args.format, err);
  const CorpusStats stats = ComputeCorpusStats(corpus);
  Json histogram = Json::object();
  std::vector<std::string> header = {"operators"}, row = {"records"};
  for (const auto &[k, n] : stats.operator_histogram) {
    const std::string key = k == kHistogramCap ? std::to_string(k) + "+" : std::to_string(k);
    histogram[key] = n;
    header.push_back(key);
    row.push_back(std::to_string(n));
  }
  Json applicability = Json::object();
  std::vector<std::string> app_header = {""}, app_row = {"applied %"};
  for (const auto &[kind, percent] : stats.applicability) {
    applicability[std::string(PerturbationName(kind))] = percent;
    app_header.emplace_back(PerturbationName(kind));
    app_row.push_back(FormatFixed(percent));
  }
  const Json report = {{"records", stats.records},
                       {"parse_failures", stats.parse_failures},
                       {"operator_histogram", histogram},
                       {"applicability", applicability}};
  const std::string text =
      ConfigHeader({{"command", "stats"}, {"input", args.in}, {"format", args.format},
                    {"records", std::to_string(stats.records)},
                    {"parse_failures", std::to_string(stats.parse_failures)}}) +
      FormatTable(header, {row}) + "\n" + FormatTable(app_header, {app_row});
  if (!args.out.empty()) {
    WriteText((fs::path(args.out) / "stats.json").string(), report.dump(2) + "\n");
    WriteText((fs::path(args.out) / "stats.txt").string(), text);
  }
  out << report.dump(2) << "\n";
  return kExitOk;
}

// ---- judge -----------------------------------------------------------------

struct JudgeArgs {
  std::string in;
  std::string format = "records";
  std::string offline;
  std::string endpoint;
  std::string model;
  std::string out;
};

int RunJudge(const JudgeArgs &args, std::ostream &out, std::ostream &err) {
  if (args.offline.empty() == args.endpoint.empty()) {
    throw UsageError("judge needs exactly one of --offline or --endpoint");
  }
  if (!args.endpoint.empty() && args.in.empty()) {
    throw UsageError("judge --endpoint needs --in");
  }
  std::vector<RankVector> ranks;
  int missing = 0;
  if (!args.offline.empty()) {
    const OfflineJudge offline = LoadOfflineJudge(args.offline);
    for (const SchemaError &e : offline.errors) {
      err << args.offline << ":" << e.line << ": SchemaError: " << e.message << "\n";
    }
    if (!offline.errors.empty()) throw DataError("malformed offline judge file");
    if (args.in.empty()) {
      for (const std::string &id : offline.order) {
        ranks.push_back({id, kJudgeRanker, offline.ranks.at(id)});
      }
    } else {
      for (const Record &r : LoadOrFail(args.in, args.format, err)) {
        ranks.push_back(JudgeRankOffline(r, offline));
        missing += ranks.back().ranks.empty();
      }
    }
  } else {
    const std::vector<Record> corpus = LoadOrFail(args.in, args.format, err);
    for (const Record &r : corpus) {
      if (r.samples.size() != 3) {
        throw DataError("judge needs exactly 3 samples; record " + r.id + " has " +
                        std::to_string(r.samples.size()));
      }
    }
    const char *key = std::getenv("FOLEVAL_JUDGE_KEY");
    HttpJudge judge({args.endpoint, args.model, key ? key : "", 120});
    for (const Record &r : corpus) {
      JudgeOutcome o = JudgeRank(r, judge);
      if (o.ranks.ranks.empty()) {
        ++missing;
        err << "UnparseableReply for " << r.id << ": " << o.replies.back() << "\n";
      }
      ranks.push_back(std::move(o.ranks));
    }
  }
  std::vector<Json> lines;
  for (const RankVector &r : ranks) lines.push_back(ToJson(r));
  WriteJsonLines(args.out, lines);
  out << "judged " << ranks.size() << " record(s), missing " << missing << "\n";
  return kExitOk;
}

// ---- disagree --------------------------------------------------------------

struct DisagreeArgs {
  std::string scores;
  std::string a, b;
  std::string out;
};

int RunDisagree(const DisagreeArgs &args, std::ostream &out) {
  const std::vector<ScoreRecord> scores = LoadScores(args.scores);
  std::map<std::pair<std::string, int>, double> b_scores;
  for (const ScoreRecord &s : scores) {
    if (s.metric == args.b) b_scores[{s.record_id, s.sample_index}] = s.normalized;
  }
  std::vector<double> xs, ys;
  std::vector<std::string> ids;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_record;
  for (const ScoreRecord &s : scores) {
    if (s.metric != args.a) continue;
    auto it = b_scores.find({s.record_id, s.sample_index});
    if (it == b_scores.end()) {
      throw DataError("no " + args.b + " score for " + s.record_id + "#" +
                      std::to_string(s.sample_index));
    }
    xs.push_back(s.normalized);
    ys.push_back(it->second);
    auto [rec, fresh] = per_record.try_emplace(s.record_id);
    if (fresh) ids.push_back(s.record_id);
    rec->second.first.push_back(s.normalized);
    rec->second.second.push_back(it->second);
  }
  if (xs.empty()) throw DataError("no scores for metric " + args.a + " in " + args.scores);
  const Json summary = {{"metric_a", args.a}, {"metric_b", args.b},
                        {"disagreement", Disagreement(xs, ys)},
                        {"n", xs.size()}};
  if (!args.out.empty()) {
    std::vector<Json> lines;
    for (const std::string &id : ids) {
      const auto &[x, y] = per_record[id];
      lines.push_back({{"record_id", id}, {"metric_a", args.a}, {"metric_b", args.b},
                       {"disagreement", Disagreement(x, y)}});
    }
    WriteJsonLines(args.out, lines);
  }
  out << summary.dump() << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Evaluation metrics for first-order logic translations", "foleval"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--workers", global.workers, "Worker threads for scoring")
      ->check(CLI::PositiveNumber);

  PerturbArgs perturb;
  CLI::App *cmd_perturb = app.add_subcommand("perturb", "Apply perturbations to gold formulas");
  cmd_perturb->fallthrough();
  cmd_perturb->add_option("--in", perturb.in, "Input corpus")->required();
  cmd_perturb->add_option("--format", perturb.format, "records or flat-fol")->capture_default_str();
  cmd_perturb->add_option("--kinds", perturb.kinds, "all, or a comma list of kinds")->capture_default_str();
  cmd_perturb->add_option("--out", perturb.out, "Output directory")->required();

  ScoreArgs score;
  CLI::App *cmd_score = app.add_subcommand("score", "Score samples against gold formulas");
  cmd_score->fallthrough();
  cmd_score->add_option("--in", score.in, "Input corpus (repeatable)")->required();
  cmd_score->add_option("--format", score.format, "records or flat-fol")->capture_default_str();
  cmd_score->add_option("--metrics", score.metrics, "all, or a comma list")->capture_default_str();
  cmd_score->add_option("--combine", score.combine, "all, or pairs like le+bs,bl+sp");
  cmd_score->add_option("--weights", score.weights, "Weights a,b for combined pairs")->capture_default_str();
  cmd_score->add_option("--provider", score.provider, "fallback or remote")->capture_default_str();
  cmd_score->add_option("--endpoint", score.endpoint, "Remote embedding service URL");
  cmd_score->add_option("--model", score.model, "Model name sent to the remote service");
  cmd_score->add_option("--dim", score.dim, "Embedding dimension (0: provider default)");
  cmd_score->add_option("--batch-size", score.batch_size)->check(CLI::PositiveNumber)->capture_default_str();
  cmd_score->add_option("--max-in-flight", score.max_in_flight)->check(CLI::PositiveNumber)->capture_default_str();
  cmd_score->add_option("--normalization", score.normalization, "per-record or corpus")->capture_default_str();
  cmd_score->add_flag("--split-camel-case", score.split_camel_case, "Split names on case changes");
  cmd_score->add_option("--le-domain", score.le_domain)->check(CLI::PositiveNumber)->capture_default_str();
  cmd_score->add_option("--le-samples", score.le_samples)->check(CLI::PositiveNumber)->capture_default_str();
  cmd_score->add_option("--le-exhaustive-limit", score.le_exhaustive_limit)->capture_default_str();
  cmd_score->add_option("--smatch-restarts", score.smatch_restarts)->check(CLI::PositiveNumber)->capture_default_str();
  cmd_score->add_option("--out", score.out, "Output directory")->required();

  RankArgs rank;
  CLI::App *cmd_rank = app.add_subcommand("rank", "Rank samples per record from a score file");
  cmd_rank->fallthrough();
  cmd_rank->add_option("--scores", rank.scores, "Score file")->required();
  cmd_rank->add_option("--metric", rank.metrics, "Metric id to rank (repeatable; default all)");
  cmd_rank->add_option("--out", rank.out, "Rank file (default stdout)");

  AlignArgs align;
  CLI::App *cmd_align = app.add_subcommand("align", "RMSE between two rank files");
  cmd_align->fallthrough();
  cmd_align->add_option("--a", align.a, "First rank file")->required();
  cmd_align->add_option("--b", align.b, "Second rank file")->required();
  cmd_align->add_option("--ranker-a", align.ranker_a);
  cmd_align->add_option("--ranker-b", align.ranker_b);
  cmd_align->add_option("--out", align.out, "Report file");

  StatsArgs stats;
  CLI::App *cmd_stats = app.add_subcommand("stats", "Operator histogram and applicability");
  cmd_stats->fallthrough();
  cmd_stats->add_option("--in", stats.in, "Input corpus")->required();
  cmd_stats->add_option("--format", stats.format, "records or flat-fol")->capture_default_str();
  cmd_stats->add_option("--out", stats.out, "Output directory");

  JudgeArgs judge;
  CLI::App *cmd_judge = app.add_subcommand("judge", "Rank samples with an LLM judge");
  cmd_judge->fallthrough();
  cmd_judge->add_option("--in", judge.in, "Input corpus");
  cmd_judge->add_option("--format", judge.format, "records or flat-fol")->capture_default_str();
  cmd_judge->add_option("--offline", judge.offline, "Pre-recorded rankings");
  cmd_judge->add_option("--endpoint", judge.endpoint, "Chat-completions URL");
  cmd_judge->add_option("--model", judge.model, "Judge model name");
  cmd_judge->add_option("--out", judge.out, "Rank file")->required();

  DisagreeArgs disagree;
  CLI::App *cmd_disagree = app.add_subcommand("disagree", "Mean absolute score difference");
  cmd_disagree->fallthrough();
  cmd_disagree->add_option("--scores", disagree.scores, "Score file")->required();
  cmd_disagree->add_option("--a", disagree.a, "Metric id")->required();
  cmd_disagree->add_option("--b", disagree.b, "Metric id")->required();
  cmd_disagree->add_option("--out", disagree.out, "Per-record output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (cmd_perturb->parsed()) return RunPerturb(perturb, global, out, err);
    if (cmd_score->parsed()) return RunScore(score, global, out, err);
    if (cmd_rank->parsed()) return RunRank(rank, out);
    if (cmd_align->parsed()) return RunAlign(align, out);
    if (cmd_stats->parsed()) return RunStats(stats, out, err);
    if (cmd_judge->parsed()) return RunJudge(judge, out, err);
    if (cmd_disagree->parsed()) return RunDisagree(disagree, out);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace foleval
