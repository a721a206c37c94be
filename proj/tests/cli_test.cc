#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <json.hpp>

#include "cli.h"
#include "foleval/corpus.h"

namespace foleval {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kData = FOLEVAL_TEST_DATA;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> Lines(const fs::path &path) {
  std::vector<json> out;
  std::istringstream in(ReadFile(path.string()));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("foleval_cli_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string P(const std::string &name) const { return (dir_ / name).string(); }

  void Write(const std::string &name, const std::string &text) const {
    std::ofstream(dir_ / name) << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"frobnicate"}).code, 2);
  EXPECT_EQ(Cli({"score", "--out", P("o")}).code, 2);
  EXPECT_EQ(Cli({"score", "--in", kData + "/judge_records.jsonl", "--out", P("o"),
                 "--metrics", "cider"}).code, 2);
  EXPECT_EQ(Cli({"perturb", "--in", kData + "/fixture_corpus.jsonl", "--out", P("o"),
                 "--kinds", "op-bogus"}).code, 2);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  CliResult r = Cli({"score", "--in", P("missing.jsonl"), "--out", P("o")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("FileNotFound"), std::string::npos);
  Write("bad.jsonl", "{\"id\": \"a\"}\n");
  EXPECT_EQ(Cli({"perturb", "--in", P("bad.jsonl"), "--out", P("o")}).code, 1);
}

TEST_F(CliTest, PerturbWritesOneFilePerKind) {
  const std::string in = kData + "/fixture_corpus.jsonl";
  const std::size_t records = LoadCorpus(in, CorpusFormat::kRecords).records.size();
  CliResult r = Cli({"perturb", "--in", in, "--kinds", "op-quantifier,op-negation", "--out", P("pert")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Lines(dir_ / "pert/op-quantifier.jsonl").size(), records);
  EXPECT_EQ(Lines(dir_ / "pert/op-negation.jsonl").size(), records);
  EXPECT_FALSE(fs::exists(dir_ / "pert/op-andor.jsonl"));
  EXPECT_TRUE(fs::exists(dir_ / "pert/applicability.txt"));
  // Equality-only golds have no atom to negate.
  int applied = 0;
  for (const json &j : Lines(dir_ / "pert/op-negation.jsonl")) {
    const bool a = j["applied"].get<bool>();
    applied += a;
    EXPECT_EQ(j["samples"].size(), a ? 1u : 0u);
    EXPECT_EQ(a, j["sites"].get<int>() > 0);
  }
  EXPECT_GE(applied, static_cast<int>(records) - 2);
}

TEST_F(CliTest, PerturbImplicationOnlyCorpusHasNoAndOr) {
  Write("impl.jsonl",
        "{\"id\": \"a\", \"gold\": \"∀x (P(x) → Q(x))\"}\n"
        "{\"id\": \"b\", \"gold\": \"A → B\"}\n");
  CliResult r = Cli({"perturb", "--in", P("impl.jsonl"), "--format", "flat-fol", "--kinds",
               "op-andor", "--out", P("pert")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<json> app = Lines(dir_ / "pert/applicability.jsonl");
  ASSERT_EQ(app.size(), 1u);
  EXPECT_EQ(app[0]["percent"], 0.0);
  EXPECT_NE(r.out.find("0.00"), std::string::npos);
}

// Builds a corpus where each record's only sample is its own gold.
std::string SelfCorpus() {
  std::string text;
  for (const Record &r :
       LoadCorpus(kData + "/fixture_corpus.jsonl", CorpusFormat::kRecords).records) {
    text += json{{"id", r.id}, {"nl", r.nl}, {"gold", r.gold}, {"samples", {r.gold}}}.dump() +
            "\n";
  }
  return text;
}

TEST_F(CliTest, SelfScoringIsAllOnes) {
  Write("self.jsonl", SelfCorpus());
  CliResult r = Cli({"score", "--in", P("self.jsonl"), "--metrics", "all", "--combine", "all",
               "--out", P("scores")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<json> lines = Lines(dir_ / "scores/self.scores.jsonl");
  EXPECT_EQ(lines.size(), 50u * (6 + 15));
  for (const json &j : lines) EXPECT_EQ(j["normalized"], 1.0) << j.dump();
  const std::string means = ReadFile(P("scores/means.txt"));
  EXPECT_EQ(means.rfind("# command: score\n", 0), 0u);
  EXPECT_NE(means.find("# seed: 17"), std::string::npos);
  EXPECT_EQ(means.find("workers"), std::string::npos);
}

TEST_F(CliTest, OutputsAreByteIdenticalAcrossWorkersAndRuns) {
  const std::vector<std::string> base = {"score", "--in", kData + "/judge_records.jsonl",
                                         "--metrics", "all", "--combine", "le+bs,bl+sp"};
  auto run = [&](const std::string &workers, const std::string &out) {
    std::vector<std::string> args = {"--workers", workers};
    args.insert(args.end(), base.begin(), base.end());
    args.insert(args.end(), {"--out", P(out)});
    CliResult r = Cli(args);
    ASSERT_EQ(r.code, 0) << r.err;
  };
  run("1", "a");
  run("3", "b");
  run("3", "c");
  for (const char *f : {"judge_records.scores.jsonl", "means.jsonl", "means.txt"}) {
    const std::string a = ReadFile(P(std::string("a/") + f));
    EXPECT_EQ(a, ReadFile(P(std::string("b/") + f))) << f;
    EXPECT_EQ(a, ReadFile(P(std::string("c/") + f))) << f;
  }
}

TEST_F(CliTest, RankTieFixture) {
  ASSERT_EQ(Cli({"score", "--in", kData + "/judge_records.jsonl", "--metrics", "bleu,rouge",
                 "--out", P("s")}).code, 0);
  CliResult r = Cli({"rank", "--scores", P("s/judge_records.scores.jsonl"), "--metric", "BL"});
  ASSERT_EQ(r.code, 0) << r.err;
  bool found = false;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) {
    json j = json::parse(line);
    EXPECT_EQ(j["ranker"], "BL");
    if (j["record_id"] == "tie") {
      EXPECT_EQ(j["ranks"], json({1, 1, 3}));
      found = true;
    }
    if (j["record_id"] == "eel") EXPECT_EQ(j["ranks"][2], 1);
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(Cli({"rank", "--scores", P("s/judge_records.scores.jsonl"), "--metric", "LE"}).code,
            1);
}

TEST_F(CliTest, JudgeOfflineAndAlign) {
  CliResult r = Cli({"judge", "--in", kData + "/judge_records.jsonl", "--offline",
               kData + "/judge_offline.jsonl", "--out", P("judge.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<json> judged = Lines(dir_ / "judge.jsonl");
  std::vector<json> offline = Lines(fs::path(kData) / "judge_offline.jsonl");
  ASSERT_EQ(judged.size(), offline.size());
  for (std::size_t i = 0; i < judged.size(); ++i) {
    EXPECT_EQ(judged[i]["record_id"], offline[i]["record_id"]);
    EXPECT_EQ(judged[i]["ranks"], offline[i]["ranks"]);
    EXPECT_EQ(judged[i]["ranker"], "judge");
  }

  ASSERT_EQ(Cli({"score", "--in", kData + "/judge_records.jsonl", "--metrics", "le,bertscore",
                 "--combine", "le+bs", "--out", P("s")}).code, 0);
  ASSERT_EQ(Cli({"rank", "--scores", P("s/judge_records.scores.jsonl"), "--metric", "BS-LE",
                 "--out", P("ranks.jsonl")}).code, 0);
  r = Cli({"align", "--a", P("ranks.jsonl"), "--b", P("judge.jsonl"), "--out", P("align.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  json report = json::parse(r.out);
  for (const char *key : {"ranker_a", "ranker_b", "rmse", "n_pairs", "excluded", "pooling"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  EXPECT_EQ(report["ranker_a"], "BS-LE");
  EXPECT_EQ(report["n_pairs"], 12);
  EXPECT_EQ(json::parse(ReadFile(P("align.json"))), report);
}

TEST_F(CliTest, JudgeRejectsWrongSampleCount) {
  EXPECT_EQ(Cli({"judge", "--in", kData + "/fixture_corpus.jsonl", "--endpoint",
                 "http://127.0.0.1:1/v1/chat/completions", "--out", P("j.jsonl")}).code,
            1);
}

TEST_F(CliTest, RemoteProviderDown) {
  CliResult r = Cli({"score", "--in", kData + "/judge_records.jsonl", "--metrics", "bertscore",
               "--provider", "remote", "--endpoint", "http://127.0.0.1:1", "--out", P("s")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ProviderUnavailable"), std::string::npos);
}

TEST_F(CliTest, StatsAndDisagree) {
  CliResult r = Cli({"stats", "--in", kData + "/fixture_corpus.jsonl", "--out", P("st")});
  ASSERT_EQ(r.code, 0) << r.err;
  json stats = json::parse(ReadFile(P("st/stats.json")));
  EXPECT_EQ(stats["records"], 50);
  EXPECT_TRUE(fs::exists(dir_ / "st/stats.txt"));

  ASSERT_EQ(Cli({"score", "--in", kData + "/judge_records.jsonl", "--metrics", "bleu,bertscore",
                 "--out", P("s")}).code, 0);
  r = Cli({"disagree", "--scores", P("s/judge_records.scores.jsonl"), "--a", "BL", "--b", "BS",
           "--out", P("dis.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  json summary = json::parse(r.out);
  EXPECT_EQ(summary["n"], 12);
  EXPECT_GE(summary["disagreement"].get<double>(), 0.0);
  EXPECT_EQ(Lines(dir_ / "dis.jsonl").size(), 4u);
}

TEST_F(CliTest, RerunIsIdempotentForEverySubcommand) {
  const std::string in = kData + "/judge_records.jsonl";
  auto twice = [&](std::vector<std::string> args, const std::string &file) {
    ASSERT_EQ(Cli(args).code, 0);
    const std::string first = ReadFile(P(file));
    ASSERT_EQ(Cli(args).code, 0);
    EXPECT_EQ(first, ReadFile(P(file))) << file;
  };
  twice({"perturb", "--in", in, "--out", P("p")}, "p/t-variable.jsonl");
  twice({"perturb", "--in", in, "--out", P("p")}, "p/applicability.txt");
  twice({"stats", "--in", in, "--out", P("st")}, "st/stats.json");
  twice({"judge", "--offline", kData + "/judge_offline.jsonl", "--out", P("j.jsonl")}, "j.jsonl");
}

}  // namespace
}  // namespace foleval
