#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <json.hpp>

#include "foleval/embedding.h"
#include "foleval/text_metrics.h"

namespace foleval {
namespace {

using nlohmann::json;
using Tokens = std::vector<std::string>;

// Test-side trigram construction: split into UTF-8 codepoints, pad with '#',
// hash each trigram with FNV-1a.
Vector OracleTrigrams(const std::string &token, int dim) {
  std::vector<std::string> cps = {"#"};
  for (std::size_t i = 0; i < token.size();) {
    std::size_t len = 1;
    const unsigned char c = token[i];
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    cps.push_back(token.substr(i, len));
    i += len;
  }
  cps.push_back("#");
  Vector v(dim, 0.0);
  for (std::size_t i = 0; i + 2 < cps.size(); ++i) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : cps[i] + cps[i + 1] + cps[i + 2]) {
      h ^= c;
      h *= 16777619u;
    }
    v[h % dim] += 1.0;
  }
  return v;
}

double Dot(const Vector &a, const Vector &b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

TEST(FallbackEmbedderTest, MatchesTrigramOracle) {
  FallbackEmbedder e;
  for (const char *tok : {"Eel", "IsEel", "x", "∀", "WantToBeAddictedTo", "("}) {
    EXPECT_EQ(e.EmbedToken(tok), OracleTrigrams(tok, 256)) << tok;
  }
}

TEST(FallbackEmbedderTest, DeterministicAndUnitNorm) {
  FallbackEmbedder e;
  Tokens t = MetricTokens("∀x (Eel(x) → Fish(x))");
  TokenEmbeddings a = Embed(t, e), b = Embed(t, e);
  EXPECT_EQ(a.vectors, b.vectors);
  for (const Vector &v : a.vectors) EXPECT_NEAR(Dot(v, v), 1.0, 1e-12);
}

TEST(FallbackEmbedderTest, SingleCharacterIsOneHot) {
  FallbackEmbedder e;
  TokenEmbeddings x = Embed(Tokens{"x"}, e);
  int nonzero = 0;
  for (double c : x.vectors[0]) {
    if (c != 0) {
      ++nonzero;
      EXPECT_EQ(c, 1.0);
    }
  }
  EXPECT_EQ(nonzero, 1);
}

TEST(FallbackEmbedderTest, EelVersusIsEel) {
  // #Ee Eel el# against #Is IsE sEe Eel el#: two shared trigrams.
  FallbackEmbedder e;
  Vector a = OracleTrigrams("Eel", 256), b = OracleTrigrams("IsEel", 256);
  const double oracle = Dot(a, b) / std::sqrt(Dot(a, a) * Dot(b, b));
  EXPECT_NEAR(oracle, 2 / std::sqrt(15.0), 1e-12);
  TokenEmbeddings ea = Embed(Tokens{"Eel"}, e), eb = Embed(Tokens{"IsEel"}, e);
  EXPECT_NEAR(Cosine(ea.vectors[0], eb.vectors[0]), oracle, 1e-12);
}

TEST(FallbackEmbedderTest, RejectsBadInput) {
  EXPECT_THROW(FallbackEmbedder(0), std::invalid_argument);
  FallbackEmbedder e;
  EXPECT_THROW(Embed(Tokens{}, e), std::invalid_argument);
}

TokenEmbeddings Manual(std::vector<Vector> vs) {
  TokenEmbeddings t;
  for (std::size_t i = 0; i < vs.size(); ++i) t.tokens.push_back("t" + std::to_string(i));
  t.vectors = std::move(vs);
  return t;
}

TEST(BertScoreTest, TrivialExamples) {
  FallbackEmbedder e;
  TokenEmbeddings t = Embed(MetricTokens("∀x (Eel(x) → Fish(x))"), e);
  EXPECT_EQ(BertScore(t, t).f1, 1.0);
  BertScoreResult r = BertScore(Manual({{1, 0}}), Manual({{0, 1}}));
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_EQ(r.score, 0.0);
  r = BertScore(Manual({{1, 0}}), Manual({{-1, 0}}));
  EXPECT_LT(r.f1, 0.0);
  EXPECT_EQ(r.score, 0.0);
}

// Direct greedy-match evaluation on raw oracle vectors.
double OracleBertF1(const Tokens &ref, const Tokens &cand) {
  auto unit = [](const std::string &tok) {
    Vector v = OracleTrigrams(tok, 256);
    const double n = std::sqrt(Dot(v, v));
    for (double &x : v) x /= n;
    return v;
  };
  double p = 0, r = 0;
  for (const auto &c : cand) {
    double best = -1;
    for (const auto &g : ref) best = std::max(best, Dot(unit(c), unit(g)));
    p += best;
  }
  for (const auto &g : ref) {
    double best = -1;
    for (const auto &c : cand) best = std::max(best, Dot(unit(c), unit(g)));
    r += best;
  }
  p /= cand.size();
  r /= ref.size();
  return 2 * p * r / (p + r);
}

TEST(BertScoreTest, QuantifierSwapMatchesOracle) {
  FallbackEmbedder e;
  Tokens ref = MetricTokens("∀x (Eel(x) ∧ Fish)");
  Tokens cand = MetricTokens("∃x (Eel(x) ∧ Fish)");
  ASSERT_LE(ref.size(), 12u);
  BertScoreResult r = BertScore(Embed(ref, e), Embed(cand, e));
  EXPECT_NEAR(r.f1, OracleBertF1(ref, cand), 1e-12);
  EXPECT_LT(r.f1, 1.0);
  EXPECT_GT(r.f1, 0.8);
}

TEST(BertScoreTest, PermutationOfReferenceDoesNotChangeRecall) {
  FallbackEmbedder e;
  Tokens ref = MetricTokens("P(ann) ∧ Q(bob)");
  Tokens shuffled = ref;
  std::reverse(shuffled.begin(), shuffled.end());
  Tokens cand = MetricTokens("Q(ann) ∨ P(bob)");
  BertScoreResult a = BertScore(Embed(ref, e), Embed(cand, e));
  BertScoreResult b = BertScore(Embed(shuffled, e), Embed(cand, e));
  EXPECT_NEAR(a.f1, b.f1, 1e-12);
}

// Minimal embedding service on a random local port.
class FakeEmbedServer {
 public:
  explicit FakeEmbedServer(int dim = 4) : dim_(dim) {
    server_.Get("/health", [this](const httplib::Request &, httplib::Response &res) {
      ++health_calls;
      res.set_content(json{{"status", "ok"}, {"model", "fake-model"}, {"dim", dim_}}.dump(),
                      "application/json");
    });
    server_.Post("/embed", [this](const httplib::Request &req, httplib::Response &res) {
      const int now = ++in_flight_;
      int seen = max_in_flight.load();
      while (now > seen && !max_in_flight.compare_exchange_weak(seen, now)) {
      }
      ++embed_calls;
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      json body = json::parse(req.body);
      {
        std::lock_guard<std::mutex> lock(mu_);
        last_model_ = body.value("model", "");
      }
      json vectors = json::array();
      for (const auto &sentence : body["sentences"]) {
        json per = json::array();
        for (const auto &tok : sentence) {
          const std::string s = tok.get<std::string>();
          Vector v(wire_dim > 0 ? wire_dim : dim_, 0.0);
          v[0] = 3.0 * static_cast<double>(s.size());
          v[1] = 4.0 * static_cast<double>(s.size());
          per.push_back(v);
        }
        vectors.push_back(per);
      }
      --in_flight_;
      res.set_content(json{{"dim", dim_}, {"vectors", vectors}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeEmbedServer() {
    server_.stop();
    thread_.join();
  }

  std::string Endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> health_calls{0};
  std::atomic<int> embed_calls{0};
  std::atomic<int> max_in_flight{0};
  int delay_ms = 0;
  int wire_dim = 0;
  std::string LastModel() {
    std::lock_guard<std::mutex> lock(mu_);
    return last_model_;
  }

 private:
  int dim_;
  std::mutex mu_;
  std::string last_model_;
  std::atomic<int> in_flight_{0};
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

RemoteEmbedderOptions Options(const FakeEmbedServer &server) {
  RemoteEmbedderOptions o;
  o.endpoint = server.Endpoint();
  o.model = "fake-model";
  o.timeout_seconds = 5;
  return o;
}

std::vector<Tokens> Sentences(int n) {
  std::vector<Tokens> out;
  for (int i = 0; i < n; ++i) out.push_back({"P" + std::to_string(i), "(", "x", ")"});
  return out;
}

TEST(RemoteEmbedderTest, HealthAndBatching) {
  FakeEmbedServer server;
  RemoteEmbedderOptions o = Options(server);
  o.batch_size = 8;
  RemoteEmbedder remote(o);
  EXPECT_EQ(remote.dim(), 4);
  std::vector<TokenEmbeddings> out = EmbedMany(Sentences(20), remote);
  ASSERT_EQ(out.size(), 20u);
  EXPECT_EQ(server.health_calls.load(), 1);
  EXPECT_EQ(server.embed_calls.load(), 3);  // 8 + 8 + 4
  EXPECT_EQ(server.LastModel(), "fake-model");
  // Wire vectors are (3L, 4L, 0, 0); the client normalizes them.
  for (const Vector &v : out[0].vectors) {
    EXPECT_NEAR(v[0], 0.6, 1e-12);
    EXPECT_NEAR(v[1], 0.8, 1e-12);
  }
  EXPECT_NE(remote.Describe().find("fake-model"), std::string::npos);
}

TEST(RemoteEmbedderTest, InFlightCapAcrossThreads) {
  FakeEmbedServer server;
  server.delay_ms = 30;
  RemoteEmbedderOptions o = Options(server);
  o.batch_size = 1;
  o.max_in_flight = 2;
  RemoteEmbedder remote(o);
  remote.EnsureHealthy();
  std::vector<std::thread> workers;
  for (int t = 0; t < 6; ++t) {
    workers.emplace_back([&] { EmbedMany(Sentences(3), remote); });
  }
  for (auto &w : workers) w.join();
  EXPECT_EQ(server.embed_calls.load(), 18);
  EXPECT_LE(server.max_in_flight.load(), 2);
  EXPECT_GE(server.max_in_flight.load(), 1);
}

TEST(RemoteEmbedderTest, UnreachableService) {
  // Nothing listens on port 1.
  RemoteEmbedderOptions o;
  o.endpoint = "http://127.0.0.1:1";
  o.timeout_seconds = 2;
  RemoteEmbedder remote(o);
  EXPECT_THROW(remote.EnsureHealthy(), ProviderUnavailable);
  EXPECT_THROW(EmbedMany(Sentences(1), remote), ProviderUnavailable);
}

TEST(RemoteEmbedderTest, DimensionMismatch) {
  FakeEmbedServer server;
  RemoteEmbedderOptions o = Options(server);
  o.expected_dim = 8;
  RemoteEmbedder wrong_expectation(o);
  EXPECT_THROW(wrong_expectation.EnsureHealthy(), DimensionMismatch);

  server.wire_dim = 3;
  RemoteEmbedder remote(Options(server));
  EXPECT_THROW(EmbedMany(Sentences(1), remote), DimensionMismatch);
}

}  // namespace
}  // namespace foleval
