#include "foleval/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

#include <httplib.h>
#include <json.hpp>

namespace foleval {

namespace {

using nlohmann::json;

std::vector<std::string> Codepoints(const std::string &s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    unsigned char c = s[i];
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3
                                                                           : 4;
    len = std::min(len, s.size() - i);
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

std::uint32_t Fnv1a(const std::string &s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

// Releases one in-flight slot on scope exit.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<> &sem) : sem_(sem) {
    sem_.acquire();
  }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard &) = delete;
  SlotGuard &operator=(const SlotGuard &) = delete;

 private:
  std::counting_semaphore<> &sem_;
};

httplib::Client MakeClient(const RemoteEmbedderOptions &o) {
  httplib::Client client(o.endpoint);
  client.set_connection_timeout(o.timeout_seconds, 0);
  client.set_read_timeout(o.timeout_seconds, 0);
  client.set_write_timeout(o.timeout_seconds, 0);
  return client;
}

}  // namespace

FallbackEmbedder::FallbackEmbedder(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("embedding dim must be >= 1");
}

std::string FallbackEmbedder::Describe() {
  return "fallback(char-trigram, dim=" + std::to_string(dim_) + ")";
}

Vector FallbackEmbedder::EmbedToken(const std::string &token) const {
  std::vector<std::string> cps = Codepoints(token);
  cps.insert(cps.begin(), "#");
  cps.push_back("#");
  Vector v(dim_, 0.0);
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
    v[Fnv1a(cps[i] + cps[i + 1] + cps[i + 2]) % dim_] += 1.0;
  }
  return v;
}

std::vector<std::vector<Vector>> FallbackEmbedder::EmbedSentences(
    const std::vector<std::vector<std::string>> &sentences) {
  std::vector<std::vector<Vector>> out;
  out.reserve(sentences.size());
  for (const auto &sentence : sentences) {
    std::vector<Vector> vectors;
    vectors.reserve(sentence.size());
    for (const std::string &token : sentence) {
      vectors.push_back(EmbedToken(token));
    }
    out.push_back(std::move(vectors));
  }
  return out;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderOptions options)
    : options_(std::move(options)),
      in_flight_(std::max(options_.max_in_flight, 1)) {
  if (options_.endpoint.empty()) {
    throw std::invalid_argument("remote embedder needs an endpoint");
  }
  if (options_.batch_size < 1) {
    throw std::invalid_argument("batch size must be >= 1");
  }
}

void RemoteEmbedder::EnsureHealthy() {
  std::lock_guard<std::mutex> lock(health_mu_);
  if (dim_) return;
  httplib::Result res = [&] {
    SlotGuard slot(in_flight_);
    return MakeClient(options_).Get("/health");
  }();
  if (!res) {
    throw ProviderUnavailable(options_.endpoint + ": " +
                              httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProviderUnavailable(options_.endpoint + "/health returned " +
                              std::to_string(res->status));
  }
  json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded() || body.value("status", "") != "ok" ||
      !body.contains("dim") || !body["dim"].is_number_integer()) {
    throw ProviderUnavailable("unexpected /health reply: " + res->body);
  }
  int dim = body["dim"].get<int>();
  if (dim < 1) throw DimensionMismatch("/health reported dim " + std::to_string(dim));
  if (options_.expected_dim > 0 && dim != options_.expected_dim) {
    throw DimensionMismatch("expected " + std::to_string(options_.expected_dim) +
                            ", service reports " + std::to_string(dim));
  }
  served_model_ = body.value("model", "");
  dim_ = dim;
}

int RemoteEmbedder::dim() {
  EnsureHealthy();
  return *dim_;
}

std::string RemoteEmbedder::Describe() {
  EnsureHealthy();
  return "remote(" + options_.endpoint + ", model=" +
         (served_model_.empty() ? options_.model : served_model_) +
         ", dim=" + std::to_string(*dim_) + ")";
}

std::vector<std::vector<Vector>> RemoteEmbedder::PostBatch(
    const std::vector<std::vector<std::string>> &batch) {
  json request = {{"sentences", batch}, {"model", options_.model}};
  httplib::Result res = [&] {
    SlotGuard slot(in_flight_);
    return MakeClient(options_).Post("/embed", request.dump(),
                                     "application/json");
  }();
  if (!res) {
    throw ProviderUnavailable(options_.endpoint + ": " +
                              httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProviderUnavailable(options_.endpoint + "/embed returned " +
                              std::to_string(res->status));
  }
  json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.contains("vectors") ||
      !body["vectors"].is_array()) {
    throw ProviderUnavailable("malformed /embed reply");
  }
  const int dim = *dim_;
  if (body.contains("dim") && body["dim"] != dim) {
    throw DimensionMismatch("/embed reported dim " + body["dim"].dump() +
                            ", expected " + std::to_string(dim));
  }
  const json &vectors = body["vectors"];
  if (vectors.size() != batch.size()) {
    throw DimensionMismatch("/embed returned " + std::to_string(vectors.size()) +
                            " sentences for " + std::to_string(batch.size()));
  }
  std::vector<std::vector<Vector>> out(batch.size());
  try {
    for (std::size_t s = 0; s < batch.size(); ++s) {
      if (vectors[s].size() != batch[s].size()) {
        throw DimensionMismatch("sentence " + std::to_string(s) + " has " +
                                std::to_string(vectors[s].size()) +
                                " vectors for " +
                                std::to_string(batch[s].size()) + " tokens");
      }
      for (const json &v : vectors[s]) {
        if (!v.is_array() || static_cast<int>(v.size()) != dim) {
          throw DimensionMismatch("vector of size " + std::to_string(v.size()) +
                                  ", expected " + std::to_string(dim));
        }
        out[s].push_back(v.get<Vector>());
      }
    }
  } catch (const json::exception &e) {
    throw ProviderUnavailable(std::string("malformed /embed reply: ") + e.what());
  }
  return out;
}

std::vector<std::vector<Vector>> RemoteEmbedder::EmbedSentences(
    const std::vector<std::vector<std::string>> &sentences) {
  EnsureHealthy();
  std::vector<std::vector<Vector>> out;
  out.reserve(sentences.size());
  const std::size_t step = options_.batch_size;
  for (std::size_t begin = 0; begin < sentences.size(); begin += step) {
    std::size_t end = std::min(begin + step, sentences.size());
    std::vector<std::vector<std::string>> batch(sentences.begin() + begin,
                                                sentences.begin() + end);
    for (auto &vectors : PostBatch(batch)) out.push_back(std::move(vectors));
  }
  return out;
}

void Normalize(Vector &v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq == 0.0) return;
  const double norm = std::sqrt(sq);
  for (double &x : v) x /= norm;
}

double Cosine(const Vector &a, const Vector &b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
  if (!a.empty() &&
      std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0) {
    return 1.0;
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot, -1.0, 1.0);
}

std::vector<TokenEmbeddings> EmbedMany(
    const std::vector<std::vector<std::string>> &sentences,
    EmbeddingProvider &provider) {
  for (const auto &s : sentences) {
    if (s.empty()) throw std::invalid_argument("cannot embed an empty sequence");
  }
  std::vector<std::vector<Vector>> vectors = provider.EmbedSentences(sentences);
  if (vectors.size() != sentences.size()) {
    throw DimensionMismatch("provider returned " +
                            std::to_string(vectors.size()) + " sentences for " +
                            std::to_string(sentences.size()));
  }
  const int dim = provider.dim();
  std::vector<TokenEmbeddings> out(sentences.size());
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (vectors[s].size() != sentences[s].size()) {
      throw DimensionMismatch("token count mismatch in sentence " +
                              std::to_string(s));
    }
    for (Vector &v : vectors[s]) {
      if (static_cast<int>(v.size()) != dim) {
        throw DimensionMismatch("vector of size " + std::to_string(v.size()) +
                                ", expected " + std::to_string(dim));
      }
      Normalize(v);
    }
    out[s].tokens = sentences[s];
    out[s].vectors = std::move(vectors[s]);
  }
  return out;
}

TokenEmbeddings Embed(std::span<const std::string> tokens,
                      EmbeddingProvider &provider) {
  return std::move(EmbedMany({{tokens.begin(), tokens.end()}}, provider)[0]);
}

BertScoreResult BertScore(const TokenEmbeddings &reference,
                          const TokenEmbeddings &candidate) {
  if (reference.vectors.empty() || candidate.vectors.empty()) {
    throw std::invalid_argument("BERTScore needs nonempty inputs");
  }
  const std::size_t m = reference.vectors.size(), n = candidate.vectors.size();
  std::vector<double> best_ref(m, -1.0), best_cand(n, -1.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double c = Cosine(reference.vectors[i], candidate.vectors[j]);
      best_ref[i] = std::max(best_ref[i], c);
      best_cand[j] = std::max(best_cand[j], c);
    }
  }
  BertScoreResult r;
  for (double c : best_cand) r.precision += c;
  for (double c : best_ref) r.recall += c;
  r.precision /= static_cast<double>(n);
  r.recall /= static_cast<double>(m);
  const double sum = r.precision + r.recall;
  r.f1 = sum != 0.0 ? 2 * r.precision * r.recall / sum : 0.0;
  r.f1 = std::clamp(r.f1, -1.0, 1.0);
  r.score = std::max(r.f1, 0.0);
  return r;
}

}  // namespace foleval
