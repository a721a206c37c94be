#ifndef FOLEVAL_EMBEDDING_H_
#define FOLEVAL_EMBEDDING_H_

#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace foleval {

using Vector = std::vector<double>;

class ProviderUnavailable : public std::runtime_error {
 public:
  explicit ProviderUnavailable(const std::string &what)
      : std::runtime_error("ProviderUnavailable: " + what) {}
};

class DimensionMismatch : public std::runtime_error {
 public:
  explicit DimensionMismatch(const std::string &what)
      : std::runtime_error("DimensionMismatch: " + what) {}
};

// Turns token sequences into one vector per token. Implementations must be
// safe to call from several threads at once.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string kind() const = 0;
  virtual int dim() = 0;
  // Short description for report headers.
  virtual std::string Describe() = 0;

  // One list of vectors per sentence, one vector per token. Vectors need not
  // be normalized.
  virtual std::vector<std::vector<Vector>> EmbedSentences(
      const std::vector<std::vector<std::string>> &sentences) = 0;
};

// Hashed character-trigram counts. Each token is padded as "#token#" and
// split into codepoint trigrams; each trigram is hashed with 32-bit FNV-1a
// into one of dim buckets.
class FallbackEmbedder : public EmbeddingProvider {
 public:
  static constexpr int kDefaultDim = 256;

  explicit FallbackEmbedder(int dim = kDefaultDim);

  std::string kind() const override { return "fallback"; }
  int dim() override { return dim_; }
  std::string Describe() override;
  std::vector<std::vector<Vector>> EmbedSentences(
      const std::vector<std::vector<std::string>> &sentences) override;

  Vector EmbedToken(const std::string &token) const;

 private:
  int dim_;
};

struct RemoteEmbedderOptions {
  std::string endpoint;  // e.g. http://127.0.0.1:8765
  std::string model;
  int batch_size = 32;
  int max_in_flight = 4;
  // Expected dimension; 0 accepts whatever the health probe reports.
  int expected_dim = 0;
  int timeout_seconds = 60;
};

// Client for the HTTP embedding service: GET /health, then POST /embed in
// batches. At most max_in_flight requests are outstanding across all threads.
class RemoteEmbedder : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(RemoteEmbedderOptions options);

  std::string kind() const override { return "remote"; }
  int dim() override;
  std::string Describe() override;
  std::vector<std::vector<Vector>> EmbedSentences(
      const std::vector<std::vector<std::string>> &sentences) override;

  // Probes /health once; later calls return the cached answer. Throws
  // ProviderUnavailable or DimensionMismatch.
  void EnsureHealthy();

 private:
  std::vector<std::vector<Vector>> PostBatch(
      const std::vector<std::vector<std::string>> &batch);

  RemoteEmbedderOptions options_;
  std::counting_semaphore<> in_flight_;
  std::mutex health_mu_;
  std::optional<int> dim_;
  std::string served_model_;
};

// A token sequence with one unit-norm vector per token.
struct TokenEmbeddings {
  std::vector<std::string> tokens;
  std::vector<Vector> vectors;
};

// Throws std::invalid_argument on empty input, and DimensionMismatch when
// the provider returns vectors of the wrong count or size.
TokenEmbeddings Embed(std::span<const std::string> tokens,
                      EmbeddingProvider &provider);

std::vector<TokenEmbeddings> EmbedMany(
    const std::vector<std::vector<std::string>> &sentences,
    EmbeddingProvider &provider);

// Scales v to unit L2 norm. A zero vector is left as is.
void Normalize(Vector &v);

// Dot product of two unit vectors, clamped to [-1, 1]. Bitwise identical
// vectors give exactly 1.
double Cosine(const Vector &a, const Vector &b);

struct BertScoreResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double score = 0.0;  // max(f1, 0)
};

// Greedy matching: each candidate token takes its best cosine against the
// reference (precision) and vice versa (recall). No idf weights and no
// baseline rescaling.
BertScoreResult BertScore(const TokenEmbeddings &reference,
                          const TokenEmbeddings &candidate);

}  // namespace foleval

#endif  // FOLEVAL_EMBEDDING_H_
