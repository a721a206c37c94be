#ifndef FOLEVAL_JUDGE_H_
#define FOLEVAL_JUDGE_H_

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "foleval/corpus.h"
#include "foleval/ranking.h"

namespace foleval {

inline constexpr char kJudgeRanker[] = "judge";

// Built-in prompt with {label}, {sample1}, {sample2} and {sample3}
// placeholders.
std::string_view DefaultJudgeTemplate();

// Fills the template. Throws std::invalid_argument unless the record has
// exactly three samples.
std::string JudgePrompt(const Record &record, std::string_view tmpl);

// The first bracketed triple of integers in the reply, if each is 1, 2 or 3.
std::optional<std::array<int, 3>> ParseJudgeReply(std::string_view reply);

class JudgeUnreachable : public std::runtime_error {
 public:
  explicit JudgeUnreachable(const std::string &what)
      : std::runtime_error("JudgeUnreachable: " + what) {}
};

// Sends one prompt and returns the reply text.
class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;
  virtual std::string Complete(const std::string &prompt) = 0;
};

struct HttpJudgeOptions {
  // Full URL of a chat-completions endpoint, e.g.
  // https://host/v1/chat/completions.
  std::string endpoint;
  std::string model;
  std::string api_key;  // sent as a Bearer token when nonempty
  int timeout_seconds = 120;
};

class HttpJudge : public JudgeBackend {
 public:
  explicit HttpJudge(HttpJudgeOptions options);
  std::string Complete(const std::string &prompt) override;

 private:
  HttpJudgeOptions options_;
  std::string base_;
  std::string path_;
};

struct JudgeOutcome {
  RankVector ranks;  // ranks empty when the reply could not be parsed
  int attempts = 0;
  std::vector<std::string> replies;
};

// Asks the backend; an unparseable reply is retried once, after which the
// record is marked missing. JudgeUnreachable propagates.
JudgeOutcome JudgeRank(const Record &record, JudgeBackend &backend,
                       std::string_view tmpl = DefaultJudgeTemplate());

// Offline rankings keyed by record id, from lines of
// {"record_id": ..., "ranks": [r1, r2, r3]}.
struct OfflineJudge {
  std::map<std::string, std::vector<int>> ranks;
  std::vector<std::string> order;  // record ids in file order
  std::vector<SchemaError> errors;
};

OfflineJudge LoadOfflineJudge(const std::string &path);
OfflineJudge ParseOfflineJudge(std::string_view text);

// The stored entry verbatim, or an empty rank list when there is none.
RankVector JudgeRankOffline(const Record &record, const OfflineJudge &offline);

}  // namespace foleval

#endif  // FOLEVAL_JUDGE_H_
