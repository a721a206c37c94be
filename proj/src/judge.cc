#include "foleval/judge.h"

#include <regex>

#include <httplib.h>
#include <json.hpp>

#include "foleval/judge_template.h"

namespace foleval {

namespace {

using nlohmann::json;

}  // namespace

std::string_view DefaultJudgeTemplate() { return kJudgeTemplate; }

std::string JudgePrompt(const Record &record, std::string_view tmpl) {
  if (record.samples.size() != 3) {
    throw std::invalid_argument("judge needs exactly 3 samples, record " +
                                record.id + " has " +
                                std::to_string(record.samples.size()));
  }
  // Placeholders are filled in one pass so formula text that happens to
  // contain "{sample2}" is not expanded again.
  static const std::regex kPlaceholder(R"(\{(label|sample1|sample2|sample3)\})");
  std::string out;
  std::string text(tmpl);
  auto begin = std::sregex_iterator(text.begin(), text.end(), kPlaceholder);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out.append(text, last, it->position() - last);
    const std::string key = (*it)[1];
    out += key == "label" ? record.gold : record.samples[key.back() - '1'];
    last = it->position() + it->length();
  }
  out.append(text, last);
  return out;
}

std::optional<std::array<int, 3>> ParseJudgeReply(std::string_view reply) {
  static const std::regex kTriple(R"(\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\])");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(reply.begin(), reply.end(), m, kTriple)) {
    return std::nullopt;
  }
  std::array<int, 3> ranks;
  for (int k = 0; k < 3; ++k) {
    const std::string digits = m[k + 1];
    if (digits.size() != 1 || digits[0] < '1' || digits[0] > '3') {
      return std::nullopt;
    }
    ranks[k] = digits[0] - '0';
  }
  return ranks;
}

HttpJudge::HttpJudge(HttpJudgeOptions options) : options_(std::move(options)) {
  const std::size_t scheme = options_.endpoint.find("://");
  if (scheme == std::string::npos) {
    throw std::invalid_argument("judge endpoint must be a URL: " +
                                options_.endpoint);
  }
  const std::size_t slash = options_.endpoint.find('/', scheme + 3);
  base_ = options_.endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : options_.endpoint.substr(slash);
}

std::string HttpJudge::Complete(const std::string &prompt) {
  httplib::Client client(base_);
  client.set_connection_timeout(options_.timeout_seconds, 0);
  client.set_read_timeout(options_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }
  json request = {
      {"model", options_.model},
      {"temperature", 0},
      {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
  };
  httplib::Result res =
      client.Post(path_, headers, request.dump(), "application/json");
  if (!res) {
    throw JudgeUnreachable(options_.endpoint + ": " +
                           httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw JudgeUnreachable(options_.endpoint + " returned " +
                           std::to_string(res->status));
  }
  // Anything that is not a chat-completions body is handed back as text and
  // left to the reply parser.
  json body = json::parse(res->body, nullptr, false);
  if (!body.is_discarded()) {
    try {
      return body.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception &) {
    }
  }
  return res->body;
}

JudgeOutcome JudgeRank(const Record &record, JudgeBackend &backend,
                       std::string_view tmpl) {
  const std::string prompt = JudgePrompt(record, tmpl);
  JudgeOutcome outcome;
  outcome.ranks.record_id = record.id;
  outcome.ranks.ranker = kJudgeRanker;
  for (int attempt = 0; attempt < 2; ++attempt) {
    ++outcome.attempts;
    outcome.replies.push_back(backend.Complete(prompt));
    if (auto ranks = ParseJudgeReply(outcome.replies.back())) {
      outcome.ranks.ranks.assign(ranks->begin(), ranks->end());
      break;
    }
  }
  return outcome;
}

OfflineJudge ParseOfflineJudge(std::string_view text) {
  OfflineJudge out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      json obj = json::parse(line);
      std::string id = obj.at("record_id").get<std::string>();
      std::vector<int> ranks = obj.at("ranks").get<std::vector<int>>();
      if (!out.ranks.count(id)) out.order.push_back(id);
      out.ranks[id] = std::move(ranks);
    } catch (const json::exception &e) {
      out.errors.push_back({line_no, e.what()});
    }
  }
  return out;
}

OfflineJudge LoadOfflineJudge(const std::string &path) {
  return ParseOfflineJudge(ReadFile(path));
}

RankVector JudgeRankOffline(const Record &record, const OfflineJudge &offline) {
  RankVector out{record.id, kJudgeRanker, {}};
  auto it = offline.ranks.find(record.id);
  if (it != offline.ranks.end()) out.ranks = it->second;
  return out;
}

}  // namespace foleval
