#include "foleval/io.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace foleval {

Json ToJson(const Record &r) {
  return {{"id", r.id}, {"nl", r.nl}, {"gold", r.gold}, {"samples", r.samples}};
}

Json ToJson(const ScoreRecord &s) {
  return {{"record_id", s.record_id}, {"metric", s.metric},
          {"sample_index", s.sample_index}, {"raw", s.raw},
          {"normalized", s.normalized}, {"flags", s.flags}};
}

Json ToJson(const RankVector &r) {
  return {{"record_id", r.record_id}, {"ranker", r.ranker}, {"ranks", r.ranks}};
}

Json ToJson(const AlignmentReport &r) {
  return {{"ranker_a", r.ranker_a}, {"ranker_b", r.ranker_b},
          {"rmse", r.rmse},         {"n_pairs", r.n_pairs},
          {"excluded", r.excluded}, {"pooling", "pooled"}};
}

ScoreRecord ScoreRecordFromJson(const Json &j) {
  ScoreRecord s;
  s.record_id = j.at("record_id").get<std::string>();
  s.metric = j.at("metric").get<std::string>();
  s.sample_index = j.at("sample_index").get<int>();
  s.raw = j.at("raw").get<double>();
  s.normalized = j.at("normalized").get<double>();
  if (j.contains("flags")) s.flags = j["flags"].get<std::vector<std::string>>();
  return s;
}

RankVector RankVectorFromJson(const Json &j) {
  RankVector r;
  r.record_id = j.at("record_id").get<std::string>();
  r.ranker = j.at("ranker").get<std::string>();
  r.ranks = j.at("ranks").get<std::vector<int>>();
  return r;
}

std::vector<Json> ReadJsonLines(const std::string &path) {
  const std::string text = ReadFile(path);
  std::vector<Json> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::exception &e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

namespace {

template <typename T, typename Fn>
std::vector<T> ConvertLines(const std::string &path, Fn convert) {
  std::vector<T> out;
  int k = 0;
  for (const Json &j : ReadJsonLines(path)) {
    ++k;
    try {
      out.push_back(convert(j));
    } catch (const Json::exception &e) {
      throw DataError(path + ": object " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<ScoreRecord> LoadScores(const std::string &path) {
  return ConvertLines<ScoreRecord>(path, ScoreRecordFromJson);
}

std::vector<RankVector> LoadRanks(const std::string &path) {
  return ConvertLines<RankVector>(path, RankVectorFromJson);
}

void WriteText(const std::string &path, const std::string &text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void WriteJsonLines(const std::string &path, const std::vector<Json> &lines) {
  std::string text;
  for (const Json &j : lines) {
    text += j.dump();
    text += '\n';
  }
  WriteText(path, text);
}

std::string ConfigHeader(const ConfigEntries &entries) {
  std::string out;
  for (const auto &[key, value] : entries) out += "# " + key + ": " + value + "\n";
  return out;
}

std::string FormatTable(const std::vector<std::string> &header,
                        const std::vector<std::vector<std::string>> &rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string> &row) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  };
  measure(header);
  for (const auto &row : rows) measure(row);
  auto render = [&](const std::vector<std::string> &row) {
    std::string line;
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < row.size() ? row[c] : "";
      const std::string pad(width[c] - cell.size(), ' ');
      if (c > 0) line += "  ";
      line += c == 0 ? cell + pad : pad + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
  };
  std::string out = render(header);
  for (const auto &row : rows) out += render(row);
  return out;
}

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace foleval
