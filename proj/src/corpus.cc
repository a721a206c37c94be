#include "foleval/corpus.h"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace foleval {

namespace {

using nlohmann::json;

std::string RequireString(const json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(std::string("missing \"") + key + "\"");
  if (!it->is_string()) throw std::invalid_argument(std::string("\"") + key + "\" is not a string");
  return it->get<std::string>();
}

Record ParseRecord(const json &obj, CorpusFormat format) {
  if (!obj.is_object()) throw std::invalid_argument("line is not a JSON object");
  Record r;
  r.id = RequireString(obj, "id");
  r.gold = RequireString(obj, "gold");
  if (r.gold.empty()) throw std::invalid_argument("\"gold\" is empty");
  if (format == CorpusFormat::kFlatFol) return r;
  r.nl = RequireString(obj, "nl");
  auto it = obj.find("samples");
  if (it == obj.end()) throw std::invalid_argument("missing \"samples\"");
  if (!it->is_array()) throw std::invalid_argument("\"samples\" is not an array");
  std::vector<std::string> samples;
  for (const json &s : *it) {
    if (!s.is_string()) throw std::invalid_argument("sample is not a string");
    samples.push_back(s.get<std::string>());
  }
  r.samples = Deduplicate(samples);
  return r;
}

}  // namespace

CorpusFormat CorpusFormatFromName(std::string_view name) {
  if (name == "records") return CorpusFormat::kRecords;
  if (name == "flat-fol") return CorpusFormat::kFlatFol;
  throw std::invalid_argument("unknown corpus format: " + std::string(name));
}

std::vector<std::string> Deduplicate(const std::vector<std::string> &samples) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const std::string &s : samples) {
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

LoadResult ParseCorpus(std::string_view text, CorpusFormat format) {
  LoadResult result;
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
      result.records.push_back(ParseRecord(json::parse(line), format));
    } catch (const json::exception &e) {
      result.errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
    } catch (const std::invalid_argument &e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

LoadResult LoadCorpus(const std::string &path, CorpusFormat format) {
  return ParseCorpus(ReadFile(path), format);
}

}  // namespace foleval
