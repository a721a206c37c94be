#ifndef FOLEVAL_IO_H_
#define FOLEVAL_IO_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "foleval/corpus.h"
#include "foleval/ranking.h"
#include "foleval/scoring.h"

namespace foleval {

using Json = nlohmann::json;

// A data file that exists but does not have the expected shape.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string &what) : std::runtime_error(what) {}
};

Json ToJson(const Record &r);
Json ToJson(const ScoreRecord &s);
Json ToJson(const RankVector &r);
Json ToJson(const AlignmentReport &r);

ScoreRecord ScoreRecordFromJson(const Json &j);
RankVector RankVectorFromJson(const Json &j);

// Reads every line of a JSON-lines file. Throws FileNotFound, or DataError
// naming the first bad line.
std::vector<Json> ReadJsonLines(const std::string &path);
std::vector<ScoreRecord> LoadScores(const std::string &path);
std::vector<RankVector> LoadRanks(const std::string &path);

// One compact object per line, creating parent directories as needed.
void WriteJsonLines(const std::string &path, const std::vector<Json> &lines);
void WriteText(const std::string &path, const std::string &text);

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// "# key: value" lines.
std::string ConfigHeader(const ConfigEntries &entries);

// Left-aligned first column, right-aligned others, two spaces apart.
std::string FormatTable(const std::vector<std::string> &header,
                        const std::vector<std::vector<std::string>> &rows);

// Fixed-point with the given number of decimals.
std::string FormatFixed(double value, int decimals = 2);

}  // namespace foleval

#endif  // FOLEVAL_IO_H_
