#ifndef FOLEVAL_CORPUS_H_
#define FOLEVAL_CORPUS_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace foleval {

struct Record {
  std::string id;
  std::string nl;
  std::string gold;
  // Deduplicated, first occurrence kept.
  std::vector<std::string> samples;
};

enum class CorpusFormat { kRecords, kFlatFol };

// Parses "records" or "flat-fol". Throws std::invalid_argument otherwise.
CorpusFormat CorpusFormatFromName(std::string_view name);

class FileNotFound : public std::runtime_error {
 public:
  explicit FileNotFound(const std::string &path)
      : std::runtime_error("FileNotFound: " + path), path_(path) {}
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

struct SchemaError {
  int line = 0;  // 1-based
  std::string message;
};

struct LoadResult {
  std::vector<Record> records;
  std::vector<SchemaError> errors;
};

// Reads one JSON object per line. Blank lines are skipped; malformed lines
// are reported in errors and left out of records. Throws FileNotFound.
LoadResult LoadCorpus(const std::string &path, CorpusFormat format);

// Same, from text already in memory.
LoadResult ParseCorpus(std::string_view text, CorpusFormat format);

// Drops exact duplicate strings, keeping the first of each.
std::vector<std::string> Deduplicate(const std::vector<std::string> &samples);

// Whole file as a string. Throws FileNotFound.
std::string ReadFile(const std::string &path);

}  // namespace foleval

#endif  // FOLEVAL_CORPUS_H_
