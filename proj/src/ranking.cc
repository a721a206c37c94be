#include "foleval/ranking.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace foleval {

std::vector<int> Rank(std::span<const double> scores, double tolerance) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return scores[x] > scores[y]; });
  std::vector<int> ranks(scores.size());
  int group_rank = 1;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (pos > 0 && scores[order[pos - 1]] - scores[order[pos]] > tolerance) {
      group_rank = static_cast<int>(pos) + 1;
    }
    ranks[order[pos]] = group_rank;
  }
  return ranks;
}

std::vector<RankVector> RankScores(const std::vector<ScoreRecord> &scores,
                                   const std::string &metric) {
  std::vector<std::string> ids;
  std::map<std::string, std::map<int, double>> by_record;
  for (const ScoreRecord &s : scores) {
    if (s.metric != metric) continue;
    auto [it, fresh] = by_record.try_emplace(s.record_id);
    if (fresh) ids.push_back(s.record_id);
    it->second[s.sample_index] = s.normalized;
  }
  std::vector<RankVector> out;
  for (const std::string &id : ids) {
    std::vector<double> values;
    for (const auto &[index, value] : by_record[id]) values.push_back(value);
    out.push_back({id, metric, Rank(values)});
  }
  return out;
}

double Rmse(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.empty()) {
    throw LengthMismatch(std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

AlignmentReport RmseAlignment(const std::vector<RankVector> &a,
                              const std::vector<RankVector> &b) {
  auto index = [](const std::vector<RankVector> &side, const char *name) {
    std::map<std::string, const RankVector *> out;
    for (const RankVector &r : side) {
      if (!out.emplace(r.record_id, &r).second) {
        throw CoverageMismatch(std::string("duplicate record ") + r.record_id +
                               " in " + name);
      }
    }
    return out;
  };
  std::map<std::string, const RankVector *> ia = index(a, "a"), ib = index(b, "b");
  for (const auto &[id, r] : ia) {
    if (!ib.count(id)) throw CoverageMismatch("record " + id + " missing from b");
  }
  for (const auto &[id, r] : ib) {
    if (!ia.count(id)) throw CoverageMismatch("record " + id + " missing from a");
  }

  AlignmentReport report;
  if (!a.empty()) report.ranker_a = a.front().ranker;
  if (!b.empty()) report.ranker_b = b.front().ranker;
  double sum = 0.0;
  for (const auto &[id, ra] : ia) {
    const RankVector *rb = ib.at(id);
    if (ra->ranks.empty() || rb->ranks.empty()) {
      ++report.excluded;
      continue;
    }
    if (ra->ranks.size() != rb->ranks.size()) {
      throw CoverageMismatch("record " + id + " has " +
                             std::to_string(ra->ranks.size()) + " vs " +
                             std::to_string(rb->ranks.size()) + " samples");
    }
    for (std::size_t k = 0; k < ra->ranks.size(); ++k) {
      const double d = ra->ranks[k] - rb->ranks[k];
      sum += d * d;
    }
    report.n_pairs += static_cast<int>(ra->ranks.size());
  }
  if (report.n_pairs > 0) report.rmse = std::sqrt(sum / report.n_pairs);
  return report;
}

double Disagreement(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw LengthMismatch(std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

}  // namespace foleval
