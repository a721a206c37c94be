#include "foleval/triple_graph.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace foleval {

namespace {

class GraphBuilder {
 public:
  TripleGraph Build(const Formula &f) {
    Visit(f);
    return std::move(graph_);
  }

 private:
  int NewNode(GraphNodeType type) {
    graph_.nodes.push_back(type);
    return static_cast<int>(graph_.nodes.size()) - 1;
  }

  void AddLiteral(int source, std::string label, std::string literal) {
    graph_.triples.push_back({source, std::move(label), -1, std::move(literal)});
  }

  void AddEdge(int source, std::string label, int target) {
    graph_.triples.push_back({source, std::move(label), target, {}});
  }

  static std::string ArgLabel(std::size_t k) { return "arg" + std::to_string(k); }

  int Visit(const Formula &f) {
    if (f.kind() == FormulaKind::kAtom) {
      int a = NewNode(GraphNodeType::kAtom);
      AddLiteral(a, "pred", f.name());
      for (std::size_t k = 0; k < f.terms().size(); ++k) {
        AddTermEdge(a, ArgLabel(k), f.terms()[k]);
      }
      return a;
    }
    int n = NewNode(GraphNodeType::kOperator);
    AddLiteral(n, "op", std::string(OperatorName(f.kind())));
    if (f.kind() == FormulaKind::kEquals) {
      AddTermEdge(n, ArgLabel(0), f.terms()[0]);
      AddTermEdge(n, ArgLabel(1), f.terms()[1]);
      return n;
    }
    if (IsQuantifier(f.kind())) {
      int v = NewNode(GraphNodeType::kVariable);
      AddEdge(n, "binds", v);
      scope_.emplace_back(f.name(), v);
      int body = Visit(f.body());
      scope_.pop_back();
      AddEdge(n, ArgLabel(0), body);
      return n;
    }
    for (std::size_t k = 0; k < f.children().size(); ++k) {
      int child = Visit(f.children()[k]);
      AddEdge(n, ArgLabel(k), child);
    }
    return n;
  }

  void AddTermEdge(int source, std::string label, const Term &t) {
    switch (t.kind()) {
      case TermKind::kVariable:
        AddEdge(source, std::move(label), VariableNode(t.name()));
        return;
      case TermKind::kConstant:
        AddLiteral(source, std::move(label), t.name());
        return;
      case TermKind::kFunction: {
        int node = NewNode(GraphNodeType::kFunction);
        AddLiteral(node, "fn", t.name());
        for (std::size_t k = 0; k < t.args().size(); ++k) {
          AddTermEdge(node, ArgLabel(k), t.args()[k]);
        }
        AddEdge(source, std::move(label), node);
        return;
      }
    }
  }

  int VariableNode(const std::string &name) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    auto found = free_.find(name);
    if (found != free_.end()) return found->second;
    int v = NewNode(GraphNodeType::kVariable);
    free_[name] = v;
    return v;
  }

  TripleGraph graph_;
  std::vector<std::pair<std::string, int>> scope_;
  std::map<std::string, int> free_;
};

// Interned view of a pair of graphs for fast matching.
struct PackedTriple {
  int source;
  int label;
  int target;   // -1 for literals
  int literal;  // -1 for node targets
};

class Matcher {
 public:
  // Scores mappings from x's nodes to y's nodes.
  Matcher(const TripleGraph &x, const TripleGraph &y) : x_(x), y_(y) {
    std::unordered_map<std::string, int> strings;
    auto intern = [&](const std::string &s) {
      return strings.emplace(s, static_cast<int>(strings.size())).first->second;
    };
    auto pack = [&](const Triple &t) {
      return PackedTriple{t.source, intern(t.label), t.target,
                          t.target < 0 ? intern(t.literal) : -1};
    };
    for (const Triple &t : x.triples) x_triples_.push_back(pack(t));
    for (const Triple &t : y.triples) y_keys_.insert(Key(pack(t)));
  }

  int Count(const std::vector<int> &mapping) const {
    int matched = 0;
    for (const PackedTriple &t : x_triples_) matched += Matches(t, mapping);
    return matched;
  }

  int Matches(const PackedTriple &t, const std::vector<int> &mapping) const {
    int s = mapping[t.source];
    if (s < 0) return 0;
    if (t.target >= 0) {
      int target = mapping[t.target];
      if (target < 0) return 0;
      return y_keys_.count(Key({s, t.label, target, -1})) ? 1 : 0;
    }
    return y_keys_.count(Key({s, t.label, -1, t.literal})) ? 1 : 0;
  }

  const std::vector<PackedTriple> &x_triples() const { return x_triples_; }
  const TripleGraph &x() const { return x_; }
  const TripleGraph &y() const { return y_; }

 private:
  static std::uint64_t Key(const PackedTriple &t) {
    auto field = [](int v) { return static_cast<std::uint64_t>(v + 1) & 0xFFFF; };
    return field(t.source) << 48 | field(t.label) << 32 | field(t.target) << 16 |
           field(t.literal);
  }

  const TripleGraph &x_;
  const TripleGraph &y_;
  std::vector<PackedTriple> x_triples_;
  std::unordered_set<std::uint64_t> y_keys_;
};

// Depth-first search over all type-respecting partial injections, pruned by
// an upper bound on the triples still undecided.
class ExhaustiveSearch {
 public:
  explicit ExhaustiveSearch(const Matcher &m)
      : m_(m), n_(m.x().mappable_count()) {
    decided_at_.resize(n_);
    for (std::size_t i = 0; i < m.x_triples().size(); ++i) {
      const PackedTriple &t = m.x_triples()[i];
      int level = std::max(t.source, t.target);
      decided_at_[level].push_back(static_cast<int>(i));
    }
    remaining_after_.assign(n_ + 1, 0);
    for (int level = n_ - 1; level >= 0; --level) {
      remaining_after_[level] =
          remaining_after_[level + 1] + static_cast<int>(decided_at_[level].size());
    }
    mapping_.assign(n_, -1);
    y_used_.assign(m.y().mappable_count(), false);
  }

  std::vector<int> Run(int *best_matched) {
    best_mapping_ = mapping_;
    Search(0, 0);
    *best_matched = best_;
    return best_mapping_;
  }

 private:
  void Search(int level, int matched) {
    if (level == n_) {
      if (matched > best_) {
        best_ = matched;
        best_mapping_ = mapping_;
      }
      return;
    }
    if (matched + remaining_after_[level] <= best_) return;
    const GraphNodeType type = m_.x().nodes[level];
    for (int j = 0; j < m_.y().mappable_count(); ++j) {
      if (y_used_[j] || m_.y().nodes[j] != type) continue;
      mapping_[level] = j;
      y_used_[j] = true;
      Search(level + 1, matched + Gain(level));
      y_used_[j] = false;
    }
    mapping_[level] = -1;
    Search(level + 1, matched);
  }

  int Gain(int level) const {
    int gain = 0;
    for (int idx : decided_at_[level]) {
      gain += m_.Matches(m_.x_triples()[idx], mapping_);
    }
    return gain;
  }

  const Matcher &m_;
  int n_;
  std::vector<std::vector<int>> decided_at_;
  std::vector<int> remaining_after_;
  std::vector<int> mapping_;
  std::vector<bool> y_used_;
  std::vector<int> best_mapping_;
  int best_ = -1;
};

std::string LabelOf(const TripleGraph &g, int node) {
  for (const Triple &t : g.triples) {
    if (t.source == node && t.target < 0 &&
        (t.label == "op" || t.label == "pred" || t.label == "fn")) {
      return t.literal;
    }
  }
  return {};
}

// Maps nodes with equal type and label in order of creation, then fills in
// leftovers of the same type.
std::vector<int> LabelInit(const TripleGraph &x, const TripleGraph &y) {
  std::vector<int> mapping(x.mappable_count(), -1);
  std::vector<bool> used(y.mappable_count(), false);
  std::vector<std::string> y_labels(y.mappable_count());
  for (int j = 0; j < y.mappable_count(); ++j) y_labels[j] = LabelOf(y, j);
  for (int i = 0; i < x.mappable_count(); ++i) {
    std::string label = LabelOf(x, i);
    for (int j = 0; j < y.mappable_count(); ++j) {
      if (!used[j] && y.nodes[j] == x.nodes[i] && y_labels[j] == label) {
        mapping[i] = j;
        used[j] = true;
        break;
      }
    }
  }
  for (int i = 0; i < x.mappable_count(); ++i) {
    if (mapping[i] >= 0) continue;
    for (int j = 0; j < y.mappable_count(); ++j) {
      if (!used[j] && y.nodes[j] == x.nodes[i]) {
        mapping[i] = j;
        used[j] = true;
        break;
      }
    }
  }
  return mapping;
}

std::vector<int> RandomInit(const TripleGraph &x, const TripleGraph &y,
                            std::mt19937_64 &rng) {
  std::vector<int> mapping(x.mappable_count(), -1);
  std::vector<bool> used(y.mappable_count(), false);
  std::vector<int> order(x.mappable_count());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i : order) {
    std::vector<int> options;
    for (int j = 0; j < y.mappable_count(); ++j) {
      if (!used[j] && y.nodes[j] == x.nodes[i]) options.push_back(j);
    }
    if (options.empty()) continue;
    int j = options[rng() % options.size()];
    mapping[i] = j;
    used[j] = true;
  }
  return mapping;
}

// Maps both ends of an x edge onto both ends of a same-label y edge,
// evicting current owners. Escapes optima where one triple needs two nodes.
bool PairMove(const Matcher &m, std::vector<int> *mapping, int *current) {
  const TripleGraph &x = m.x();
  const TripleGraph &y = m.y();
  int best = *current;
  std::vector<int> best_mapping;
  for (const Triple &tx : x.triples) {
    if (tx.target < 0) continue;
    for (const Triple &ty : y.triples) {
      if (ty.target < 0 || ty.label != tx.label) continue;
      if (x.nodes[tx.source] != y.nodes[ty.source] ||
          x.nodes[tx.target] != y.nodes[ty.target]) {
        continue;
      }
      if (tx.source == tx.target || ty.source == ty.target) continue;
      if ((*mapping)[tx.source] == ty.source && (*mapping)[tx.target] == ty.target) {
        continue;
      }
      std::vector<int> trial = *mapping;
      for (int &t : trial) {
        if (t == ty.source || t == ty.target) t = -1;
      }
      trial[tx.source] = ty.source;
      trial[tx.target] = ty.target;
      const int score = m.Count(trial);
      if (score > best) {
        best = score;
        best_mapping = std::move(trial);
      }
    }
  }
  if (best_mapping.empty()) return false;
  *mapping = std::move(best_mapping);
  *current = best;
  return true;
}

// Steepest-ascent hill climbing over reassign, unmap and swap moves, with
// pair moves when those stall.
int Climb(const Matcher &m, std::vector<int> *mapping) {
  const TripleGraph &x = m.x();
  const TripleGraph &y = m.y();
  int current = m.Count(*mapping);
  while (true) {
    std::vector<int> owner(y.mappable_count(), -1);
    for (int i = 0; i < x.mappable_count(); ++i) {
      if ((*mapping)[i] >= 0) owner[(*mapping)[i]] = i;
    }
    int best = current;
    int best_i = -1, best_j = -1, best_k = -1;
    std::vector<int> trial = *mapping;
    for (int i = 0; i < x.mappable_count(); ++i) {
      const int old = trial[i];
      // Reassign i to a free node, or unmap it.
      for (int j = -1; j < y.mappable_count(); ++j) {
        if (j == old) continue;
        if (j >= 0 && (owner[j] >= 0 || y.nodes[j] != x.nodes[i])) continue;
        trial[i] = j;
        int score = m.Count(trial);
        if (score > best) {
          best = score;
          best_i = i, best_j = j, best_k = -1;
        }
      }
      trial[i] = old;
      // Swap targets with another node of the same type.
      for (int k = i + 1; k < x.mappable_count(); ++k) {
        if (x.nodes[k] != x.nodes[i] || trial[k] == trial[i]) continue;
        std::swap(trial[i], trial[k]);
        int score = m.Count(trial);
        if (score > best) {
          best = score;
          best_i = i, best_j = -2, best_k = k;
        }
        std::swap(trial[i], trial[k]);
      }
    }
    if (best_i < 0) {
      if (!PairMove(m, mapping, &current)) return current;
      continue;
    }
    if (best_k >= 0) {
      std::swap((*mapping)[best_i], (*mapping)[best_k]);
    } else {
      (*mapping)[best_i] = best_j;
    }
    current = best;
  }
}

std::string Serialize(const TripleGraph &g) {
  std::ostringstream out;
  for (GraphNodeType t : g.nodes) out << static_cast<int>(t) << ' ';
  for (const Triple &t : g.triples) {
    out << t.source << ' ' << t.label << ' ' << t.target << ' ' << t.literal
        << ';';
  }
  return out.str();
}

// Deterministic order on graphs so SmatchScore(a, b) and SmatchScore(b, a)
// run the same search.
bool SearchFromFirst(const TripleGraph &a, const TripleGraph &b) {
  auto key_a = std::make_tuple(a.mappable_count(), a.triples.size());
  auto key_b = std::make_tuple(b.mappable_count(), b.triples.size());
  if (key_a != key_b) return key_a < key_b;
  return Serialize(a) <= Serialize(b);
}

}  // namespace

TripleGraph FolToTriples(const Formula &f) { return GraphBuilder().Build(f); }

int CountMatchedTriples(const TripleGraph &a, const TripleGraph &b,
                        const std::vector<int> &mapping) {
  return Matcher(a, b).Count(mapping);
}

AlignmentResult SmatchScore(const TripleGraph &a, const TripleGraph &b,
                            const SmatchOptions &options) {
  const bool forward = SearchFromFirst(a, b);
  const TripleGraph &x = forward ? a : b;
  const TripleGraph &y = forward ? b : a;
  Matcher matcher(x, y);

  bool exhaustive;
  switch (options.mode) {
    case SmatchOptions::Mode::kExhaustive:
      exhaustive = true;
      break;
    case SmatchOptions::Mode::kHillClimb:
      exhaustive = false;
      break;
    default:
      exhaustive = std::min(a.mappable_count(), b.mappable_count()) <=
                   options.exhaustive_cutoff;
  }

  std::vector<int> best_mapping;
  int best = -1;
  if (exhaustive) {
    best_mapping = ExhaustiveSearch(matcher).Run(&best);
  } else {
    for (int r = 0; r < std::max(options.restarts, 1); ++r) {
      std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(r));
      std::vector<int> mapping = r == 0 ? LabelInit(x, y) : RandomInit(x, y, rng);
      int score = Climb(matcher, &mapping);
      if (score > best) {
        best = score;
        best_mapping = std::move(mapping);
      }
    }
  }

  AlignmentResult result;
  result.exhaustive = exhaustive;
  result.matched = std::max(best, 0);
  if (forward) {
    result.mapping = std::move(best_mapping);
  } else {
    result.mapping.assign(a.mappable_count(), -1);
    for (int i = 0; i < static_cast<int>(best_mapping.size()); ++i) {
      if (best_mapping[i] >= 0) result.mapping[best_mapping[i]] = i;
    }
  }
  if (!b.triples.empty()) {
    result.precision = result.matched / static_cast<double>(b.triples.size());
  }
  if (!a.triples.empty()) {
    result.recall = result.matched / static_cast<double>(a.triples.size());
  }
  const double sum = result.precision + result.recall;
  result.f1 = sum > 0 ? 2 * result.precision * result.recall / sum : 0.0;
  return result;
}

}  // namespace foleval
