#ifndef FOLEVAL_TRIPLE_GRAPH_H_
#define FOLEVAL_TRIPLE_GRAPH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "foleval/formula.h"

namespace foleval {

// Graph nodes. All of these are mappable; names (constants, predicate and
// operator labels) are literals and act as fixed nodes.
enum class GraphNodeType { kOperator, kAtom, kVariable, kFunction };

struct Triple {
  int source = 0;
  std::string label;
  int target = -1;       // node id, or -1 when the target is a literal
  std::string literal;   // set when target == -1

  bool operator==(const Triple &other) const = default;
};

struct TripleGraph {
  std::vector<GraphNodeType> nodes;
  std::vector<Triple> triples;

  int mappable_count() const { return static_cast<int>(nodes.size()); }
};

// Encoding:
//   operator node n:  (n, op, <name>) and (n, argK, child) per child
//   quantifier n:     additionally (n, binds, v) for its variable node v
//   atom a:           (a, pred, <name>) and (a, argK, term)
//   function term t:  (t, fn, <name>) and (t, argK, term)
// Constants are literal targets. Each quantifier introduces one variable
// node; each distinct free variable gets one node too.
TripleGraph FolToTriples(const Formula &f);

struct AlignmentResult {
  // mapping[i] is the node of b that node i of a maps to, or -1.
  std::vector<int> mapping;
  int matched = 0;
  double precision = 0.0;  // matched / |b.triples|
  double recall = 0.0;     // matched / |a.triples|
  double f1 = 0.0;
  bool exhaustive = false;
};

struct SmatchOptions {
  int restarts = 4;
  std::uint64_t seed = 17;
  // Exhaustive search when the smaller graph has at most this many mappable
  // nodes.
  int exhaustive_cutoff = 8;
  // Force one strategy regardless of size; used to compare the two.
  enum class Mode { kAuto, kExhaustive, kHillClimb } mode = Mode::kAuto;
};

// Best triple overlap between a (gold) and b (candidate) over one-to-one
// mappings that only pair nodes of the same type.
AlignmentResult SmatchScore(const TripleGraph &a, const TripleGraph &b,
                            const SmatchOptions &options = {});

// Number of a's triples matched in b under the given mapping.
int CountMatchedTriples(const TripleGraph &a, const TripleGraph &b,
                        const std::vector<int> &mapping);

}  // namespace foleval

#endif  // FOLEVAL_TRIPLE_GRAPH_H_
