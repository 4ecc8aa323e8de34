#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "gtrace/core.hpp"

namespace gtrace {

// ---------------------------------------------------------------------------
// DFS codes over graphs with vertex labels and an ordered edge color.
// Plain edge-labeled graphs put the label in color[0]; skeleton patterns use
// {interstate, kind rank, label}.

using EdgeColor = std::array<int, 3>;

struct DfsTuple {
  int from = 0;
  int to = 0;
  int from_label = 0;
  int to_label = 0;
  EdgeColor color{};

  bool forward() const { return from < to; }
  bool operator==(const DfsTuple&) const = default;
};

using DfsCode = std::vector<DfsTuple>;

// gSpan's DFS lexicographic order on single tuples and on whole codes.
bool tuple_less(const DfsTuple& a, const DfsTuple& b);
bool code_less(const DfsCode& a, const DfsCode& b);

struct CodeGraph {
  struct Edge {
    int a = 0;
    int b = 0;
    EdgeColor color{};
  };
  std::vector<int> vertex_labels;
  std::vector<Edge> edges;

  int add_vertex(int label);
  void add_edge(int a, int b, EdgeColor color);
  // (neighbor, edge index) lists.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;
};

// Minimum DFS code of a connected graph. A single vertex gives an empty code.
DfsCode min_dfs_code(const CodeGraph& g);
CodeGraph graph_of(const DfsCode& code);
bool is_min(const DfsCode& code);
// DFS indices on the rightmost path, rightmost vertex first, root last.
std::vector<int> rightmost_path(const DfsCode& code);
int vertex_count(const DfsCode& code);

// ---------------------------------------------------------------------------
// Codes for transformation sequences.

struct CodeTuple {
  int u = 0;
  int u2 = 0;  // 0 for vertex rules
  Label label;
  TrKind kind = TrKind::vi;
  int interstate = 0;

  bool operator==(const CodeTuple&) const = default;
};

using Code = std::vector<CodeTuple>;

// Linear order on rules: interstate, kind rank, target, label. Edge targets
// compare as forward DFS edges (higher endpoint first, then lower endpoint
// descending), vertex targets by id.
std::strong_ordering tr_order(const TransformationRule& a, const TransformationRule& b);
std::strong_ordering tuple_order(const CodeTuple& a, const CodeTuple& b);
bool code_precedes(const Code& a, const Code& b);

using VertexAssignment = std::map<VertexId, int>;

// Every numbering of the union graph's vertices in depth-first discovery
// order (all roots, all neighbor orders). Requires a connected union graph.
std::vector<VertexAssignment> dfs_assignments(const UnionGraph& g);

// Rules renamed by `assignment`, interstates renumbered densely, sorted by
// tr_order. Throws if `s` is not relevant.
Code code_of(const TransformationSequence& s, const VertexAssignment& assignment);
Code min_code(const TransformationSequence& s);
// True iff `s` read with its own vertex ids already is the minimal code.
bool is_canonical(const TransformationSequence& s);

// ---------------------------------------------------------------------------
// Isomorphism-invariant identity for any pattern (relevant or not): equal
// keys iff equal up to a vertex bijection and order-preserving renumbering of
// interstates.

using CanonicalKey = std::vector<std::int32_t>;

struct CanonicalForm {
  CanonicalKey key;
  TransformationSequence sequence;  // representative with vertices 1..n
};

CanonicalForm canonical_form(const TransformationSequence& s);
CanonicalKey canonical_key(const TransformationSequence& s);

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept;
};

}  // namespace gtrace
