#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gtrace/canonical.hpp"
#include "gtrace/core.hpp"
#include "gtrace/matcher.hpp"
#include "gtrace/mining.hpp"

namespace gtrace {

// A data sequence cut down to what can extend a skeleton under one
// embedding: vertex rules on mapped vertices, plus the occurrences of the
// skeleton rules and later rules on the same edges.
struct ProjectedSequence {
  std::string gid;
  std::vector<TransformationRule> rules;  // data vertex ids
  Embedding embedding;
};

// Position of a converted item relative to the skeleton's interstates.
enum class Placement : std::uint8_t {
  before,      // strictly between skeleton interstate index-1 and index
  equal,       // in the same interstate as skeleton interstate index
  after_last,  // after the last skeleton interstate
  none,        // plain conversion without annotations
};

struct AnnotatedItem {
  TrKind kind = TrKind::vi;
  Target target;  // pattern-frame vertex ids
  Label label;
  Placement placement = Placement::none;
  int index = 0;

  // Slot in the merged timeline: before t -> 2t-2, equal t -> 2t-1, after
  // the last of n interstates -> 2n.
  int slot(int skeleton_span) const;
  auto operator<=>(const AnnotatedItem&) const = default;
};

using Itemset = std::vector<AnnotatedItem>;

struct ConvertedSequence {
  std::string gid;
  std::vector<Itemset> itemsets;
};

struct AnnotatedPattern {
  std::vector<Itemset> itemsets;
  std::size_t support = 0;
};

// Sequences over integer items; itemsets sorted ascending without repeats.
struct ItemsetSequence {
  std::size_t gid = 0;
  std::vector<std::vector<int>> itemsets;
};

struct SequentialPattern {
  std::vector<std::vector<int>> itemsets;
  std::size_t support = 0;
};

struct PrefixSpanOptions {
  std::size_t max_items = 0;  // 0 means unbounded
  std::size_t* candidates = nullptr;
  const std::optional<std::chrono::steady_clock::time_point>* deadline = nullptr;
};

// All sequential patterns whose support, counted over distinct gids, is at
// least min_support. Exact for itemset extensions: every position where the
// last itemset of the prefix can end is tracked.
std::vector<SequentialPattern> prefixspan(const std::vector<ItemsetSequence>& db, std::size_t min_support,
                                          PrefixSpanOptions options = {});

// `skeleton` holds edge rules on distinct edges; embeddings come from the
// matcher.
std::vector<ProjectedSequence> project(const SequenceEntry& data, const TransformationSequence& skeleton,
                                       const std::vector<Embedding>& embeddings);

// Renames data vertices into the pattern frame and groups rules into
// itemsets by interstate. With `annotate`, skeleton occurrences are dropped
// and every item records its placement against the skeleton.
ConvertedSequence reassign_and_convert(const ProjectedSequence& projected, const TransformationSequence& skeleton,
                                       bool annotate);

// Frequent annotated patterns over converted sequences (items interned and
// passed to prefixspan).
std::vector<AnnotatedPattern> mine_itemsets(const std::vector<ConvertedSequence>& sequences, std::size_t min_support,
                                            PrefixSpanOptions options = {});

// Interleaves the skeleton with the pattern's items. Throws on annotations
// that cannot be realized (mixed placements in one itemset, placements out
// of order, two itemsets on the same skeleton interstate).
TransformationSequence reconvert(const std::vector<Itemset>& pattern, const TransformationSequence& skeleton);

MineResult mine_reverse(const SequenceDatabase& db, const MinerConfig& config);

// Parent functions of the search tree.
enum class ParentRule { vertex, repeated_edge, structural };

struct ParentStep {
  ParentRule rule;
  TransformationSequence parent;  // empty for the root
};

// Drops the last vertex rule if any; else the last edge rule that has an
// earlier rule on its edge; else the last tuple of the minimum DFS code.
// Vertex ids of the input are kept in the first two cases.
std::optional<ParentStep> parent_of(const TransformationSequence& s);

// Skeleton code for an edge-only pattern with each edge used once.
DfsCode skeleton_code(const TransformationSequence& s);
TransformationSequence sequence_of(const DfsCode& skeleton);

}  // namespace gtrace
