#pragma once

#include <map>
#include <vector>

#include "gtrace/canonical.hpp"
#include "gtrace/core.hpp"

namespace gtrace {

struct Embedding {
  std::vector<int> phi;                 // pattern interstate (dense, 1-based at index 0) -> data interstate
  std::map<VertexId, VertexId> psi;     // pattern vertex -> data vertex

  auto operator<=>(const Embedding&) const = default;
};

struct MinedPattern {
  TransformationSequence sequence;
  std::size_t support = 0;
  CanonicalKey key;
};

// Rules of a data sequence indexed by interstate and target, for repeated
// matching against one sequence.
class SequenceIndex {
 public:
  explicit SequenceIndex(const TransformationSequence& data);

  int span() const { return span_; }
  const TransformationRule* find(int interstate, const Target& target) const;
  const std::vector<const TransformationRule*>& at(int interstate) const;

 private:
  int span_ = 0;
  std::vector<std::vector<const TransformationRule*>> by_interstate_;
  std::vector<std::map<Target, const TransformationRule*>> by_target_;
};

// All (phi, psi) witnessing pattern ⊑ data. Interstates of the pattern are
// taken in order of their distinct values.
std::vector<Embedding> embeddings(const TransformationSequence& pattern, const TransformationSequence& data);
bool contains(const TransformationSequence& pattern, const TransformationSequence& data);
bool contains(const TransformationSequence& pattern, const SequenceIndex& data);

// Number of distinct gids whose sequence contains the pattern.
std::size_t support(const TransformationSequence& pattern, const SequenceDatabase& db);

}  // namespace gtrace
