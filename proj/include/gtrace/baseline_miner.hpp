#pragma once

#include <vector>

#include "gtrace/core.hpp"
#include "gtrace/mining.hpp"

namespace gtrace {

// All frequent transformation subsequences, relevant or not, grown by
// appending one rule at the tail (same last interstate or a new one).
// Each isomorphism class is reported once.
MineResult mine_all_fts(const SequenceDatabase& db, const MinerConfig& config);

std::vector<MinedPattern> filter_relevant(const std::vector<MinedPattern>& patterns);

// Share of irrelevant patterns in an all-FTS result; 0 for an empty set.
double irrelevance_ratio(const std::vector<MinedPattern>& all_fts);

// mine_all_fts followed by filter_relevant. Stats refer to the full run.
MineResult mine_baseline(const SequenceDatabase& db, const MinerConfig& config);

}  // namespace gtrace
