#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "gtrace/core.hpp"
#include "gtrace/matcher.hpp"

namespace gtrace {

class TimeoutError : public Error {
 public:
  TimeoutError() : Error("mining deadline exceeded") {}
};

struct MinerConfig {
  std::size_t min_support = 1;  // absolute number of gids
  std::size_t max_rules = 0;    // 0 means no cap on pattern length
  // Stage toggles, mostly for tests: vertex rules, repeated rules on one
  // edge, and structural growth beyond single-edge skeletons.
  bool vertex_rules = true;
  bool repeated_edge_rules = true;
  bool structural_growth = true;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  unsigned jobs = 1;

  void validate() const;
  bool within_cap(std::size_t rules) const { return max_rules == 0 || rules <= max_rules; }
};

// Ceiling of fraction * db_size, at least 1.
std::size_t absolute_support(double fraction, std::size_t db_size);

struct MinerStats {
  std::size_t emitted = 0;      // patterns reported, counting repeats
  std::size_t candidates = 0;   // distinct child candidates whose support was counted
  bool timed_out = false;
};

struct MineResult {
  std::vector<MinedPattern> patterns;  // sorted by canonical key
  MinerStats stats;
};

void sort_by_key(std::vector<MinedPattern>& patterns);

// Distinct gids in db; support counts refer to these.
std::size_t distinct_gids(const SequenceDatabase& db);

}  // namespace gtrace
