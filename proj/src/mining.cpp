#include "gtrace/mining.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gtrace {

void MinerConfig::validate() const {
  if (min_support < 1) throw Error("minimum support must be at least 1");
  if (jobs < 1) throw Error("jobs must be at least 1");
}

std::size_t absolute_support(double fraction, std::size_t db_size) {
  if (!(fraction > 0.0) || fraction > 1.0) throw Error("fractional support must lie in (0, 1]");
  // Guard against 0.1 * 30 = 3.0000000000000004 rounding up to 4.
  double scaled = fraction * static_cast<double>(db_size);
  auto value = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
  return std::max<std::size_t>(value, 1);
}

void sort_by_key(std::vector<MinedPattern>& patterns) {
  std::sort(patterns.begin(), patterns.end(),
            [](const MinedPattern& a, const MinedPattern& b) { return a.key < b.key; });
}

std::size_t distinct_gids(const SequenceDatabase& db) {
  std::set<std::string> gids;
  for (const auto& e : db) gids.insert(e.gid);
  return gids.size();
}

}  // namespace gtrace
