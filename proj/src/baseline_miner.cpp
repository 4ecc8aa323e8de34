#include "gtrace/baseline_miner.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_set>

#include "gtrace/canonical.hpp"

namespace gtrace {

namespace {

struct TailEmbedding {
  std::uint32_t seq = 0;
  std::vector<int> phi;
  std::vector<VertexId> psi;  // pattern vertex - 1 -> data vertex
};

struct Tail {
  bool joins = false;
  TrKind kind = TrKind::vi;
  Target target;
  Label label;

  auto operator<=>(const Tail&) const = default;
};

struct Pattern {
  std::vector<TransformationRule> rules;
  VertexId vertices = 0;
  int span = 0;
  std::set<Target> last_targets;
};

class BaselineMiner {
 public:
  BaselineMiner(const SequenceDatabase& db, const MinerConfig& config) : db_(db), config_(config) {
    std::map<std::string, std::size_t> index;
    for (const auto& e : db) gids_.push_back(index.emplace(e.gid, index.size()).first->second);
  }

  std::vector<MinedPattern> out;
  MinerStats stats;

  void run() {
    std::vector<TailEmbedding> root;
    for (std::size_t i = 0; i < db_.size(); ++i) root.push_back(TailEmbedding{static_cast<std::uint32_t>(i), {}, {}});
    grow(Pattern{}, root);
  }

 private:
  static VertexId pattern_vertex(const std::vector<VertexId>& psi, VertexId v) {
    auto it = std::find(psi.begin(), psi.end(), v);
    return it == psi.end() ? 0 : static_cast<VertexId>(it - psi.begin()) + 1;
  }

  std::size_t support_of(const std::vector<TailEmbedding>& embs) const {
    std::vector<std::size_t> gids;
    for (const auto& e : embs) gids.push_back(gids_[e.seq]);
    std::sort(gids.begin(), gids.end());
    return static_cast<std::size_t>(std::unique(gids.begin(), gids.end()) - gids.begin());
  }

  void grow(const Pattern& pattern, const std::vector<TailEmbedding>& embs) {
    if (config_.deadline && std::chrono::steady_clock::now() > *config_.deadline) throw TimeoutError();
    if (!config_.within_cap(pattern.rules.size() + 1)) return;

    std::map<Tail, std::vector<TailEmbedding>> children;
    for (const auto& e : embs) {
      const int last = e.phi.empty() ? 0 : e.phi.back();
      const auto& rules = db_[e.seq].sequence.rules;
      auto from = std::lower_bound(rules.begin(), rules.end(), std::max(last, 1),
                                   [](const TransformationRule& r, int j) { return r.interstate < j; });
      for (auto it = from; it != rules.end(); ++it) {
        const auto& r = *it;
        Tail tail{!e.phi.empty() && r.interstate == last, r.kind, {}, r.label};
        auto add = [&](Target target, std::initializer_list<VertexId> fresh) {
          tail.target = target;
          if (tail.joins && pattern.last_targets.contains(target)) return;
          TailEmbedding child{e.seq, e.phi, e.psi};
          if (!tail.joins) child.phi.push_back(r.interstate);
          child.psi.insert(child.psi.end(), fresh.begin(), fresh.end());
          children[tail].push_back(std::move(child));
        };
        const VertexId fresh1 = pattern.vertices + 1;
        if (!r.target.edge) {
          VertexId v = r.target.first;
          VertexId pv = pattern_vertex(e.psi, v);
          if (pv) {
            add(Target::vertex(pv), {});
          } else {
            add(Target::vertex(fresh1), {v});
          }
          continue;
        }
        VertexId x = r.target.first;
        VertexId y = r.target.second;
        VertexId px = pattern_vertex(e.psi, x);
        VertexId py = pattern_vertex(e.psi, y);
        if (px && py) {
          add(Target::pair(px, py), {});
        } else if (px) {
          add(Target::pair(px, fresh1), {y});
        } else if (py) {
          add(Target::pair(py, fresh1), {x});
        } else {
          // Both orientations embed the same pattern edge.
          add(Target::pair(fresh1, fresh1 + 1), {x, y});
          add(Target::pair(fresh1, fresh1 + 1), {y, x});
        }
      }
    }
    stats.candidates += children.size();

    for (const auto& [tail, child_embs] : children) {
      const std::size_t sup = support_of(child_embs);
      if (sup < config_.min_support) continue;
      Pattern child = pattern;
      if (!tail.joins) {
        ++child.span;
        child.last_targets.clear();
      }
      TransformationRule r;
      r.kind = tail.kind;
      r.target = tail.target;
      r.label = tail.label;
      r.interstate = child.span;
      child.rules.push_back(r);
      child.last_targets.insert(tail.target);
      child.vertices = std::max({child.vertices, tail.target.first, tail.target.second});

      TransformationSequence s;
      s.rules = child.rules;
      CanonicalForm cf = canonical_form(s);
      if (!visited_.insert(cf.key).second) continue;
      out.push_back(MinedPattern{std::move(cf.sequence), sup, std::move(cf.key)});
      ++stats.emitted;
      grow(child, child_embs);
    }
  }

  const SequenceDatabase& db_;
  const MinerConfig& config_;
  std::vector<std::size_t> gids_;
  std::unordered_set<CanonicalKey, CanonicalKeyHash> visited_;
};

}  // namespace

MineResult mine_all_fts(const SequenceDatabase& db, const MinerConfig& config) {
  config.validate();
  BaselineMiner miner(db, config);
  MineResult result;
  try {
    miner.run();
  } catch (const TimeoutError&) {
    miner.stats.timed_out = true;
  }
  result.patterns = std::move(miner.out);
  result.stats = miner.stats;
  sort_by_key(result.patterns);
  return result;
}

std::vector<MinedPattern> filter_relevant(const std::vector<MinedPattern>& patterns) {
  std::vector<MinedPattern> out;
  for (const auto& p : patterns) {
    if (!p.sequence.rules.empty() && is_relevant(p.sequence)) out.push_back(p);
  }
  return out;
}

double irrelevance_ratio(const std::vector<MinedPattern>& all_fts) {
  if (all_fts.empty()) return 0.0;
  const auto relevant = filter_relevant(all_fts).size();
  return static_cast<double>(all_fts.size() - relevant) / static_cast<double>(all_fts.size());
}

MineResult mine_baseline(const SequenceDatabase& db, const MinerConfig& config) {
  MineResult all = mine_all_fts(db, config);
  all.patterns = filter_relevant(all.patterns);
  return all;
}

}  // namespace gtrace
