#include "gtrace/reverse_miner.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

namespace gtrace {

int AnnotatedItem::slot(int skeleton_span) const {
  switch (placement) {
    case Placement::before: return 2 * index - 2;
    case Placement::equal: return 2 * index - 1;
    case Placement::after_last: return 2 * skeleton_span;
    case Placement::none: break;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// PrefixSpan

namespace {

void check_deadline(const std::optional<std::chrono::steady_clock::time_point>* deadline) {
  if (deadline && *deadline && std::chrono::steady_clock::now() > **deadline) throw TimeoutError();
}

struct SeqState {
  std::size_t seq = 0;
  std::vector<int> ends;  // itemset positions where the prefix's last itemset can end
};

class PrefixSpanRun {
 public:
  PrefixSpanRun(const std::vector<ItemsetSequence>& db, std::size_t min_support, PrefixSpanOptions options)
      : db_(db), min_support_(min_support), options_(options) {}

  std::vector<SequentialPattern> run() {
    std::vector<SeqState> root;
    for (std::size_t i = 0; i < db_.size(); ++i) root.push_back(SeqState{i, {-1}});
    std::vector<std::vector<int>> prefix;
    grow(prefix, 0, root);
    return std::move(out_);
  }

 private:
  struct Growth {
    std::vector<SeqState> states;
    std::vector<std::size_t> gids;
  };

  static void add(std::map<int, Growth>& m, int item, std::size_t seq, std::size_t gid, int pos) {
    auto& g = m[item];
    if (g.states.empty() || g.states.back().seq != seq) {
      g.states.push_back(SeqState{seq, {}});
      g.gids.push_back(gid);
    }
    auto& ends = g.states.back().ends;
    if (ends.empty() || ends.back() != pos) ends.push_back(pos);
  }

  std::size_t support_of(std::vector<std::size_t>& gids) const {
    std::sort(gids.begin(), gids.end());
    return static_cast<std::size_t>(std::unique(gids.begin(), gids.end()) - gids.begin());
  }

  void grow(std::vector<std::vector<int>>& prefix, std::size_t items, const std::vector<SeqState>& states) {
    check_deadline(options_.deadline);
    if (options_.max_items != 0 && items >= options_.max_items) return;
    std::map<int, Growth> itemset_ext;
    std::map<int, Growth> sequence_ext;
    for (const auto& st : states) {
      const auto& seq = db_[st.seq];
      const int first = st.ends.front();
      for (int p = first + 1; p < static_cast<int>(seq.itemsets.size()); ++p) {
        for (int x : seq.itemsets[static_cast<std::size_t>(p)]) add(sequence_ext, x, st.seq, seq.gid, p);
      }
      if (prefix.empty()) continue;
      const int last = prefix.back().back();
      for (int p : st.ends) {
        for (int x : seq.itemsets[static_cast<std::size_t>(p)]) {
          if (x > last) add(itemset_ext, x, st.seq, seq.gid, p);
        }
      }
    }
    if (options_.candidates) *options_.candidates += itemset_ext.size() + sequence_ext.size();

    for (auto& [x, g] : itemset_ext) {
      std::size_t sup = support_of(g.gids);
      if (sup < min_support_) continue;
      prefix.back().push_back(x);
      out_.push_back(SequentialPattern{prefix, sup});
      grow(prefix, items + 1, g.states);
      prefix.back().pop_back();
    }
    for (auto& [x, g] : sequence_ext) {
      std::size_t sup = support_of(g.gids);
      if (sup < min_support_) continue;
      // Positions were collected per state and may interleave; keep them sorted.
      for (auto& st : g.states) {
        std::sort(st.ends.begin(), st.ends.end());
        st.ends.erase(std::unique(st.ends.begin(), st.ends.end()), st.ends.end());
      }
      prefix.push_back({x});
      out_.push_back(SequentialPattern{prefix, sup});
      grow(prefix, items + 1, g.states);
      prefix.pop_back();
    }
  }

  const std::vector<ItemsetSequence>& db_;
  std::size_t min_support_;
  PrefixSpanOptions options_;
  std::vector<SequentialPattern> out_;
};

}  // namespace

std::vector<SequentialPattern> prefixspan(const std::vector<ItemsetSequence>& db, std::size_t min_support,
                                          PrefixSpanOptions options) {
  if (min_support < 1) throw Error("minimum support must be at least 1");
  return PrefixSpanRun(db, min_support, options).run();
}

// ---------------------------------------------------------------------------
// Projection, conversion, re-conversion

namespace {

std::vector<int> interstates_of(const TransformationSequence& s) {
  std::set<int> slots;
  for (const auto& r : s.rules) slots.insert(r.interstate);
  return {slots.begin(), slots.end()};
}

int dense_index(const std::vector<int>& slots, int j) {
  return static_cast<int>(std::lower_bound(slots.begin(), slots.end(), j) - slots.begin()) + 1;
}

VertexId image_of(const Embedding& e, VertexId u) {
  auto it = e.psi.find(u);
  if (it == e.psi.end()) throw Error("embedding does not map vertex " + std::to_string(u));
  return it->second;
}

}  // namespace

std::vector<ProjectedSequence> project(const SequenceEntry& data, const TransformationSequence& skeleton,
                                       const std::vector<Embedding>& embeddings) {
  const auto slots = interstates_of(skeleton);
  std::vector<ProjectedSequence> out;
  for (const auto& e : embeddings) {
    if (e.phi.size() != slots.size()) throw Error("embedding does not fit the skeleton");
    std::set<VertexId> mapped;
    for (const auto& [u, v] : e.psi) mapped.insert(v);
    std::map<EdgeKey, int> first_at;  // data edge -> interstate of the skeleton occurrence
    for (const auto& r : skeleton.rules) {
      if (!r.target.edge) throw Error("skeleton may only hold edge rules");
      EdgeKey de = make_edge(image_of(e, r.target.first), image_of(e, r.target.second));
      int at = e.phi[static_cast<std::size_t>(dense_index(slots, r.interstate) - 1)];
      if (!first_at.emplace(de, at).second) throw Error("skeleton uses an edge twice");
    }
    ProjectedSequence p;
    p.gid = data.gid;
    p.embedding = e;
    for (const auto& r : data.sequence.rules) {
      if (!r.target.edge) {
        if (mapped.contains(r.target.first)) p.rules.push_back(r);
        continue;
      }
      auto it = first_at.find(r.target.edge_key());
      if (it != first_at.end() && r.interstate >= it->second) p.rules.push_back(r);
    }
    out.push_back(std::move(p));
  }
  return out;
}

ConvertedSequence reassign_and_convert(const ProjectedSequence& projected, const TransformationSequence& skeleton,
                                       bool annotate) {
  const auto slots = interstates_of(skeleton);
  const auto& e = projected.embedding;
  const int n = static_cast<int>(e.phi.size());
  std::map<VertexId, VertexId> back;
  for (const auto& [u, v] : e.psi) back.emplace(v, u);
  std::set<std::pair<int, Target>> occurrences;
  for (const auto& r : skeleton.rules) {
    int at = e.phi[static_cast<std::size_t>(dense_index(slots, r.interstate) - 1)];
    occurrences.emplace(at, Target::pair(image_of(e, r.target.first), image_of(e, r.target.second)));
  }
  auto rename = [&](VertexId v) {
    auto it = back.find(v);
    if (it == back.end()) throw Error("projected rule touches unmapped vertex " + std::to_string(v));
    return it->second;
  };

  std::map<int, Itemset> by_interstate;
  for (const auto& r : projected.rules) {
    if (annotate && occurrences.contains({r.interstate, r.target})) continue;
    AnnotatedItem item;
    item.kind = r.kind;
    item.label = r.label;
    item.target = r.target.edge ? Target::pair(rename(r.target.first), rename(r.target.second))
                                : Target::vertex(rename(r.target.first));
    if (annotate) {
      auto pos = static_cast<int>(std::lower_bound(e.phi.begin(), e.phi.end(), r.interstate) - e.phi.begin());
      if (pos < n && e.phi[static_cast<std::size_t>(pos)] == r.interstate) {
        item.placement = Placement::equal;
        item.index = pos + 1;
      } else if (pos < n) {
        item.placement = Placement::before;
        item.index = pos + 1;
      } else {
        item.placement = Placement::after_last;
        item.index = 0;
      }
    }
    by_interstate[r.interstate].push_back(item);
  }
  ConvertedSequence out;
  out.gid = projected.gid;
  for (auto& [j, items] : by_interstate) {
    std::sort(items.begin(), items.end());
    out.itemsets.push_back(std::move(items));
  }
  return out;
}

std::vector<AnnotatedPattern> mine_itemsets(const std::vector<ConvertedSequence>& sequences, std::size_t min_support,
                                            PrefixSpanOptions options) {
  std::map<AnnotatedItem, int> ids;
  for (const auto& s : sequences) {
    for (const auto& is : s.itemsets) {
      for (const auto& item : is) ids.emplace(item, 0);
    }
  }
  std::vector<const AnnotatedItem*> items;
  for (auto& [item, id] : ids) {
    id = static_cast<int>(items.size());
    items.push_back(&item);
  }
  std::map<std::string, std::size_t> gids;
  std::vector<ItemsetSequence> db;
  for (const auto& s : sequences) {
    ItemsetSequence seq;
    seq.gid = gids.emplace(s.gid, gids.size()).first->second;
    for (const auto& is : s.itemsets) {
      std::vector<int> encoded;
      for (const auto& item : is) encoded.push_back(ids.at(item));
      std::sort(encoded.begin(), encoded.end());
      encoded.erase(std::unique(encoded.begin(), encoded.end()), encoded.end());
      if (!encoded.empty()) seq.itemsets.push_back(std::move(encoded));
    }
    db.push_back(std::move(seq));
  }
  std::vector<AnnotatedPattern> out;
  for (auto& p : prefixspan(db, min_support, options)) {
    AnnotatedPattern a;
    a.support = p.support;
    for (const auto& is : p.itemsets) {
      Itemset decoded;
      for (int x : is) decoded.push_back(*items[static_cast<std::size_t>(x)]);
      a.itemsets.push_back(std::move(decoded));
    }
    out.push_back(std::move(a));
  }
  return out;
}

TransformationSequence reconvert(const std::vector<Itemset>& pattern, const TransformationSequence& skeleton) {
  const auto slots = interstates_of(skeleton);
  const int n = static_cast<int>(slots.size());
  // (timeline slot, order) -> rules
  std::map<std::pair<int, int>, std::vector<TransformationRule>> groups;
  for (const auto& r : skeleton.rules) {
    int t = dense_index(slots, r.interstate);
    groups[{2 * t - 1, 0}].push_back(r);
  }
  int last_slot = -1;
  int order = 0;
  for (const auto& is : pattern) {
    if (is.empty()) throw Error("empty itemset in pattern");
    const auto& head = is.front();
    if (head.placement == Placement::none) throw Error("cannot re-convert an unannotated pattern");
    for (const auto& item : is) {
      if (item.placement != head.placement || item.index != head.index) {
        throw Error("itemset mixes placements");
      }
    }
    const int slot = head.slot(n);
    if ((head.placement == Placement::before || head.placement == Placement::equal) &&
        (head.index < 1 || head.index > n)) {
      throw Error("placement refers to a missing skeleton interstate");
    }
    if (slot < last_slot || (slot == last_slot && slot % 2 == 1)) throw Error("placements out of order");
    last_slot = slot;
    auto& rules = groups[{slot, slot % 2 == 1 ? 0 : ++order}];
    for (const auto& item : is) {
      TransformationRule r;
      r.kind = item.kind;
      r.target = item.target;
      r.label = item.label;
      rules.push_back(r);
    }
  }
  TransformationSequence out;
  int j = 0;
  for (auto& [key, rules] : groups) {
    ++j;
    std::set<Target> targets;
    for (auto& r : rules) {
      if (!targets.insert(r.target).second) throw Error("two rules on one target in one interstate");
      r.interstate = j;
      out.rules.push_back(r);
    }
  }
  return normalize_pattern(std::move(out));
}

// ---------------------------------------------------------------------------
// Skeleton codes and parent functions

DfsCode skeleton_code(const TransformationSequence& s) {
  const auto slots = interstates_of(s);
  CodeGraph g;
  std::map<VertexId, int> index;
  std::set<EdgeKey> seen;
  for (const auto& r : s.rules) {
    if (!r.target.edge) throw Error("skeleton code needs edge rules only");
    if (!seen.insert(r.target.edge_key()).second) throw Error("skeleton code needs distinct edges");
    for (VertexId v : {r.target.first, r.target.second}) {
      if (!index.contains(v)) index[v] = g.add_vertex(0);
    }
  }
  for (const auto& r : s.rules) {
    g.add_edge(index[r.target.first], index[r.target.second],
               EdgeColor{dense_index(slots, r.interstate), kind_rank(r.kind), r.label.value});
  }
  return min_dfs_code(g);
}

TransformationSequence sequence_of(const DfsCode& skeleton) {
  TransformationSequence s;
  for (const auto& t : skeleton) {
    TransformationRule r;
    r.kind = static_cast<TrKind>(t.color[1]);
    r.label = Label{t.color[2]};
    r.interstate = t.color[0];
    r.target = Target::pair(static_cast<VertexId>(t.from + 1), static_cast<VertexId>(t.to + 1));
    s.rules.push_back(r);
  }
  return normalize_pattern(std::move(s));
}

std::optional<ParentStep> parent_of(const TransformationSequence& s) {
  if (s.rules.empty()) return std::nullopt;
  TransformationSequence norm = normalize_pattern(s);
  auto& rules = norm.rules;
  auto drop = [&](std::size_t i, ParentRule rule) {
    TransformationSequence parent = norm;
    parent.rules.erase(parent.rules.begin() + static_cast<std::ptrdiff_t>(i));
    return ParentStep{rule, normalize_pattern(std::move(parent))};
  };
  for (std::size_t i = rules.size(); i-- > 0;) {
    if (!rules[i].target.edge) return drop(i, ParentRule::vertex);
  }
  std::set<EdgeKey> edges;
  for (const auto& r : rules) edges.insert(r.target.edge_key());
  if (rules.size() > edges.size()) {
    for (std::size_t i = rules.size(); i-- > 0;) {
      for (std::size_t k = 0; k < i; ++k) {
        if (rules[k].target == rules[i].target && rules[k].interstate < rules[i].interstate) {
          return drop(i, ParentRule::repeated_edge);
        }
      }
    }
    throw Error("repeated edge rules share an interstate");
  }
  DfsCode code = skeleton_code(norm);
  code.pop_back();
  TransformationSequence parent = code.empty() ? TransformationSequence{} : sequence_of(code);
  parent.kind = SequenceKind::pattern;
  return ParentStep{ParentRule::structural, parent};
}

// ---------------------------------------------------------------------------
// The miner

namespace {

struct Prepared {
  std::size_t gid = 0;
  std::map<EdgeKey, std::vector<const TransformationRule*>> edge_rules;
  std::map<VertexId, std::vector<VertexId>> neighbors;
};

struct SkeletonEmbedding {
  std::uint32_t seq = 0;
  std::vector<int> phi;
  std::vector<VertexId> psi;  // dfs index -> data vertex
};

struct Extension {
  int from = 0;
  int to = 0;
  int kind = 0;
  int label = 0;
  int below = 0;     // number of skeleton interstates strictly before the new rule
  bool joins = false;  // shares the interstate right after those

  auto operator<=>(const Extension&) const = default;
};

class ReverseMiner {
 public:
  ReverseMiner(const SequenceDatabase& db, const std::vector<Prepared>& prepared, const MinerConfig& config)
      : db_(db), prepared_(prepared), config_(config) {}

  std::vector<MinedPattern> out;
  MinerStats stats;

  std::size_t support_of(const std::vector<SkeletonEmbedding>& embs) const {
    std::vector<std::size_t> gids;
    for (const auto& e : embs) gids.push_back(prepared_[e.seq].gid);
    std::sort(gids.begin(), gids.end());
    return static_cast<std::size_t>(std::unique(gids.begin(), gids.end()) - gids.begin());
  }

  void vertex_roots() {
    if (!config_.vertex_rules) return;
    std::vector<ConvertedSequence> sequences;
    for (const auto& entry : db_) {
      std::map<VertexId, std::vector<const TransformationRule*>> per_vertex;
      for (const auto& r : entry.sequence.rules) {
        if (!r.target.edge) per_vertex[r.target.first].push_back(&r);
      }
      for (const auto& [v, rules] : per_vertex) {
        ConvertedSequence c;
        c.gid = entry.gid;
        for (const auto* r : rules) {
          c.itemsets.push_back({AnnotatedItem{r->kind, Target::vertex(1), r->label, Placement::after_last, 0}});
        }
        sequences.push_back(std::move(c));
      }
    }
    PrefixSpanOptions options{config_.max_rules, &stats.candidates, &config_.deadline};
    const TransformationSequence empty;
    for (const auto& p : mine_itemsets(sequences, config_.min_support, options)) {
      emit(reconvert(p.itemsets, empty), p.support);
    }
  }

  void grow(const DfsCode& code, const std::vector<SkeletonEmbedding>& embs, std::size_t support) {
    check_deadline(&config_.deadline);
    emit(sequence_of(code), support);
    decorate(code, embs);
    if (!config_.structural_growth || !config_.within_cap(code.size() + 1)) return;

    int span = 0;
    std::set<std::pair<int, int>> pattern_edges;
    for (const auto& t : code) {
      span = std::max(span, t.color[0]);
      pattern_edges.emplace(std::min(t.from, t.to), std::max(t.from, t.to));
    }
    const auto rmpath = rightmost_path(code);
    const int rm = rmpath.front();
    const int next = vertex_count(code);

    std::map<Extension, std::vector<SkeletonEmbedding>> children;
    for (const auto& e : embs) {
      const auto& data = prepared_[e.seq];
      auto extend = [&](int from, int to, VertexId a, VertexId b, bool fresh) {
        auto it = data.edge_rules.find(make_edge(a, b));
        if (it == data.edge_rules.end()) return;
        for (const auto* r : it->second) {
          const int at = r->interstate;
          auto pos = std::lower_bound(e.phi.begin(), e.phi.end(), at);
          const int below = static_cast<int>(pos - e.phi.begin());
          const bool joins = pos != e.phi.end() && *pos == at;
          Extension key{from, to, kind_rank(r->kind), r->label.value, below, joins};
          SkeletonEmbedding child{e.seq, e.phi, e.psi};
          if (!joins) child.phi.insert(child.phi.begin() + below, at);
          if (fresh) child.psi.push_back(b);
          children[key].push_back(std::move(child));
        }
      };
      const VertexId grm = e.psi[static_cast<std::size_t>(rm)];
      for (std::size_t i = 1; i < rmpath.size(); ++i) {
        const int v = rmpath[i];
        if (pattern_edges.contains({std::min(rm, v), std::max(rm, v)})) continue;
        extend(rm, v, grm, e.psi[static_cast<std::size_t>(v)], false);
      }
      for (int v : rmpath) {
        const VertexId gv = e.psi[static_cast<std::size_t>(v)];
        auto nb = data.neighbors.find(gv);
        if (nb == data.neighbors.end()) continue;
        for (VertexId w : nb->second) {
          if (std::find(e.psi.begin(), e.psi.end(), w) != e.psi.end()) continue;
          extend(v, next, gv, w, true);
        }
      }
    }
    stats.candidates += children.size();

    for (const auto& [key, child_embs] : children) {
      const std::size_t sup = support_of(child_embs);
      if (sup < config_.min_support) continue;
      DfsCode child = code;
      if (!key.joins) {
        for (auto& t : child) {
          if (t.color[0] > key.below) ++t.color[0];
        }
      }
      child.push_back(DfsTuple{key.from, key.to, 0, 0, EdgeColor{key.below + 1, key.kind, key.label}});
      if (!is_min(child)) continue;
      grow(child, child_embs, sup);
    }
  }

  void grow_root(const Extension& key, const std::vector<SkeletonEmbedding>& embs) {
    DfsCode code{DfsTuple{0, 1, 0, 0, EdgeColor{1, key.kind, key.label}}};
    grow(code, embs, support_of(embs));
  }

 private:
  // Vertex rules and repeated edge rules around a fixed skeleton.
  void decorate(const DfsCode& code, const std::vector<SkeletonEmbedding>& embs) {
    if (!config_.vertex_rules && !config_.repeated_edge_rules) return;
    if (config_.max_rules != 0 && code.size() >= config_.max_rules) return;
    const TransformationSequence skeleton = sequence_of(code);
    std::vector<ConvertedSequence> sequences;
    for (const auto& e : embs) {
      Embedding emb;
      emb.phi = e.phi;
      for (std::size_t i = 0; i < e.psi.size(); ++i) emb.psi.emplace(static_cast<VertexId>(i + 1), e.psi[i]);
      const auto& entry = db_[e.seq];
      for (const auto& p : project(entry, skeleton, {emb})) {
        ConvertedSequence c = reassign_and_convert(p, skeleton, true);
        if (!config_.vertex_rules || !config_.repeated_edge_rules) {
          std::vector<Itemset> kept;
          for (auto& is : c.itemsets) {
            std::erase_if(is, [&](const AnnotatedItem& item) {
              return item.target.edge ? !config_.repeated_edge_rules : !config_.vertex_rules;
            });
            if (!is.empty()) kept.push_back(std::move(is));
          }
          c.itemsets = std::move(kept);
        }
        sequences.push_back(std::move(c));
      }
    }
    const std::size_t room = config_.max_rules == 0 ? 0 : config_.max_rules - code.size();
    PrefixSpanOptions options{room, &stats.candidates, &config_.deadline};
    // Automorphisms of the skeleton yield the same pattern more than once.
    std::set<CanonicalKey> local;
    for (const auto& p : mine_itemsets(sequences, config_.min_support, options)) {
      CanonicalForm cf = canonical_form(reconvert(p.itemsets, skeleton));
      if (!local.insert(cf.key).second) continue;
      out.push_back(MinedPattern{std::move(cf.sequence), p.support, std::move(cf.key)});
      ++stats.emitted;
    }
  }

  void emit(const TransformationSequence& s, std::size_t support) {
    CanonicalForm cf = canonical_form(s);
    out.push_back(MinedPattern{std::move(cf.sequence), support, std::move(cf.key)});
    ++stats.emitted;
  }

  const SequenceDatabase& db_;
  const std::vector<Prepared>& prepared_;
  const MinerConfig& config_;
};

}  // namespace

MineResult mine_reverse(const SequenceDatabase& db, const MinerConfig& config) {
  config.validate();
  std::vector<Prepared> prepared(db.size());
  std::map<std::string, std::size_t> gid_index;
  for (std::size_t i = 0; i < db.size(); ++i) {
    auto& p = prepared[i];
    p.gid = gid_index.emplace(db[i].gid, gid_index.size()).first->second;
    for (const auto& r : db[i].sequence.rules) {
      if (!r.target.edge) continue;
      auto& list = p.edge_rules[r.target.edge_key()];
      if (list.empty()) {
        p.neighbors[r.target.first].push_back(r.target.second);
        p.neighbors[r.target.second].push_back(r.target.first);
      }
      list.push_back(&r);
    }
  }

  MineResult result;
  std::map<Extension, std::vector<SkeletonEmbedding>> roots;
  for (std::size_t i = 0; i < db.size(); ++i) {
    for (const auto& r : db[i].sequence.rules) {
      if (!r.target.edge) continue;
      Extension key{0, 1, kind_rank(r.kind), r.label.value, 0, false};
      auto seq = static_cast<std::uint32_t>(i);
      roots[key].push_back(SkeletonEmbedding{seq, {r.interstate}, {r.target.first, r.target.second}});
      roots[key].push_back(SkeletonEmbedding{seq, {r.interstate}, {r.target.second, r.target.first}});
    }
  }
  result.stats.candidates += roots.size();

  // Top-level subtrees: the single-vertex patterns, then one per frequent
  // single-edge skeleton.
  std::vector<const std::pair<const Extension, std::vector<SkeletonEmbedding>>*> tasks;
  if (config.within_cap(1)) {
    ReverseMiner probe(db, prepared, config);
    for (const auto& entry : roots) {
      if (probe.support_of(entry.second) >= config.min_support) tasks.push_back(&entry);
    }
  }
  const std::size_t task_count = tasks.size() + 1;
  std::vector<ReverseMiner> miners;
  miners.reserve(task_count);
  for (std::size_t i = 0; i < task_count; ++i) miners.emplace_back(db, prepared, config);

  auto run_task = [&](std::size_t i) {
    try {
      if (i == 0) {
        miners[i].vertex_roots();
      } else {
        miners[i].grow_root(tasks[i - 1]->first, tasks[i - 1]->second);
      }
    } catch (const TimeoutError&) {
      miners[i].stats.timed_out = true;
    }
  };

  const unsigned workers = std::min<std::size_t>(config.jobs, task_count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < task_count; ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < task_count; i = next++) run_task(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (auto& m : miners) {
    result.stats.emitted += m.stats.emitted;
    result.stats.candidates += m.stats.candidates;
    result.stats.timed_out = result.stats.timed_out || m.stats.timed_out;
    std::move(m.out.begin(), m.out.end(), std::back_inserter(result.patterns));
  }
  sort_by_key(result.patterns);
  return result;
}

}  // namespace gtrace
