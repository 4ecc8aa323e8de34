#include "gtrace/canonical.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace gtrace {

bool tuple_less(const DfsTuple& a, const DfsTuple& b) {
  if (a.from == b.from && a.to == b.to) {
    return std::tie(a.from_label, a.color, a.to_label) < std::tie(b.from_label, b.color, b.to_label);
  }
  const bool af = a.forward();
  const bool bf = b.forward();
  if (!af && !bf) return a.from < b.from || (a.from == b.from && a.to < b.to);
  if (af && bf) return a.to < b.to || (a.to == b.to && a.from > b.from);
  if (!af) return a.from < b.to;
  return a.to <= b.from;
}

bool code_less(const DfsCode& a, const DfsCode& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), tuple_less);
}

int CodeGraph::add_vertex(int label) {
  vertex_labels.push_back(label);
  return static_cast<int>(vertex_labels.size()) - 1;
}

void CodeGraph::add_edge(int a, int b, EdgeColor color) {
  if (a == b) throw Error("self-loop in code graph");
  edges.push_back(Edge{a, b, color});
}

std::vector<std::vector<std::pair<int, int>>> CodeGraph::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(vertex_labels.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    adj[static_cast<std::size_t>(e.a)].emplace_back(e.b, static_cast<int>(i));
    adj[static_cast<std::size_t>(e.b)].emplace_back(e.a, static_cast<int>(i));
  }
  return adj;
}

std::vector<int> rightmost_path(const DfsCode& code) {
  if (code.empty()) return {0};
  int cur = vertex_count(code) - 1;
  std::vector<int> path{cur};
  for (auto it = code.rbegin(); it != code.rend(); ++it) {
    if (it->forward() && it->to == cur) {
      cur = it->from;
      path.push_back(cur);
    }
  }
  return path;
}

int vertex_count(const DfsCode& code) {
  int n = 0;
  for (const auto& t : code) n = std::max({n, t.from + 1, t.to + 1});
  return n;
}

namespace {

struct DfsState {
  std::vector<int> to_graph;    // dfs index -> graph vertex
  std::vector<int> to_dfs;      // graph vertex -> dfs index or -1
  std::vector<char> used;       // per graph edge
};

struct Growth {
  DfsTuple tuple;
  std::size_t state = 0;
  int edge = 0;
  int new_vertex = -1;
};

bool connected(const CodeGraph& g) {
  if (g.vertex_labels.empty()) return false;
  DisjointSets sets;
  for (std::size_t v = 0; v < g.vertex_labels.size(); ++v) sets.add(static_cast<VertexId>(v));
  for (const auto& e : g.edges) sets.unite(static_cast<VertexId>(e.a), static_cast<VertexId>(e.b));
  return sets.components() == 1;
}

}  // namespace

DfsCode min_dfs_code(const CodeGraph& g) {
  if (!connected(g)) throw Error("minimum DFS code needs a connected graph");
  DfsCode code;
  if (g.edges.empty()) return code;
  const auto adj = g.adjacency();
  const std::size_t nv = g.vertex_labels.size();
  const auto label = [&](int v) { return g.vertex_labels[static_cast<std::size_t>(v)]; };

  std::vector<DfsState> states;
  {
    std::vector<Growth> seeds;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      for (auto [a, b] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
        seeds.push_back(Growth{DfsTuple{0, 1, label(a), label(b), e.color}, static_cast<std::size_t>(a),
                               static_cast<int>(i), b});
      }
    }
    DfsTuple best = seeds.front().tuple;
    for (const auto& s : seeds) {
      if (tuple_less(s.tuple, best)) best = s.tuple;
    }
    code.push_back(best);
    for (const auto& s : seeds) {
      if (!(s.tuple == best)) continue;
      DfsState st;
      st.to_dfs.assign(nv, -1);
      st.used.assign(g.edges.size(), 0);
      int a = static_cast<int>(s.state);
      st.to_graph = {a, s.new_vertex};
      st.to_dfs[static_cast<std::size_t>(a)] = 0;
      st.to_dfs[static_cast<std::size_t>(s.new_vertex)] = 1;
      st.used[static_cast<std::size_t>(s.edge)] = 1;
      states.push_back(std::move(st));
    }
  }

  while (code.size() < g.edges.size()) {
    const auto rmpath = rightmost_path(code);
    const int next = vertex_count(code);
    std::vector<Growth> growths;
    for (std::size_t si = 0; si < states.size(); ++si) {
      const auto& st = states[si];
      const int rm = rmpath.front();
      const int grm = st.to_graph[static_cast<std::size_t>(rm)];
      for (auto [w, ei] : adj[static_cast<std::size_t>(grm)]) {
        if (st.used[static_cast<std::size_t>(ei)]) continue;
        int dw = st.to_dfs[static_cast<std::size_t>(w)];
        if (dw < 0) continue;
        if (std::find(rmpath.begin() + 1, rmpath.end(), dw) == rmpath.end()) continue;
        growths.push_back(Growth{DfsTuple{rm, dw, label(grm), label(w), g.edges[static_cast<std::size_t>(ei)].color},
                                 si, ei, -1});
      }
      for (int v : rmpath) {
        const int gv = st.to_graph[static_cast<std::size_t>(v)];
        for (auto [w, ei] : adj[static_cast<std::size_t>(gv)]) {
          if (st.to_dfs[static_cast<std::size_t>(w)] >= 0) continue;
          growths.push_back(Growth{DfsTuple{v, next, label(gv), label(w), g.edges[static_cast<std::size_t>(ei)].color},
                                   si, ei, w});
        }
      }
    }
    if (growths.empty()) throw Error("DFS code construction stalled");
    DfsTuple best = growths.front().tuple;
    for (const auto& gr : growths) {
      if (tuple_less(gr.tuple, best)) best = gr.tuple;
    }
    code.push_back(best);
    std::vector<DfsState> grown;
    std::set<std::vector<int>> seen;
    for (const auto& gr : growths) {
      if (!(gr.tuple == best)) continue;
      DfsState st = states[gr.state];
      st.used[static_cast<std::size_t>(gr.edge)] = 1;
      if (gr.new_vertex >= 0) {
        st.to_dfs[static_cast<std::size_t>(gr.new_vertex)] = next;
        st.to_graph.push_back(gr.new_vertex);
      }
      // States with the same vertex order and edge usage are interchangeable.
      std::vector<int> sig = st.to_graph;
      for (char u : st.used) sig.push_back(u);
      if (seen.insert(sig).second) grown.push_back(std::move(st));
    }
    states = std::move(grown);
  }
  return code;
}

CodeGraph graph_of(const DfsCode& code) {
  CodeGraph g;
  const int n = std::max(vertex_count(code), 1);
  g.vertex_labels.assign(static_cast<std::size_t>(n), 0);
  for (const auto& t : code) {
    g.vertex_labels[static_cast<std::size_t>(t.from)] = t.from_label;
    g.vertex_labels[static_cast<std::size_t>(t.to)] = t.to_label;
    g.add_edge(t.from, t.to, t.color);
  }
  return g;
}

bool is_min(const DfsCode& code) {
  if (code.empty()) return true;
  return min_dfs_code(graph_of(code)) == code;
}

// ---------------------------------------------------------------------------

namespace {

std::strong_ordering target_order(bool edge, VertexId a1, VertexId a2, VertexId b1, VertexId b2) {
  if (edge) {
    if (auto c = a2 <=> b2; c != 0) return c;
    return b1 <=> a1;
  }
  return a1 <=> b1;
}

}  // namespace

std::strong_ordering tr_order(const TransformationRule& a, const TransformationRule& b) {
  if (auto c = a.interstate <=> b.interstate; c != 0) return c;
  if (auto c = kind_rank(a.kind) <=> kind_rank(b.kind); c != 0) return c;
  if (auto c = target_order(a.target.edge, a.target.first, a.target.second, b.target.first, b.target.second); c != 0) {
    return c;
  }
  return a.label <=> b.label;
}

std::strong_ordering tuple_order(const CodeTuple& a, const CodeTuple& b) {
  if (auto c = a.interstate <=> b.interstate; c != 0) return c;
  if (auto c = kind_rank(a.kind) <=> kind_rank(b.kind); c != 0) return c;
  const bool edge = !is_vertex_kind(a.kind);
  if (auto c = target_order(edge, static_cast<VertexId>(a.u), static_cast<VertexId>(a.u2), static_cast<VertexId>(b.u),
                            static_cast<VertexId>(b.u2));
      c != 0) {
    return c;
  }
  return a.label <=> b.label;
}

bool code_precedes(const Code& a, const Code& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const CodeTuple& x, const CodeTuple& y) { return tuple_order(x, y) < 0; });
}

std::vector<VertexAssignment> dfs_assignments(const UnionGraph& g) {
  if (!g.connected()) throw Error("DFS assignments need a connected union graph");
  std::map<VertexId, std::vector<VertexId>> adj;
  for (VertexId v : g.vertices) adj[v];
  for (const auto& e : g.edges) {
    adj[e.lo].push_back(e.hi);
    adj[e.hi].push_back(e.lo);
  }
  std::vector<VertexAssignment> out;
  VertexAssignment current;
  std::vector<VertexId> stack;

  std::function<void()> step = [&] {
    if (current.size() == g.vertices.size()) {
      out.push_back(current);
      return;
    }
    // Backtrack to the deepest vertex that still has an undiscovered neighbor.
    std::vector<VertexId> saved = stack;
    while (!stack.empty()) {
      const auto& nb = adj[stack.back()];
      bool open = std::any_of(nb.begin(), nb.end(), [&](VertexId w) { return !current.contains(w); });
      if (open) break;
      stack.pop_back();
    }
    if (!stack.empty()) {
      for (VertexId w : adj[stack.back()]) {
        if (current.contains(w)) continue;
        current[w] = static_cast<int>(current.size()) + 1;
        stack.push_back(w);
        step();
        stack.pop_back();
        current.erase(w);
      }
    }
    stack = std::move(saved);
  };

  for (VertexId root : g.vertices) {
    current = {{root, 1}};
    stack = {root};
    step();
  }
  return out;
}

Code code_of(const TransformationSequence& s, const VertexAssignment& assignment) {
  if (!is_relevant(s)) throw Error("codes are defined for relevant sequences only");
  std::set<int> slots;
  for (const auto& r : s.rules) slots.insert(r.interstate);
  auto dense = [&](int j) { return static_cast<int>(std::distance(slots.begin(), slots.find(j))) + 1; };
  auto rename = [&](VertexId v) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw Error("assignment misses vertex " + std::to_string(v));
    return it->second;
  };
  Code code;
  for (const auto& r : s.rules) {
    CodeTuple t;
    t.kind = r.kind;
    t.label = r.label;
    t.interstate = dense(r.interstate);
    if (r.target.edge) {
      int a = rename(r.target.first);
      int b = rename(r.target.second);
      t.u = std::min(a, b);
      t.u2 = std::max(a, b);
    } else {
      t.u = rename(r.target.first);
    }
    code.push_back(t);
  }
  std::sort(code.begin(), code.end(), [](const CodeTuple& a, const CodeTuple& b) { return tuple_order(a, b) < 0; });
  return code;
}

Code min_code(const TransformationSequence& s) {
  if (!is_relevant(s)) throw Error("codes are defined for relevant sequences only");
  std::optional<Code> best;
  for (const auto& a : dfs_assignments(union_graph_of(s))) {
    Code c = code_of(s, a);
    if (!best || code_precedes(c, *best)) best = std::move(c);
  }
  return *best;
}

bool is_canonical(const TransformationSequence& s) {
  if (!is_relevant(s)) throw Error("canonicality is defined for relevant sequences only");
  VertexAssignment identity;
  for (VertexId v : union_graph_of(s).vertices) identity[v] = static_cast<int>(v);
  return code_of(s, identity) == min_code(s);
}

// ---------------------------------------------------------------------------

namespace {

struct Refiner {
  int n = 0;
  std::vector<VertexId> ids;
  // (interstate, kind rank, label, a, b) with b = -1 for vertex rules
  std::vector<std::array<int, 5>> rules;
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, edge signature rank)

  CanonicalKey best;
  std::vector<int> best_perm;

  template <typename Sig>
  static std::vector<int> rank(const std::vector<Sig>& sigs) {
    std::vector<int> order(sigs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sigs[static_cast<std::size_t>(a)] < sigs[static_cast<std::size_t>(b)]; });
    std::vector<int> out(sigs.size());
    int r = -1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i == 0 || sigs[static_cast<std::size_t>(order[i])] != sigs[static_cast<std::size_t>(order[i - 1])]) ++r;
      out[static_cast<std::size_t>(order[i])] = r;
    }
    return out;
  }

  static int distinct(const std::vector<int>& colors) {
    return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
  }

  std::vector<int> refine(std::vector<int> colors) const {
    int count = distinct(colors);
    while (true) {
      std::vector<std::vector<int>> sigs(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) {
        std::vector<std::pair<int, int>> around;
        for (auto [w, es] : adj[static_cast<std::size_t>(v)]) around.emplace_back(colors[static_cast<std::size_t>(w)], es);
        std::sort(around.begin(), around.end());
        auto& sig = sigs[static_cast<std::size_t>(v)];
        sig.push_back(colors[static_cast<std::size_t>(v)]);
        for (auto [c, es] : around) {
          sig.push_back(c);
          sig.push_back(es);
        }
      }
      auto next = rank(sigs);
      int c = distinct(next);
      if (c == count) return colors;
      colors = std::move(next);
      count = c;
    }
  }

  void leaf(const std::vector<int>& colors) {
    // Remaining ties are between vertices without edges and equal rule
    // multisets, so any order among them gives the same key.
    std::vector<std::pair<int, int>> order;
    for (int v = 0; v < n; ++v) order.emplace_back(colors[static_cast<std::size_t>(v)], v);
    std::sort(order.begin(), order.end());
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(order[static_cast<std::size_t>(i)].second)] = i;

    std::vector<std::array<int, 5>> tuples;
    tuples.reserve(rules.size());
    for (const auto& r : rules) {
      int a = perm[static_cast<std::size_t>(r[3])] + 1;
      int b = r[4] < 0 ? 0 : perm[static_cast<std::size_t>(r[4])] + 1;
      if (b != 0 && b < a) std::swap(a, b);
      tuples.push_back({r[0], r[1], r[2], a, b});
    }
    std::sort(tuples.begin(), tuples.end());
    CanonicalKey key{n};
    for (const auto& t : tuples) key.insert(key.end(), t.begin(), t.end());
    if (best_perm.empty() || key < best) {
      best = std::move(key);
      best_perm = std::move(perm);
    }
  }

  void search(std::vector<int> colors) {
    colors = refine(std::move(colors));
    const int count = distinct(colors);
    if (count == n) {
      leaf(colors);
      return;
    }
    std::vector<std::vector<int>> cells(static_cast<std::size_t>(count));
    for (int v = 0; v < n; ++v) cells[static_cast<std::size_t>(colors[static_cast<std::size_t>(v)])].push_back(v);
    const std::vector<int>* target = nullptr;
    for (const auto& cell : cells) {
      if (cell.size() < 2) continue;
      if (std::all_of(cell.begin(), cell.end(), [&](int v) { return adj[static_cast<std::size_t>(v)].empty(); })) continue;
      target = &cell;
      break;
    }
    if (!target) {
      leaf(colors);
      return;
    }
    for (int chosen : *target) {
      std::vector<int> next(colors.size());
      for (int v = 0; v < n; ++v) {
        int c = colors[static_cast<std::size_t>(v)];
        bool demote = c == colors[static_cast<std::size_t>(chosen)] && v != chosen;
        next[static_cast<std::size_t>(v)] = 2 * c + (demote ? 1 : 0);
      }
      search(rank(next));
    }
  }
};

}  // namespace

CanonicalForm canonical_form(const TransformationSequence& s) {
  Refiner ref;
  std::map<VertexId, int> index;
  for (const auto& r : s.rules) {
    index.emplace(r.target.first, 0);
    if (r.target.edge) index.emplace(r.target.second, 0);
  }
  for (auto& [v, i] : index) {
    i = ref.n++;
    ref.ids.push_back(v);
  }
  std::set<int> slots;
  for (const auto& r : s.rules) slots.insert(r.interstate);
  auto dense = [&](int j) { return static_cast<int>(std::distance(slots.begin(), slots.find(j))) + 1; };

  std::vector<std::vector<std::array<int, 4>>> incident(static_cast<std::size_t>(ref.n));
  std::map<std::pair<int, int>, std::vector<std::array<int, 3>>> on_edge;
  for (const auto& r : s.rules) {
    int j = dense(r.interstate);
    int a = index[r.target.first];
    int b = r.target.edge ? index[r.target.second] : -1;
    ref.rules.push_back({j, kind_rank(r.kind), r.label.value, a, b});
    incident[static_cast<std::size_t>(a)].push_back({j, kind_rank(r.kind), r.label.value, b >= 0 ? 1 : 0});
    if (b >= 0) {
      incident[static_cast<std::size_t>(b)].push_back({j, kind_rank(r.kind), r.label.value, 1});
      on_edge[{std::min(a, b), std::max(a, b)}].push_back({j, kind_rank(r.kind), r.label.value});
    }
  }
  for (auto& inc : incident) std::sort(inc.begin(), inc.end());
  std::vector<std::vector<std::array<int, 3>>> edge_sigs;
  for (auto& [e, sig] : on_edge) {
    std::sort(sig.begin(), sig.end());
    edge_sigs.push_back(sig);
  }
  auto edge_rank = Refiner::rank(edge_sigs);
  ref.adj.assign(static_cast<std::size_t>(ref.n), {});
  std::size_t ei = 0;
  for (const auto& [e, sig] : on_edge) {
    ref.adj[static_cast<std::size_t>(e.first)].emplace_back(e.second, edge_rank[ei]);
    ref.adj[static_cast<std::size_t>(e.second)].emplace_back(e.first, edge_rank[ei]);
    ++ei;
  }

  if (ref.n == 0) {
    CanonicalForm empty;
    empty.key = {0};
    empty.sequence.kind = SequenceKind::pattern;
    return empty;
  }
  ref.search(Refiner::rank(incident));

  CanonicalForm out;
  out.key = std::move(ref.best);
  TransformationSequence rep;
  for (const auto& r : s.rules) {
    TransformationRule t = r;
    auto name = [&](VertexId v) { return static_cast<VertexId>(ref.best_perm[static_cast<std::size_t>(index[v])] + 1); };
    t.target = r.target.edge ? Target::pair(name(r.target.first), name(r.target.second)) : Target::vertex(name(r.target.first));
    rep.rules.push_back(t);
  }
  out.sequence = normalize_pattern(std::move(rep));
  return out;
}

CanonicalKey canonical_key(const TransformationSequence& s) { return canonical_form(s).key; }

std::size_t CanonicalKeyHash::operator()(const CanonicalKey& k) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (auto x : k) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(x));
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace gtrace
