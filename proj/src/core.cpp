#include "gtrace/core.hpp"

#include <algorithm>
#include <array>
#include <tuple>

namespace gtrace {

Label LabelTable::intern(std::string_view name) {
  if (name.empty() || name == "-") {
    throw Error("label name '" + std::string(name) + "' is reserved");
  }
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return Label{it->second};
  auto id = static_cast<std::int32_t>(names_.size());
  names_.emplace_back(name);
  index_.emplace(std::string(name), id);
  return Label{id};
}

std::optional<Label> LabelTable::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return Label{it->second};
}

const std::string& LabelTable::name(Label label) const {
  static const std::string absent = "-";
  if (label.is_absent()) return absent;
  if (static_cast<std::size_t>(label.value) >= names_.size()) {
    throw Error("label " + std::to_string(label.value) + " is not interned");
  }
  return names_[static_cast<std::size_t>(label.value)];
}

EdgeKey make_edge(VertexId a, VertexId b) {
  if (a == b) throw Error("self-loop on vertex " + std::to_string(a));
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

void LabeledGraph::add_vertex(VertexId id, Label label) {
  if (label.is_absent()) throw Error("vertex " + std::to_string(id) + " needs a label");
  if (!vertices_.emplace(id, label).second) {
    throw Error("vertex " + std::to_string(id) + " already present");
  }
  degree_[id] = 0;
}

void LabeledGraph::remove_vertex(VertexId id) {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) throw Error("vertex " + std::to_string(id) + " not present");
  if (degree_[id] != 0) throw Error("vertex " + std::to_string(id) + " is not isolated");
  vertices_.erase(it);
  degree_.erase(id);
}

void LabeledGraph::relabel_vertex(VertexId id, Label label) {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) throw Error("vertex " + std::to_string(id) + " not present");
  if (label.is_absent()) throw Error("vertex " + std::to_string(id) + " needs a label");
  it->second = label;
}

void LabeledGraph::add_edge(VertexId a, VertexId b, Label label) {
  EdgeKey e = make_edge(a, b);
  if (label.is_absent()) throw Error("edge needs a label");
  if (!has_vertex(a) || !has_vertex(b)) {
    throw Error("edge (" + std::to_string(e.lo) + "," + std::to_string(e.hi) + ") has a missing endpoint");
  }
  if (!edges_.emplace(e, label).second) {
    throw Error("edge (" + std::to_string(e.lo) + "," + std::to_string(e.hi) + ") already present");
  }
  ++degree_[a];
  ++degree_[b];
}

void LabeledGraph::remove_edge(VertexId a, VertexId b) {
  EdgeKey e = make_edge(a, b);
  if (edges_.erase(e) == 0) {
    throw Error("edge (" + std::to_string(e.lo) + "," + std::to_string(e.hi) + ") not present");
  }
  --degree_[a];
  --degree_[b];
}

void LabeledGraph::relabel_edge(VertexId a, VertexId b, Label label) {
  EdgeKey e = make_edge(a, b);
  auto it = edges_.find(e);
  if (it == edges_.end()) {
    throw Error("edge (" + std::to_string(e.lo) + "," + std::to_string(e.hi) + ") not present");
  }
  if (label.is_absent()) throw Error("edge needs a label");
  it->second = label;
}

bool LabeledGraph::has_edge(VertexId a, VertexId b) const {
  if (a == b) return false;
  return edges_.contains(make_edge(a, b));
}

std::optional<Label> LabeledGraph::vertex_label(VertexId id) const {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) return std::nullopt;
  return it->second;
}

std::optional<Label> LabeledGraph::edge_label(VertexId a, VertexId b) const {
  if (a == b) return std::nullopt;
  auto it = edges_.find(make_edge(a, b));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::size_t LabeledGraph::degree(VertexId id) const {
  auto it = degree_.find(id);
  return it == degree_.end() ? 0 : it->second;
}

void GraphSequence::validate() const {
  if (interstates.empty()) throw Error("graph sequence '" + gid + "' has no interstates");
  for (const auto& g : interstates) {
    for (const auto& [e, label] : g.edges()) {
      if (!g.has_vertex(e.lo) || !g.has_vertex(e.hi)) {
        throw Error("graph sequence '" + gid + "' has a dangling edge");
      }
    }
  }
}

std::string_view kind_name(TrKind k) {
  static constexpr std::array<std::string_view, 6> names{"vi", "vd", "vr", "ei", "ed", "er"};
  return names[static_cast<std::size_t>(k)];
}

std::optional<TrKind> parse_kind(std::string_view text) {
  for (int i = 0; i < 6; ++i) {
    auto k = static_cast<TrKind>(i);
    if (kind_name(k) == text) return k;
  }
  return std::nullopt;
}

void TransformationRule::validate() const {
  if (is_vertex_kind(kind) == target.edge) {
    throw Error(std::string(kind_name(kind)) + " rule has the wrong target type");
  }
  if (target.edge && target.first >= target.second) {
    throw Error("edge target is not a normalized vertex pair");
  }
  if (label.is_absent() != is_deletion(kind)) {
    throw Error(std::string(kind_name(kind)) + " rule has the wrong label presence");
  }
  if (interstate < 1 || intrastate < 1) throw Error("rule positions start at 1");
}

int TransformationSequence::interstate_count() const {
  int n = span;
  for (const auto& r : rules) n = std::max(n, r.interstate);
  return n;
}

void TransformationSequence::validate() const {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    rules[i].validate();
    if (i > 0) {
      const auto& p = rules[i - 1];
      const auto& r = rules[i];
      if (std::pair(p.interstate, p.intrastate) >= std::pair(r.interstate, r.intrastate)) {
        throw Error("rule positions are not strictly increasing at rule " + std::to_string(i + 1));
      }
    }
  }
  if (span > 0 && interstate_count() > span) throw Error("rule interstate exceeds the declared span");
}

TransformationSequence normalize_pattern(TransformationSequence s) {
  auto& rules = s.rules;
  std::sort(rules.begin(), rules.end(), [](const TransformationRule& a, const TransformationRule& b) {
    return std::tie(a.interstate, a.kind, a.target, a.label) < std::tie(b.interstate, b.kind, b.target, b.label);
  });
  int dense = 0;
  int last = -1;
  int k = 0;
  for (auto& r : rules) {
    if (r.interstate != last) {
      last = r.interstate;
      ++dense;
      k = 0;
    }
    r.interstate = dense;
    r.intrastate = ++k;
  }
  s.kind = SequenceKind::pattern;
  s.span = dense;
  return s;
}

bool UnionGraph::connected() const {
  if (vertices.empty()) return false;
  DisjointSets sets;
  for (VertexId v : vertices) sets.add(v);
  for (const auto& e : edges) sets.unite(e.lo, e.hi);
  return sets.components() == 1;
}

UnionGraph union_graph_of(const GraphSequence& d) {
  UnionGraph u;
  for (const auto& g : d.interstates) {
    for (const auto& [v, label] : g.vertices()) u.vertices.insert(v);
    for (const auto& [e, label] : g.edges()) u.edges.insert(e);
  }
  return u;
}

UnionGraph union_graph_of(const TransformationSequence& s) {
  UnionGraph u;
  for (const auto& r : s.rules) {
    u.vertices.insert(r.target.first);
    if (r.target.edge) {
      u.vertices.insert(r.target.second);
      u.edges.insert(r.target.edge_key());
    }
  }
  return u;
}

bool is_relevant(const TransformationSequence& s) {
  if (s.rules.empty()) throw Error("relevancy is undefined for an empty sequence");
  return union_graph_of(s).connected();
}

void DisjointSets::add(VertexId x) {
  if (parent_.emplace(x, x).second) ++components_;
}

VertexId DisjointSets::find(VertexId x) {
  add(x);
  VertexId root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    VertexId next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

void DisjointSets::unite(VertexId a, VertexId b) {
  VertexId ra = find(a);
  VertexId rb = find(b);
  if (ra == rb) return;
  parent_[std::max(ra, rb)] = std::min(ra, rb);
  --components_;
}

}  // namespace gtrace
