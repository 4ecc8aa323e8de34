#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gtrace {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using VertexId = std::uint32_t;

// Interned label. The absent label stands for the dummy argument of deletion
// rules and is never a member of the alphabet.
struct Label {
  std::int32_t value = -1;

  static constexpr Label absent() { return Label{-1}; }
  constexpr bool is_absent() const { return value < 0; }

  auto operator<=>(const Label&) const = default;
};

class LabelTable {
 public:
  // "-" is reserved for the absent label in the text formats.
  Label intern(std::string_view name);
  std::optional<Label> find(std::string_view name) const;
  const std::string& name(Label label) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::int32_t> index_;
};

// Unordered vertex pair, stored with the smaller id first.
struct EdgeKey {
  VertexId lo = 0;
  VertexId hi = 0;

  auto operator<=>(const EdgeKey&) const = default;
};

EdgeKey make_edge(VertexId a, VertexId b);

class LabeledGraph {
 public:
  void add_vertex(VertexId id, Label label);
  void remove_vertex(VertexId id);
  void relabel_vertex(VertexId id, Label label);
  void add_edge(VertexId a, VertexId b, Label label);
  void remove_edge(VertexId a, VertexId b);
  void relabel_edge(VertexId a, VertexId b, Label label);

  bool has_vertex(VertexId id) const { return vertices_.contains(id); }
  bool has_edge(VertexId a, VertexId b) const;
  std::optional<Label> vertex_label(VertexId id) const;
  std::optional<Label> edge_label(VertexId a, VertexId b) const;
  std::size_t degree(VertexId id) const;

  const std::map<VertexId, Label>& vertices() const { return vertices_; }
  const std::map<EdgeKey, Label>& edges() const { return edges_; }
  bool empty() const { return vertices_.empty(); }

  bool operator==(const LabeledGraph& other) const {
    return vertices_ == other.vertices_ && edges_ == other.edges_;
  }

 private:
  std::map<VertexId, Label> vertices_;
  std::map<EdgeKey, Label> edges_;
  std::map<VertexId, std::size_t> degree_;
};

struct GraphSequence {
  std::string gid;
  std::vector<LabeledGraph> interstates;

  void validate() const;
  bool operator==(const GraphSequence&) const = default;
};

// Kinds are declared in rank order: vi < vd < vr < ei < ed < er.
enum class TrKind : std::uint8_t { vi, vd, vr, ei, ed, er };

constexpr bool is_vertex_kind(TrKind k) { return k == TrKind::vi || k == TrKind::vd || k == TrKind::vr; }
constexpr bool is_deletion(TrKind k) { return k == TrKind::vd || k == TrKind::ed; }
constexpr int kind_rank(TrKind k) { return static_cast<int>(k); }
std::string_view kind_name(TrKind k);
std::optional<TrKind> parse_kind(std::string_view text);

// Either a single vertex or an unordered vertex pair.
struct Target {
  bool edge = false;
  VertexId first = 0;
  VertexId second = 0;

  static Target vertex(VertexId u) { return Target{false, u, u}; }
  static Target pair(VertexId a, VertexId b) {
    EdgeKey e = make_edge(a, b);
    return Target{true, e.lo, e.hi};
  }
  EdgeKey edge_key() const { return EdgeKey{first, second}; }

  auto operator<=>(const Target&) const = default;
};

struct TransformationRule {
  TrKind kind = TrKind::vi;
  Target target;
  Label label;
  int interstate = 1;
  int intrastate = 1;

  void validate() const;
  bool operator==(const TransformationRule&) const = default;
};

enum class SequenceKind { data, pattern };

struct TransformationSequence {
  std::vector<TransformationRule> rules;
  SequenceKind kind = SequenceKind::data;
  // Number of interstate slots j ranges over; 0 means "derive from rules".
  int span = 0;

  int interstate_count() const;
  bool empty() const { return rules.empty(); }
  void validate() const;
  bool operator==(const TransformationSequence&) const = default;
};

// One database record: a gid with its compiled sequence.
struct SequenceEntry {
  std::string gid;
  TransformationSequence sequence;
};

using SequenceDatabase = std::vector<SequenceEntry>;

// Sorts rules by (interstate, kind, target, label) inside each interstate and
// renumbers interstates densely from 1 and intrastates densely from 1.
TransformationSequence normalize_pattern(TransformationSequence s);

struct UnionGraph {
  std::set<VertexId> vertices;
  std::set<EdgeKey> edges;

  bool connected() const;
  bool operator==(const UnionGraph&) const = default;
};

UnionGraph union_graph_of(const GraphSequence& d);
UnionGraph union_graph_of(const TransformationSequence& s);
bool is_relevant(const TransformationSequence& s);

// Union-find over arbitrary vertex ids.
class DisjointSets {
 public:
  VertexId find(VertexId x);
  void unite(VertexId a, VertexId b);
  std::size_t components() const { return components_; }
  void add(VertexId x);

 private:
  std::unordered_map<VertexId, VertexId> parent_;
  std::size_t components_ = 0;
};

}  // namespace gtrace
