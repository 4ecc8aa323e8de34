#include "gtrace/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "gtrace/compiler.hpp"

namespace gtrace {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error("empty sampling range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(next());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return lo + static_cast<std::int64_t>(x % range);
}

double Rng::real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::poisson_at_least_one(double mean) {
  const double floor_value = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= real();
  } while (p > floor_value);
  return std::max(1, k - 1);
}

void GeneratorConfig::validate() const {
  auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!probability(p_insert) || !probability(p_delete) || !probability(p_edge)) {
    throw Error("probabilities must lie in [0, 1]");
  }
  if (p_insert + p_delete > 1.0 + 1e-12) throw Error("insert and delete probabilities exceed 1");
  if (v_avg < 1 || v_embed_avg < 1) throw Error("average vertex counts must be at least 1");
  if (vertex_labels < 1 || edge_labels < 1 || embedded < 1 || db_size < 1 || edits_per_transition < 1) {
    throw Error("counts must be at least 1");
  }
  if (resample_budget < 1) throw Error("resample budget must be at least 1");
}

std::string generator_header(const GeneratorConfig& c) {
  std::ostringstream out;
  out << "# generator: " << Rng::kName << " seed=" << c.seed << " pi=" << c.p_insert << " pd=" << c.p_delete
      << " vavg=" << c.v_avg << " vembed=" << c.v_embed_avg << " lv=" << c.vertex_labels << " le=" << c.edge_labels
      << " n=" << c.embedded << " db=" << c.db_size << " pe=" << c.p_edge << " dist=" << c.edits_per_transition;
  return out.str();
}

namespace {

class Grower {
 public:
  Grower(Rng& rng, const GeneratorConfig& config, const std::vector<Label>& vlabels, const std::vector<Label>& elabels)
      : rng_(rng), config_(config), vlabels_(vlabels), elabels_(elabels) {}

  // Grows a sequence until it has used `target` vertex ids and its union
  // graph is connected. Ids start at 1.
  std::vector<LabeledGraph> grow(int target) {
    for (int attempt = 0; attempt < config_.resample_budget; ++attempt) {
      if (auto seq = try_grow(target)) return std::move(*seq);
    }
    throw Error("generator exceeded its resample budget");
  }

  Label vertex_label() { return pick(vlabels_); }
  Label edge_label() { return pick(elabels_); }

  template <typename T>
  T pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(rng_.uniform(0, static_cast<std::int64_t>(items.size()) - 1))];
  }

 private:
  struct Step {
    LabeledGraph graph;
    std::set<VertexId> touched_vertices;
    std::set<EdgeKey> touched_edges;
  };

  std::optional<std::vector<LabeledGraph>> try_grow(int target) {
    LabeledGraph g;
    const int start = std::max(1, target / 2);
    for (int v = 1; v <= start; ++v) g.add_vertex(static_cast<VertexId>(v), vertex_label());
    for (int a = 1; a <= start; ++a) {
      for (int b = a + 1; b <= start; ++b) {
        if (rng_.chance(config_.p_edge)) g.add_edge(static_cast<VertexId>(a), static_cast<VertexId>(b), edge_label());
      }
    }
    ids_ = start;
    union_edges_.clear();
    for (const auto& [e, l] : g.edges()) union_edges_.insert(e);
    std::vector<LabeledGraph> seq{g};

    const int limit = 50 + 20 * target;
    for (int t = 0; t < limit; ++t) {
      if (ids_ >= target && connected()) return seq;
      Step step{seq.back(), {}, {}};
      for (int e = 0; e < config_.edits_per_transition; ++e) {
        for (int tries = 0; tries < 50; ++tries) {
          if (edit(step, target)) break;
        }
      }
      if (step.graph == seq.back()) continue;
      for (const auto& [e, l] : step.graph.edges()) union_edges_.insert(e);
      seq.push_back(std::move(step.graph));
    }
    return std::nullopt;
  }

  bool connected() const {
    DisjointSets sets;
    for (int v = 1; v <= ids_; ++v) sets.add(static_cast<VertexId>(v));
    for (const auto& e : union_edges_) sets.unite(e.lo, e.hi);
    return sets.components() == 1;
  }

  bool edit(Step& step, int target) {
    LabeledGraph& g = step.graph;
    const double r = rng_.real();
    if (r < config_.p_insert) {
      std::vector<EdgeKey> open;
      for (auto a = g.vertices().begin(); a != g.vertices().end(); ++a) {
        for (auto b = std::next(a); b != g.vertices().end(); ++b) {
          EdgeKey e{a->first, b->first};
          if (!g.has_edge(e.lo, e.hi) && !step.touched_edges.contains(e)) open.push_back(e);
        }
      }
      const bool vertex_ok = ids_ < target;
      if (vertex_ok && (open.empty() || rng_.chance(0.5))) {
        auto v = static_cast<VertexId>(++ids_);
        g.add_vertex(v, vertex_label());
        step.touched_vertices.insert(v);
        return true;
      }
      if (open.empty()) return false;
      EdgeKey e = pick(open);
      g.add_edge(e.lo, e.hi, edge_label());
      step.touched_edges.insert(e);
      return true;
    }
    if (r < config_.p_insert + config_.p_delete) {
      std::vector<Target> options;
      for (const auto& [e, l] : g.edges()) {
        if (!step.touched_edges.contains(e)) options.push_back(Target::pair(e.lo, e.hi));
      }
      for (const auto& [v, l] : g.vertices()) {
        if (step.touched_vertices.contains(v) || g.degree(v) != 0) continue;
        bool linked = std::any_of(union_edges_.begin(), union_edges_.end(),
                                  [&](const EdgeKey& e) { return e.lo == v || e.hi == v; });
        if (linked) options.push_back(Target::vertex(v));
      }
      if (options.empty()) return false;
      Target t = pick(options);
      if (t.edge) {
        g.remove_edge(t.first, t.second);
        step.touched_edges.insert(t.edge_key());
      } else {
        g.remove_vertex(t.first);
        step.touched_vertices.insert(t.first);
      }
      return true;
    }
    std::vector<Target> options;
    if (vlabels_.size() > 1) {
      for (const auto& [v, l] : g.vertices()) {
        if (!step.touched_vertices.contains(v)) options.push_back(Target::vertex(v));
      }
    }
    if (elabels_.size() > 1) {
      for (const auto& [e, l] : g.edges()) {
        if (!step.touched_edges.contains(e)) options.push_back(Target::pair(e.lo, e.hi));
      }
    }
    if (options.empty()) return false;
    Target t = pick(options);
    if (t.edge) {
      Label old = *g.edge_label(t.first, t.second);
      Label fresh = old;
      while (fresh == old) fresh = edge_label();
      g.relabel_edge(t.first, t.second, fresh);
      step.touched_edges.insert(t.edge_key());
    } else {
      Label old = *g.vertex_label(t.first);
      Label fresh = old;
      while (fresh == old) fresh = vertex_label();
      g.relabel_vertex(t.first, fresh);
      step.touched_vertices.insert(t.first);
    }
    return true;
  }

  Rng& rng_;
  const GeneratorConfig& config_;
  const std::vector<Label>& vlabels_;
  const std::vector<Label>& elabels_;
  int ids_ = 0;
  std::set<EdgeKey> union_edges_;
};

std::string vertex_label_name(int i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "V" + std::to_string(i + 1);
}

std::string edge_label_name(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "e" + std::to_string(i + 1);
}

VertexId max_vertex(const std::vector<LabeledGraph>& seq) {
  VertexId m = 0;
  for (const auto& g : seq) {
    if (!g.vertices().empty()) m = std::max(m, g.vertices().rbegin()->first);
  }
  return m;
}

// Host plus planted graph sequence, or nullopt when no bridging edge fits.
std::optional<std::vector<LabeledGraph>> overlay(Grower& grower, Rng& rng, std::vector<LabeledGraph> host,
                                                 const std::vector<LabeledGraph>& planted) {
  const auto n = static_cast<std::int64_t>(host.size());
  const auto q = static_cast<std::int64_t>(planted.size());
  const auto offset = rng.uniform(0, n - 1);
  const auto total = std::max(n, offset + q);
  while (static_cast<std::int64_t>(host.size()) < total) host.push_back(host.back());
  std::set<VertexId> host_ids;
  for (const auto& g : host) {
    for (const auto& [v, l] : g.vertices()) host_ids.insert(v);
  }
  const VertexId base = max_vertex(host);
  for (std::int64_t t = offset; t < total; ++t) {
    const auto& p = planted[static_cast<std::size_t>(std::min(t - offset, q - 1))];
    auto& g = host[static_cast<std::size_t>(t)];
    for (const auto& [v, l] : p.vertices()) g.add_vertex(base + v, l);
    for (const auto& [e, l] : p.edges()) g.add_edge(base + e.lo, base + e.hi, l);
  }

  std::vector<VertexId> planted_last;
  for (const auto& [v, l] : planted.back().vertices()) planted_last.push_back(base + v);
  if (planted_last.empty()) return std::nullopt;
  for (std::int64_t from = offset + q - 1; from < total; ++from) {
    std::vector<VertexId> hosts;
    for (VertexId h : host_ids) {
      bool stays = true;
      for (std::int64_t t = from; t < total && stays; ++t) stays = host[static_cast<std::size_t>(t)].has_vertex(h);
      if (stays) hosts.push_back(h);
    }
    if (hosts.empty()) continue;
    VertexId a = grower.pick(planted_last);
    VertexId h = grower.pick(hosts);
    Label l = grower.edge_label();
    for (std::int64_t t = from; t < total; ++t) host[static_cast<std::size_t>(t)].add_edge(a, h, l);
    return host;
  }
  return std::nullopt;
}

}  // namespace

GeneratedData generate(const GeneratorConfig& config) {
  config.validate();
  GeneratedData out;
  std::vector<Label> vlabels;
  std::vector<Label> elabels;
  for (int i = 0; i < config.vertex_labels; ++i) vlabels.push_back(out.labels.intern(vertex_label_name(i)));
  for (int i = 0; i < config.edge_labels; ++i) elabels.push_back(out.labels.intern(edge_label_name(i)));

  Rng rng(config.seed);
  Grower grower(rng, config, vlabels, elabels);

  std::vector<std::vector<LabeledGraph>> planted;
  for (int k = 0; k < config.embedded; ++k) {
    std::vector<LabeledGraph> p;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= config.resample_budget) throw Error("generator could not build a planted pattern");
      p = grower.grow(rng.poisson_at_least_one(config.v_embed_avg));
      if (!p.back().empty()) break;
    }
    GraphSequence d{"p" + std::to_string(k + 1), p};
    out.planted.push_back(normalize_pattern(compile(d)));
    planted.push_back(std::move(p));
  }

  for (int i = 0; i < config.db_size; ++i) {
    const int k = static_cast<int>(rng.uniform(0, config.embedded - 1));
    const auto& p = planted[static_cast<std::size_t>(k)];
    const int planted_ids = static_cast<int>(max_vertex(p));
    std::optional<std::vector<LabeledGraph>> merged;
    for (int attempt = 0; !merged; ++attempt) {
      if (attempt >= config.resample_budget) throw Error("generator could not overlay a planted pattern");
      const int target = std::max(1, rng.poisson_at_least_one(config.v_avg) - planted_ids);
      merged = overlay(grower, rng, grower.grow(target), p);
    }
    out.sequences.push_back(GraphSequence{"g" + std::to_string(i + 1), std::move(*merged)});
    out.overlay.push_back(k);
  }
  return out;
}

}  // namespace gtrace
