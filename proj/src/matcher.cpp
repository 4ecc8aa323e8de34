#include "gtrace/matcher.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>

namespace gtrace {

SequenceIndex::SequenceIndex(const TransformationSequence& data) {
  span_ = data.interstate_count();
  by_interstate_.resize(static_cast<std::size_t>(span_) + 1);
  by_target_.resize(static_cast<std::size_t>(span_) + 1);
  for (const auto& r : data.rules) {
    by_interstate_[static_cast<std::size_t>(r.interstate)].push_back(&r);
    by_target_[static_cast<std::size_t>(r.interstate)].emplace(r.target, &r);
  }
}

const TransformationRule* SequenceIndex::find(int interstate, const Target& target) const {
  if (interstate < 1 || interstate > span_) return nullptr;
  const auto& m = by_target_[static_cast<std::size_t>(interstate)];
  auto it = m.find(target);
  return it == m.end() ? nullptr : it->second;
}

const std::vector<const TransformationRule*>& SequenceIndex::at(int interstate) const {
  return by_interstate_.at(static_cast<std::size_t>(interstate));
}

namespace {

class Search {
 public:
  using Visit = std::function<bool(const Embedding&)>;  // return true to stop

  Search(const TransformationSequence& pattern, const SequenceIndex& data, Visit visit)
      : data_(data), visit_(std::move(visit)) {
    std::map<int, std::vector<const TransformationRule*>> groups;
    for (const auto& r : pattern.rules) groups[r.interstate].push_back(&r);
    for (auto& [j, rules] : groups) groups_.push_back(std::move(rules));
  }

  void run() {
    current_.phi.clear();
    current_.psi.clear();
    used_.clear();
    group(0, 1);
  }

 private:
  bool group(std::size_t g, int lo) {
    if (g == groups_.size()) return visit_(current_);
    const int remaining = static_cast<int>(groups_.size() - g) - 1;
    for (int j = lo; j + remaining <= data_.span(); ++j) {
      current_.phi.push_back(j);
      bool stop = rule(g, 0, j);
      current_.phi.pop_back();
      if (stop) return true;
    }
    return false;
  }

  bool bind(VertexId u, VertexId v) {
    if (used_.contains(v)) return false;
    current_.psi.emplace(u, v);
    used_.insert(v);
    return true;
  }

  void unbind(VertexId u) {
    auto it = current_.psi.find(u);
    used_.erase(it->second);
    current_.psi.erase(it);
  }

  std::optional<VertexId> image(VertexId u) const {
    auto it = current_.psi.find(u);
    if (it == current_.psi.end()) return std::nullopt;
    return it->second;
  }

  static bool same(const TransformationRule& p, const TransformationRule& d) {
    return p.kind == d.kind && p.label == d.label;
  }

  bool rule(std::size_t g, std::size_t i, int j) {
    const auto& rules = groups_[g];
    if (i == rules.size()) return group(g + 1, j + 1);
    const TransformationRule& p = *rules[i];
    if (!p.target.edge) {
      VertexId u = p.target.first;
      if (auto v = image(u)) {
        const auto* d = data_.find(j, Target::vertex(*v));
        return d && same(p, *d) ? rule(g, i + 1, j) : false;
      }
      for (const auto* d : data_.at(j)) {
        if (d->target.edge || !same(p, *d)) continue;
        if (!bind(u, d->target.first)) continue;
        bool stop = rule(g, i + 1, j);
        unbind(u);
        if (stop) return true;
      }
      return false;
    }

    VertexId a = p.target.first;
    VertexId b = p.target.second;
    auto va = image(a);
    auto vb = image(b);
    if (va && vb) {
      if (*va == *vb) return false;
      const auto* d = data_.find(j, Target::pair(*va, *vb));
      return d && same(p, *d) ? rule(g, i + 1, j) : false;
    }
    for (const auto* d : data_.at(j)) {
      if (!d->target.edge || !same(p, *d)) continue;
      const VertexId x = d->target.first;
      const VertexId y = d->target.second;
      for (auto [da, db] : {std::pair{x, y}, std::pair{y, x}}) {
        if (va && *va != da) continue;
        if (vb && *vb != db) continue;
        bool bound_a = false;
        bool bound_b = false;
        if (!va) {
          if (!bind(a, da)) continue;
          bound_a = true;
        }
        if (!vb) {
          if (!bind(b, db)) {
            if (bound_a) unbind(a);
            continue;
          }
          bound_b = true;
        }
        bool stop = rule(g, i + 1, j);
        if (bound_b) unbind(b);
        if (bound_a) unbind(a);
        if (stop) return true;
      }
    }
    return false;
  }

  const SequenceIndex& data_;
  Visit visit_;
  std::vector<std::vector<const TransformationRule*>> groups_;
  Embedding current_;
  std::unordered_set<VertexId> used_;
};

}  // namespace

std::vector<Embedding> embeddings(const TransformationSequence& pattern, const TransformationSequence& data) {
  SequenceIndex index(data);
  std::set<Embedding> found;
  Search search(pattern, index, [&](const Embedding& e) {
    found.insert(e);
    return false;
  });
  search.run();
  return {found.begin(), found.end()};
}

bool contains(const TransformationSequence& pattern, const SequenceIndex& data) {
  bool hit = false;
  Search search(pattern, data, [&](const Embedding&) {
    hit = true;
    return true;
  });
  search.run();
  return hit;
}

bool contains(const TransformationSequence& pattern, const TransformationSequence& data) {
  return contains(pattern, SequenceIndex(data));
}

std::size_t support(const TransformationSequence& pattern, const SequenceDatabase& db) {
  std::set<std::string> gids;
  for (const auto& entry : db) {
    if (gids.contains(entry.gid)) continue;
    if (contains(pattern, entry.sequence)) gids.insert(entry.gid);
  }
  return gids.size();
}

}  // namespace gtrace
