#include <doctest.h>

#include <chrono>
#include <functional>
#include <random>
#include <set>

#include "gtrace/baseline_miner.hpp"
#include "gtrace/compiler.hpp"
#include "gtrace/datagen.hpp"
#include "gtrace/reverse_miner.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace gtrace;

namespace {

SequenceDatabase load_gsq(const std::string& name, LabelTable& t) {
  SequenceDatabase db;
  for (const auto& d : testing::graphs_from(testing::read_text(testing::data_path(name)), t)) {
    db.push_back({d.gid, compile(d)});
  }
  return db;
}

SequenceDatabase generated(std::uint64_t seed, int size, double v_avg) {
  GeneratorConfig c;
  c.db_size = size;
  c.v_avg = v_avg;
  c.seed = seed;
  SequenceDatabase db;
  for (const auto& d : generate(c).sequences) db.push_back({d.gid, compile(d)});
  return db;
}

std::set<CanonicalKey> keys_of(const std::vector<MinedPattern>& ps) {
  std::set<CanonicalKey> out;
  for (const auto& p : ps) out.insert(p.key);
  return out;
}

using Seq = std::vector<std::vector<int>>;

bool contains_sequence(const Seq& data, const Seq& pattern, std::size_t from = 0, std::size_t k = 0) {
  if (k == pattern.size()) return true;
  for (std::size_t i = from; i < data.size(); ++i) {
    if (std::includes(data[i].begin(), data[i].end(), pattern[k].begin(), pattern[k].end()) &&
        contains_sequence(data, pattern, i + 1, k + 1)) {
      return true;
    }
  }
  return false;
}

// Every subsequence of every sequence, counted by definition.
std::map<Seq, std::size_t> brute_sequential(const std::vector<ItemsetSequence>& db, std::size_t min_support) {
  std::set<Seq> candidates;
  for (const auto& s : db) {
    std::function<void(std::size_t, Seq&)> walk = [&](std::size_t i, Seq& acc) {
      if (!acc.empty()) candidates.insert(acc);
      for (std::size_t k = i; k < s.itemsets.size(); ++k) {
        const auto& is = s.itemsets[k];
        for (unsigned mask = 1; mask < (1u << is.size()); ++mask) {
          std::vector<int> sub;
          for (std::size_t b = 0; b < is.size(); ++b) {
            if (mask & (1u << b)) sub.push_back(is[b]);
          }
          acc.push_back(sub);
          walk(k + 1, acc);
          acc.pop_back();
        }
      }
    };
    Seq acc;
    walk(0, acc);
  }
  std::map<Seq, std::size_t> out;
  for (const auto& c : candidates) {
    std::set<std::size_t> gids;
    for (const auto& s : db) {
      if (contains_sequence(s.itemsets, c)) gids.insert(s.gid);
    }
    if (gids.size() >= min_support) out.emplace(c, gids.size());
  }
  return out;
}

struct SkeletonPair {
  LabelTable labels;
  SequenceDatabase db;
  TransformationSequence skeleton;
  std::vector<ProjectedSequence> projected;

  SkeletonPair() {
    db = testing::tsq_from(testing::read_text(testing::data_path("two_skeletons.tsq")), labels);
    skeleton = testing::rules(labels, {"ei 1 1 (1,2) x", "ei 2 1 (2,3) x"});
    const std::map<VertexId, VertexId> psi[2] = {{{1, 1}, {2, 2}, {3, 4}}, {{1, 3}, {2, 1}, {3, 4}}};
    for (int i = 0; i < 2; ++i) {
      std::vector<Embedding> chosen;
      for (const auto& e : embeddings(skeleton, db[static_cast<std::size_t>(i)].sequence)) {
        if (e.psi == psi[i]) chosen.push_back(e);
      }
      REQUIRE(chosen.size() == 1);
      auto p = project(db[static_cast<std::size_t>(i)], skeleton, chosen);
      projected.push_back(p.at(0));
    }
  }

  AnnotatedItem item(const char* rule, Placement placement = Placement::none, int index = 0) {
    auto r = parse_rule(rule, 1, labels);
    return AnnotatedItem{r.kind, r.target, r.label, placement, index};
  }
};

}  // namespace

TEST_CASE("projection drops rules on unmapped vertices") {
  SkeletonPair f;
  auto rules_of = [](const ProjectedSequence& p) {
    std::vector<std::string> out;
    for (const auto& r : p.rules) out.push_back(std::string(kind_name(r.kind)) + std::to_string(r.interstate));
    return out;
  };
  CHECK(rules_of(f.projected[0]) == std::vector<std::string>{"vi1", "vi1", "vi2", "ei2", "vr3", "ei4", "ed5"});
  for (const auto& r : f.projected[0].rules) CHECK(r.target != Target::vertex(3));
  CHECK(rules_of(f.projected[1]) == std::vector<std::string>{"vi1", "vi1", "vi1", "ei2", "ei3", "vr4", "ed4"});
  for (const auto& r : f.projected[1].rules) CHECK(r.target != Target::vertex(2));
}

TEST_CASE("projection keeps everything when nothing is removable") {
  LabelTable t;
  auto data = testing::entry(t, "g", {"vi 1 1 1 A", "vi 1 2 2 B", "ei 2 1 (1,2) x", "er 3 1 (1,2) y"});
  auto skeleton = testing::rules(t, {"ei 1 1 (1,2) x"});
  auto e = embeddings(skeleton, data.sequence);
  REQUIRE(e.size() == 2);
  for (const auto& p : project(data, skeleton, e)) CHECK(p.rules == data.sequence.rules);
}

TEST_CASE("projection matches the definitional filter on generated data") {
  auto db = generated(21, 15, 4);
  for (const auto& entry : db) {
    // Skeleton: the first edge rule of each sequence, as a one-edge pattern.
    auto it = std::find_if(entry.sequence.rules.begin(), entry.sequence.rules.end(),
                           [](const TransformationRule& r) { return r.target.edge; });
    if (it == entry.sequence.rules.end()) continue;
    TransformationSequence skeleton;
    TransformationRule r = *it;
    r.target = Target::pair(1, 2);
    r.interstate = 1;
    skeleton.rules.push_back(r);
    auto embs = embeddings(skeleton, entry.sequence);
    auto projected = project(entry, skeleton, embs);
    REQUIRE(projected.size() == embs.size());
    for (std::size_t i = 0; i < embs.size(); ++i) {
      const auto& e = embs[i];
      EdgeKey image = make_edge(e.psi.at(1), e.psi.at(2));
      std::vector<TransformationRule> expected;
      for (const auto& d : entry.sequence.rules) {
        bool keep = d.target.edge ? (d.target.edge_key() == image && d.interstate >= e.phi[0])
                                  : (d.target.first == image.lo || d.target.first == image.hi);
        if (keep) expected.push_back(d);
      }
      CHECK(projected[i].rules == expected);
    }
  }
}

TEST_CASE("conversion of the reassignment example") {
  SkeletonPair f;
  auto plain = reassign_and_convert(f.projected[0], f.skeleton, false);
  auto i1 = f.item("vi 1 1 1 A");
  auto i2 = f.item("vi 1 1 2 B");
  auto i3 = f.item("vi 1 1 3 C");
  auto i4 = f.item("ei 1 1 (1,2) x");
  auto i5 = f.item("vr 1 1 1 C");
  auto i6 = f.item("ei 1 1 (2,3) x");
  auto i7 = f.item("ed 1 1 (2,3) -");
  CHECK(plain.itemsets == std::vector<Itemset>{{i1, i2}, {i3, i4}, {i5}, {i6}, {i7}});

  auto annotated = reassign_and_convert(f.projected[0], f.skeleton, true);
  auto at = [](AnnotatedItem x, Placement p, int index) {
    x.placement = p;
    x.index = index;
    return x;
  };
  CHECK(annotated.itemsets == std::vector<Itemset>{{at(i1, Placement::before, 1), at(i2, Placement::before, 1)},
                                                   {at(i3, Placement::equal, 1)},
                                                   {at(i5, Placement::before, 2)},
                                                   {at(i7, Placement::after_last, 0)}});
  // Re-conversion restores the reassigned sequence.
  auto whole = reconvert(annotated.itemsets, f.skeleton);
  CHECK(whole.rules.size() == 7);
  CHECK(whole.interstate_count() == 5);
  CHECK(canonical_key(reconvert({}, f.skeleton)) == canonical_key(f.skeleton));

  auto self = project(SequenceEntry{"s", f.skeleton}, f.skeleton, embeddings(f.skeleton, f.skeleton));
  for (const auto& p : self) CHECK(reassign_and_convert(p, f.skeleton, true).itemsets.empty());
}

TEST_CASE("annotated and plain mining of the reassignment example") {
  SkeletonPair f;
  std::vector<ConvertedSequence> plain;
  std::vector<ConvertedSequence> annotated;
  for (const auto& p : f.projected) {
    plain.push_back(reassign_and_convert(p, f.skeleton, false));
    annotated.push_back(reassign_and_convert(p, f.skeleton, true));
  }
  CHECK(mine_itemsets(plain, 2).size() == 17);
  auto three = mine_itemsets(annotated, 2);
  REQUIRE(three.size() == 3);
  std::set<CanonicalKey> got;
  for (const auto& p : three) {
    auto s = reconvert(p.itemsets, f.skeleton);
    CHECK(is_relevant(s));
    CHECK(contains(f.skeleton, s));
    got.insert(canonical_key(s));
  }
  std::set<CanonicalKey> expected{
      canonical_key(testing::rules(f.labels, {"vi 1 1 1 A", "ei 2 1 (1,2) x", "ei 3 1 (2,3) x"})),
      canonical_key(testing::rules(f.labels, {"vi 1 1 2 B", "ei 2 1 (1,2) x", "ei 3 1 (2,3) x"})),
      canonical_key(testing::rules(f.labels, {"vi 1 1 1 A", "vi 1 2 2 B", "ei 2 1 (1,2) x", "ei 3 1 (2,3) x"}))};
  CHECK(got == expected);
  CHECK(mine_itemsets({}, 1).empty());
}

TEST_CASE("reconvert rejects impossible annotations") {
  SkeletonPair f;
  auto a = f.item("vi 1 1 1 A", Placement::before, 1);
  auto b = f.item("vi 1 1 2 B", Placement::equal, 1);
  CHECK_THROWS_AS(reconvert({{a, b}}, f.skeleton), Error);
  CHECK_THROWS_AS(reconvert({{b}, {a}}, f.skeleton), Error);
  CHECK_THROWS_AS(reconvert({{b}, {f.item("vi 1 1 3 C", Placement::equal, 1)}}, f.skeleton), Error);
  CHECK_THROWS_AS(reconvert({{f.item("vi 1 1 1 A")}}, f.skeleton), Error);
  CHECK_NOTHROW(reconvert({{a}, {a}}, f.skeleton));
}

TEST_CASE("prefixspan agrees with exhaustive counting") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<ItemsetSequence> db;
    const std::size_t n = 2 + rng() % 4;
    for (std::size_t g = 0; g < n; ++g) {
      ItemsetSequence s;
      s.gid = g % 3;  // some gids repeat
      const std::size_t len = 1 + rng() % 4;
      for (std::size_t k = 0; k < len; ++k) {
        std::set<int> items;
        const std::size_t width = 1 + rng() % 3;
        while (items.size() < width) items.insert(static_cast<int>(rng() % 4));
        s.itemsets.emplace_back(items.begin(), items.end());
      }
      db.push_back(std::move(s));
    }
    const std::size_t min_support = 1 + rng() % 2;
    std::map<Seq, std::size_t> fast;
    for (const auto& p : prefixspan(db, min_support)) {
      CHECK(fast.emplace(p.itemsets, p.support).second);
    }
    CHECK(fast == brute_sequential(db, min_support));
  }
  CHECK(prefixspan({}, 1).empty());
}

TEST_CASE("two-sequence database gives nine relevant patterns") {
  LabelTable t;
  auto db = load_gsq("nine_patterns.gsq", t);
  MinerConfig c;
  c.min_support = 2;
  auto r = mine_reverse(db, c);
  CHECK(r.patterns.size() == 9);
  CHECK(r.stats.emitted == 9);
  auto keys = keys_of(r.patterns);
  CHECK_FALSE(keys.contains(canonical_key(testing::rules(t, {"vi 1 1 1 A", "vi 2 1 2 B"}))));
  CHECK_FALSE(keys.contains(canonical_key(testing::rules(t, {"vi 1 1 1 B", "vi 2 1 2 A"}))));
  for (const auto& p : r.patterns) {
    CHECK(is_relevant(p.sequence));
    CHECK(p.support == 2);
    CHECK(support(p.sequence, db) == 2);
  }
  c.min_support = 3;
  CHECK(mine_reverse(db, c).patterns.empty());
}

TEST_CASE("reverse search equals the baseline on a generated database") {
  auto db = generated(4, 10, 4);
  MinerConfig c;
  c.min_support = 3;
  auto r = mine_reverse(db, c);
  auto b = mine_baseline(db, c);
  CHECK(keys_of(r.patterns) == keys_of(b.patterns));
  CHECK(r.stats.emitted == r.patterns.size());
}

TEST_CASE("single edges seed the search and grow forward") {
  SkeletonPair f;
  MinerConfig c;
  c.min_support = 2;
  c.vertex_rules = false;
  c.repeated_edge_rules = false;
  auto r = mine_reverse(f.db, c);
  auto keys = keys_of(r.patterns);
  CHECK(keys.contains(canonical_key(testing::rules(f.labels, {"ei 1 1 (1,2) x"}))));
  CHECK(keys.contains(canonical_key(f.skeleton)));
  for (const auto& p : r.patterns) {
    for (const auto& rule : p.sequence.rules) CHECK(rule.target.edge);
  }
}

TEST_CASE("triangle closing appears iff frequent") {
  LabelTable t;
  SequenceDatabase db{
      testing::entry(t, "g1", {"ei 1 1 (1,2) x", "ei 2 1 (2,3) x", "ei 3 1 (1,3) x"}),
      testing::entry(t, "g2", {"ei 1 1 (4,5) x", "ei 2 1 (5,6) x", "ei 3 1 (4,6) x"}),
      testing::entry(t, "g3", {"ei 1 1 (1,2) x", "ei 2 1 (2,3) x", "ei 3 1 (3,4) x"}),
  };
  auto triangle = testing::rules(t, {"ei 1 1 (1,2) x", "ei 2 1 (2,3) x", "ei 3 1 (1,3) x"});
  CHECK(oracle::support(triangle, db) == 2);
  for (std::size_t sigma : {2u, 3u}) {
    MinerConfig c;
    c.min_support = sigma;
    auto keys = keys_of(mine_reverse(db, c).patterns);
    CHECK(keys.contains(canonical_key(triangle)) == (sigma <= 2));
    auto brute = oracle::frequent_subsequences(db, sigma, 4);
    std::size_t relevant = 0;
    for (const auto& [k, found] : brute) {
      if (is_relevant(found.pattern)) ++relevant;
    }
    CHECK(keys.size() == relevant);
  }
}

TEST_CASE("parents of mined patterns are frequent relevant patterns") {
  auto db = generated(8, 12, 4);
  MinerConfig c;
  c.min_support = 3;
  auto r = mine_reverse(db, c);
  auto keys = keys_of(r.patterns);
  for (const auto& p : r.patterns) {
    auto step = parent_of(p.sequence);
    REQUIRE(step.has_value());
    if (step->parent.rules.empty()) {
      CHECK(p.sequence.rules.size() == 1);
      continue;
    }
    CHECK(is_relevant(step->parent));
    CHECK(keys.contains(canonical_key(step->parent)));
    CHECK(support(step->parent, db) >= c.min_support);
    CHECK(contains(step->parent, p.sequence));
    if (step->rule != ParentRule::structural) {
      CHECK(union_graph_of(step->parent) == union_graph_of(p.sequence));
    }
  }
}

TEST_CASE("parent functions on small cases") {
  LabelTable t;
  auto s3 = testing::rules(t, {"ei 1 1 (1,2) x", "ei 1 2 (2,3) x", "ed 2 1 (2,3) -"});
  auto step = parent_of(s3);
  REQUIRE(step);
  CHECK(step->rule == ParentRule::repeated_edge);
  CHECK(step->parent.rules.size() == 2);

  auto v = parent_of(testing::rules(t, {"vi 1 1 1 A", "ei 2 1 (1,2) x"}));
  REQUIRE(v);
  CHECK(v->rule == ParentRule::vertex);
  CHECK(v->parent.rules.size() == 1);

  auto s2 = testing::rules(t, {"ei 1 1 (1,2) x", "ei 1 2 (2,3) x"});
  auto p3 = parent_of(s2);
  REQUIRE(p3);
  CHECK(p3->rule == ParentRule::structural);
  REQUIRE(p3->parent.rules.size() == 1);
  CHECK(canonical_key(p3->parent) == canonical_key(testing::rules(t, {"ei 1 1 (1,2) x"})));
  auto root = parent_of(p3->parent);
  REQUIRE(root);
  CHECK(root->parent.rules.empty());
  CHECK_FALSE(parent_of(TransformationSequence{}).has_value());

  auto code = skeleton_code(s2);
  CHECK(is_min(code));
  CHECK(canonical_key(sequence_of(code)) == canonical_key(s2));
}

TEST_CASE("worker count does not change results") {
  auto db = generated(13, 20, 4);
  MinerConfig c;
  c.min_support = 3;
  auto one = mine_reverse(db, c);
  c.jobs = 4;
  auto four = mine_reverse(db, c);
  REQUIRE(one.patterns.size() == four.patterns.size());
  for (std::size_t i = 0; i < one.patterns.size(); ++i) {
    CHECK(one.patterns[i].key == four.patterns[i].key);
    CHECK(one.patterns[i].support == four.patterns[i].support);
  }
  CHECK(one.stats.emitted == four.stats.emitted);
}

TEST_CASE("an expired deadline marks the result as partial") {
  auto db = generated(13, 20, 4);
  MinerConfig c;
  c.min_support = 2;
  c.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK(mine_reverse(db, c).stats.timed_out);
  CHECK(mine_baseline(db, c).stats.timed_out);
}

TEST_CASE("miner configuration checks") {
  MinerConfig c;
  c.min_support = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK(absolute_support(0.1, 200) == 20);
  CHECK(absolute_support(0.15, 200) == 30);
  CHECK(absolute_support(0.101, 200) == 21);
  CHECK(absolute_support(0.001, 10) == 1);
  CHECK_THROWS_AS(absolute_support(0.0, 10), Error);
  CHECK_THROWS_AS(absolute_support(1.5, 10), Error);
}
