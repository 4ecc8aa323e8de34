// Prints one PASS/FAIL line per acceptance criterion. Exits 0 unless the
// harness itself breaks, so failing criteria stay visible without hiding
// the rest of the report.

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "gtrace/baseline_miner.hpp"
#include "gtrace/canonical.hpp"
#include "gtrace/compiler.hpp"
#include "gtrace/datagen.hpp"
#include "gtrace/reverse_miner.hpp"
#include "gtrace/text_io.hpp"

using namespace gtrace;
using Clock = std::chrono::steady_clock;

namespace {

std::string data_path(const std::string& name) { return std::string(GTRACE_TEST_DATA) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

TransformationSequence rules_of(LabelTable& labels, std::initializer_list<const char*> lines) {
  TransformationSequence s;
  s.kind = SequenceKind::pattern;
  std::size_t n = 0;
  for (const char* line : lines) s.rules.push_back(parse_rule(line, ++n, labels));
  return s;
}

std::set<CanonicalKey> keys_of(const std::vector<MinedPattern>& ps) {
  std::set<CanonicalKey> out;
  for (const auto& p : ps) out.insert(p.key);
  return out;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = Outcome{false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << o.detail << std::endl;
}

// ---------------------------------------------------------------------------

Outcome worked_example() {
  LabelTable labels;
  std::istringstream in(read_file(data_path("nine_patterns.gsq")));
  SequenceDatabase db;
  for (const auto& d : read_graph_sequences(in, labels)) db.push_back({d.gid, compile(d)});
  MinerConfig c;
  c.min_support = 2;
  const auto start = Clock::now();
  const auto r = mine_reverse(db, c);
  const double secs = seconds_since(start);
  const auto keys = keys_of(r.patterns);
  const bool excluded = !keys.contains(canonical_key(rules_of(labels, {"vi 1 1 1 A", "vi 2 1 2 B"}))) &&
                        !keys.contains(canonical_key(rules_of(labels, {"vi 1 1 1 B", "vi 2 1 2 A"})));
  std::ostringstream d;
  d << r.patterns.size() << " patterns in " << secs << " s, disconnected pairs "
    << (excluded ? "excluded" : "present");
  return {r.patterns.size() == 9 && excluded && secs < 1.0, d.str()};
}

struct SkeletonPair {
  LabelTable labels;
  SequenceDatabase db;
  TransformationSequence skeleton;
  std::vector<ConvertedSequence> plain;
  std::vector<ConvertedSequence> annotated;

  SkeletonPair() {
    std::istringstream in(read_file(data_path("two_skeletons.tsq")));
    db = read_transformation_sequences(in, labels);
    skeleton = rules_of(labels, {"ei 1 1 (1,2) x", "ei 2 1 (2,3) x"});
    const std::map<VertexId, VertexId> psi[2] = {{{1, 1}, {2, 2}, {3, 4}}, {{1, 3}, {2, 1}, {3, 4}}};
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<Embedding> chosen;
      for (const auto& e : embeddings(skeleton, db.at(i).sequence)) {
        if (e.psi == psi[i]) chosen.push_back(e);
      }
      if (chosen.size() != 1) throw Error("fixture embedding not found");
      const auto projected = project(db[i], skeleton, chosen).at(0);
      plain.push_back(reassign_and_convert(projected, skeleton, false));
      annotated.push_back(reassign_and_convert(projected, skeleton, true));
    }
  }
};

Outcome annotated_pipeline() {
  SkeletonPair f;
  const auto patterns = mine_itemsets(f.annotated, 2);
  std::set<CanonicalKey> got;
  for (const auto& p : patterns) got.insert(canonical_key(reconvert(p.itemsets, f.skeleton)));
  const std::set<CanonicalKey> expected{
      canonical_key(rules_of(f.labels, {"vi 1 1 1 A", "ei 2 1 (1,2) x", "ei 3 1 (2,3) x"})),
      canonical_key(rules_of(f.labels, {"vi 1 1 2 B", "ei 2 1 (1,2) x", "ei 3 1 (2,3) x"})),
      canonical_key(rules_of(f.labels, {"vi 1 1 1 A", "vi 1 2 2 B", "ei 2 1 (1,2) x", "ei 3 1 (2,3) x"}))};
  std::ostringstream d;
  d << patterns.size() << " annotated patterns, re-converted set " << (got == expected ? "matches" : "differs");
  return {patterns.size() == 3 && got == expected, d.str()};
}

Outcome unfiltered_count() {
  SkeletonPair f;
  const auto plain = mine_itemsets(f.plain, 2).size();
  const auto annotated = mine_itemsets(f.annotated, 2).size();
  std::ostringstream d;
  d << plain << " unfiltered, " << annotated << " annotated";
  return {plain == 17 && annotated == 3, d.str()};
}

// ---------------------------------------------------------------------------
// Criteria 4 to 8 share one grid of generated corpora.

struct GridRun {
  GeneratorConfig gen;
  MinerConfig miner;
  GeneratedData data;
  SequenceDatabase db;
  MineResult reverse;
  MineResult baseline;
};

constexpr std::size_t kLengthCap = 6;

std::vector<GridRun> run_grid(double& secs) {
  const auto start = Clock::now();
  std::vector<GridRun> runs;
  for (std::uint64_t s = 1001; s <= 1060; ++s) {
    GridRun r;
    r.gen.seed = s;
    r.gen.db_size = 10 + static_cast<int>(s % 4) * 10;
    r.gen.v_avg = 3 + static_cast<double>(s % 3);
    r.data = generate(r.gen);
    for (const auto& d : r.data.sequences) r.db.push_back({d.gid, compile(d)});
    r.miner.min_support = 2 + s % 3;
    r.miner.max_rules = kLengthCap;
    r.reverse = mine_reverse(r.db, r.miner);
    r.baseline = mine_baseline(r.db, r.miner);
    runs.push_back(std::move(r));
  }
  secs = seconds_since(start);
  return runs;
}

Outcome oracle_equivalence(const std::vector<GridRun>& runs, double secs) {
  std::size_t mismatches = 0;
  std::size_t patterns = 0;
  for (const auto& r : runs) {
    if (keys_of(r.reverse.patterns) != keys_of(r.baseline.patterns)) ++mismatches;
    patterns += r.reverse.patterns.size();
  }
  std::ostringstream d;
  d << runs.size() << " configs, " << mismatches << " mismatches, " << patterns << " patterns, " << secs << " s";
  return {runs.size() >= 50 && mismatches == 0, d.str()};
}

Outcome no_duplicates(const std::vector<GridRun>& runs) {
  std::size_t bad = 0;
  for (const auto& r : runs) {
    if (r.reverse.stats.emitted != keys_of(r.reverse.patterns).size() ||
        r.reverse.patterns.size() != r.reverse.stats.emitted) {
      ++bad;
    }
  }
  std::ostringstream d;
  d << bad << " runs with emitted count differing from the output set";
  return {bad == 0, d.str()};
}

Outcome parent_invariants(const std::vector<GridRun>& runs) {
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (const auto& r : runs) {
    const auto keys = keys_of(r.reverse.patterns);
    for (const auto& p : r.reverse.patterns) {
      ++checked;
      const auto step = parent_of(p.sequence);
      if (!step) {
        ++violations;
        continue;
      }
      if (step->parent.rules.empty()) {
        if (p.sequence.rules.size() != 1) ++violations;
        continue;
      }
      bool ok = is_relevant(step->parent) && keys.contains(canonical_key(step->parent)) &&
                support(step->parent, r.db) >= r.miner.min_support;
      if (step->rule == ParentRule::structural) {
        ok = ok && union_graph_of(step->parent).connected() && is_min(skeleton_code(step->parent));
      } else {
        ok = ok && union_graph_of(step->parent) == union_graph_of(p.sequence);
      }
      if (!ok) ++violations;
    }
  }
  std::ostringstream d;
  d << checked << " patterns checked, " << violations << " violations";
  return {violations == 0, d.str()};
}

Outcome round_trips(const std::vector<GridRun>& runs) {
  std::size_t sequences = 0;
  std::size_t bad = 0;
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < r.data.sequences.size(); ++i) {
      ++sequences;
      const auto& d = r.data.sequences[i];
      if (decompile(r.db[i].sequence, LabeledGraph{}, {}, d.gid) != d) ++bad;
    }
    std::vector<PatternRecord> records;
    for (const auto& p : r.reverse.patterns) records.push_back(PatternRecord{p.sequence, p.support});
    std::ostringstream first;
    write_patterns(first, records, r.data.labels);
    LabelTable labels = r.data.labels;
    std::istringstream in(first.str());
    const auto back = read_patterns(in, labels);
    std::ostringstream second;
    write_patterns(second, back, labels);
    if (first.str() != second.str() || back.size() != records.size()) ++bad;
  }
  std::ostringstream d;
  d << sequences << " sequences and " << runs.size() << " pattern files, " << bad << " failures";
  return {bad == 0, d.str()};
}

Outcome planted_recall(const std::vector<GridRun>& runs) {
  std::size_t expected = 0;
  std::size_t found = 0;
  std::size_t over_cap = 0;
  for (const auto& r : runs) {
    // Planted patterns travel through the sidecar format, as with `gen --planted`.
    std::vector<SequenceEntry> sidecar;
    for (std::size_t k = 0; k < r.data.planted.size(); ++k) {
      sidecar.push_back({"p" + std::to_string(k + 1), r.data.planted[k]});
    }
    std::ostringstream out;
    write_transformation_sequences(out, sidecar, r.data.labels);
    LabelTable labels = r.data.labels;
    std::istringstream in(out.str());
    const auto keys = keys_of(r.reverse.patterns);
    for (const auto& e : read_transformation_sequences(in, labels)) {
      TransformationSequence p = e.sequence;
      p.kind = SequenceKind::pattern;
      if (support(p, r.db) < r.miner.min_support) continue;
      if (!r.miner.within_cap(p.rules.size())) {
        ++over_cap;
        continue;
      }
      ++expected;
      if (keys.contains(canonical_key(p))) ++found;
    }
  }
  std::ostringstream d;
  d << found << " of " << expected << " frequent planted patterns recovered (" << over_cap
    << " longer than the length cap skipped)";
  return {expected > 0 && found == expected, d.str()};
}

Outcome relative_efficiency() {
  GeneratorConfig gen;
  gen.db_size = 200;
  gen.v_avg = 5;
  gen.seed = 1;
  SequenceDatabase db;
  for (const auto& d : generate(gen).sequences) db.push_back({d.gid, compile(d)});
  MinerConfig c;
  c.min_support = absolute_support(0.10, db.size());
  const auto start = Clock::now();
  const auto reverse = mine_reverse(db, c);
  const auto all = mine_all_fts(db, c);
  const double ratio = irrelevance_ratio(all.patterns);
  std::ostringstream d;
  d << "reverse candidates " << reverse.stats.candidates << ", baseline candidates " << all.stats.candidates
    << ", irrelevance ratio " << ratio << ", " << seconds_since(start) << " s";
  return {reverse.stats.candidates < all.stats.candidates && ratio > 0.5, d.str()};
}

DfsCode edge_code(std::initializer_list<std::tuple<int, int, char>> tuples) {
  DfsCode c;
  for (auto [a, b, l] : tuples) c.push_back(DfsTuple{a - 1, b - 1, 0, 0, {l - 'a', 0, 0}});
  return c;
}

Outcome dfs_code_example() {
  const DfsCode alpha = edge_code({{1, 2, 'a'}, {2, 3, 'b'}, {3, 1, 'a'}, {3, 4, 'c'}, {4, 2, 'b'}, {2, 5, 'd'}});
  const DfsCode beta = edge_code({{1, 2, 'd'}, {2, 3, 'b'}, {3, 4, 'a'}, {4, 2, 'a'}, {3, 5, 'c'}, {5, 2, 'b'}});
  const DfsCode gamma = edge_code({{1, 2, 'a'}, {2, 3, 'a'}, {3, 1, 'b'}, {3, 4, 'd'}, {3, 5, 'b'}, {5, 1, 'c'}});
  const bool order = code_less(gamma, alpha) && code_less(alpha, beta);
  const bool canonical = is_min(gamma);
  std::ostringstream d;
  d << "order gamma < alpha < beta " << (order ? "holds" : "fails") << ", gamma "
    << (canonical ? "is" : "is not") << " the minimum code";
  if (!canonical) {
    d << " (edge labels ordered a < b < c < d: the b-edge (3,4) beats gamma's d-edge at the fourth tuple)";
  }
  return {order && canonical, d.str()};
}

}  // namespace

int main() {
  try {
    report(1, "worked example", worked_example);
    report(2, "annotated pipeline", annotated_pipeline);
    report(3, "unfiltered count", unfiltered_count);
    double grid_secs = 0;
    std::vector<GridRun> grid;
    try {
      grid = run_grid(grid_secs);
    } catch (const std::exception& e) {
      std::cout << "grid run failed: " << e.what() << std::endl;
    }
    report(4, "oracle equivalence", [&] { return oracle_equivalence(grid, grid_secs); });
    report(5, "no duplicate emission", [&] { return no_duplicates(grid); });
    report(6, "parent invariants", [&] { return parent_invariants(grid); });
    report(7, "round trips", [&] { return round_trips(grid); });
    report(8, "planted recall", [&] { return planted_recall(grid); });
    report(9, "relative efficiency", relative_efficiency);
    report(10, "dfs code example", dfs_code_example);
    std::cout << "summary: " << (10 - failures) << " of 10 criteria pass" << std::endl;
  } catch (const std::exception& e) {
    std::cerr << "acceptance harness error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
