#include <doctest.h>

#include <sstream>

#include "gtrace/compiler.hpp"
#include "gtrace/datagen.hpp"
#include "gtrace/matcher.hpp"
#include "gtrace/text_io.hpp"

using namespace gtrace;

namespace {

std::string dump(const GeneratedData& g) {
  std::ostringstream out;
  write_graph_sequences(out, g.sequences, g.labels);
  return out.str();
}

}  // namespace

TEST_CASE("same seed, same output") {
  GeneratorConfig c;
  c.db_size = 30;
  c.seed = 5;
  CHECK(dump(generate(c)) == dump(generate(c)));
  auto other = c;
  other.seed = 6;
  CHECK(dump(generate(c)) != dump(generate(other)));
  CHECK(generator_header(c).starts_with("# generator: mt19937_64 v1 seed=5 "));
}

TEST_CASE("generated sequences are valid, relevant and carry their planted pattern") {
  GeneratorConfig c;
  c.db_size = 60;
  c.seed = 11;
  auto g = generate(c);
  REQUIRE(g.sequences.size() == 60);
  REQUIRE(g.planted.size() == static_cast<std::size_t>(c.embedded));
  REQUIRE(g.overlay.size() == 60);
  for (const auto& p : g.planted) {
    CHECK_FALSE(p.rules.empty());
    CHECK(is_relevant(p));
  }
  for (std::size_t i = 0; i < g.sequences.size(); ++i) {
    const auto& d = g.sequences[i];
    CHECK_NOTHROW(d.validate());
    CHECK(union_graph_of(d).connected());
    auto s = compile(d);
    CHECK(is_relevant(s));
    CHECK(contains(g.planted[static_cast<std::size_t>(g.overlay[i])], s));
  }
}

TEST_CASE("insert-only single edits") {
  GeneratorConfig c;
  c.p_insert = 1;
  c.p_delete = 0;
  c.edits_per_transition = 1;
  c.db_size = 20;
  c.embedded = 3;
  c.seed = 3;
  for (const auto& d : generate(c).sequences) {
    for (std::size_t k = 1; k < d.interstates.size(); ++k) {
      const auto& a = d.interstates[k - 1];
      const auto& b = d.interstates[k];
      for (const auto& r : edit_script(a, b, 1)) CHECK((r.kind == TrKind::vi || r.kind == TrKind::ei));
    }
  }
}

TEST_CASE("default sizes track the requested average") {
  GeneratorConfig c;
  c.db_size = 1000;
  c.seed = 1;
  auto g = generate(c);
  double total = 0;
  for (const auto& d : g.sequences) total += static_cast<double>(union_graph_of(d).vertices.size());
  const double avg = total / static_cast<double>(g.sequences.size());
  CHECK(avg >= 4.5);
  CHECK(avg <= 9.0);

  std::vector<std::size_t> uses(g.planted.size(), 0);
  for (int k : g.overlay) ++uses[static_cast<std::size_t>(k)];
  SequenceDatabase db;
  for (const auto& d : g.sequences) db.push_back({d.gid, compile(d)});
  for (std::size_t k = 0; k < g.planted.size(); ++k) CHECK(support(g.planted[k], db) >= uses[k]);
}

TEST_CASE("generator parameters are checked") {
  auto bad = [](auto change) {
    GeneratorConfig c;
    change(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](GeneratorConfig& c) { c.p_insert = 1.5; }).validate(), Error);
  CHECK_THROWS_AS(bad([](GeneratorConfig& c) { c.p_insert = 0.7; c.p_delete = 0.5; }).validate(), Error);
  CHECK_THROWS_AS(bad([](GeneratorConfig& c) { c.db_size = 0; }).validate(), Error);
  CHECK_THROWS_AS(bad([](GeneratorConfig& c) { c.vertex_labels = 0; }).validate(), Error);
  CHECK_THROWS_AS(bad([](GeneratorConfig& c) { c.embedded = 0; }).validate(), Error);
  CHECK_NOTHROW(GeneratorConfig{}.validate());
}

TEST_CASE("sampling helpers") {
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    auto u = r.uniform(-2, 3);
    CHECK(u >= -2);
    CHECK(u <= 3);
    double x = r.real();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(r.poisson_at_least_one(2.0) >= 1);
  }
}
