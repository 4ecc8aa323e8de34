#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gtrace/core.hpp"

namespace gtrace {

// Deterministic sampling on top of the raw mt19937_64 stream, so output does
// not depend on the standard library's distribution implementations.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64 v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  // Uniform in [0, 1).
  double real();
  bool chance(double p) { return real() < p; }
  // Poisson sample with the given mean, floored at 1.
  int poisson_at_least_one(double mean);

 private:
  std::mt19937_64 engine_;
};

struct GeneratorConfig {
  double p_insert = 0.8;
  double p_delete = 0.1;
  double v_avg = 6;
  double v_embed_avg = 3;
  int vertex_labels = 5;
  int edge_labels = 5;
  int embedded = 10;
  int db_size = 1000;
  double p_edge = 0.15;
  int edits_per_transition = 2;
  std::uint64_t seed = 1;
  int resample_budget = 1000;

  void validate() const;
};

struct GeneratedData {
  LabelTable labels;
  std::vector<GraphSequence> sequences;
  std::vector<TransformationSequence> planted;  // compiled planted patterns
  std::vector<int> overlay;                     // planted index per sequence
};

GeneratedData generate(const GeneratorConfig& config);

// Header comment naming the generator and its parameters.
std::string generator_header(const GeneratorConfig& config);

}  // namespace gtrace
