#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "gtrace/core.hpp"

namespace gtrace {

enum class InitialState {
  emit_initial_inserts,  // g(1) is encoded as insertions at interstate 1
  assume_empty_start,    // g(1) is the replay origin; transition j produces g(j+1)
};

struct CompilationConvention {
  InitialState initial = InitialState::emit_initial_inserts;
};

// Minimal edit script turning `from` into `to`, in phase order
// vi, ei, vr, er, ed, vd with ties broken by target id.
std::vector<TransformationRule> edit_script(const LabeledGraph& from, const LabeledGraph& to, int interstate);

TransformationSequence compile(const GraphSequence& d, CompilationConvention convention = {});

class ReplayError : public Error {
 public:
  ReplayError(const std::string& what, std::size_t rule_index)
      : Error(what), rule_index_(rule_index) {}
  std::size_t rule_index() const { return rule_index_; }

 private:
  std::size_t rule_index_;
};

void apply_rule(LabeledGraph& g, const TransformationRule& r);

// Replays `s` from `start`. Under assume_empty_start the result begins with
// `start`; under emit_initial_inserts it begins with the graph produced by
// interstate 1.
GraphSequence decompile(const TransformationSequence& s, const LabeledGraph& start,
                        CompilationConvention convention = {}, std::string gid = {});

struct EdgeRecord {
  std::int64_t time = 0;
  std::string src;
  std::string dst;
  std::string edge_label;
  std::string src_label;
  std::string dst_label;
};

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

struct EdgeLog {
  std::vector<EdgeRecord> records;
  std::vector<RecordError> errors;
};

// CSV with header `time,src,dst,elabel[,srclabel,dstlabel]`. Malformed lines
// are reported and skipped.
EdgeLog parse_edge_log(std::istream& in);

// Time is integer seconds or ISO-8601 (`YYYY-MM-DD` or `YYYY-MM-DDTHH:MM[:SS][Z]`).
std::int64_t parse_time(const std::string& text);
// Durations: plain seconds or a number with one of the suffixes s, m, h, d, w.
std::int64_t parse_duration(const std::string& text);

struct IngestResult {
  std::vector<GraphSequence> sequences;
  std::vector<RecordError> errors;
};

// One sequence per window; interstates are per-snapshot graphs. Vertex ids are
// assigned per distinct endpoint name in order of first appearance.
IngestResult ingest_edge_log(const EdgeLog& log, std::int64_t window, std::int64_t snapshot,
                             LabelTable& labels);

}  // namespace gtrace
