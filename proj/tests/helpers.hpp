#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "gtrace/core.hpp"
#include "gtrace/text_io.hpp"

namespace testing {

using namespace gtrace;

// Rule lines in the text format, e.g. "ei 2 1 (1,2) x".
inline TransformationSequence rules(LabelTable& labels, std::initializer_list<const char*> lines,
                                    SequenceKind kind = SequenceKind::pattern) {
  TransformationSequence s;
  s.kind = kind;
  std::size_t n = 0;
  for (const char* line : lines) s.rules.push_back(parse_rule(line, ++n, labels));
  return s;
}

inline SequenceEntry entry(LabelTable& labels, const std::string& gid, std::initializer_list<const char*> lines) {
  return SequenceEntry{gid, rules(labels, lines, SequenceKind::data)};
}

inline std::vector<GraphSequence> graphs_from(const std::string& text, LabelTable& labels) {
  std::istringstream in(text);
  return read_graph_sequences(in, labels);
}

inline SequenceDatabase tsq_from(const std::string& text, LabelTable& labels) {
  std::istringstream in(text);
  return read_transformation_sequences(in, labels);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string data_path(const std::string& name) { return std::string(GTRACE_TEST_DATA) + "/" + name; }

}  // namespace testing
