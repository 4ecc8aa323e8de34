#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "gtrace/core.hpp"

namespace gtrace {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct PatternRecord {
  TransformationSequence sequence;
  std::size_t support = 0;
};

// Graph-sequence format:
//   gid <name>
//   t <j>            (j = 1, 2, ... in order)
//   v <id> <label>
//   e <id1> <id2> <label>
//   end
// `#` starts a comment line.
std::vector<GraphSequence> read_graph_sequences(std::istream& in, LabelTable& labels);
void write_graph_sequences(std::ostream& out, const std::vector<GraphSequence>& db, const LabelTable& labels);

// Rule line: <kind> <j> <k> <target> <label>, target `u` or `(u,v)`, `-` for
// the absent label.
TransformationRule parse_rule(const std::string& line, std::size_t line_no, LabelTable& labels);
void write_rule(std::ostream& out, const TransformationRule& r, const LabelTable& labels);

// TR-sequence database: `gid <name>`, optional `n <span>`, rule lines, `end`.
std::vector<SequenceEntry> read_transformation_sequences(std::istream& in, LabelTable& labels);
void write_transformation_sequences(std::ostream& out, const std::vector<SequenceEntry>& db,
                                    const LabelTable& labels);

// Pattern file: per pattern its rule lines, `support <n>`, then a blank line.
std::vector<PatternRecord> read_patterns(std::istream& in, LabelTable& labels);
void write_patterns(std::ostream& out, const std::vector<PatternRecord>& patterns, const LabelTable& labels);

std::string to_string(const TransformationSequence& s, const LabelTable& labels);

}  // namespace gtrace
