#include "gtrace/text_io.hpp"

#include <sstream>
#include <tuple>

namespace gtrace {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool skippable(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

long long to_number(const std::string& text, std::size_t line_no, const char* what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError(line_no, std::string("expected a non-negative integer ") + what + ", found '" + text + "'");
  }
  try {
    return std::stoll(text);
  } catch (const std::exception&) {
    throw ParseError(line_no, std::string(what) + " out of range: '" + text + "'");
  }
}

VertexId to_vertex(const std::string& text, std::size_t line_no) {
  long long v = to_number(text, line_no, "vertex id");
  if (v > 0xffffffffLL) throw ParseError(line_no, "vertex id out of range");
  return static_cast<VertexId>(v);
}

Label to_label(const std::string& text, std::size_t line_no, LabelTable& labels) {
  if (text == "-") return Label::absent();
  try {
    return labels.intern(text);
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }
}

}  // namespace

std::vector<GraphSequence> read_graph_sequences(std::istream& in, LabelTable& labels) {
  std::vector<GraphSequence> db;
  std::string line;
  std::size_t line_no = 0;
  bool open = false;
  GraphSequence current;
  // Vertices and edges of the interstate being read; edges are added once the
  // block is complete so their order relative to `v` lines does not matter.
  std::vector<std::tuple<VertexId, Label, std::size_t>> block_vertices;
  std::vector<std::tuple<VertexId, VertexId, Label, std::size_t>> block_edges;
  std::size_t block_line = 0;

  auto flush_block = [&] {
    if (block_line == 0) return;
    LabeledGraph g;
    for (auto [v, l, at] : block_vertices) {
      try {
        g.add_vertex(v, l);
      } catch (const Error& e) {
        throw ParseError(at, e.what());
      }
    }
    for (auto [a, b, l, at] : block_edges) {
      try {
        g.add_edge(a, b, l);
      } catch (const Error& e) {
        throw ParseError(at, e.what());
      }
    }
    current.interstates.push_back(std::move(g));
    block_vertices.clear();
    block_edges.clear();
    block_line = 0;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto tok = tokens_of(line);
    const std::string& head = tok[0];
    if (head == "gid") {
      if (open) throw ParseError(line_no, "'gid' before 'end' of sequence '" + current.gid + "'");
      if (tok.size() != 2) throw ParseError(line_no, "expected 'gid <name>'");
      current = GraphSequence{tok[1], {}};
      open = true;
      continue;
    }
    if (!open) throw ParseError(line_no, "'" + head + "' outside a sequence block");
    if (head == "t") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 't <j>'");
      flush_block();
      auto j = to_number(tok[1], line_no, "interstate");
      if (j != static_cast<long long>(current.interstates.size()) + 1) {
        throw ParseError(line_no, "interstate " + tok[1] + " out of order");
      }
      block_line = line_no;
    } else if (head == "v") {
      if (block_line == 0) throw ParseError(line_no, "'v' before any 't' line");
      if (tok.size() != 3) throw ParseError(line_no, "expected 'v <id> <label>'");
      Label l = to_label(tok[2], line_no, labels);
      if (l.is_absent()) throw ParseError(line_no, "vertex label may not be '-'");
      block_vertices.emplace_back(to_vertex(tok[1], line_no), l, line_no);
    } else if (head == "e") {
      if (block_line == 0) throw ParseError(line_no, "'e' before any 't' line");
      if (tok.size() != 4) throw ParseError(line_no, "expected 'e <id1> <id2> <label>'");
      Label l = to_label(tok[3], line_no, labels);
      if (l.is_absent()) throw ParseError(line_no, "edge label may not be '-'");
      block_edges.emplace_back(to_vertex(tok[1], line_no), to_vertex(tok[2], line_no), l, line_no);
    } else if (head == "end") {
      flush_block();
      if (current.interstates.empty()) throw ParseError(line_no, "sequence '" + current.gid + "' has no interstates");
      db.push_back(std::move(current));
      current = {};
      open = false;
    } else {
      throw ParseError(line_no, "unknown directive '" + head + "'");
    }
  }
  if (open) throw ParseError(line_no, "missing 'end' for sequence '" + current.gid + "'");
  return db;
}

void write_graph_sequences(std::ostream& out, const std::vector<GraphSequence>& db, const LabelTable& labels) {
  for (const auto& d : db) {
    out << "gid " << d.gid << '\n';
    for (std::size_t j = 0; j < d.interstates.size(); ++j) {
      out << "t " << (j + 1) << '\n';
      const auto& g = d.interstates[j];
      for (const auto& [v, l] : g.vertices()) out << "v " << v << ' ' << labels.name(l) << '\n';
      for (const auto& [e, l] : g.edges()) out << "e " << e.lo << ' ' << e.hi << ' ' << labels.name(l) << '\n';
    }
    out << "end\n";
  }
}

TransformationRule parse_rule(const std::string& line, std::size_t line_no, LabelTable& labels) {
  auto tok = tokens_of(line);
  if (tok.size() != 5) throw ParseError(line_no, "expected '<kind> <j> <k> <target> <label>'");
  auto kind = parse_kind(tok[0]);
  if (!kind) throw ParseError(line_no, "unknown rule kind '" + tok[0] + "'");
  TransformationRule r;
  r.kind = *kind;
  r.interstate = static_cast<int>(to_number(tok[1], line_no, "interstate"));
  r.intrastate = static_cast<int>(to_number(tok[2], line_no, "intrastate"));
  const std::string& t = tok[3];
  try {
    if (t.front() == '(') {
      auto comma = t.find(',');
      if (t.back() != ')' || comma == std::string::npos) throw ParseError(line_no, "malformed edge target '" + t + "'");
      VertexId a = to_vertex(t.substr(1, comma - 1), line_no);
      VertexId b = to_vertex(t.substr(comma + 1, t.size() - comma - 2), line_no);
      r.target = Target::pair(a, b);
    } else {
      r.target = Target::vertex(to_vertex(t, line_no));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }
  r.label = to_label(tok[4], line_no, labels);
  try {
    r.validate();
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }
  return r;
}

void write_rule(std::ostream& out, const TransformationRule& r, const LabelTable& labels) {
  out << kind_name(r.kind) << ' ' << r.interstate << ' ' << r.intrastate << ' ';
  if (r.target.edge) {
    out << '(' << r.target.first << ',' << r.target.second << ')';
  } else {
    out << r.target.first;
  }
  out << ' ' << labels.name(r.label) << '\n';
}

std::vector<SequenceEntry> read_transformation_sequences(std::istream& in, LabelTable& labels) {
  std::vector<SequenceEntry> db;
  std::string line;
  std::size_t line_no = 0;
  bool open = false;
  std::size_t open_line = 0;
  SequenceEntry current;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto tok = tokens_of(line);
    if (tok[0] == "gid") {
      if (open) throw ParseError(line_no, "'gid' before 'end' of sequence '" + current.gid + "'");
      if (tok.size() != 2) throw ParseError(line_no, "expected 'gid <name>'");
      current = SequenceEntry{tok[1], {}};
      open = true;
      open_line = line_no;
    } else if (!open) {
      throw ParseError(line_no, "'" + tok[0] + "' outside a sequence block");
    } else if (tok[0] == "n") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'n <span>'");
      current.sequence.span = static_cast<int>(to_number(tok[1], line_no, "span"));
    } else if (tok[0] == "end") {
      try {
        current.sequence.validate();
      } catch (const Error& e) {
        throw ParseError(open_line, "sequence '" + current.gid + "': " + e.what());
      }
      db.push_back(std::move(current));
      current = {};
      open = false;
    } else {
      current.sequence.rules.push_back(parse_rule(line, line_no, labels));
    }
  }
  if (open) throw ParseError(line_no, "missing 'end' for sequence '" + current.gid + "'");
  return db;
}

void write_transformation_sequences(std::ostream& out, const std::vector<SequenceEntry>& db,
                                    const LabelTable& labels) {
  for (const auto& entry : db) {
    out << "gid " << entry.gid << '\n';
    if (entry.sequence.span > 0) out << "n " << entry.sequence.span << '\n';
    for (const auto& r : entry.sequence.rules) write_rule(out, r, labels);
    out << "end\n";
  }
}

std::vector<PatternRecord> read_patterns(std::istream& in, LabelTable& labels) {
  std::vector<PatternRecord> out;
  std::string line;
  std::size_t line_no = 0;
  PatternRecord current;
  current.sequence.kind = SequenceKind::pattern;
  std::size_t start_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto tok = tokens_of(line);
    if (tok[0] == "support") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'support <n>'");
      current.support = static_cast<std::size_t>(to_number(tok[1], line_no, "support"));
      try {
        current.sequence.validate();
      } catch (const Error& e) {
        throw ParseError(start_line ? start_line : line_no, e.what());
      }
      current.sequence.span = current.sequence.interstate_count();
      out.push_back(std::move(current));
      current = {};
      current.sequence.kind = SequenceKind::pattern;
      start_line = 0;
    } else {
      if (start_line == 0) start_line = line_no;
      current.sequence.rules.push_back(parse_rule(line, line_no, labels));
    }
  }
  if (!current.sequence.rules.empty()) throw ParseError(line_no, "pattern without a 'support' line");
  return out;
}

void write_patterns(std::ostream& out, const std::vector<PatternRecord>& patterns, const LabelTable& labels) {
  for (const auto& p : patterns) {
    for (const auto& r : p.sequence.rules) write_rule(out, r, labels);
    out << "support " << p.support << "\n\n";
  }
}

std::string to_string(const TransformationSequence& s, const LabelTable& labels) {
  std::ostringstream out;
  out << "<";
  for (std::size_t i = 0; i < s.rules.size(); ++i) {
    const auto& r = s.rules[i];
    if (i) out << ' ';
    out << kind_name(r.kind) << '^' << r.interstate << ',' << r.intrastate << '[';
    if (r.target.edge) {
      out << '(' << r.target.first << ',' << r.target.second << ')';
    } else {
      out << r.target.first;
    }
    out << ',' << labels.name(r.label) << ']';
  }
  out << ">";
  return out.str();
}

}  // namespace gtrace
