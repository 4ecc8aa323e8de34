#include "gtrace/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>
#include <sstream>

namespace gtrace {

std::vector<TransformationRule> edit_script(const LabeledGraph& from, const LabeledGraph& to, int interstate) {
  std::vector<TransformationRule> out;
  auto push = [&](TrKind kind, Target target, Label label) {
    out.push_back(TransformationRule{kind, target, label, interstate, static_cast<int>(out.size()) + 1});
  };

  for (const auto& [v, label] : to.vertices()) {
    if (!from.has_vertex(v)) push(TrKind::vi, Target::vertex(v), label);
  }
  for (const auto& [e, label] : to.edges()) {
    if (!from.has_edge(e.lo, e.hi)) push(TrKind::ei, Target::pair(e.lo, e.hi), label);
  }
  for (const auto& [v, label] : to.vertices()) {
    auto old = from.vertex_label(v);
    if (old && *old != label) push(TrKind::vr, Target::vertex(v), label);
  }
  for (const auto& [e, label] : to.edges()) {
    auto old = from.edge_label(e.lo, e.hi);
    if (old && *old != label) push(TrKind::er, Target::pair(e.lo, e.hi), label);
  }
  for (const auto& [e, label] : from.edges()) {
    if (!to.has_edge(e.lo, e.hi)) push(TrKind::ed, Target::pair(e.lo, e.hi), Label::absent());
  }
  for (const auto& [v, label] : from.vertices()) {
    if (!to.has_vertex(v)) push(TrKind::vd, Target::vertex(v), Label::absent());
  }
  return out;
}

TransformationSequence compile(const GraphSequence& d, CompilationConvention convention) {
  d.validate();
  TransformationSequence s;
  s.kind = SequenceKind::data;
  const bool emit = convention.initial == InitialState::emit_initial_inserts;
  int j = 1;
  if (emit) {
    auto initial = edit_script(LabeledGraph{}, d.interstates.front(), j++);
    s.rules.insert(s.rules.end(), initial.begin(), initial.end());
  }
  for (std::size_t t = 0; t + 1 < d.interstates.size(); ++t) {
    auto step = edit_script(d.interstates[t], d.interstates[t + 1], j++);
    s.rules.insert(s.rules.end(), step.begin(), step.end());
  }
  s.span = j - 1;
  return s;
}

void apply_rule(LabeledGraph& g, const TransformationRule& r) {
  const auto& t = r.target;
  switch (r.kind) {
    case TrKind::vi: g.add_vertex(t.first, r.label); break;
    case TrKind::vd: g.remove_vertex(t.first); break;
    case TrKind::vr: g.relabel_vertex(t.first, r.label); break;
    case TrKind::ei: g.add_edge(t.first, t.second, r.label); break;
    case TrKind::ed: g.remove_edge(t.first, t.second); break;
    case TrKind::er: g.relabel_edge(t.first, t.second, r.label); break;
  }
}

GraphSequence decompile(const TransformationSequence& s, const LabeledGraph& start,
                        CompilationConvention convention, std::string gid) {
  s.validate();
  GraphSequence d;
  d.gid = std::move(gid);
  const bool emit = convention.initial == InitialState::emit_initial_inserts;
  LabeledGraph current = start;
  if (!emit) d.interstates.push_back(current);
  const int slots = s.interstate_count();
  std::size_t i = 0;
  for (int j = 1; j <= slots; ++j) {
    for (; i < s.rules.size() && s.rules[i].interstate == j; ++i) {
      const auto& r = s.rules[i];
      try {
        apply_rule(current, r);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "rule " << (i + 1) << " (" << kind_name(r.kind) << " at " << r.interstate << ","
            << r.intrastate << ") cannot be replayed: " << e.what();
        throw ReplayError(msg.str(), i);
      }
    }
    d.interstates.push_back(current);
  }
  if (d.interstates.empty()) d.interstates.push_back(current);
  return d;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    auto b = field.find_first_not_of(" \t\r");
    auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::int64_t parse_int(const std::string& text, std::size_t& pos) {
  std::size_t used = 0;
  long long value = std::stoll(text.substr(pos), &used);
  pos += used;
  return value;
}

}  // namespace

std::int64_t parse_time(const std::string& text) {
  if (text.empty()) throw Error("empty time");
  bool numeric = std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '-'; });
  if (numeric && text.find('-', 1) == std::string::npos) return std::stoll(text);

  auto bad = [&] { return Error("malformed time '" + text + "'"); };
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') throw bad();
  int y = std::stoi(text.substr(0, 4));
  unsigned m = static_cast<unsigned>(std::stoi(text.substr(5, 2)));
  unsigned d = static_cast<unsigned>(std::stoi(text.substr(8, 2)));
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw bad();
  std::int64_t seconds = std::chrono::sys_days{ymd}.time_since_epoch().count() * 86400LL;
  if (text.size() == 10) return seconds;
  if (text[10] != 'T' && text[10] != ' ') throw bad();
  std::size_t pos = 11;
  std::int64_t hh = parse_int(text, pos);
  if (pos >= text.size() || text[pos] != ':') throw bad();
  ++pos;
  std::int64_t mm = parse_int(text, pos);
  std::int64_t ss = 0;
  if (pos < text.size() && text[pos] == ':') {
    ++pos;
    ss = parse_int(text, pos);
  }
  if (pos < text.size() && text.substr(pos) != "Z") throw bad();
  if (hh > 23 || mm > 59 || ss > 60 || hh < 0 || mm < 0 || ss < 0) throw bad();
  return seconds + hh * 3600 + mm * 60 + ss;
}

std::int64_t parse_duration(const std::string& text) {
  if (text.empty()) throw Error("empty duration");
  std::int64_t unit = 1;
  std::string number = text;
  switch (text.back()) {
    case 's': unit = 1; number.pop_back(); break;
    case 'm': unit = 60; number.pop_back(); break;
    case 'h': unit = 3600; number.pop_back(); break;
    case 'd': unit = 86400; number.pop_back(); break;
    case 'w': unit = 7 * 86400; number.pop_back(); break;
    default: break;
  }
  if (number.empty() || !std::all_of(number.begin(), number.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw Error("malformed duration '" + text + "'");
  }
  std::int64_t value = std::stoll(number) * unit;
  if (value <= 0) throw Error("duration must be positive: '" + text + "'");
  return value;
}

EdgeLog parse_edge_log(std::istream& in) {
  EdgeLog log;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      if (!fields.empty() && fields[0] == "time") continue;
    }
    if (fields.size() != 4 && fields.size() != 6) {
      log.errors.push_back({line_no, "expected 4 or 6 fields, found " + std::to_string(fields.size())});
      continue;
    }
    EdgeRecord rec;
    try {
      rec.time = parse_time(fields[0]);
    } catch (const std::exception& e) {
      log.errors.push_back({line_no, e.what()});
      continue;
    }
    rec.src = fields[1];
    rec.dst = fields[2];
    rec.edge_label = fields[3];
    if (fields.size() == 6) {
      rec.src_label = fields[4];
      rec.dst_label = fields[5];
    }
    if (rec.src.empty() || rec.dst.empty() || rec.edge_label.empty() || rec.edge_label == "-") {
      log.errors.push_back({line_no, "missing endpoint or edge label"});
      continue;
    }
    if (rec.src == rec.dst) {
      log.errors.push_back({line_no, "self-loop on '" + rec.src + "'"});
      continue;
    }
    if (rec.src_label == "-" || rec.dst_label == "-") {
      log.errors.push_back({line_no, "'-' is not a usable vertex label"});
      continue;
    }
    log.records.push_back(std::move(rec));
  }
  return log;
}

IngestResult ingest_edge_log(const EdgeLog& log, std::int64_t window, std::int64_t snapshot, LabelTable& labels) {
  if (window <= 0 || snapshot <= 0) throw Error("window and snapshot durations must be positive");
  if (snapshot > window) throw Error("snapshot duration exceeds the window");
  IngestResult result;
  result.errors = log.errors;
  if (log.records.empty()) return result;

  std::map<std::string, VertexId> ids;
  auto id_of = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<VertexId>(ids.size() + 1));
    return it->second;
  };
  const Label default_vertex = labels.intern("v");

  std::int64_t origin = log.records.front().time;
  for (const auto& r : log.records) origin = std::min(origin, r.time);
  const auto slots = static_cast<std::size_t>((window + snapshot - 1) / snapshot);

  // window index -> snapshot index -> graph
  std::map<std::int64_t, std::vector<LabeledGraph>> windows;
  std::vector<const EdgeRecord*> ordered;
  for (const auto& r : log.records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->time < b->time; });

  for (const EdgeRecord* r : ordered) {
    std::int64_t offset = r->time - origin;
    std::int64_t w = offset / window;
    auto slot = static_cast<std::size_t>((offset - w * window) / snapshot);
    auto& graphs = windows[w];
    if (graphs.empty()) graphs.resize(slots);
    LabeledGraph& g = graphs[slot];
    VertexId a = id_of(r->src);
    VertexId b = id_of(r->dst);
    Label la = r->src_label.empty() ? default_vertex : labels.intern(r->src_label);
    Label lb = r->dst_label.empty() ? default_vertex : labels.intern(r->dst_label);
    auto place = [&](VertexId v, Label l, bool explicit_label) {
      if (!g.has_vertex(v)) {
        g.add_vertex(v, l);
      } else if (explicit_label) {
        g.relabel_vertex(v, l);
      }
    };
    place(a, la, !r->src_label.empty());
    place(b, lb, !r->dst_label.empty());
    Label le = labels.intern(r->edge_label);
    if (g.has_edge(a, b)) {
      g.relabel_edge(a, b, le);
    } else {
      g.add_edge(a, b, le);
    }
  }

  for (auto& [w, graphs] : windows) {
    while (graphs.size() > 1 && graphs.back().empty()) graphs.pop_back();
    GraphSequence d;
    d.gid = "w" + std::to_string(w + 1);
    d.interstates = std::move(graphs);
    result.sequences.push_back(std::move(d));
  }
  return result;
}

}  // namespace gtrace
