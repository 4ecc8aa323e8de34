#include "gtrace/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "gtrace/baseline_miner.hpp"
#include "gtrace/compiler.hpp"
#include "gtrace/datagen.hpp"
#include "gtrace/reverse_miner.hpp"
#include "gtrace/text_io.hpp"

namespace gtrace::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Writer>
void write_output(const std::string& path, std::ostream& out, Writer&& writer) {
  if (path.empty() || path == "-") {
    writer(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Failure{kUsage, "cannot write " + path};
  writer(file);
  if (!file) throw Failure{kUsage, "write failed for " + path};
}

// A graph-sequence file has `t <j>` blocks; a TR file has rule lines.
bool holds_graph_sequences(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string first;
    if (!(words >> first) || first[0] == '#' || first == "gid") continue;
    return first == "t" || first == "v" || first == "e";
  }
  return true;
}

template <typename Reader>
auto parse_file(const std::string& path, Reader&& reader) {
  std::istringstream in(slurp(path));
  try {
    return reader(in);
  } catch (const ParseError& e) {
    throw Failure{kParse, path + ": " + e.what()};
  } catch (const Error& e) {
    throw Failure{kParse, path + ": " + e.what()};
  }
}

SequenceDatabase load_database(const std::string& path, LabelTable& labels) {
  const std::string text = slurp(path);
  std::istringstream in(text);
  try {
    if (!holds_graph_sequences(text)) return read_transformation_sequences(in, labels);
    SequenceDatabase db;
    for (const auto& d : read_graph_sequences(in, labels)) db.push_back(SequenceEntry{d.gid, compile(d)});
    return db;
  } catch (const Error& e) {
    throw Failure{kParse, path + ": " + e.what()};
  }
}

// `0.1` or `10%` is a fraction of |DB|; a plain integer is absolute.
std::size_t parse_min_support(const std::string& text, std::size_t db_size) {
  try {
    if (text.find_first_of(".%eE") == std::string::npos) {
      std::size_t used = 0;
      const long long value = std::stoll(text, &used);
      if (used != text.size() || value < 1) throw Failure{kUsage, "minimum support must be at least 1: " + text};
      return static_cast<std::size_t>(value);
    }
    std::string number = text;
    double scale = 1.0;
    if (!number.empty() && number.back() == '%') {
      number.pop_back();
      scale = 0.01;
    }
    std::size_t used = 0;
    const double fraction = std::stod(number, &used) * scale;
    if (used != number.size()) throw Failure{kUsage, "bad minimum support: " + text};
    return absolute_support(fraction, db_size);
  } catch (const std::invalid_argument&) {
    throw Failure{kUsage, "bad minimum support: " + text};
  } catch (const std::out_of_range&) {
    throw Failure{kUsage, "bad minimum support: " + text};
  } catch (const Error& e) {
    throw Failure{kUsage, e.what()};
  }
}

struct MineOptions {
  std::string min_sup;
  double timeout = 0;
  unsigned jobs = 1;
  std::size_t max_rules = 0;
};

MinerConfig miner_config(const MineOptions& o, std::size_t db_size) {
  MinerConfig c;
  c.min_support = parse_min_support(o.min_sup, db_size);
  c.max_rules = o.max_rules;
  c.jobs = o.jobs;
  if (o.timeout > 0) {
    c.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(o.timeout));
  }
  return c;
}

void add_mine_options(CLI::App* cmd, MineOptions& o) {
  cmd->add_option("--min-sup", o.min_sup, "minimum support: fraction (0.1, 10%) or absolute count")->required();
  cmd->add_option("--timeout", o.timeout, "deadline in seconds; partial results exit with code 4")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--jobs", o.jobs, "worker threads for the reverse miner")->check(CLI::PositiveNumber);
  cmd->add_option("--max-rules", o.max_rules, "cap on pattern length, 0 for none");
}

void add_generator_options(CLI::App* cmd, GeneratorConfig& g) {
  cmd->add_option("--pi", g.p_insert, "insert probability");
  cmd->add_option("--pd", g.p_delete, "delete probability");
  cmd->add_option("--vavg", g.v_avg, "average vertex ids per sequence");
  cmd->add_option("--vembed", g.v_embed_avg, "average vertex ids per planted pattern");
  cmd->add_option("--lv", g.vertex_labels, "vertex label count");
  cmd->add_option("--le", g.edge_labels, "edge label count");
  cmd->add_option("--n", g.embedded, "planted pattern count");
  cmd->add_option("--db", g.db_size, "sequence count");
  cmd->add_option("--pe", g.p_edge, "edge probability in the first graph");
  cmd->add_option("--dist", g.edits_per_transition, "edits per transition");
  cmd->add_option("--seed", g.seed, "random seed");
}

std::vector<PatternRecord> records_of(const std::vector<MinedPattern>& patterns) {
  std::vector<PatternRecord> out;
  out.reserve(patterns.size());
  for (const auto& p : patterns) out.push_back(PatternRecord{p.sequence, p.support});
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int cmd_compile(const std::string& input, const std::string& output, std::ostream& out) {
  LabelTable labels;
  auto graphs = parse_file(input, [&](std::istream& in) { return read_graph_sequences(in, labels); });
  SequenceDatabase db;
  for (const auto& d : graphs) db.push_back(SequenceEntry{d.gid, compile(d)});
  write_output(output, out, [&](std::ostream& o) { write_transformation_sequences(o, db, labels); });
  return kOk;
}

int cmd_mine(const std::string& input, const std::string& output, const std::string& algo, bool all_fts,
             const MineOptions& options, std::ostream& out, std::ostream& err) {
  LabelTable labels;
  const SequenceDatabase db = load_database(input, labels);
  const MinerConfig config = miner_config(options, distinct_gids(db));
  MineResult result;
  if (algo == "reverse") {
    if (all_fts) throw Failure{kUsage, "--all-fts requires --algo baseline"};
    result = mine_reverse(db, config);
  } else {
    result = all_fts ? mine_all_fts(db, config) : mine_baseline(db, config);
  }
  write_output(output, out, [&](std::ostream& o) { write_patterns(o, records_of(result.patterns), labels); });
  err << "patterns " << result.patterns.size() << " candidates " << result.stats.candidates << '\n';
  if (result.stats.timed_out) {
    err << "error: deadline exceeded, pattern set is partial\n";
    return kTimeout;
  }
  return kOk;
}

int cmd_verify(const std::string& input, const MineOptions& options, std::ostream& out, std::ostream& err) {
  LabelTable labels;
  const SequenceDatabase db = load_database(input, labels);
  const MinerConfig config = miner_config(options, distinct_gids(db));
  const MineResult reverse = mine_reverse(db, config);
  const MineResult baseline = mine_baseline(db, config);
  out << "reverse " << reverse.patterns.size() << '\n';
  out << "baseline " << baseline.patterns.size() << '\n';
  if (reverse.stats.timed_out || baseline.stats.timed_out) {
    err << "error: deadline exceeded, comparison skipped\n";
    return kTimeout;
  }
  std::map<CanonicalKey, const MinedPattern*> left;
  std::map<CanonicalKey, const MinedPattern*> right;
  for (const auto& p : reverse.patterns) left.emplace(p.key, &p);
  for (const auto& p : baseline.patterns) right.emplace(p.key, &p);
  std::size_t differences = 0;
  for (const auto& [key, p] : left) {
    if (!right.contains(key)) {
      ++differences;
      out << "only reverse: " << to_string(p->sequence, labels) << '\n';
    } else if (right.at(key)->support != p->support) {
      ++differences;
      out << "support differs: " << to_string(p->sequence, labels) << '\n';
    }
  }
  for (const auto& [key, p] : right) {
    if (!left.contains(key)) {
      ++differences;
      out << "only baseline: " << to_string(p->sequence, labels) << '\n';
    }
  }
  if (reverse.stats.emitted != reverse.patterns.size()) {
    ++differences;
    out << "reverse emitted " << reverse.stats.emitted << " for " << reverse.patterns.size() << " patterns\n";
  }
  out << (differences == 0 ? "equal" : "mismatch") << '\n';
  return differences == 0 ? kOk : kMismatch;
}

int cmd_gen(const GeneratorConfig& config, const std::string& output, const std::string& planted_path,
            std::ostream& out) {
  try {
    config.validate();
  } catch (const Error& e) {
    throw Failure{kUsage, e.what()};
  }
  const GeneratedData data = generate(config);
  write_output(output, out, [&](std::ostream& o) {
    o << generator_header(config) << '\n';
    write_graph_sequences(o, data.sequences, data.labels);
  });
  if (!planted_path.empty()) {
    SequenceDatabase planted;
    for (std::size_t i = 0; i < data.planted.size(); ++i) {
      planted.push_back(SequenceEntry{"p" + std::to_string(i + 1), data.planted[i]});
    }
    write_output(planted_path, out, [&](std::ostream& o) {
      o << generator_header(config) << '\n';
      write_transformation_sequences(o, planted, data.labels);
    });
  }
  return kOk;
}

int cmd_ingest(const std::string& input, const std::string& window, const std::string& snapshot,
               const std::string& output, std::ostream& out, std::ostream& err) {
  std::int64_t window_s = 0;
  std::int64_t snapshot_s = 0;
  try {
    window_s = parse_duration(window);
    snapshot_s = parse_duration(snapshot);
  } catch (const Error& e) {
    throw Failure{kUsage, e.what()};
  }
  std::istringstream in(slurp(input));
  LabelTable labels;
  IngestResult result;
  try {
    result = ingest_edge_log(parse_edge_log(in), window_s, snapshot_s, labels);
  } catch (const Error& e) {
    throw Failure{kUsage, e.what()};
  }
  for (const auto& e : result.errors) err << input << ":" << e.line << ": " << e.message << '\n';
  write_output(output, out, [&](std::ostream& o) { write_graph_sequences(o, result.sequences, labels); });
  return kOk;
}

struct BenchOptions {
  std::vector<std::string> min_sups{"0.1"};
  std::vector<int> db_sizes;
  std::vector<double> v_avgs;
  std::string algo = "both";
};

int cmd_bench(const BenchOptions& bench, GeneratorConfig gen, const MineOptions& mine, std::ostream& out,
              std::ostream& err) {
  std::vector<int> db_sizes = bench.db_sizes.empty() ? std::vector<int>{gen.db_size} : bench.db_sizes;
  std::vector<double> v_avgs = bench.v_avgs.empty() ? std::vector<double>{gen.v_avg} : bench.v_avgs;
  out << "algo,db,vavg,minsup,abs_minsup,patterns,candidates,wall_ms,irrelevant_ratio,timed_out\n";
  bool timed_out = false;
  for (int db_size : db_sizes) {
    for (double v_avg : v_avgs) {
      gen.db_size = db_size;
      gen.v_avg = v_avg;
      try {
        gen.validate();
      } catch (const Error& e) {
        throw Failure{kUsage, e.what()};
      }
      const GeneratedData data = generate(gen);
      SequenceDatabase db;
      for (const auto& d : data.sequences) db.push_back(SequenceEntry{d.gid, compile(d)});
      for (const auto& min_sup : bench.min_sups) {
        MineOptions run = mine;
        run.min_sup = min_sup;
        auto row = [&](const char* algo, std::size_t abs, std::size_t patterns, const MinerStats& stats, double ms,
                       double ratio) {
          out << algo << ',' << db_size << ',' << v_avg << ',' << min_sup << ',' << abs << ',' << patterns << ','
              << stats.candidates << ',' << ms << ',' << ratio << ',' << (stats.timed_out ? 1 : 0) << '\n';
          timed_out = timed_out || stats.timed_out;
        };
        if (bench.algo != "baseline") {
          const MinerConfig config = miner_config(run, db.size());
          const auto start = std::chrono::steady_clock::now();
          const MineResult r = mine_reverse(db, config);
          row("reverse", config.min_support, r.patterns.size(), r.stats, elapsed_ms(start), 0.0);
        }
        if (bench.algo != "reverse") {
          const MinerConfig config = miner_config(run, db.size());
          const auto start = std::chrono::steady_clock::now();
          const MineResult all = mine_all_fts(db, config);
          const double ms = elapsed_ms(start);
          row("baseline", config.min_support, filter_relevant(all.patterns).size(), all.stats, ms,
              irrelevance_ratio(all.patterns));
        }
      }
    }
  }
  if (timed_out) {
    err << "error: deadline exceeded in at least one run\n";
    return kTimeout;
  }
  return kOk;
}

int cmd_stats(const std::string& input, std::ostream& out) {
  LabelTable labels;
  auto patterns = parse_file(input, [&](std::istream& in) { return read_patterns(in, labels); });
  std::map<std::size_t, std::size_t> lengths;
  std::size_t irrelevant = 0;
  for (const auto& p : patterns) {
    ++lengths[p.sequence.rules.size()];
    if (!is_relevant(p.sequence)) ++irrelevant;
  }
  out << "patterns " << patterns.size() << '\n';
  for (const auto& [length, count] : lengths) out << "length " << length << ' ' << count << '\n';
  out << "irrelevant " << irrelevant << '\n';
  out << "irrelevant_ratio "
      << (patterns.empty() ? 0.0 : static_cast<double>(irrelevant) / static_cast<double>(patterns.size())) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequent transformation subsequence mining for labeled graph sequences", "gtrace"};
  app.require_subcommand(1);

  std::string input;
  std::string output;

  auto* compile_cmd = app.add_subcommand("compile", "compile graph sequences into TR sequences");
  compile_cmd->add_option("input", input, "graph-sequence file")->required();
  compile_cmd->add_option("-o,--output", output, "TR-sequence file, stdout if omitted");

  MineOptions mine_options;
  std::string algo = "reverse";
  bool all_fts = false;
  auto* mine_cmd = app.add_subcommand("mine", "mine relevant frequent transformation subsequences");
  mine_cmd->add_option("input", input, "graph-sequence or TR-sequence file")->required();
  mine_cmd->add_option("-o,--output", output, "pattern file, stdout if omitted");
  mine_cmd->add_option("--algo", algo, "reverse or baseline")->check(CLI::IsMember({"reverse", "baseline"}));
  mine_cmd->add_flag("--all-fts", all_fts, "baseline only: keep irrelevant patterns too");
  add_mine_options(mine_cmd, mine_options);

  auto* verify_cmd = app.add_subcommand("verify", "run both miners and compare their pattern sets");
  verify_cmd->add_option("input", input, "graph-sequence or TR-sequence file")->required();
  add_mine_options(verify_cmd, mine_options);

  GeneratorConfig gen_config;
  std::string planted;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic database with planted patterns");
  add_generator_options(gen_cmd, gen_config);
  gen_cmd->add_option("-o,--output", output, "graph-sequence file, stdout if omitted");
  gen_cmd->add_option("--planted", planted, "TR-sequence file for the planted patterns");

  std::string window;
  std::string snapshot;
  auto* ingest_cmd = app.add_subcommand("ingest", "cut a timestamped edge log into graph sequences");
  ingest_cmd->add_option("input", input, "CSV edge log")->required();
  ingest_cmd->add_option("--window", window, "sequence window, e.g. 1d")->required();
  ingest_cmd->add_option("--snap", snapshot, "snapshot length, e.g. 1h")->required();
  ingest_cmd->add_option("-o,--output", output, "graph-sequence file, stdout if omitted");

  BenchOptions bench;
  GeneratorConfig bench_gen;
  bench_gen.db_size = 200;
  MineOptions bench_mine;
  auto* bench_cmd = app.add_subcommand("bench", "compare both miners on generated corpora, CSV on stdout");
  bench_cmd->add_option("--min-sup", bench.min_sups, "minimum supports")->delimiter(',');
  bench_cmd->add_option("--db", bench.db_sizes, "database sizes")->delimiter(',');
  bench_cmd->add_option("--vavg", bench.v_avgs, "average vertex counts")->delimiter(',');
  bench_cmd->add_option("--algo", bench.algo, "reverse, baseline or both")
      ->check(CLI::IsMember({"reverse", "baseline", "both"}));
  bench_cmd->add_option("--pi", bench_gen.p_insert, "insert probability");
  bench_cmd->add_option("--pd", bench_gen.p_delete, "delete probability");
  bench_cmd->add_option("--vembed", bench_gen.v_embed_avg, "average vertex ids per planted pattern");
  bench_cmd->add_option("--lv", bench_gen.vertex_labels, "vertex label count");
  bench_cmd->add_option("--le", bench_gen.edge_labels, "edge label count");
  bench_cmd->add_option("--n", bench_gen.embedded, "planted pattern count");
  bench_cmd->add_option("--pe", bench_gen.p_edge, "edge probability in the first graph");
  bench_cmd->add_option("--dist", bench_gen.edits_per_transition, "edits per transition");
  bench_cmd->add_option("--seed", bench_gen.seed, "random seed");
  bench_cmd->add_option("--timeout", bench_mine.timeout, "deadline in seconds per run")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--jobs", bench_mine.jobs, "worker threads for the reverse miner")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-rules", bench_mine.max_rules, "cap on pattern length, 0 for none");

  auto* stats_cmd = app.add_subcommand("stats", "summarize a pattern file");
  stats_cmd->add_option("input", input, "pattern file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compile_cmd) return cmd_compile(input, output, out);
    if (*mine_cmd) return cmd_mine(input, output, algo, all_fts, mine_options, out, err);
    if (*verify_cmd) return cmd_verify(input, mine_options, out, err);
    if (*gen_cmd) return cmd_gen(gen_config, output, planted, out);
    if (*ingest_cmd) return cmd_ingest(input, window, snapshot, output, out, err);
    if (*bench_cmd) return cmd_bench(bench, bench_gen, bench_mine, out, err);
    if (*stats_cmd) return cmd_stats(input, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gtrace::cli
