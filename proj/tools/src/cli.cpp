#include "tally_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI/CLI.hpp>
#include <nlohmann/json.hpp>

#include "tally/harness.hpp"
#include "tally/learning.hpp"
#include "tally/mining.hpp"
#include "tally/strategy.hpp"

namespace tally::cli {
namespace {

using nlohmann::json;

enum class Format { kLines, kCsv };

struct Config {
  std::string input;
  std::string synthetic;
  std::string arities;
  std::string state_base = "auto";
  std::uint64_t seed = 1;
  std::string strategies = "all";
  std::size_t adtree_leaf = 16;
  std::size_t adtree_node_cap = std::size_t{1} << 26;
  bool radix_cache = false;
  std::size_t parallel = 1;
  std::string out;
  std::string format = "lines";

  std::size_t queries = 1000;
  std::size_t repetitions = 5;
  std::optional<std::uint64_t> timeout_ms;

  std::size_t max_parents = 6;

  double min_support = 0.2;
  double min_confidence = 0.3;
  std::size_t max_rule_size = 6;

  bool one_based = false;
};

/// Raised for errors that should print usage guidance and exit with kUsageError.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::size_t parse_size(const std::string& key, std::string_view text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument("bad value '" + std::string(text) + "' for " + key);
  }
  return value;
}

double seconds(std::chrono::nanoseconds d) { return std::chrono::duration<double>(d).count(); }

json parents_json(std::span<const VarIndex> vars) { return json(std::vector<VarIndex>(vars.begin(), vars.end())); }

std::string join(std::span<const VarIndex> vars, char sep) {
  std::string s;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(vars[i]);
  }
  return s;
}

void add_common(CLI::App& cmd, Config& c) {
  auto* input = cmd.add_option("--input", c.input, "CSV file, one row per instance")->check(CLI::ExistingFile);
  auto* synth = cmd.add_option("--synthetic", c.synthetic, "n=..,m=..,arity=R or arity=LO-HI");
  input->excludes(synth);
  cmd.add_option("--arities", c.arities, "file declaring the arity of every column")->check(CLI::ExistingFile);
  cmd.add_option("--state-base", c.state_base, "how CSV tokens map to states")
      ->check(CLI::IsMember({"auto", "0", "1"}))
      ->capture_default_str();
  cmd.add_option("--seed", c.seed, "seed for synthetic data and query streams")->capture_default_str();
  cmd.add_option("--strategies", c.strategies, "all, or a comma list of bitmap,radix,hash,adtree")
      ->capture_default_str();
  cmd.add_option("--adtree-leaf", c.adtree_leaf, "ADtree leaf-list threshold")->capture_default_str();
  cmd.add_option("--adtree-node-cap", c.adtree_node_cap, "ADtree node budget")->capture_default_str();
  cmd.add_flag("--radix-cache", c.radix_cache, "precompute each variable's first radix level at load");
  cmd.add_option("--parallel", c.parallel, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--out", c.out, "output file (default stdout)");
  cmd.add_option("--format", c.format, "lines (JSON per line) or csv (summary only)")
      ->check(CLI::IsMember({"lines", "csv"}))
      ->capture_default_str();
}

Database load_database(const Config& c) {
  if (c.input.empty() == c.synthetic.empty()) {
    throw UsageError("exactly one of --input or --synthetic is required");
  }
  if (!c.synthetic.empty()) {
    if (!c.arities.empty()) throw UsageError("--arities only applies to --input");
    return make_synthetic(parse_synthetic(c.synthetic), c.seed);
  }
  CsvOptions options;
  if (!c.arities.empty()) options.declared_arities = load_arities(c.arities);
  options.base = c.state_base == "0" ? StateBase::kZero
                 : c.state_base == "1" ? StateBase::kOne
                                       : StateBase::kAuto;
  return load_csv(c.input, options);
}

StrategyOptions strategy_options(const Config& c) {
  StrategyOptions options;
  options.adtree.leaf_threshold = c.adtree_leaf;
  options.adtree.node_cap = c.adtree_node_cap;
  options.radix_cache_first_level = c.radix_cache;
  return options;
}

std::vector<StrategyKind> strategy_list(const Config& c) {
  try {
    return parse_strategy_list(c.strategies);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

json run_record(const std::string& command, const Config& c, const Database& db) {
  return {{"record", "run"},
          {"command", command},
          {"source", c.input.empty() ? "synthetic:" + c.synthetic : c.input},
          {"n", db.num_variables()},
          {"m", db.num_rows()},
          {"seed", c.seed}};
}

json strategy_record(StrategyKind kind, bool available, double build_seconds, const std::string& error) {
  json j = {{"record", "strategy"},
            {"strategy", to_string(kind)},
            {"available", available},
            {"build_seconds", build_seconds}};
  if (!error.empty()) j["error"] = error;
  return j;
}

/// Builds each requested strategy, reporting failures instead of aborting.
template <class Fn>
void for_each_strategy(const Config& c, const Database& db, std::ostream& out, Format format,
                       std::ostream& err, Fn&& fn) {
  const auto options = strategy_options(c);
  for (const auto kind : strategy_list(c)) {
    const auto start = std::chrono::steady_clock::now();
    std::unique_ptr<Strategy> strategy;
    std::string error;
    try {
      strategy = make_strategy(kind, db, options);
    } catch (const AdtreeBuildError& e) {
      error = e.what();
      err << "warning: " << to_string(kind) << " unavailable: " << error << '\n';
    }
    const double build = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (format == Format::kLines) out << strategy_record(kind, strategy != nullptr, build, error).dump() << '\n';
    if (strategy) fn(*strategy);
  }
}

int bench_random_cmd(const Config& c, std::ostream& out, Format format) {
  const Database db = load_database(c);
  if (db.num_variables() < 2) throw UsageError("bench-random needs at least two variables");
  BenchOptions options;
  options.num_queries = c.queries;
  options.seed = c.seed;
  options.repetitions = c.repetitions;
  options.threads = c.parallel;
  options.strategy = strategy_options(c);
  if (c.timeout_ms) options.timeout = std::chrono::milliseconds(*c.timeout_ms);
  const auto kinds = strategy_list(c);
  const BenchResult result = bench_random(db, kinds, options);
  const auto summaries = summarize(result);

  if (format == Format::kCsv) {
    out << "strategy,available,build_seconds,queries,mean_us,median_us,p95_us\n";
    for (const auto& s : result.strategies) {
      out << to_string(s.kind) << ',' << (s.available ? 1 : 0) << ',' << s.build_seconds;
      const auto it = std::find_if(summaries.begin(), summaries.end(),
                                   [&](const LatencySummary& l) { return l.strategy == s.kind; });
      if (it != summaries.end()) {
        out << ',' << it->queries << ',' << it->mean_us << ',' << it->median_us << ',' << it->p95_us;
      } else {
        out << ",0,,,";
      }
      out << '\n';
    }
    return kOk;
  }

  json run = run_record("bench-random", c, db);
  run["queries"] = c.queries;
  run["repetitions"] = c.repetitions;
  out << run.dump() << '\n';
  for (const auto& s : result.strategies) {
    out << strategy_record(s.kind, s.available, s.build_seconds, s.error).dump() << '\n';
  }
  for (const auto& r : result.records) {
    const QuerySpec& q = result.queries[r.query_id];
    json durations = json::array();
    for (const auto d : r.durations) durations.push_back(static_cast<double>(d.count()) / 1e3);
    out << json{{"record", "query"},
                {"query_id", r.query_id},
                {"strategy", to_string(r.strategy)},
                {"target", q.target},
                {"parents", parents_json(q.parents)},
                {"parent_count", r.parent_count},
                {"durations_us", durations},
                {"mean_us", r.mean_us()},
                {"records", r.records},
                {"timed_out", r.timed_out}}
               .dump()
        << '\n';
  }
  for (const auto& s : summaries) {
    json by_parents = json::object();
    for (const auto& [k, v] : s.mean_us_by_parents) by_parents[std::to_string(k)] = v;
    out << json{{"record", "summary"},
                {"strategy", to_string(s.strategy)},
                {"queries", s.queries},
                {"mean_us", s.mean_us},
                {"median_us", s.median_us},
                {"p95_us", s.p95_us},
                {"mean_us_by_parents", by_parents}}
               .dump()
        << '\n';
  }
  return kOk;
}

int learn_parents_cmd(const Config& c, std::ostream& out, Format format, std::ostream& err) {
  const Database db = load_database(c);
  if (c.max_parents >= db.num_variables()) {
    throw UsageError("--max-parents must be below the number of variables (" +
                     std::to_string(db.num_variables()) + ")");
  }
  if (format == Format::kLines) out << run_record("learn-parents", c, db).dump() << '\n';
  else out << "strategy,target,parents,score,queries,query_seconds,total_seconds,query_fraction\n";

  for_each_strategy(c, db, out, format, err, [&](const Strategy& strategy) {
    const auto start = std::chrono::steady_clock::now();
    const auto results = learn_parents(strategy, {c.max_parents, c.parallel});
    const auto wall = std::chrono::steady_clock::now() - start;
    std::chrono::nanoseconds query_time{0};
    std::size_t queries = 0;
    for (const auto& r : results) {
      query_time += r.query_time;
      queries += r.queries;
      if (format == Format::kCsv) {
        out << strategy.name() << ',' << r.target << ',' << join(r.parents, ' ') << ','
            << json(r.score).dump() << ',' << r.queries << ',' << seconds(r.query_time) << ','
            << seconds(r.total_time) << ',' << r.query_fraction() << '\n';
        continue;
      }
      out << json{{"record", "parent_set"},
                  {"strategy", strategy.name()},
                  {"target", r.target},
                  {"parents", parents_json(r.parents)},
                  {"score", r.score},
                  {"queries", r.queries},
                  {"query_seconds", seconds(r.query_time)},
                  {"total_seconds", seconds(r.total_time)},
                  {"query_fraction", r.query_fraction()}}
                 .dump()
          << '\n';
    }
    if (format == Format::kLines) {
      // Summed per-target query time over summed per-target time, so the
      // fraction stays meaningful when targets run in parallel.
      std::chrono::nanoseconds total{0};
      for (const auto& r : results) total += r.total_time;
      out << json{{"record", "learn_summary"},
                  {"strategy", strategy.name()},
                  {"max_parents", c.max_parents},
                  {"queries", queries},
                  {"query_seconds", seconds(query_time)},
                  {"wall_seconds", seconds(wall)},
                  {"query_fraction", total.count() > 0 ? seconds(query_time) / seconds(total) : 0.0}}
                 .dump()
          << '\n';
    }
  });
  return kOk;
}

int mine_rules_cmd(const Config& c, std::ostream& out, Format format, std::ostream& err) {
  const Database db = load_database(c);
  for (const auto& [name, value] : {std::pair{"--min-support", c.min_support},
                                    std::pair{"--min-confidence", c.min_confidence}}) {
    if (!(value > 0.0)) throw UsageError(std::string(name) + " must be positive");
    if (value > 1.0) err << "warning: " << name << ' ' << value << " is above 1; no rule can qualify\n";
  }
  if (c.max_rule_size < 2) throw UsageError("--max-rule-size must be at least 2");
  for (std::size_t v = 0; v < db.num_variables(); ++v) {
    if (db.arity(static_cast<VarIndex>(v)) != 2) {
      throw LoadError("rule mining needs binary data; column " + std::to_string(v) + " has arity " +
                      std::to_string(db.arity(static_cast<VarIndex>(v))));
    }
  }
  if (format == Format::kLines) out << run_record("mine-rules", c, db).dump() << '\n';
  else out << "strategy,size,antecedent,consequent,support,confidence\n";

  const MiningOptions options{c.min_support, c.min_confidence, c.max_rule_size};
  for_each_strategy(c, db, out, format, err, [&](const Strategy& strategy) {
    const MiningResult result = mine_rules(strategy, options);
    for (const auto& r : result.rules) {
      if (format == Format::kCsv) {
        out << strategy.name() << ',' << r.size() << ',' << join(r.antecedent, ' ') << ','
            << r.consequent << ',' << json(r.support).dump() << ',' << json(r.confidence).dump() << '\n';
        continue;
      }
      out << json{{"record", "rule"},
                  {"strategy", strategy.name()},
                  {"size", r.size()},
                  {"antecedent", parents_json(r.antecedent)},
                  {"consequent", r.consequent},
                  {"support", r.support},
                  {"confidence", r.confidence},
                  {"itemset_count", r.itemset_count},
                  {"antecedent_count", r.antecedent_count}}
                 .dump()
          << '\n';
    }
    if (format == Format::kLines) {
      out << json{{"record", "mining_summary"},
                  {"strategy", strategy.name()},
                  {"rules", result.rules.size()},
                  {"frequent_per_level", result.frequent_per_level},
                  {"count_queries", result.count_queries},
                  {"query_seconds", seconds(result.query_time)},
                  {"total_seconds", seconds(result.total_time)}}
                 .dump()
          << '\n';
    }
  });
  return kOk;
}

int generate_cmd(const Config& c, std::ostream& out) {
  if (c.synthetic.empty()) throw UsageError("generate needs --synthetic");
  write_csv(make_synthetic(parse_synthetic(c.synthetic), c.seed), out, ',', c.one_based);
  return kOk;
}

}  // namespace

SyntheticSpec parse_synthetic(const std::string& spec) {
  SyntheticSpec s;
  bool have_n = false, have_m = false, have_arity = false;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("expected key=value in --synthetic, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string_view value = std::string_view(item).substr(eq + 1);
    if (key == "n") {
      s.n = parse_size(key, value);
      have_n = true;
    } else if (key == "m") {
      s.m = parse_size(key, value);
      have_m = true;
    } else if (key == "arity") {
      const auto dash = value.find('-');
      s.arity_lo = static_cast<Arity>(parse_size(key, value.substr(0, dash)));
      s.arity_hi = dash == std::string_view::npos ? s.arity_lo
                                                  : static_cast<Arity>(parse_size(key, value.substr(dash + 1)));
      have_arity = true;
    } else {
      throw InvalidArgument("unknown --synthetic key '" + key + "'");
    }
  }
  if (!have_n || !have_m || !have_arity) throw InvalidArgument("--synthetic needs n, m and arity");
  if (s.n == 0 || s.m == 0) throw InvalidArgument("--synthetic needs n > 0 and m > 0");
  if (s.arity_lo == 0 || s.arity_lo > s.arity_hi || s.arity_hi > kMaxArity) {
    throw InvalidArgument("--synthetic arity must satisfy 1 <= lo <= hi <= " + std::to_string(kMaxArity));
  }
  return s;
}

Database make_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.arity_lo == spec.arity_hi) return generate_synthetic(spec.n, spec.m, spec.arity_lo, seed);
  const auto arities = draw_arities(spec.n, spec.arity_lo, spec.arity_hi, seed);
  return generate_synthetic(spec.n, spec.m, arities, seed);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counting queries over categorical databases", "tally"};
  app.require_subcommand(1);
  Config c;

  auto* bench = app.add_subcommand("bench-random", "time a random query stream on every strategy");
  add_common(*bench, c);
  bench->add_option("--queries", c.queries, "number of random queries")->capture_default_str();
  bench->add_option("--repetitions", c.repetitions, "timed runs per query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--timeout-ms", c.timeout_ms, "skip remaining repetitions of a query slower than this");

  auto* learn = app.add_subcommand("learn-parents", "best MDL parent set for every variable");
  add_common(*learn, c);
  learn->add_option("--max-parents", c.max_parents, "largest parent set considered")->capture_default_str();

  auto* mine = app.add_subcommand("mine-rules", "association rules over binary data");
  add_common(*mine, c);
  mine->add_option("--min-support", c.min_support)->capture_default_str();
  mine->add_option("--min-confidence", c.min_confidence)->capture_default_str();
  mine->add_option("--max-rule-size", c.max_rule_size, "largest antecedent + consequent")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "write a synthetic database as CSV");
  generate->add_option("--synthetic", c.synthetic, "n=..,m=..,arity=R or arity=LO-HI")->required();
  generate->add_option("--seed", c.seed)->capture_default_str();
  generate->add_option("--out", c.out, "output file (default stdout)");
  generate->add_flag("--one-based", c.one_based, "write states starting at 1");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) {
      err << "error: cannot open " << c.out << " for writing\n";
      return kRuntimeError;
    }
  }
  std::ostream& sink = c.out.empty() ? out : file;
  const Format format = c.format == "csv" ? Format::kCsv : Format::kLines;

  try {
    if (*bench) return bench_random_cmd(c, sink, format);
    if (*learn) return learn_parents_cmd(c, sink, format, err);
    if (*mine) return mine_rules_cmd(c, sink, format, err);
    return generate_cmd(c, sink);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun with --help for more information.\n";
    return kUsageError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\nRun with --help for more information.\n";
    return kUsageError;
  } catch (const Error& e) {
    if (format == Format::kLines) sink << json{{"record", "error"}, {"message", e.what()}}.dump() << '\n';
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace tally::cli
