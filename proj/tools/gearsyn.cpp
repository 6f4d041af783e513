// gearsyn: command-line front end.
//
// Exit codes: 0 success, 1 domain failure (invalid sequences, search or
// dataset errors), 2 environment or I/O failure (unreadable files,
// unreachable completer, bad catalogue, bad usage).

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "gearsyn/benchmark.hpp"
#include "gearsyn/catalogue.hpp"
#include "gearsyn/completer.hpp"
#include "gearsyn/dataset.hpp"
#include "gearsyn/feasibility.hpp"
#include "gearsyn/generate.hpp"
#include "gearsyn/grammar.hpp"
#include "gearsyn/metrics.hpp"
#include "gearsyn/search.hpp"
#include "gearsyn/simulator.hpp"
#include "gearsyn/wire.hpp"

namespace fs = std::filesystem;
using namespace gearsyn;

namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kEnvironment = 2;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path, std::ios::binary);
    if (!file) throw IoFailure(fmt::format("cannot read {}", path));
    in = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }
bool is_comment(const std::string& line) {
  const auto p = line.find_first_not_of(" \t");
  return p != std::string::npos && line[p] == '#';
}

std::string axis_text(SignedAxis a) { return fmt::format("{}e{}", a.sign > 0 ? '+' : '-', a.index); }

nlohmann::ordered_json sim_json(const SimResult& res, bool feasible) {
  nlohmann::ordered_json j;
  j["speed_ratio"] = res.speed_ratio;
  j["position"] = {res.position[0], res.position[1], res.position[2]};
  j["motion_vector"] = axis_text(res.motion);
  j["input"] = std::string(to_string(res.input));
  j["output"] = std::string(to_string(res.output));
  j["weight_kg"] = res.weight_kg;
  j["feasible"] = feasible;
  return j;
}

std::string sim_text(const SimResult& res, bool feasible) {
  return fmt::format("s={} p=({}, {}, {}) m={} in={} out={} weight={}kg feasible={}", res.speed_ratio,
                     res.position[0], res.position[1], res.position[2], axis_text(res.motion), to_string(res.input),
                     to_string(res.output), res.weight_kg, feasible ? "yes" : "no");
}

Requirements requirements_from_text(const std::string& text) {
  try {
    return parse_requirements(text);
  } catch (const DatasetError& e) {
    throw DatasetError(DatasetError::Kind::InvalidArgument, fmt::format("--req: {}", e.what()));
  }
}

struct Common {
  std::string catalogue;
  int workers = 1;

  Catalogue load() const {
    return load_catalogue(catalogue.empty() ? default_catalogue_path() : fs::path(catalogue));
  }
};

// validate ----------------------------------------------------------------

int cmd_validate(const Common& common, const std::string& input) {
  const auto cat = common.load();
  const auto lines = read_lines(input);
  bool all_ok = true;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    try {
      const auto tokens = parse_tokens(lines[n], cat);
      if (auto v = validate_grammar(tokens, cat)) {
        all_ok = false;
        fmt::print("line {}: invalid: {}\n", n + 1, v->describe(cat));
      } else {
        fmt::print("ok\n");
      }
    } catch (const ParseError& e) {
      all_ok = false;
      fmt::print("line {}: invalid: position {}: unknown token '{}'\n", n + 1, e.position(), e.text());
    }
  }
  return all_ok ? kOk : kDomain;
}

// simulate ----------------------------------------------------------------

int cmd_simulate(const Common& common, const std::string& input, const std::string& format) {
  const auto cat = common.load();
  const auto lines = read_lines(input);
  struct Row {
    std::size_t line;
    GearSequence seq;
  };
  std::vector<Row> rows;
  bool all_ok = true;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (is_blank(lines[n]) || is_comment(lines[n])) continue;
    try {
      auto seq = parse_sequence(lines[n], cat);
      if (auto v = validate_grammar(seq, cat)) {
        all_ok = false;
        fmt::print(stderr, "line {}: invalid: {}\n", n + 1, v->describe(cat));
        continue;
      }
      rows.push_back({n + 1, std::move(seq)});
    } catch (const ParseError& e) {
      all_ok = false;
      fmt::print(stderr, "line {}: invalid: position {}: unknown token '{}'\n", n + 1, e.position(), e.text());
    }
  }
  if (!all_ok) return kDomain;

  if (format == "table") {
    fmt::print("# catalogue {}\n", cat.version());
    fmt::print("{:>5}  {:>12}  {:>32}  {:>3}  {:>11}  {:>11}  {:>10}  {}\n", "line", "s", "p (m)", "m", "in", "out",
               "weight kg", "feasible");
  } else if (format == "record") {
    fmt::print("# catalogue {}\n", cat.version());
  }
  for (const auto& row : rows) {
    const auto res = simulate(row.seq, cat);
    const bool feasible = !check_interference(res.placements);
    if (format == "table") {
      fmt::print("{:>5}  {:>12.6g}  {:>32}  {:>3}  {:>11}  {:>11}  {:>10.4f}  {}\n", row.line, res.speed_ratio,
                 fmt::format("({:.4f}, {:.4f}, {:.4f})", res.position[0], res.position[1], res.position[2]),
                 axis_text(res.motion), to_string(res.input), to_string(res.output), res.weight_kg,
                 feasible ? "yes" : "no");
    } else if (format == "record") {
      fmt::print("{}\n", format_record(DatasetRecord{encode_requirements(res), row.seq}, cat));
    } else {
      auto j = sim_json(res, feasible);
      j["line"] = row.line;
      j["catalogue_version"] = cat.version();
      fmt::print("{}\n", j.dump());
    }
  }
  return kOk;
}

// sample / enumerate / vocab ------------------------------------------------

int cmd_sample(const Common& common, std::size_t n, int max_components, std::uint64_t seed,
               const std::string& sampler_name) {
  const auto cat = common.load();
  const auto sampler = parse_sampler(sampler_name);
  std::optional<VariableSequenceSampler> variable;
  if (sampler == Sampler::Variable) variable.emplace(cat, max_components);
  fmt::print("# seed {} sampler {} catalogue {}\n", seed, to_string(sampler), cat.version());
  for (std::size_t i = 0; i < n; ++i) {
    const auto stream = derive_seed(seed, i);
    const auto seq = variable ? variable->sample(stream) : random_valid_sequence(stream, max_components, cat);
    fmt::print("{}\n", format_sequence(seq, cat));
  }
  return kOk;
}

int cmd_enumerate(int max_components, bool list) {
  const auto count = enumerate_variable_sequences(max_components, [&](std::span<const Variable> vars) {
    if (!list) return;
    std::string line;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (i > 0) line += ' ';
      line += to_string(vars[i]);
    }
    fmt::print("{}\n", line);
  });
  if (!list) fmt::print("{}\n", count);
  return kOk;
}

int cmd_vocab(const Common& common, const std::string& out, bool hash_only) {
  const auto cat = common.load();
  if (hash_only) {
    fmt::print("{}\n", vocabulary_hash(cat));
    return kOk;
  }
  if (out.empty() || out == "-") {
    fmt::print("{}", vocabulary_text(cat));
  } else {
    write_vocabulary(out, cat);
  }
  return kOk;
}

// datasets and evaluation --------------------------------------------------

int cmd_gen_dataset(const Common& common, DatasetConfig config, const std::string& sampler, const std::string& out) {
  const auto cat = common.load();
  config.sampler = parse_sampler(sampler);
  config.workers = common.workers;
  const auto manifest = generate_dataset(config, out, cat);
  fmt::print("{}\n", manifest.to_json().dump(2));
  return kOk;
}

int cmd_split(const Common& common, const std::string& input, const std::string& out_dir, double val, double test,
              std::uint64_t seed) {
  const auto cat = common.load();
  const auto sizes = split_file(input, out_dir, val, test, seed, cat);
  nlohmann::ordered_json j;
  j["train"] = sizes.train;
  j["val"] = sizes.val;
  j["test"] = sizes.test;
  j["seed"] = seed;
  j["catalogue_version"] = cat.version();
  fmt::print("{}\n", j.dump(2));
  return kOk;
}

int cmd_eval(const Common& common, const std::string& input, const std::string& label, const std::string& format) {
  const auto cat = common.load();
  std::vector<DatasetRecord> pairs;
  const auto lines = read_lines(input);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (is_blank(lines[n]) || is_comment(lines[n])) continue;
    const auto bar = lines[n].find('|');
    if (bar == std::string::npos) {
      throw DatasetError(DatasetError::Kind::Format, fmt::format("line {}: record has no '|' separator", n + 1));
    }
    DatasetRecord pair;
    try {
      pair.requirements = parse_requirements(std::string_view(lines[n]).substr(0, bar));
    } catch (const DatasetError& e) {
      throw DatasetError(DatasetError::Kind::Format, fmt::format("line {}: {}", n + 1, e.what()));
    }
    try {
      pair.sequence = parse_sequence(std::string_view(lines[n]).substr(bar + 1), cat);
    } catch (const ParseError&) {
      pair.sequence = GearSequence{};  // unparseable prediction counts as invalid
    }
    pairs.push_back(std::move(pair));
  }
  const auto report = evaluate_set(pairs, cat, common.workers);
  if (format == "json") {
    auto j = report.to_json();
    j["catalogue_version"] = cat.version();
    fmt::print("{}\n", j.dump(2));
  } else {
    fmt::print("# catalogue {}\n", cat.version());
    const ReportRow rows[] = {{label, report, std::nullopt, std::nullopt}};
    fmt::print("{}", format_report_table(rows));
  }
  return kOk;
}

// search and benchmark ------------------------------------------------------

struct SearchOptions {
  SearchConfig config;
  std::string method = "eda";
  std::string completer;
  std::vector<std::string> reqs;
  std::string req_file;
  std::string format = "text";
};

std::unique_ptr<Completer> open_completer(const std::string& address, const Catalogue& cat, bool required,
                                          int max_components) {
  if (address.empty()) {
    if (required) {
      throw CompleterError(CompleterError::Kind::Unreachable, "this method needs --completer");
    }
    return nullptr;
  }
  return make_completer(address, cat, max_components);
}

int cmd_search(const Common& common, SearchOptions opt) {
  const auto cat = common.load();
  opt.config.workers = common.workers;
  const auto method = parse_method(opt.method);
  std::vector<Requirements> problems;
  if (!opt.reqs.empty()) {
    problems.push_back(requirements_from_text(fmt::format("{}", fmt::join(opt.reqs, " "))));
  }
  if (!opt.req_file.empty()) {
    for (const auto& line : read_lines(opt.req_file)) {
      if (is_blank(line) || is_comment(line)) continue;
      const auto bar = line.find('|');
      problems.push_back(requirements_from_text(bar == std::string::npos ? line : line.substr(0, bar)));
    }
  }
  if (problems.empty()) {
    throw DatasetError(DatasetError::Kind::InvalidArgument, "give requirements with --req or --req-file");
  }
  auto completer = open_completer(opt.completer, cat, needs_completer(method), opt.config.max_components);

  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < problems.size(); ++k) {
    const auto& req = problems[k];
    SearchResult res;
    switch (method) {
      case Method::Eda: res = eda_search(req, opt.config, cat); break;
      case Method::Mcts: res = mcts_search(req, opt.config, cat); break;
      case Method::EdaHybrid: res = eda_search(req, opt.config, cat, completer.get()); break;
      case Method::MctsHybrid: res = mcts_search(req, opt.config, cat, completer.get()); break;
      case Method::Random: res = random_search(req, opt.config, cat); break;
      case Method::Completer: {
        const Token prefix[] = {Token::start()};
        Candidate c;
        c.sequence = completer->complete(req, prefix, opt.config.seed);
        c.fitness = evaluate_fitness(req, c.sequence.tokens, opt.config.weights, cat);
        res.best = std::move(c);
        res.evaluated = 1;
        break;
      }
    }

    std::optional<SimResult> sim;
    if (res.best && res.best->fitness.valid) sim = simulate(res.best->sequence, cat);
    if (opt.format == "json") {
      auto j = res.to_json(cat);
      j["method"] = opt.method;
      j["requirements"] = req.flatten();
      j["seed"] = opt.config.seed;
      j["budget"] = opt.config.budget;
      j["catalogue_version"] = cat.version();
      if (sim) j["simulation"] = sim_json(*sim, res.best->fitness.feasible);
      all.push_back(std::move(j));
      continue;
    }
    if (k > 0) fmt::print("\n");
    fmt::print("method      {}\n", opt.method);
    fmt::print("seed        {}\n", opt.config.seed);
    fmt::print("catalogue   {}\n", cat.version());
    fmt::print("target      {}\n", format_requirements(req));
    if (!res.best) {
      fmt::print("best        none\n");
    } else {
      const auto& f = res.best->fitness;
      fmt::print("best        {}\n", format_sequence(res.best->sequence, cat));
      if (sim) fmt::print("achieved    {}\n", sim_text(*sim, f.feasible));
      fmt::print("fitness     score={} pos={} log_speed={} motvec={} inmot={} outmot={} feasible={} weight={}kg\n",
                 f.score, f.pos_error, f.log_speed_error, f.motvec, f.inmot_mismatch ? 1 : 0,
                 f.outmot_mismatch ? 1 : 0, f.feasible ? "yes" : "no", f.weight_kg);
    }
    fmt::print("evaluated   {}\n", res.evaluated);
    fmt::print("time        {:.3f} s\n", res.seconds);
  }
  if (opt.format == "json") fmt::print("{}\n", (problems.size() == 1 ? all.front() : all).dump(2));
  return kOk;
}

struct BenchmarkOptions {
  std::size_t problems = 10;
  int problem_components = 6;
  std::string methods = "eda,mcts,random";
  std::string completer;
  std::string format = "table";
  BenchmarkConfig config;
};

int cmd_benchmark(const Common& common, BenchmarkOptions opt) {
  const auto cat = common.load();
  opt.config.base.workers = common.workers;
  opt.config.methods.clear();
  bool wants_completer = false;
  std::stringstream ss(opt.methods);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    opt.config.methods.push_back(parse_method(item));
    wants_completer = wants_completer || needs_completer(opt.config.methods.back());
  }
  auto completer = open_completer(opt.completer, cat, wants_completer, opt.config.base.max_components);
  const auto records = benchmark_problems(opt.problems, opt.problem_components, opt.config.base.seed, cat);
  std::vector<Requirements> problems;
  for (const auto& r : records) problems.push_back(r.requirements);
  const auto rows = run_benchmark(problems, opt.config, cat, completer.get());

  if (opt.format == "json") {
    nlohmann::ordered_json j;
    j["seed"] = opt.config.base.seed;
    j["catalogue_version"] = cat.version();
    j["problems"] = opt.problems;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json r;
      r["method"] = std::string(to_string(row.method));
      r["budget"] = row.budget;
      r["evaluated"] = row.evaluated;
      r["seconds"] = row.seconds;
      r["seconds_per_candidate"] = row.seconds_per_candidate();
      r["report"] = row.report.to_json();
      j["rows"].push_back(std::move(r));
    }
    fmt::print("{}\n", j.dump(2));
    return kOk;
  }
  fmt::print("# seed {} catalogue {} problems {}\n", opt.config.base.seed, cat.version(), opt.problems);
  std::vector<ReportRow> table;
  for (const auto& row : rows) table.push_back(row.report_row());
  fmt::print("{}", format_report_table(table));
  for (const auto& row : rows) {
    fmt::print("# {}: {:.4f} ms per candidate\n", to_string(row.method), 1000.0 * row.seconds_per_candidate());
  }
  return kOk;
}

// serve ---------------------------------------------------------------------

int cmd_serve(const Common& common, bool stdio, int port, const std::string& host, bool once) {
  const auto cat = common.load();
  RandomCompleter backend(cat);
  if (stdio || port < 0) {
    LineChannel channel(0, 1, false);
    serve_completer(channel, backend, cat);
    return kOk;
  }
  TcpListener listener(port, host);
  fmt::print(stderr, "listening on {}:{}\n", host, listener.port());
  do {
    auto channel = listener.accept();
    const auto served = serve_completer(*channel, backend, cat);
    fmt::print(stderr, "connection closed after {} completions\n", served);
  } while (!once);
  return kOk;
}

void add_weights(CLI::App* cmd, FitnessWeights& w) {
  cmd->add_option("--w-pos", w.pos, "Position error weight")->capture_default_str();
  cmd->add_option("--w-speed", w.speed, "Log speed error weight")->capture_default_str();
  cmd->add_option("--w-motvec", w.motvec, "Motion vector weight")->capture_default_str();
  cmd->add_option("--w-inmot", w.inmot, "Input motion mismatch weight")->capture_default_str();
  cmd->add_option("--w-outmot", w.outmot, "Output motion mismatch weight")->capture_default_str();
  cmd->add_option("--w-feas", w.feas, "Infeasibility weight")->capture_default_str();
  cmd->add_option("--w-weight", w.weight, "Part weight coefficient")->capture_default_str();
}

void add_search_config(CLI::App* cmd, SearchConfig& c) {
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--prefix-len", c.prefix_len, "Tokens fixed before the completer takes over")->capture_default_str();
  cmd->add_option("--population", c.population, "EDA population")->capture_default_str();
  cmd->add_option("--elite-frac", c.elite_frac, "EDA elite fraction")->capture_default_str();
  cmd->add_option("--smoothing", c.smoothing, "EDA additive smoothing")->capture_default_str();
  cmd->add_option("-c,--exploration", c.c, "MCTS exploration constant")->capture_default_str();
  cmd->add_option("--max-components", c.max_components, "Component limit")->capture_default_str();
  add_weights(cmd, c.weights);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gearsyn: gear-train synthesis toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--catalogue", common.catalogue, "Parts catalogue CSV (default: $GEARSYN_CATALOGUE or bundled)");
  app.add_option("--workers", common.workers, "Worker threads for evaluation")->capture_default_str();

  std::function<int()> run;

  std::string input = "-";
  auto* validate = app.add_subcommand("validate", "Check each line of a sequence file against the grammar");
  validate->add_option("file", input, "Sequence file, '-' for stdin")->capture_default_str();
  validate->callback([&] { run = [&] { return cmd_validate(common, input); }; });

  std::string sim_format = "table";
  auto* sim = app.add_subcommand("simulate", "Simulate every sequence of a file");
  sim->add_option("file", input, "Sequence file, '-' for stdin")->capture_default_str();
  sim->add_option("--format", sim_format, "table, record or json")
      ->check(CLI::IsMember({"table", "record", "json"}))
      ->capture_default_str();
  sim->callback([&] { run = [&] { return cmd_simulate(common, input, sim_format); }; });

  std::size_t sample_n = 10;
  int sample_max = kMaxComponents;
  std::uint64_t sample_seed = 0;
  std::string sampler = "variable";
  auto* sample = app.add_subcommand("sample", "Print random valid sequences");
  sample->add_option("-n,--count", sample_n, "Number of sequences")->capture_default_str();
  sample->add_option("--max-components", sample_max, "Component limit")->capture_default_str();
  sample->add_option("--seed", sample_seed, "Random seed")->capture_default_str();
  sample->add_option("--sampler", sampler, "variable or token")->capture_default_str();
  sample->callback([&] { run = [&] { return cmd_sample(common, sample_n, sample_max, sample_seed, sampler); }; });

  int enum_max = kMaxComponents;
  bool enum_list = false;
  auto* enumerate = app.add_subcommand("enumerate", "Count (or list) variable sequences");
  enumerate->add_option("--max-components", enum_max, "Component limit")
      ->check(CLI::Range(1, kMaxComponents))
      ->capture_default_str();
  enumerate->add_flag("--list", enum_list, "Print every variable sequence");
  enumerate->callback([&] { run = [&] { return cmd_enumerate(enum_max, enum_list); }; });

  std::string vocab_out;
  bool vocab_hash = false;
  auto* vocab = app.add_subcommand("vocab", "Write the token vocabulary");
  vocab->add_option("-o,--out", vocab_out, "Output file (default stdout)");
  vocab->add_flag("--hash", vocab_hash, "Print only the vocabulary hash");
  vocab->callback([&] { run = [&] { return cmd_vocab(common, vocab_out, vocab_hash); }; });

  DatasetConfig dataset;
  std::string dataset_out;
  auto* gen = app.add_subcommand("gen-dataset", "Generate valid, feasible records with requirement vectors");
  gen->add_option("-n,--count", dataset.n_target, "Number of records")->capture_default_str();
  gen->add_option("--max-components", dataset.max_components, "Component limit")->capture_default_str();
  gen->add_option("--seed", dataset.seed, "Random seed")->capture_default_str();
  gen->add_option("--sampler", sampler, "variable or token")->capture_default_str();
  gen->add_option("--max-draws", dataset.max_draws, "Draw limit (0 = automatic)")->capture_default_str();
  gen->add_option("-o,--out", dataset_out, "Record file")->required();
  gen->callback([&] { run = [&] { return cmd_gen_dataset(common, dataset, sampler, dataset_out); }; });

  std::string split_out;
  double val_frac = 0.0005;
  double test_frac = 0.0005;
  std::uint64_t split_seed = 0;
  auto* split = app.add_subcommand("split", "Split a record file into train/val/test");
  split->add_option("input", input, "Record file")->required();
  split->add_option("-o,--out-dir", split_out, "Output directory")->required();
  split->add_option("--val", val_frac, "Validation fraction")->capture_default_str();
  split->add_option("--test", test_frac, "Test fraction")->capture_default_str();
  split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
  split->callback([&] { run = [&] { return cmd_split(common, input, split_out, val_frac, test_frac, split_seed); }; });

  std::string eval_label = "model";
  std::string eval_format = "table";
  auto* eval = app.add_subcommand("eval", "Score (requirements | predicted sequence) pairs");
  eval->add_option("input", input, "Pair file in record format, '-' for stdin")->capture_default_str();
  eval->add_option("--label", eval_label, "Row label")->capture_default_str();
  eval->add_option("--format", eval_format, "table or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  eval->callback([&] { run = [&] { return cmd_eval(common, input, eval_label, eval_format); }; });

  SearchOptions search_opt;
  auto* search = app.add_subcommand("search", "Search for a sequence meeting the requirements");
  search->add_option("--method", search_opt.method, "eda, mcts, eda+c, mcts+c, random or completer")
      ->capture_default_str();
  search->add_option("--req", search_opt.reqs, "Eight requirement values: tau_in tau_out s px py pz m_index m_sign")
      ->expected(8)
      ->allow_extra_args(false);
  search->add_option("--req-file", search_opt.req_file, "File with one requirement vector per line");
  search->add_option("--budget", search_opt.config.budget, "Candidate evaluations")->capture_default_str();
  search->add_option("--completer", search_opt.completer, "random, exec:<cmd> or tcp:<host>:<port>");
  search->add_option("--format", search_opt.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  add_search_config(search, search_opt.config);
  search->callback([&] { run = [&] { return cmd_search(common, search_opt); }; });

  BenchmarkOptions bench_opt;
  auto* bench = app.add_subcommand("benchmark", "Compare methods on problems from feasible random sequences");
  bench->add_option("--problems", bench_opt.problems, "Number of problems")->capture_default_str();
  bench->add_option("--problem-components", bench_opt.problem_components, "Component limit of problem sequences")
      ->capture_default_str();
  bench->add_option("--methods", bench_opt.methods, "Comma-separated methods")->capture_default_str();
  bench->add_option("--pure-budget", bench_opt.config.pure_budget, "Budget of eda, mcts and random")
      ->capture_default_str();
  bench->add_option("--hybrid-budget", bench_opt.config.hybrid_budget, "Budget of eda+c and mcts+c")
      ->capture_default_str();
  bench->add_option("--completer", bench_opt.completer, "random, exec:<cmd> or tcp:<host>:<port>");
  bench->add_option("--format", bench_opt.format, "table or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  add_search_config(bench, bench_opt.config.base);
  bench->callback([&] { run = [&] { return cmd_benchmark(common, bench_opt); }; });

  bool serve_stdio = false;
  int serve_port = -1;
  std::string serve_host = "127.0.0.1";
  bool serve_once = false;
  auto* serve = app.add_subcommand("serve", "Run the random completer behind the wire protocol");
  serve->add_flag("--stdio", serve_stdio, "Serve one session over stdin/stdout (default)");
  serve->add_option("--port", serve_port, "Listen on a TCP port (0 picks one)");
  serve->add_option("--host", serve_host, "Address to bind")->capture_default_str();
  serve->add_flag("--once", serve_once, "Exit after the first TCP connection");
  serve->callback([&] { run = [&] { return cmd_serve(common, serve_stdio, serve_port, serve_host, serve_once); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kEnvironment;
  }

  try {
    return run();
  } catch (const IoFailure& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kEnvironment;
  } catch (const CatalogueError& e) {
    fmt::print(stderr, "catalogue error: {}\n", e.what());
    return kEnvironment;
  } catch (const CompleterError& e) {
    fmt::print(stderr, "completer error: {}\n", e.what());
    return e.kind() == CompleterError::Kind::InvalidArgument ? kDomain : kEnvironment;
  } catch (const DatasetError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    const bool io = e.kind() == DatasetError::Kind::InputUnreadable || e.kind() == DatasetError::Kind::OutputUnwritable;
    return io ? kEnvironment : kDomain;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kDomain;
  }
}
