#include "gearsyn/benchmark.hpp"

#include <fmt/format.h>

#include <chrono>
#include <set>

#include "gearsyn/feasibility.hpp"
#include "gearsyn/generate.hpp"

namespace gearsyn {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Completer: return "completer";
    case Method::Eda: return "eda";
    case Method::Mcts: return "mcts";
    case Method::EdaHybrid: return "eda+c";
    case Method::MctsHybrid: return "mcts+c";
    case Method::Random: return "random";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  for (auto m : {Method::Completer, Method::Eda, Method::Mcts, Method::EdaHybrid, Method::MctsHybrid,
                 Method::Random}) {
    if (to_string(m) == text) return m;
  }
  throw SearchError(SearchError::Kind::InvalidConfig,
                    fmt::format("unknown method '{}' (completer, eda, mcts, eda+c, mcts+c, random)", text));
}

bool is_hybrid(Method m) { return m == Method::EdaHybrid || m == Method::MctsHybrid; }

bool needs_completer(Method m) { return is_hybrid(m) || m == Method::Completer; }

std::vector<DatasetRecord> benchmark_problems(std::size_t n, int max_components, std::uint64_t seed,
                                              const Catalogue& cat) {
  std::vector<DatasetRecord> out;
  std::set<std::vector<Token>> seen;
  for (std::uint64_t i = 0; out.size() < n; ++i) {
    if (i > 1000 * n + 10000) {
      throw SearchError(SearchError::Kind::InvalidConfig, "could not find enough feasible benchmark sequences");
    }
    auto seq = random_valid_sequence(derive_seed(seed, i), max_components, cat);
    const auto res = simulate(seq, cat);
    if (check_interference(res.placements)) continue;
    if (!seen.insert(seq.tokens).second) continue;
    out.push_back(DatasetRecord{encode_requirements(res), std::move(seq)});
  }
  return out;
}

ReportRow BenchmarkRow::report_row() const {
  return ReportRow{std::string(to_string(method)), report, budget, seconds};
}

std::vector<BenchmarkRow> run_benchmark(std::span<const Requirements> problems, const BenchmarkConfig& config,
                                        const Catalogue& cat, Completer* completer) {
  std::vector<BenchmarkRow> rows;
  for (const auto method : config.methods) {
    if (needs_completer(method) && completer == nullptr) {
      throw CompleterError(CompleterError::Kind::Unreachable,
                           fmt::format("method {} needs a completer", to_string(method)));
    }
    BenchmarkRow row;
    row.method = method;
    row.budget = method == Method::Completer ? 1 : is_hybrid(method) ? config.hybrid_budget : config.pure_budget;
    std::vector<DatasetRecord> pairs;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < problems.size(); ++k) {
      SearchConfig sc = config.base;
      sc.budget = row.budget;
      sc.seed = derive_seed(config.base.seed, k);
      const auto& req = problems[k];
      SearchResult res;
      switch (method) {
        case Method::Completer: {
          const Token prefix[] = {Token::start()};
          Candidate c;
          c.sequence = completer->complete(req, prefix, sc.seed);
          c.fitness = evaluate_fitness(req, c.sequence.tokens, sc.weights, cat);
          res.best = std::move(c);
          res.evaluated = 1;
          break;
        }
        case Method::Eda: res = eda_search(req, sc, cat); break;
        case Method::Mcts: res = mcts_search(req, sc, cat); break;
        case Method::EdaHybrid: res = eda_search(req, sc, cat, completer); break;
        case Method::MctsHybrid: res = mcts_search(req, sc, cat, completer); break;
        case Method::Random: res = random_search(req, sc, cat); break;
      }
      row.evaluated += res.evaluated;
      pairs.push_back(DatasetRecord{req, res.best ? res.best->sequence : GearSequence{}});
      row.best.push_back(res.best ? *res.best : Candidate{});
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.report = evaluate_set(pairs, cat, config.base.workers);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gearsyn
