#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/completer.hpp"
#include "gearsyn/dataset.hpp"
#include "gearsyn/metrics.hpp"
#include "gearsyn/search.hpp"

namespace gearsyn {

enum class Method : std::uint8_t { Completer, Eda, Mcts, EdaHybrid, MctsHybrid, Random };

/// completer, eda, mcts, eda+c, mcts+c, random
std::string_view to_string(Method m);
Method parse_method(std::string_view text);
bool is_hybrid(Method m);
bool needs_completer(Method m);

/// Feasible, distinct sentences with at most `max_components` components,
/// paired with their own achieved requirements.
std::vector<DatasetRecord> benchmark_problems(std::size_t n, int max_components, std::uint64_t seed,
                                              const Catalogue& cat);

struct BenchmarkConfig {
  std::vector<Method> methods = {Method::Eda, Method::Mcts, Method::Random};
  std::size_t pure_budget = 10000;
  std::size_t hybrid_budget = 1000;
  /// Everything except the budget; problem k runs with seed
  /// derive_seed(base.seed, k) under every method.
  SearchConfig base;
};

struct BenchmarkRow {
  Method method = Method::Eda;
  EvalReport report;
  std::size_t budget = 0;
  std::size_t evaluated = 0;  // summed over problems
  double seconds = 0.0;
  std::vector<Candidate> best;  // one per problem, in problem order

  double seconds_per_candidate() const {
    return evaluated ? seconds / static_cast<double>(evaluated) : 0.0;
  }
  ReportRow report_row() const;
};

/// Runs every method on every problem. Hybrid and completer-only methods
/// need a completer; the completer-only method uses budget 1.
std::vector<BenchmarkRow> run_benchmark(std::span<const Requirements> problems, const BenchmarkConfig& config,
                                        const Catalogue& cat, Completer* completer = nullptr);

}  // namespace gearsyn
