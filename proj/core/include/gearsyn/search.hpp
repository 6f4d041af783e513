#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/completer.hpp"
#include "gearsyn/dataset.hpp"
#include "gearsyn/error.hpp"
#include "gearsyn/fitness.hpp"
#include "gearsyn/grammar.hpp"
#include "gearsyn/token.hpp"

namespace gearsyn {

class SearchError : public Error {
 public:
  enum class Kind { BudgetTooSmall, InvalidConfig };
  SearchError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct SearchConfig {
  /// Number of candidate evaluations.
  std::size_t budget = 10000;
  /// Tokens after <start> fixed by the search before the completer takes
  /// over (hybrid modes only).
  int prefix_len = 6;
  std::size_t population = 100;
  double elite_frac = 0.2;
  double smoothing = 0.1;
  double c = 1.4;
  std::uint64_t seed = 0;
  FitnessWeights weights;
  int workers = 1;
  int max_components = kMaxComponents;

  /// Throws SearchError(InvalidConfig).
  void validate() const;
};

struct Candidate {
  GearSequence sequence;
  FitnessBreakdown fitness;
};

/// Feasible before infeasible, then lower score.
bool better_candidate(const FitnessBreakdown& a, const FitnessBreakdown& b);

struct GenerationStats {
  std::size_t evaluated = 0;  // cumulative
  double best_score = 0.0;
  double mean_score = 0.0;
  std::size_t feasible = 0;
};

struct SearchResult {
  std::optional<Candidate> best;
  std::size_t evaluated = 0;
  std::vector<GenerationStats> history;
  double seconds = 0.0;

  nlohmann::ordered_json to_json(const Catalogue& cat) const;
};

/// Scores a full candidate. Defaults to evaluate_fitness against the
/// requirements; tests may substitute their own oracle.
using CandidateEvaluator = std::function<FitnessBreakdown(const GearSequence&)>;

CandidateEvaluator fitness_evaluator(const Requirements& req, const FitnessWeights& w, const Catalogue& cat);

/// Bigram EDA. Pure mode samples whole sentences; with a completer it
/// samples prefixes of `prefix_len` tokens and lets the completer finish
/// them. Throws SearchError(BudgetTooSmall) if budget < population.
SearchResult eda_search(const Requirements& req, const SearchConfig& config, const Catalogue& cat,
                        Completer* completer = nullptr);
SearchResult eda_search(const CandidateEvaluator& evaluate, const Requirements& req, const SearchConfig& config,
                        const Catalogue& cat, Completer* completer = nullptr);

/// UCT search over token prefixes; one rollout per evaluation. Depth is
/// capped at `prefix_len` with a completer and unbounded otherwise.
/// Closed sentences are evaluated once; selection skips exhausted subtrees
/// and the search stops early once the whole tree is exhausted.
class MctsTree {
 public:
  struct Node {
    Token token;
    std::uint32_t parent = 0;
    std::uint32_t depth = 0;  // tokens after <start>
    std::vector<std::uint32_t> children;
    double reward = 0.0;
    std::size_t visits = 0;
    bool expanded = false;
    bool terminal = false;
    /// Every sentence below this node has been evaluated.
    bool exhausted = false;
  };

  MctsTree(CandidateEvaluator evaluate, const Requirements& req, const SearchConfig& config, const Catalogue& cat,
           Completer* completer = nullptr);

  /// One selection, expansion, rollout and backpropagation. Returns false
  /// (without evaluating) when the tree is exhausted.
  bool iterate();
  void run(std::size_t rollouts);

  const Node& node(std::uint32_t i) const { return nodes_.at(i); }
  const Node& root() const { return nodes_.front(); }
  std::size_t size() const { return nodes_.size(); }
  std::vector<Token> prefix_of(std::uint32_t i) const;
  /// Children of the root in the order they were first visited.
  const std::vector<std::uint32_t>& visit_order() const { return visit_order_; }
  const SearchResult& result() const { return result_; }

 private:
  std::uint32_t select_child(std::uint32_t parent) const;
  void expand(std::uint32_t i);

  CandidateEvaluator evaluate_;
  Requirements req_;
  SearchConfig config_;
  const Catalogue* cat_;
  Completer* completer_;
  Rng rng_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> visit_order_;
  SearchResult result_;
};

SearchResult mcts_search(const Requirements& req, const SearchConfig& config, const Catalogue& cat,
                         Completer* completer = nullptr);
SearchResult mcts_search(const CandidateEvaluator& evaluate, const Requirements& req, const SearchConfig& config,
                         const Catalogue& cat, Completer* completer = nullptr);

/// Baseline: `budget` independent uniform grammar-valid sentences.
SearchResult random_search(const Requirements& req, const SearchConfig& config, const Catalogue& cat);

}  // namespace gearsyn
