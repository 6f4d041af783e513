#include "gearsyn/search.hpp"

#include <fmt/format.h>

#include <chrono>

#include "gearsyn/generate.hpp"
#include "gearsyn/parallel.hpp"

namespace gearsyn {

void SearchConfig::validate() const {
  const auto bad = [](const std::string& what) { return SearchError(SearchError::Kind::InvalidConfig, what); };
  if (budget < 1) throw bad("budget must be at least 1");
  if (prefix_len < 1 || prefix_len >= static_cast<int>(kMaxTokens)) {
    throw bad(fmt::format("prefix_len must lie in [1, {})", kMaxTokens));
  }
  if (population < 1) throw bad("population must be at least 1");
  if (!(elite_frac > 0.0 && elite_frac <= 1.0)) throw bad("elite_frac must lie in (0, 1]");
  if (!(smoothing >= 0.0)) throw bad("smoothing must be non-negative");
  if (!(c >= 0.0)) throw bad("exploration constant must be non-negative");
  if (max_components < 1 || max_components > kMaxComponents) {
    throw bad(fmt::format("max_components must lie in [1, {}]", kMaxComponents));
  }
  try {
    weights.validate();
  } catch (const std::invalid_argument& e) {
    throw bad(e.what());
  }
}

bool better_candidate(const FitnessBreakdown& a, const FitnessBreakdown& b) {
  if (a.feasible != b.feasible) return a.feasible;
  return a.score < b.score;
}

nlohmann::ordered_json SearchResult::to_json(const Catalogue& cat) const {
  nlohmann::ordered_json j;
  if (best) {
    j["sequence"] = format_sequence(best->sequence, cat);
    j["fitness"] = best->fitness.to_json();
  } else {
    j["sequence"] = nullptr;
    j["fitness"] = nullptr;
  }
  j["evaluated"] = evaluated;
  j["generations"] = history.size();
  j["seconds"] = seconds;
  return j;
}

CandidateEvaluator fitness_evaluator(const Requirements& req, const FitnessWeights& w, const Catalogue& cat) {
  return [req, w, &cat](const GearSequence& seq) { return evaluate_fitness(req, seq.tokens, w, cat); };
}

SearchResult random_search(const Requirements& req, const SearchConfig& config, const Catalogue& cat) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<Candidate> pool(config.budget);
  parallel_for(pool.size(), config.workers, [&](std::size_t i) {
    pool[i].sequence = random_valid_sequence(derive_seed(config.seed, i), config.max_components, cat);
    pool[i].fitness = evaluate_fitness(req, pool[i].sequence.tokens, config.weights, cat);
  });
  SearchResult result;
  for (auto& c : pool) {
    if (!result.best || better_candidate(c.fitness, result.best->fitness)) result.best = std::move(c);
  }
  result.evaluated = pool.size();
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace gearsyn
