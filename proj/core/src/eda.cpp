#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "gearsyn/bigram.hpp"
#include "gearsyn/parallel.hpp"
#include "gearsyn/search.hpp"

namespace gearsyn {

SearchResult eda_search(const Requirements& req, const SearchConfig& config, const Catalogue& cat,
                        Completer* completer) {
  return eda_search(fitness_evaluator(req, config.weights, cat), req, config, cat, completer);
}

SearchResult eda_search(const CandidateEvaluator& evaluate, const Requirements& req, const SearchConfig& config,
                        const Catalogue& cat, Completer* completer) {
  config.validate();
  if (config.budget < config.population) {
    throw SearchError(SearchError::Kind::BudgetTooSmall,
                      fmt::format("budget {} is below the population size {}", config.budget, config.population));
  }
  const auto start_time = std::chrono::steady_clock::now();
  const bool hybrid = completer != nullptr;
  const Token start[] = {Token::start()};

  Rng rng(config.seed);
  BigramModel model(cat, config.max_components);
  SearchResult result;

  std::vector<std::vector<Token>> sampled;
  std::vector<Candidate> pool;
  std::vector<std::uint64_t> streams;
  while (result.evaluated < config.budget) {
    const std::size_t batch = std::min(config.population, config.budget - result.evaluated);
    sampled.resize(batch);
    for (auto& s : sampled) {
      s = hybrid ? model.sample(rng, start, static_cast<std::size_t>(config.prefix_len)) : model.sample(rng);
    }

    pool.assign(batch, Candidate{});
    if (hybrid) {
      streams.resize(batch);
      for (std::size_t k = 0; k < batch; ++k) streams[k] = derive_seed(config.seed, result.evaluated + k);
      auto completed = completer->complete_batch(req, sampled, streams);
      for (std::size_t k = 0; k < batch; ++k) pool[k].sequence = std::move(completed[k]);
    } else {
      for (std::size_t k = 0; k < batch; ++k) pool[k].sequence.tokens = sampled[k];
    }
    parallel_for(batch, config.workers, [&](std::size_t k) {
      if (!hybrid || is_valid_completion(sampled[k], pool[k].sequence, cat, config.max_components)) {
        pool[k].fitness = evaluate(pool[k].sequence);
      }
    });
    result.evaluated += batch;

    GenerationStats stats;
    stats.evaluated = result.evaluated;
    stats.best_score = pool.front().fitness.score;
    double total = 0.0;
    for (const auto& c : pool) {
      total += c.fitness.score;
      stats.best_score = std::min(stats.best_score, c.fitness.score);
      if (c.fitness.feasible) ++stats.feasible;
      if (!result.best || better_candidate(c.fitness, result.best->fitness)) result.best = c;
    }
    stats.mean_score = total / static_cast<double>(batch);
    result.history.push_back(stats);

    std::vector<std::size_t> order(batch);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return better_candidate(pool[a].fitness, pool[b].fitness);
    });
    const auto n_elite = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(config.elite_frac * static_cast<double>(batch))));
    std::vector<std::vector<Token>> elite;
    elite.reserve(n_elite);
    for (std::size_t k = 0; k < n_elite; ++k) {
      elite.push_back(hybrid ? sampled[order[k]] : pool[order[k]].sequence.tokens);
    }
    model.refit(elite, config.smoothing);
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return result;
}

}  // namespace gearsyn
