#include <benchmark/benchmark.h>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/feasibility.hpp"
#include "gearsyn/fitness.hpp"
#include "gearsyn/generate.hpp"
#include "gearsyn/grammar.hpp"
#include "gearsyn/search.hpp"
#include "gearsyn/simulator.hpp"

namespace {

using namespace gearsyn;

const Catalogue& cat() {
  static const Catalogue c = load_catalogue(GEARSYN_BENCH_CATALOGUE);
  return c;
}

std::vector<GearSequence> corpus() {
  std::vector<GearSequence> out;
  for (std::uint64_t s = 0; s < 1024; ++s) out.push_back(random_valid_sequence(s, kMaxComponents, cat()));
  return out;
}

void BM_RandomValidSequence(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(random_valid_sequence(seed++, kMaxComponents, cat()));
}
BENCHMARK(BM_RandomValidSequence);

void BM_VariableSampler(benchmark::State& state) {
  const VariableSequenceSampler sampler(cat());
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(seed++));
}
BENCHMARK(BM_VariableSampler);

void BM_Validate(benchmark::State& state) {
  const auto seqs = corpus();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(validate_grammar(seqs[i++ % seqs.size()], cat()));
}
BENCHMARK(BM_Validate);

void BM_NextTokens(benchmark::State& state) {
  const auto seqs = corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& t = seqs[i++ % seqs.size()].tokens;
    benchmark::DoNotOptimize(next_tokens(std::span<const Token>(t.data(), t.size() / 2), cat()));
  }
}
BENCHMARK(BM_NextTokens);

void BM_Simulate(benchmark::State& state) {
  const auto seqs = corpus();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(seqs[i++ % seqs.size()], cat()));
}
BENCHMARK(BM_Simulate);

void BM_Interference(benchmark::State& state) {
  std::vector<std::vector<Placement>> placements;
  for (const auto& s : corpus()) placements.push_back(simulate(s, cat()).placements);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(check_interference(placements[i++ % placements.size()]));
}
BENCHMARK(BM_Interference);

void BM_Fitness(benchmark::State& state) {
  const auto seqs = corpus();
  const auto req = encode_requirements(simulate(seqs.front(), cat()));
  const FitnessWeights w;
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_fitness(req, seqs[i++ % seqs.size()].tokens, w, cat()));
}
BENCHMARK(BM_Fitness);

void BM_EdaSearch(benchmark::State& state) {
  const auto req = encode_requirements(simulate(corpus()[3], cat()));
  SearchConfig config;
  config.budget = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eda_search(req, config, cat()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EdaSearch)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MctsSearch(benchmark::State& state) {
  const auto req = encode_requirements(simulate(corpus()[3], cat()));
  SearchConfig config;
  config.budget = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mcts_search(req, config, cat()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MctsSearch)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
