#include <cmath>
#include <limits>
#include <mutex>

#include <gtest/gtest.h>

#include "gearsyn/benchmark.hpp"
#include "gearsyn/bigram.hpp"
#include "gearsyn/feasibility.hpp"
#include "gearsyn/search.hpp"
#include "support.hpp"

namespace gearsyn {
namespace {

using test::catalogue;
using test::seq;

Requirements own_requirements(const GearSequence& s) { return encode_requirements(simulate(s, catalogue())); }

GearSequence first_infeasible(int max_components) {
  for (std::uint64_t s = 0;; ++s) {
    auto x = random_valid_sequence(s, max_components, catalogue());
    if (check_interference(simulate(x, catalogue()).placements)) return x;
  }
}

// Records every candidate handed to the evaluator.
struct Recorder {
  std::mutex mutex;
  std::vector<std::pair<GearSequence, FitnessBreakdown>> seen;
  CandidateEvaluator wrap(CandidateEvaluator inner) {
    return [this, inner](const GearSequence& s) {
      auto f = inner(s);
      std::scoped_lock lock(mutex);
      seen.emplace_back(s, f);
      return f;
    };
  }
};

TEST(Ucb, Values) {
  EXPECT_NEAR(ucb(5, 10, 100, 1.4), 0.5 + 1.4 * std::sqrt(std::log(100.0) / 10), 1e-15);
  // 0.5 + 1.4 * 0.678614 = 1.450060 (six digits).
  EXPECT_NEAR(ucb(5, 10, 100, 1.4), 1.450060, 1e-6);
  EXPECT_EQ(ucb(0, 0, 10, 1.4), std::numeric_limits<double>::infinity());
  EXPECT_EQ(ucb(3, 4, 50, 0.0), 0.75);
}

TEST(Ucb, Monotonicity) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = 1 + static_cast<double>(rng.index(50));
    const double V = v + static_cast<double>(rng.index(100));
    const double R = rng.uniform() * v;
    const double c = rng.uniform() * 3;
    ASSERT_LT(ucb(R, v, V, c), ucb(R + 0.1, v, V, c));
    if (V > 1) {
      // Same mean reward, more visits: smaller exploration bonus.
      const double mean = R / v;
      ASSERT_GT(ucb(mean * v, v, V + 10, 1.0) - mean, ucb(mean * (v + 1), v + 1, V + 10, 1.0) - mean);
    }
  }
}

TEST(Fitness, OwnRequirementsScoreZero) {
  const auto s = seq(test::kExampleSentence);
  const FitnessWeights w{1, 1, 1, 1, 1, 1, 0};
  const auto f = evaluate_fitness(own_requirements(s), s.tokens, w, catalogue());
  EXPECT_TRUE(f.valid);
  EXPECT_TRUE(f.feasible);
  EXPECT_EQ(f.score, 0.0);
}

TEST(Fitness, FlippedMotionAddsOneMotvecWeight) {
  const auto s = seq(test::kExampleSentence);
  auto req = own_requirements(s);
  req.m_sign = -req.m_sign;
  const FitnessWeights w{1, 1, 2.5, 1, 1, 1, 0};
  EXPECT_EQ(fitness(req, s, w, catalogue()), 2.5);
  // A perpendicular axis costs half.
  req.m_sign = -req.m_sign;
  req.m_index = (req.m_index + 1) % 3;
  EXPECT_EQ(fitness(req, s, w, catalogue()), 1.25);
}

TEST(Fitness, InfeasibleAddsTheFeasibilityWeight) {
  const auto s = first_infeasible(6);
  const FitnessWeights w{1, 1, 1, 1, 1, 7, 0};
  const auto f = evaluate_fitness(own_requirements(s), s.tokens, w, catalogue());
  EXPECT_TRUE(f.valid);
  EXPECT_FALSE(f.feasible);
  EXPECT_EQ(f.score, 7.0);
}

TEST(Fitness, InvalidGetsTheSentinel) {
  const auto f = evaluate_fitness(Requirements{}, seq("<start> SH-100 <end>").tokens, FitnessWeights{}, catalogue());
  EXPECT_FALSE(f.valid);
  EXPECT_EQ(f.score, kInvalidScore);
}

TEST(Fitness, MatchesTheWeightedSumOracle) {
  const auto& cat = catalogue();
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    const auto target = random_valid_sequence(rng.next(), 10, cat);
    const auto cand = random_valid_sequence(rng.next(), 10, cat);
    const FitnessWeights w{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(),
                           rng.uniform(), rng.uniform() * 10, rng.uniform() * 0.1};
    const auto req = own_requirements(target);
    const auto res = simulate(cand, cat);
    const double dx = req.p[0] - res.position[0], dy = req.p[1] - res.position[1], dz = req.p[2] - res.position[2];
    const double dot = req.m_index == res.motion.index ? req.m_sign * res.motion.sign : 0.0;
    const double expected =
        w.pos * std::sqrt(dx * dx + dy * dy + dz * dz) + w.speed * std::abs(std::log(req.s / res.speed_ratio)) +
        w.motvec * (1 - dot) / 2 + w.inmot * (req.tau_in != (res.input == MotionType::Translation)) +
        w.outmot * (req.tau_out != (res.output == MotionType::Translation)) +
        w.feas * (check_interference(res.placements) ? 1.0 : 0.0) + w.weight * res.weight_kg;
    ASSERT_NEAR(fitness(req, cand, w, cat), expected, 1e-9);
  }
}

TEST(Fitness, WeightValidation) {
  EXPECT_NO_THROW(FitnessWeights{}.validate());
  EXPECT_THROW((FitnessWeights{0, 0, 0, 0, 0, 0, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((FitnessWeights{-1, 1, 1, 1, 1, 1, 1}.validate()), std::invalid_argument);
}

TEST(Bigram, StartsUniformOverGrammarTransitions) {
  const auto& cat = catalogue();
  const BigramModel model(cat);
  EXPECT_EQ(model.size(), 52u);
  const auto succ = model.successors(Token::start());
  EXPECT_EQ(succ.size(), 6u);
  for (const auto& t : succ) EXPECT_NEAR(model.probability(Token::start(), t), 1.0 / 6, 1e-15);
  EXPECT_FALSE(model.allowed(Token::start(), Token::end()));
  // Every transition inside a valid sentence is allowed.
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const auto x = random_valid_sequence(s, 10, cat);
    for (std::size_t i = 0; i + 1 < x.tokens.size(); ++i) ASSERT_TRUE(model.allowed(x.tokens[i], x.tokens[i + 1]));
  }
}

TEST(Bigram, RefitWithoutSmoothingIsTheEmpiricalEstimate) {
  const auto& cat = catalogue();
  BigramModel model(cat);
  const auto a = seq("<start> tra+ SH-100 <end>").tokens;
  const auto b = seq("<start> tra+ SH-200 <end>").tokens;
  const std::vector<std::vector<Token>> elite{a, a, b};
  model.refit(elite, 0.0);
  const auto tra = Token::translate(+1);
  EXPECT_NEAR(model.probability(tra, a[2]), 2.0 / 3, 1e-15);
  EXPECT_NEAR(model.probability(tra, b[2]), 1.0 / 3, 1e-15);
  EXPECT_EQ(model.probability(tra, seq("<start> tra+ SH-300").tokens[2]), 0.0);
  EXPECT_EQ(model.probability(Token::start(), tra), 1.0);
  EXPECT_EQ(model.probability(a[2], Token::end()), 1.0);
  // Rows never observed stay uniform.
  const auto minus = Token::translate(-1);
  const auto n = model.successors(minus).size();
  EXPECT_NEAR(model.probability(minus, a[2]), 1.0 / static_cast<double>(n), 1e-15);
}

TEST(Bigram, SmoothingKeepsEveryAllowedTransitionPositive) {
  const auto& cat = catalogue();
  BigramModel model(cat);
  std::vector<std::vector<Token>> elite;
  for (std::uint64_t s = 0; s < 30; ++s) elite.push_back(random_valid_sequence(s, 10, cat).tokens);
  model.refit(elite, 0.1);
  for (const auto& prev : lexicon(cat)) {
    const auto succ = model.successors(prev);
    if (succ.empty()) continue;
    double total = 0.0;
    for (const auto& next : succ) {
      const double p = model.probability(prev, next);
      ASSERT_GT(p, 0.0);
      total += p;
    }
    ASSERT_NEAR(total, 1.0, 1e-9) << token_text(prev, cat);
  }
}

TEST(Bigram, SamplesAreValid) {
  const auto& cat = catalogue();
  BigramModel model(cat);
  std::vector<std::vector<Token>> elite{seq(test::kExampleSentence).tokens};
  model.refit(elite, 0.0);
  Rng rng(1);
  for (int i = 0; i < 3000; ++i) {
    const auto s = model.sample(rng);
    ASSERT_FALSE(validate_grammar(s, cat)) << format_tokens(s, cat);
  }
  const Token start[] = {Token::start()};
  for (int i = 0; i < 1000; ++i) {
    const auto prefix = model.sample(rng, start, 6);
    ASSERT_LE(prefix.size(), 7u);
    ASSERT_TRUE(cursor_after(prefix, cat));
  }
}

SearchConfig config(std::size_t budget, std::uint64_t seed = 0) {
  SearchConfig c;
  c.budget = budget;
  c.seed = seed;
  return c;
}

TEST(SearchConfig, Validation) {
  EXPECT_NO_THROW(SearchConfig{}.validate());
  auto c = SearchConfig{};
  c.prefix_len = 21;
  EXPECT_THROW(c.validate(), SearchError);
  c = SearchConfig{};
  c.elite_frac = 0;
  EXPECT_THROW(c.validate(), SearchError);
  c = SearchConfig{};
  c.budget = 0;
  EXPECT_THROW(c.validate(), SearchError);
  EXPECT_EQ(SearchConfig{}.prefix_len, 6);
  EXPECT_EQ(SearchConfig{}.c, 1.4);
}

TEST(Eda, BudgetEqualToPopulationRunsOneGeneration) {
  const auto req = own_requirements(seq(test::kExampleSentence));
  const auto r = eda_search(req, config(100), catalogue());
  EXPECT_EQ(r.evaluated, 100u);
  EXPECT_EQ(r.history.size(), 1u);
  ASSERT_TRUE(r.best);
}

TEST(Eda, BudgetBelowPopulationThrows) {
  try {
    eda_search(Requirements{}, config(99), catalogue());
    FAIL();
  } catch (const SearchError& e) {
    EXPECT_EQ(e.kind(), SearchError::Kind::BudgetTooSmall);
  }
}

TEST(Eda, EveryCandidateIsValidAndBestIsTheMinimum) {
  const auto& cat = catalogue();
  const auto req = own_requirements(random_valid_sequence(4, 4, cat));
  Recorder rec;
  const auto r = eda_search(rec.wrap(fitness_evaluator(req, FitnessWeights{}, cat)), req, config(1000), cat);
  ASSERT_EQ(rec.seen.size(), 1000u);
  EXPECT_EQ(r.history.size(), 10u);
  EXPECT_EQ(r.history.back().evaluated, 1000u);
  double best_feasible = std::numeric_limits<double>::infinity();
  for (const auto& [s, f] : rec.seen) {
    ASSERT_FALSE(validate_grammar(s, cat));
    if (f.feasible) best_feasible = std::min(best_feasible, f.score);
  }
  ASSERT_TRUE(r.best);
  EXPECT_TRUE(r.best->fitness.feasible);
  EXPECT_EQ(r.best->fitness.score, best_feasible);
}

TEST(Eda, Deterministic) {
  const auto req = own_requirements(seq(test::kExampleSentence));
  auto c = config(500, 17);
  const auto a = eda_search(req, c, catalogue());
  c.workers = 3;
  const auto b = eda_search(req, c, catalogue());
  EXPECT_EQ(a.best->sequence, b.best->sequence);
  EXPECT_EQ(a.best->fitness.score, b.best->fitness.score);
}

TEST(Eda, BeatsRandomSearchOnAFourComponentTarget) {
  const auto& cat = catalogue();
  // Known feasible four-component target.
  const auto target = seq("<start> tra+ SH-200 SBSG2-4515R mesh_2n SBSG2-1545L tra- SH-300 <end>");
  ASSERT_FALSE(check_interference(simulate(target, cat).placements));
  const auto req = own_requirements(target);
  // Single runs can stall in a local optimum, so compare totals over paired seeds.
  double eda_total = 0.0, random_total = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto eda = eda_search(req, config(10000, seed), cat);
    const auto rnd = random_search(req, config(10000, seed), cat);
    ASSERT_TRUE(eda.best && rnd.best);
    EXPECT_TRUE(eda.best->fitness.feasible) << "seed " << seed;
    EXPECT_FALSE(eda.best->fitness.inmot_mismatch || eda.best->fitness.outmot_mismatch);
    eda_total += eda.best->fitness.score;
    random_total += rnd.best->fitness.score;
  }
  EXPECT_LT(eda_total, random_total);
}

TEST(Mcts, SingleRollout) {
  const auto& cat = catalogue();
  const auto req = own_requirements(seq(test::kExampleSentence));
  Recorder rec;
  MctsTree tree(rec.wrap(fitness_evaluator(req, FitnessWeights{}, cat)), req, config(1), cat);
  tree.run(1);
  EXPECT_EQ(tree.result().evaluated, 1u);
  ASSERT_EQ(rec.seen.size(), 1u);
  EXPECT_EQ(tree.result().best->sequence, rec.seen[0].first);
  EXPECT_EQ(tree.root().visits, 1u);
  EXPECT_EQ(tree.size(), 1 + next_tokens(std::vector<Token>{Token::start()}, cat).size());

  const auto r = mcts_search(req, config(1), cat);
  EXPECT_EQ(r.evaluated, 1u);
}

TEST(Mcts, ZeroFitnessVisitsEveryChildBeforeRevisiting) {
  const auto& cat = catalogue();
  const CandidateEvaluator zero = [](const GearSequence&) {
    FitnessBreakdown f;
    f.valid = f.feasible = true;
    f.score = 0.0;
    return f;
  };
  MctsTree tree(zero, Requirements{}, config(100), cat);
  tree.iterate();
  const auto& children = tree.root().children;
  ASSERT_EQ(children.size(), 6u);
  tree.run(children.size() - 1);
  EXPECT_EQ(tree.visit_order().size(), children.size());
  for (auto c : children) {
    EXPECT_EQ(tree.node(c).visits, 1u);
    EXPECT_EQ(tree.node(c).reward, 1.0);
  }
  // Unvisited children are taken in expansion order.
  EXPECT_EQ(tree.visit_order(), children);
}

TEST(Mcts, ExhaustsSmallTreesAndStops) {
  const auto& cat = catalogue();
  auto c = config(1000);
  c.max_components = 1;
  Recorder rec;
  MctsTree tree(rec.wrap(fitness_evaluator(Requirements{}, FitnessWeights{}, cat)), Requirements{}, c, cat);
  tree.run(1000);
  EXPECT_TRUE(tree.root().exhausted);
  EXPECT_LT(tree.result().evaluated, 1000u);
  EXPECT_FALSE(tree.iterate());
  std::set<std::vector<Token>> distinct;
  for (const auto& [s, f] : rec.seen) distinct.insert(s.tokens);
  // Two translate signs times six shafts.
  EXPECT_EQ(distinct.size(), 12u);
}

TEST(Mcts, VisitsAreConsistent) {
  const auto& cat = catalogue();
  const auto req = own_requirements(seq(test::kExampleSentence));
  MctsTree tree(fitness_evaluator(req, FitnessWeights{}, cat), req, config(500), cat);
  tree.run(500);
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const auto& n = tree.node(i);
    ASSERT_GE(n.reward, 0.0);
    std::size_t child_visits = 0;
    for (auto k : n.children) child_visits += tree.node(k).visits;
    ASSERT_LE(child_visits, n.visits);
  }
  EXPECT_EQ(tree.root().visits, 500u);
}

TEST(Mcts, DeterministicAndFindsFeasible) {
  const auto req = own_requirements(random_valid_sequence(4, 4, catalogue()));
  const auto a = mcts_search(req, config(2000, 5), catalogue());
  const auto b = mcts_search(req, config(2000, 5), catalogue());
  EXPECT_EQ(a.best->sequence, b.best->sequence);
  EXPECT_TRUE(a.best->fitness.feasible);
}

TEST(Hybrid, EvaluatesExactlyTheBudget) {
  const auto& cat = catalogue();
  const auto req = own_requirements(seq(test::kExampleSentence));
  RandomCompleter completer(cat);
  for (bool use_mcts : {false, true}) {
    Recorder rec;
    const auto eval = rec.wrap(fitness_evaluator(req, FitnessWeights{}, cat));
    const auto r = use_mcts ? mcts_search(eval, req, config(1000), cat, &completer)
                            : eda_search(eval, req, config(1000), cat, &completer);
    EXPECT_EQ(r.evaluated, 1000u);
    EXPECT_EQ(rec.seen.size(), 1000u);
    ASSERT_TRUE(r.best);
    EXPECT_TRUE(r.best->fitness.feasible);
    if (!use_mcts) {
      EXPECT_EQ(r.history.size(), 10u);
    }
  }
}

TEST(Hybrid, MctsDepthIsCapped) {
  const auto& cat = catalogue();
  RandomCompleter completer(cat);
  auto c = config(800);
  c.prefix_len = 3;
  MctsTree tree(fitness_evaluator(Requirements{}, FitnessWeights{}, cat), Requirements{}, c, cat, &completer);
  tree.run(800);
  for (std::uint32_t i = 0; i < tree.size(); ++i) ASSERT_LE(tree.node(i).depth, 3u);
}

// Returns a fixed sentence regardless of the prefix.
class StubbornCompleter final : public Completer {
 public:
  GearSequence complete(const Requirements&, std::span<const Token>, std::uint64_t) override {
    return seq("<start> tra+ SH-100 <end>");
  }
  std::string name() const override { return "stubborn"; }
};

TEST(Hybrid, CompletionsThatIgnoreThePrefixScoreAsInvalid) {
  const auto& cat = catalogue();
  StubbornCompleter completer;
  auto c = config(200);
  c.prefix_len = 2;
  Recorder rec;
  const auto r = eda_search(rec.wrap(fitness_evaluator(Requirements{}, FitnessWeights{}, cat)), Requirements{}, c,
                            cat, &completer);
  EXPECT_EQ(r.evaluated, 200u);
  // Only prefixes "<start> tra+ SH-100" and "<start> tra+" can match the stub.
  for (const auto& [s, f] : rec.seen) EXPECT_EQ(s, seq("<start> tra+ SH-100 <end>"));
  ASSERT_TRUE(r.best);
  EXPECT_EQ(r.best->sequence, seq("<start> tra+ SH-100 <end>"));
}

TEST(RandomSearch, BestIsTheIndexOrderMinimum) {
  const auto& cat = catalogue();
  const auto req = own_requirements(seq(test::kExampleSentence));
  const auto r = random_search(req, config(300, 4), cat);
  EXPECT_EQ(r.evaluated, 300u);
  std::optional<FitnessBreakdown> best;
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto f = evaluate_fitness(req, random_valid_sequence(derive_seed(4, i), 10, cat).tokens, {}, cat);
    if (!best || better_candidate(f, *best)) best = f;
  }
  EXPECT_EQ(r.best->fitness.score, best->score);
}

TEST(Benchmark, MethodNames) {
  for (auto m : {Method::Completer, Method::Eda, Method::Mcts, Method::EdaHybrid, Method::MctsHybrid, Method::Random}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("ga"), SearchError);
  EXPECT_TRUE(is_hybrid(Method::EdaHybrid));
  EXPECT_FALSE(is_hybrid(Method::Completer));
  EXPECT_TRUE(needs_completer(Method::Completer));
  const BenchmarkConfig defaults;
  EXPECT_EQ(defaults.pure_budget, 10 * defaults.hybrid_budget);
}

TEST(Benchmark, ProblemsAreFeasibleAndDistinct) {
  const auto& cat = catalogue();
  const auto problems = benchmark_problems(10, 6, 0, cat);
  ASSERT_EQ(problems.size(), 10u);
  std::set<std::vector<Token>> distinct;
  for (const auto& p : problems) {
    const auto res = simulate(p.sequence, cat);
    EXPECT_FALSE(check_interference(res.placements));
    EXPECT_LE(p.sequence.component_count(), 6u);
    EXPECT_EQ(encode_requirements(res), p.requirements);
    distinct.insert(p.sequence.tokens);
  }
  EXPECT_EQ(distinct.size(), 10u);
}

TEST(Benchmark, RowsAccountForBudgets) {
  const auto& cat = catalogue();
  const auto problems = benchmark_problems(3, 6, 1, cat);
  std::vector<Requirements> reqs;
  for (const auto& p : problems) reqs.push_back(p.requirements);
  BenchmarkConfig bc;
  bc.methods = {Method::Completer, Method::Eda, Method::Mcts, Method::EdaHybrid, Method::MctsHybrid, Method::Random};
  bc.pure_budget = 1000;
  bc.hybrid_budget = 100;
  RandomCompleter completer(cat);
  const auto rows = run_benchmark(reqs, bc, cat, &completer);
  ASSERT_EQ(rows.size(), 6u);
  const std::size_t expected_budget[] = {1, 1000, 1000, 100, 100, 1000};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].budget, expected_budget[i]) << to_string(rows[i].method);
    EXPECT_EQ(rows[i].evaluated, 3 * expected_budget[i]) << to_string(rows[i].method);
    EXPECT_EQ(rows[i].best.size(), 3u);
    EXPECT_EQ(rows[i].report.n_total, 3u);
    EXPECT_GE(rows[i].seconds_per_candidate(), 0.0);
  }
  for (std::size_t i : {1u, 2u, 5u}) EXPECT_EQ(rows[i].report.feas_pct, 100.0) << to_string(rows[i].method);

  bc.methods = {Method::EdaHybrid};
  EXPECT_THROW(run_benchmark(reqs, bc, cat, nullptr), CompleterError);
}

}  // namespace
}  // namespace gearsyn
