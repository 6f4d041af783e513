#include <algorithm>
#include <chrono>

#include "gearsyn/generate.hpp"
#include "gearsyn/search.hpp"

namespace gearsyn {

MctsTree::MctsTree(CandidateEvaluator evaluate, const Requirements& req, const SearchConfig& config,
                   const Catalogue& cat, Completer* completer)
    : evaluate_(std::move(evaluate)),
      req_(req),
      config_(config),
      cat_(&cat),
      completer_(completer),
      rng_(derive_seed(config.seed, 0x6d637473ULL)) {
  config_.validate();
  nodes_.push_back(Node{Token::start(), 0, 0, {}, 0.0, 0, false, false, false});
}

std::vector<Token> MctsTree::prefix_of(std::uint32_t i) const {
  std::vector<Token> out;
  for (;;) {
    out.push_back(nodes_[i].token);
    if (i == 0) break;
    i = nodes_[i].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void MctsTree::expand(std::uint32_t i) {
  auto options = next_tokens(prefix_of(i), *cat_, config_.max_components);
  for (std::size_t k = options.size(); k > 1; --k) std::swap(options[k - 1], options[rng_.index(k)]);
  const auto depth = nodes_[i].depth + 1;
  for (const auto& t : options) {
    nodes_[i].children.push_back(static_cast<std::uint32_t>(nodes_.size()));
    nodes_.push_back(Node{t, i, depth, {}, 0.0, 0, false, t.kind == TokenKind::End, false});
  }
  nodes_[i].expanded = true;
}

std::uint32_t MctsTree::select_child(std::uint32_t parent) const {
  const auto& p = nodes_[parent];
  std::uint32_t best = p.children.front();
  double best_value = -1.0;
  for (auto c : p.children) {
    const auto& n = nodes_[c];
    if (n.exhausted) continue;
    const double value = ucb(n.reward, static_cast<double>(n.visits), static_cast<double>(p.visits), config_.c);
    if (value > best_value) {
      best_value = value;
      best = c;
    }
  }
  return best;
}

bool MctsTree::iterate() {
  if (nodes_.front().exhausted) return false;
  const auto start_time = std::chrono::steady_clock::now();
  const bool hybrid = completer_ != nullptr;
  std::vector<std::uint32_t> path{0};
  std::uint32_t i = 0;
  for (;;) {
    const auto& n = nodes_[i];
    if (n.terminal) break;
    if (hybrid && n.depth >= static_cast<std::uint32_t>(config_.prefix_len)) break;
    if (!n.expanded) {
      expand(i);
      i = select_child(i);
      path.push_back(i);
      break;
    }
    i = select_child(i);
    path.push_back(i);
  }
  if (path.size() >= 2 && nodes_[path[1]].visits == 0) visit_order_.push_back(path[1]);

  const auto prefix = prefix_of(i);
  const auto stream = derive_seed(config_.seed, result_.evaluated);
  Candidate cand;
  if (nodes_[i].terminal) {
    cand.sequence.tokens = prefix;
  } else if (hybrid) {
    cand.sequence = completer_->complete(req_, prefix, stream);
  } else {
    cand.sequence = complete_random(prefix, stream, *cat_, config_.max_components);
  }
  if (!hybrid || is_valid_completion(prefix, cand.sequence, *cat_, config_.max_components)) {
    cand.fitness = evaluate_(cand.sequence);
  }
  ++result_.evaluated;

  const double reward = 1.0 / (1.0 + cand.fitness.score);
  for (auto p : path) {
    nodes_[p].visits += 1;
    nodes_[p].reward += reward;
  }
  if (nodes_[i].terminal) {
    for (auto k = path.rbegin(); k != path.rend(); ++k) {
      auto& n = nodes_[*k];
      n.exhausted = n.terminal || std::all_of(n.children.begin(), n.children.end(),
                                              [&](std::uint32_t c) { return nodes_[c].exhausted; });
      if (!n.exhausted) break;
    }
  }
  if (!result_.best || better_candidate(cand.fitness, result_.best->fitness)) result_.best = std::move(cand);
  result_.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return true;
}

void MctsTree::run(std::size_t rollouts) {
  for (std::size_t k = 0; k < rollouts && iterate(); ++k) {
  }
}

SearchResult mcts_search(const Requirements& req, const SearchConfig& config, const Catalogue& cat,
                         Completer* completer) {
  return mcts_search(fitness_evaluator(req, config.weights, cat), req, config, cat, completer);
}

SearchResult mcts_search(const CandidateEvaluator& evaluate, const Requirements& req, const SearchConfig& config,
                         const Catalogue& cat, Completer* completer) {
  MctsTree tree(evaluate, req, config, cat, completer);
  tree.run(config.budget);
  return tree.result();
}

}  // namespace gearsyn
