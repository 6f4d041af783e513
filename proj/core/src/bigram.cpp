#include "gearsyn/bigram.hpp"

#include <deque>
#include <set>
#include <stdexcept>
#include <tuple>

namespace gearsyn {

BigramModel::BigramModel(const Catalogue& cat, int max_components)
    : cat_(&cat), max_components_(max_components), n_(lexicon(cat).size()) {
  allowed_.assign(n_ * n_, 0);
  prob_.assign(n_ * n_, 0.0);

  // Walk every reachable cursor together with the token that entered it.
  using Key = std::tuple<int, int, int, std::size_t>;
  std::set<Key> seen;
  std::deque<std::pair<GrammarCursor, std::size_t>> queue;
  queue.emplace_back(GrammarCursor(cat, max_components), id(Token::start()));
  while (!queue.empty()) {
    auto [cursor, prev] = queue.front();
    queue.pop_front();
    const Key key{static_cast<int>(cursor.state()), cursor.components(), cursor.last_part(), prev};
    if (!seen.insert(key).second) continue;
    for (const auto& t : cursor.allowed()) {
      const auto next = id(t);
      allowed_[prev * n_ + next] = 1;
      GrammarCursor after = cursor;
      after.advance(t);
      if (!after.complete()) queue.emplace_back(after, next);
    }
  }
  refit({}, 1.0);
}

bool BigramModel::allowed(Token prev, Token next) const { return allowed_[id(prev) * n_ + id(next)] != 0; }

double BigramModel::probability(Token prev, Token next) const { return prob_[id(prev) * n_ + id(next)]; }

std::vector<Token> BigramModel::successors(Token prev) const {
  std::vector<Token> out;
  const auto row = id(prev) * n_;
  for (std::size_t j = 0; j < n_; ++j) {
    if (allowed_[row + j]) out.push_back(token_from_id(j, *cat_));
  }
  return out;
}

std::vector<Token> BigramModel::sample(Rng& rng) const {
  const Token start[] = {Token::start()};
  return sample(rng, start);
}

std::vector<Token> BigramModel::sample(Rng& rng, std::span<const Token> prefix, std::size_t max_new) const {
  auto cursor = cursor_after(prefix, *cat_, max_components_);
  if (!cursor) throw DeadEndError("prefix is not derivable from the grammar");
  std::vector<Token> out(prefix.begin(), prefix.end());
  std::vector<double> weights;
  for (std::size_t added = 0; added < max_new && !cursor->complete(); ++added) {
    const auto options = cursor->allowed();
    const auto row = id(out.back()) * n_;
    weights.resize(options.size());
    double total = 0.0;
    for (std::size_t k = 0; k < options.size(); ++k) {
      weights[k] = prob_[row + id(options[k])];
      total += weights[k];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      pick = options.size() - 1;
      for (std::size_t k = 0; k < options.size(); ++k) {
        if (u < weights[k]) {
          pick = k;
          break;
        }
        u -= weights[k];
      }
      while (weights[pick] == 0.0) --pick;
    } else {
      pick = rng.index(options.size());
    }
    cursor->advance(options[pick]);
    out.push_back(options[pick]);
  }
  return out;
}

void BigramModel::refit(std::span<const std::vector<Token>> elite, double smoothing) {
  if (!(smoothing >= 0.0)) throw std::invalid_argument("smoothing must be non-negative");
  std::vector<double> counts(n_ * n_, 0.0);
  for (const auto& seq : elite) {
    for (std::size_t i = 1; i < seq.size(); ++i) {
      const auto cell = id(seq[i - 1]) * n_ + id(seq[i]);
      if (allowed_[cell]) counts[cell] += 1.0;
    }
  }
  for (std::size_t r = 0; r < n_; ++r) {
    double total = 0.0;
    std::size_t width = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!allowed_[r * n_ + j]) continue;
      total += counts[r * n_ + j];
      ++width;
    }
    if (width == 0) continue;
    const double denom = total + smoothing * static_cast<double>(width);
    for (std::size_t j = 0; j < n_; ++j) {
      const auto cell = r * n_ + j;
      if (!allowed_[cell]) continue;
      prob_[cell] = denom > 0.0 ? (counts[cell] + smoothing) / denom : 1.0 / static_cast<double>(width);
    }
  }
}

}  // namespace gearsyn
