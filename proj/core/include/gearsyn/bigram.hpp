#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/grammar.hpp"
#include "gearsyn/rng.hpp"
#include "gearsyn/token.hpp"

namespace gearsyn {

/// First-order token model P(x_i | x_(i-1)) over the lexicon, restricted to
/// transitions the grammar can produce. Starts uniform over each row.
class BigramModel {
 public:
  explicit BigramModel(const Catalogue& cat, int max_components = kMaxComponents);

  std::size_t size() const { return n_; }
  bool allowed(Token prev, Token next) const;
  double probability(Token prev, Token next) const;
  /// Successors of `prev` with nonzero allowance, in lexicon order.
  std::vector<Token> successors(Token prev) const;

  /// Draws tokens after `prefix` (which must begin with <start>) until the
  /// sentence closes or `max_new` tokens were added. Each step is masked to
  /// the tokens the grammar accepts and renormalised; a row with no mass on
  /// the accepted set falls back to uniform.
  std::vector<Token> sample(Rng& rng, std::span<const Token> prefix,
                            std::size_t max_new = std::numeric_limits<std::size_t>::max()) const;
  std::vector<Token> sample(Rng& rng) const;

  /// P = (count + smoothing) / (row count + smoothing * |successors|) on
  /// allowed transitions. Rows without counts and zero smoothing stay
  /// uniform.
  void refit(std::span<const std::vector<Token>> elite, double smoothing);

 private:
  std::size_t id(Token t) const { return token_id(t, *cat_); }

  const Catalogue* cat_;
  int max_components_;
  std::size_t n_;
  std::vector<char> allowed_;
  std::vector<double> prob_;
};

}  // namespace gearsyn
