#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/grammar.hpp"
#include "gearsyn/rng.hpp"
#include "gearsyn/token.hpp"

namespace gearsyn {

/// Grammar-constrained sentence: at every position one of the accepted
/// tokens is drawn uniformly. Identical seeds give identical sentences.
GearSequence random_valid_sequence(std::uint64_t seed, int max_components, const Catalogue& cat);

/// Continues a valid prefix with uniform random choices. A closed prefix is
/// returned unchanged; an invalid prefix throws DeadEndError.
GearSequence complete_random(std::span<const Token> prefix, std::uint64_t seed, const Catalogue& cat,
                             int max_components = kMaxComponents);

/// Same as complete_random but drawing from a caller-owned generator.
GearSequence complete_random(std::span<const Token> prefix, Rng& rng, const Catalogue& cat,
                             int max_components = kMaxComponents);

/// Component-type alphabet of variable sequences. Worm and Hypoid each name
/// a gear family (worm/wheel, pinion/ring).
enum class Variable : std::uint8_t {
  Start,
  End,
  Shaft,
  Rack,
  SpurGear,
  BevelGear,
  MiterGear,
  WormGear,
  HypoidGear,
  Translate,
  Mesh,
};
std::string_view to_string(Variable v);

/// Exhaustive, duplicate-free enumeration of variable sequences with at most
/// `max_components` components. A Gear-Mesh-Gear step joins two members of
/// the same gear family. Returns the number of sequences passed to `sink`.
std::size_t enumerate_variable_sequences(int max_components,
                                         const std::function<void(std::span<const Variable>)>& sink);

/// Two-stage sampler: draws a variable sequence uniformly from the
/// enumeration, then fills every variable with a uniformly chosen part
/// (meshed parts restricted to catalogue partners) and every interface
/// with a uniformly chosen translate or mesh token.
class VariableSequenceSampler {
 public:
  VariableSequenceSampler(const Catalogue& cat, int max_components = kMaxComponents);

  std::size_t size() const { return sequences_.size(); }
  std::span<const Variable> variables(std::size_t i) const { return sequences_.at(i); }

  GearSequence sample(std::uint64_t seed) const;
  GearSequence sample(Rng& rng) const;
  /// Fills a given variable sequence with tokens.
  GearSequence realise(std::span<const Variable> vars, Rng& rng) const;

 private:
  const Catalogue* cat_;
  std::vector<std::vector<Variable>> sequences_;
  std::vector<PartIndex> shafts_;
  std::vector<PartIndex> racks_;
  std::vector<std::vector<PartIndex>> family_;  // indexed by Variable
};

}  // namespace gearsyn
