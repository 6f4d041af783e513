#include "gearsyn/generate.hpp"

#include <array>
#include <optional>

namespace gearsyn {

GearSequence complete_random(std::span<const Token> prefix, Rng& rng, const Catalogue& cat,
                             int max_components) {
  auto cursor = cursor_after(prefix, cat, max_components);
  if (!cursor) throw DeadEndError("prefix is not derivable from the grammar");
  GearSequence seq{std::vector<Token>(prefix.begin(), prefix.end())};
  while (!cursor->complete()) {
    const auto options = cursor->allowed();
    const Token pick = options[rng.index(options.size())];
    cursor->advance(pick);
    seq.tokens.push_back(pick);
  }
  return seq;
}

GearSequence complete_random(std::span<const Token> prefix, std::uint64_t seed, const Catalogue& cat,
                             int max_components) {
  Rng rng(seed);
  return complete_random(prefix, rng, cat, max_components);
}

GearSequence random_valid_sequence(std::uint64_t seed, int max_components, const Catalogue& cat) {
  if (max_components < 1 || max_components > kMaxComponents) {
    throw std::invalid_argument("max_components must lie in [1, 10]");
  }
  const std::array<Token, 1> start{Token::start()};
  return complete_random(start, seed, cat, max_components);
}

std::string_view to_string(Variable v) {
  switch (v) {
    case Variable::Start: return "<start>";
    case Variable::End: return "<end>";
    case Variable::Shaft: return "Shaft";
    case Variable::Rack: return "Rack";
    case Variable::SpurGear: return "SpurGear";
    case Variable::BevelGear: return "BevelGear";
    case Variable::MiterGear: return "MiterGear";
    case Variable::WormGear: return "WormGear";
    case Variable::HypoidGear: return "HypoidGear";
    case Variable::Translate: return "Translate";
    case Variable::Mesh: return "Mesh";
  }
  return "?";
}

namespace {

constexpr std::array<Variable, 5> kGearFamilies = {Variable::SpurGear, Variable::BevelGear,
                                                   Variable::MiterGear, Variable::WormGear,
                                                   Variable::HypoidGear};

enum class VarState { Begin, OnShaft, SpurTail, GearTail, RackEnd };

struct VariableEnumerator {
  int max_components;
  const std::function<void(std::span<const Variable>)>& sink;
  std::vector<Variable> seq;
  std::size_t count = 0;

  void emit() {
    seq.push_back(Variable::End);
    sink(seq);
    seq.pop_back();
    ++count;
  }

  template <typename... Vs>
  void step(VarState next, int components, Vs... vars) {
    const std::size_t mark = seq.size();
    (seq.push_back(vars), ...);
    walk(next, components);
    seq.resize(mark);
  }

  void walk(VarState state, int n) {
    const int room = max_components - n;
    switch (state) {
      case VarState::Begin:
        if (room >= 1) step(VarState::OnShaft, n + 1, Variable::Translate, Variable::Shaft);
        if (room >= 2) step(VarState::SpurTail, n + 2, Variable::Rack, Variable::Mesh, Variable::SpurGear);
        return;
      case VarState::OnShaft:
        emit();
        if (room >= 2) {
          for (auto g : kGearFamilies) {
            step(g == Variable::SpurGear ? VarState::SpurTail : VarState::GearTail, n + 2, g, Variable::Mesh, g);
          }
          step(VarState::RackEnd, n + 2, Variable::SpurGear, Variable::Mesh, Variable::Rack);
        }
        return;
      case VarState::SpurTail:
        emit();
        if (room >= 1) {
          step(VarState::SpurTail, n + 1, Variable::Mesh, Variable::SpurGear);
          step(VarState::OnShaft, n + 1, Variable::Translate, Variable::Shaft);
        }
        return;
      case VarState::GearTail:
        emit();
        if (room >= 1) step(VarState::OnShaft, n + 1, Variable::Translate, Variable::Shaft);
        return;
      case VarState::RackEnd:
        emit();
        return;
    }
  }
};

}  // namespace

std::size_t enumerate_variable_sequences(int max_components,
                                         const std::function<void(std::span<const Variable>)>& sink) {
  if (max_components < 0 || max_components > kMaxComponents) {
    throw std::invalid_argument("max_components must lie in [0, 10]");
  }
  VariableEnumerator e{max_components, sink, {Variable::Start}};
  e.walk(VarState::Begin, 0);
  return e.count;
}

namespace {

bool in_family(Variable v, ComponentType t) {
  using T = ComponentType;
  switch (v) {
    case Variable::SpurGear: return t == T::SpurGear;
    case Variable::BevelGear: return t == T::BevelGear;
    case Variable::MiterGear: return t == T::MiterGear;
    case Variable::WormGear: return t == T::Worm || t == T::WormWheel;
    case Variable::HypoidGear: return t == T::HypoidPinion || t == T::HypoidRing;
    default: return false;
  }
}

}  // namespace

VariableSequenceSampler::VariableSequenceSampler(const Catalogue& cat, int max_components)
    : cat_(&cat), family_(static_cast<std::size_t>(Variable::Mesh) + 1) {
  enumerate_variable_sequences(max_components, [&](std::span<const Variable> vars) {
    sequences_.emplace_back(vars.begin(), vars.end());
  });
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto idx = static_cast<PartIndex>(i);
    const auto type = cat.part(idx).type;
    if (type == ComponentType::Shaft) shafts_.push_back(idx);
    if (type == ComponentType::Rack) racks_.push_back(idx);
    for (auto v : kGearFamilies) {
      if (in_family(v, type)) family_[static_cast<std::size_t>(v)].push_back(idx);
    }
  }
}

GearSequence VariableSequenceSampler::sample(std::uint64_t seed) const {
  Rng rng(seed);
  return sample(rng);
}

GearSequence VariableSequenceSampler::sample(Rng& rng) const {
  return realise(sequences_[rng.index(sequences_.size())], rng);
}

GearSequence VariableSequenceSampler::realise(std::span<const Variable> vars, Rng& rng) const {
  GearSequence seq;
  seq.tokens.reserve(vars.size());
  std::optional<PartIndex> previous;
  bool after_mesh = false;
  std::vector<PartIndex> options;
  for (const auto v : vars) {
    switch (v) {
      case Variable::Start:
        seq.tokens.push_back(Token::start());
        continue;
      case Variable::End:
        seq.tokens.push_back(Token::end());
        continue;
      case Variable::Translate:
        seq.tokens.push_back(Token::translate(rng.index(2) == 0 ? +1 : -1));
        continue;
      case Variable::Mesh: {
        const auto pick = rng.index(4);
        seq.tokens.push_back(Token::mesh(1 + static_cast<int>(pick / 2), pick % 2 == 0 ? +1 : -1));
        after_mesh = true;
        continue;
      }
      default:
        break;
    }
    const auto& pool = v == Variable::Shaft  ? shafts_
                       : v == Variable::Rack ? racks_
                                             : family_[static_cast<std::size_t>(v)];
    options.clear();
    for (auto idx : pool) {
      if (!after_mesh || (previous && cat_->mesh_compatible(*previous, idx))) options.push_back(idx);
    }
    if (options.empty()) throw DeadEndError("no catalogue part realises the variable sequence");
    const PartIndex part = options[rng.index(options.size())];
    seq.tokens.push_back(Token::of_part(part));
    previous = part;
    after_mesh = false;
  }
  return seq;
}

}  // namespace gearsyn
