#include "gearsyn/token.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>

namespace gearsyn {
namespace {

constexpr std::array<std::pair<Token, std::string_view>, 8> kFixed = {{
    {Token::start(), "<start>"},
    {Token::end(), "<end>"},
    {Token::translate(+1), "tra+"},
    {Token::translate(-1), "tra-"},
    {Token::mesh(1, +1), "mesh_1p"},
    {Token::mesh(1, -1), "mesh_1n"},
    {Token::mesh(2, +1), "mesh_2p"},
    {Token::mesh(2, -1), "mesh_2n"},
}};

constexpr std::array<Token, 8> kFixedTokens = {
    kFixed[0].first, kFixed[1].first, kFixed[2].first, kFixed[3].first,
    kFixed[4].first, kFixed[5].first, kFixed[6].first, kFixed[7].first,
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

std::size_t GearSequence::component_count() const {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return t.is_part(); }));
}

std::span<const Token> fixed_tokens() { return kFixedTokens; }

std::vector<Token> lexicon(const Catalogue& cat) {
  std::vector<Token> out;
  out.reserve(kFixed.size() + cat.size());
  for (const auto& [tok, _] : kFixed) out.push_back(tok);
  for (std::size_t i = 0; i < cat.size(); ++i) out.push_back(Token::of_part(static_cast<PartIndex>(i)));
  return out;
}

std::size_t vocabulary_size(const Catalogue& cat) { return kFixed.size() + cat.size() + 1; }

std::size_t token_id(Token t, const Catalogue& cat) {
  if (t.is_part()) {
    if (t.part >= cat.size()) throw std::out_of_range("part index outside catalogue");
    return kFixed.size() + t.part;
  }
  for (std::size_t i = 0; i < kFixed.size(); ++i) {
    if (kFixed[i].first == t) return i;
  }
  throw std::invalid_argument("malformed token");
}

Token token_from_id(std::size_t id, const Catalogue& cat) {
  if (id < kFixed.size()) return kFixed[id].first;
  if (id < kFixed.size() + cat.size()) return Token::of_part(static_cast<PartIndex>(id - kFixed.size()));
  throw std::out_of_range(fmt::format("token id {} has no lexicon token", id));
}

std::string token_text(Token t, const Catalogue& cat) {
  if (t.is_part()) return cat.part(t.part).part_number;
  for (const auto& [tok, text] : kFixed) {
    if (tok == t) return std::string(text);
  }
  throw std::invalid_argument("malformed token");
}

Token parse_token(std::string_view text, const Catalogue& cat) {
  for (const auto& [tok, name] : kFixed) {
    if (name == text) return tok;
  }
  if (auto idx = cat.find(text)) return Token::of_part(*idx);
  throw ParseError(0, std::string(text), fmt::format("unknown token '{}'", text));
}

std::vector<Token> parse_tokens(std::string_view line, const Catalogue& cat) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    const auto word = line.substr(i, j - i);
    try {
      out.push_back(parse_token(word, cat));
    } catch (const ParseError&) {
      throw ParseError(out.size(), std::string(word),
                       fmt::format("unknown token '{}' at position {}", word, out.size()));
    }
    i = j;
  }
  return out;
}

GearSequence parse_sequence(std::string_view line, const Catalogue& cat) {
  return GearSequence{parse_tokens(line, cat)};
}

std::string format_tokens(std::span<const Token> tokens, const Catalogue& cat) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += token_text(tokens[i], cat);
  }
  return out;
}

std::string format_sequence(const GearSequence& seq, const Catalogue& cat) {
  return format_tokens(seq.tokens, cat);
}

std::string vocabulary_text(const Catalogue& cat) {
  std::string out;
  const auto tokens = lexicon(cat);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out += fmt::format("{}\t{}\n", i, token_text(tokens[i], cat));
  }
  out += fmt::format("{}\t{}\n", tokens.size(), kEosText);
  return out;
}

std::string vocabulary_hash(const Catalogue& cat) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : vocabulary_text(cat)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace gearsyn
