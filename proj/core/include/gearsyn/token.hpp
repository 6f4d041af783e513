#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/error.hpp"

namespace gearsyn {

enum class TokenKind : std::uint8_t { Start, End, Part, Translate, Mesh };

/// One symbol of a gear-train sentence. Part tokens refer to a catalogue
/// index, so a token is only meaningful together with its catalogue.
struct Token {
  TokenKind kind = TokenKind::Start;
  std::int8_t sign = 0;     // Translate and Mesh: +1 or -1
  std::uint8_t perp = 0;    // Mesh: 1 or 2
  PartIndex part = 0;       // Part

  static constexpr Token start() { return {TokenKind::Start, 0, 0, 0}; }
  static constexpr Token end() { return {TokenKind::End, 0, 0, 0}; }
  static constexpr Token translate(int sign) {
    return {TokenKind::Translate, static_cast<std::int8_t>(sign < 0 ? -1 : 1), 0, 0};
  }
  static constexpr Token mesh(int perp, int sign) {
    return {TokenKind::Mesh, static_cast<std::int8_t>(sign < 0 ? -1 : 1),
            static_cast<std::uint8_t>(perp), 0};
  }
  static constexpr Token of_part(PartIndex p) { return {TokenKind::Part, 0, 0, p}; }

  constexpr bool is_part() const { return kind == TokenKind::Part; }

  friend constexpr bool operator==(const Token&, const Token&) = default;
  friend constexpr auto operator<=>(const Token&, const Token&) = default;
};

/// A candidate design: the full token list including <start> and <end>.
struct GearSequence {
  std::vector<Token> tokens;

  std::size_t component_count() const;
  friend bool operator==(const GearSequence&, const GearSequence&) = default;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string text, const std::string& what)
      : Error(what), position_(position), text_(std::move(text)) {}
  std::size_t position() const { return position_; }
  const std::string& text() const { return text_; }

 private:
  std::size_t position_;
  std::string text_;
};

/// <start>, <end> and the six interface tokens, in id order.
std::span<const Token> fixed_tokens();

/// Lexicon in id order: <start>, <end>, the six interface tokens, then the
/// catalogue parts. 52 tokens for the standard catalogue.
std::vector<Token> lexicon(const Catalogue& cat);

/// Number of model vocabulary ids: the lexicon plus a trailing <eos>.
std::size_t vocabulary_size(const Catalogue& cat);
inline constexpr std::string_view kEosText = "<eos>";

std::size_t token_id(Token t, const Catalogue& cat);
Token token_from_id(std::size_t id, const Catalogue& cat);

std::string token_text(Token t, const Catalogue& cat);
/// Throws ParseError (position 0) on unknown text.
Token parse_token(std::string_view text, const Catalogue& cat);

/// Whitespace-separated tokens; throws ParseError naming the token index.
std::vector<Token> parse_tokens(std::string_view line, const Catalogue& cat);
GearSequence parse_sequence(std::string_view line, const Catalogue& cat);
std::string format_tokens(std::span<const Token> tokens, const Catalogue& cat);
std::string format_sequence(const GearSequence& seq, const Catalogue& cat);

/// "id<TAB>token" lines for all vocabulary ids.
std::string vocabulary_text(const Catalogue& cat);
/// FNV-1a 64-bit hash of vocabulary_text, as 16 lowercase hex digits.
std::string vocabulary_hash(const Catalogue& cat);

}  // namespace gearsyn
