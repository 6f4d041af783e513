#include "gearsyn/grammar.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace gearsyn {

std::string_view to_string(TokenClass c) {
  switch (c) {
    case TokenClass::Start: return "start";
    case TokenClass::End: return "end";
    case TokenClass::Translate: return "translate";
    case TokenClass::Mesh: return "mesh";
    case TokenClass::Shaft: return "shaft";
    case TokenClass::Rack: return "rack";
    case TokenClass::Gear: return "gear";
  }
  return "?";
}

TokenClass classify(Token t, const Catalogue& cat) {
  switch (t.kind) {
    case TokenKind::Start: return TokenClass::Start;
    case TokenKind::End: return TokenClass::End;
    case TokenKind::Translate: return TokenClass::Translate;
    case TokenKind::Mesh: return TokenClass::Mesh;
    case TokenKind::Part: break;
  }
  const auto type = cat.part(t.part).type;
  if (type == ComponentType::Shaft) return TokenClass::Shaft;
  if (type == ComponentType::Rack) return TokenClass::Rack;
  return TokenClass::Gear;
}

std::string GrammarViolation::describe(const Catalogue& cat) const {
  std::string want;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) want += "|";
    want += to_string(expected[i]);
  }
  if (want.empty()) want = "nothing";
  const std::string got = found ? token_text(*found, cat) : std::string("end of input");
  return fmt::format("position {}: expected {}, found {}", position, want, got);
}

GrammarCursor::GrammarCursor(const Catalogue& cat, int max_components)
    : cat_(&cat), max_components_(max_components) {}

bool GrammarCursor::fits(int extra_components) const {
  return components_ + extra_components <= max_components_;
}

bool GrammarCursor::accepts(Token t) const {
  using S = State;
  const auto type_of = [&](Token tok) { return cat_->part(tok.part).type; };
  const bool is_part = t.is_part() && t.part < cat_->size();
  switch (state_) {
    case S::Begin:
      if (t.kind == TokenKind::Translate) return fits(1);
      return is_part && type_of(t) == ComponentType::Rack && fits(2);
    case S::ExpectShaft:
      return is_part && type_of(t) == ComponentType::Shaft && fits(1);
    case S::OnShaft:
      if (t.kind == TokenKind::End) return true;
      return is_part && is_gear(type_of(t)) && fits(2);
    case S::Mounted:
    case S::StartRack:
      return t.kind == TokenKind::Mesh;
    case S::MeshFromMounted:
      return is_part && cat_->mesh_compatible(last_part_, t.part) && fits(1);
    case S::MeshFromRack:
    case S::MeshFromSpur:
      return is_part && type_of(t) == ComponentType::SpurGear &&
             cat_->mesh_compatible(last_part_, t.part) && fits(1);
    case S::SpurTail:
      if (t.kind == TokenKind::End) return true;
      return (t.kind == TokenKind::Mesh || t.kind == TokenKind::Translate) && fits(1);
    case S::GearTail:
      if (t.kind == TokenKind::End) return true;
      return t.kind == TokenKind::Translate && fits(1);
    case S::RackEnd:
      return t.kind == TokenKind::End;
    case S::Done:
      return false;
  }
  return false;
}

void GrammarCursor::advance(Token t) {
  using S = State;
  ++length_;
  if (t.kind == TokenKind::End) {
    state_ = S::Done;
    return;
  }
  if (t.is_part()) {
    ++components_;
    last_part_ = t.part;
  }
  const auto type = t.is_part() ? cat_->part(t.part).type : ComponentType::Shaft;
  switch (state_) {
    case S::Begin:
      state_ = t.kind == TokenKind::Translate ? S::ExpectShaft : S::StartRack;
      break;
    case S::ExpectShaft:
      state_ = S::OnShaft;
      break;
    case S::OnShaft:
      state_ = S::Mounted;
      break;
    case S::Mounted:
      state_ = S::MeshFromMounted;
      break;
    case S::StartRack:
      state_ = S::MeshFromRack;
      break;
    case S::MeshFromMounted:
      state_ = type == ComponentType::Rack       ? S::RackEnd
               : type == ComponentType::SpurGear ? S::SpurTail
                                                 : S::GearTail;
      break;
    case S::MeshFromRack:
    case S::MeshFromSpur:
      state_ = S::SpurTail;
      break;
    case S::SpurTail:
      state_ = t.kind == TokenKind::Mesh ? S::MeshFromSpur : S::ExpectShaft;
      break;
    case S::GearTail:
      state_ = S::ExpectShaft;
      break;
    case S::RackEnd:
    case S::Done:
      break;
  }
}

std::vector<Token> GrammarCursor::allowed() const {
  std::vector<Token> out;
  if (state_ == State::Done) return out;
  for (const auto& t : fixed_tokens()) {
    if (accepts(t)) out.push_back(t);
  }
  for (std::size_t i = 0; i < cat_->size(); ++i) {
    const auto t = Token::of_part(static_cast<PartIndex>(i));
    if (accepts(t)) out.push_back(t);
  }
  return out;
}

std::optional<GrammarCursor> cursor_after(std::span<const Token> prefix, const Catalogue& cat,
                                          int max_components) {
  if (prefix.empty() || prefix.front().kind != TokenKind::Start) return std::nullopt;
  GrammarCursor cursor(cat, max_components);
  for (std::size_t i = 1; i < prefix.size(); ++i) {
    if (!cursor.accepts(prefix[i])) return std::nullopt;
    cursor.advance(prefix[i]);
  }
  return cursor;
}

std::optional<GrammarViolation> validate_grammar(std::span<const Token> tokens, const Catalogue& cat,
                                                 int max_components) {
  const auto expected_of = [&](const GrammarCursor& c) {
    std::vector<TokenClass> classes;
    for (const auto& t : c.allowed()) {
      const auto cls = classify(t, cat);
      if (std::find(classes.begin(), classes.end(), cls) == classes.end()) classes.push_back(cls);
    }
    return classes;
  };
  if (tokens.empty()) return GrammarViolation{0, {TokenClass::Start}, std::nullopt};
  if (tokens.front().kind != TokenKind::Start) {
    return GrammarViolation{0, {TokenClass::Start}, tokens.front()};
  }
  GrammarCursor cursor(cat, max_components);
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (!cursor.accepts(tokens[i])) return GrammarViolation{i, expected_of(cursor), tokens[i]};
    cursor.advance(tokens[i]);
  }
  if (!cursor.complete()) return GrammarViolation{tokens.size(), expected_of(cursor), std::nullopt};
  return std::nullopt;
}

std::vector<Token> next_tokens(std::span<const Token> prefix, const Catalogue& cat, int max_components) {
  if (prefix.empty()) return {Token::start()};
  const auto cursor = cursor_after(prefix, cat, max_components);
  if (!cursor) throw DeadEndError("prefix is not derivable from the grammar");
  if (cursor->complete()) throw DeadEndError("prefix is already a closed sentence");
  return cursor->allowed();
}

}  // namespace gearsyn
