#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/token.hpp"

namespace gearsyn {

inline constexpr int kMaxComponents = 10;
inline constexpr int kMaxTokens = 21;

/// Coarse token classes used to report what a parser position expected.
enum class TokenClass : std::uint8_t { Start, End, Translate, Mesh, Shaft, Rack, Gear };
std::string_view to_string(TokenClass c);
TokenClass classify(Token t, const Catalogue& cat);

struct GrammarViolation {
  std::size_t position = 0;
  std::vector<TokenClass> expected;
  /// Empty when the sequence stopped before reaching <end>.
  std::optional<Token> found;

  std::string describe(const Catalogue& cat) const;
};

class DeadEndError : public Error {
 public:
  using Error::Error;
};

/// Incremental recogniser for the gear-train grammar:
///
///   start -> Translate Shaft | Rack Mesh Spur
///   Shaft -> Gear Mesh Gear | Spur Mesh Rack | end
///   Spur  -> Mesh Spur | Translate Shaft | end
///   Rack  -> end
///   Gear  -> Translate Shaft | end
///
/// Every Mesh joins catalogue mesh partners. A token is accepted only if
/// the sentence can still be closed within the component limit, so the
/// accepted set never leads into a dead end.
class GrammarCursor {
 public:
  enum class State : std::uint8_t {
    Begin,           // after <start>
    ExpectShaft,     // after a translate token
    OnShaft,         // after a shaft
    Mounted,         // gear mounted on a shaft, must mesh
    MeshFromMounted, // mesh after a mounted gear
    StartRack,       // rack at sentence head, must mesh
    MeshFromRack,    // mesh after the head rack, expects a spur
    SpurTail,        // spur gear that may continue
    MeshFromSpur,    // mesh after a tail spur, expects a spur
    GearTail,        // non-spur gear that may continue
    RackEnd,         // rack at sentence end
    Done,            // <end> consumed
  };

  explicit GrammarCursor(const Catalogue& cat, int max_components = kMaxComponents);

  bool accepts(Token t) const;
  /// Precondition: accepts(t).
  void advance(Token t);
  /// All accepted tokens, in lexicon order.
  std::vector<Token> allowed() const;

  bool complete() const { return state_ == State::Done; }
  State state() const { return state_; }
  int components() const { return components_; }
  int max_components() const { return max_components_; }
  std::size_t length() const { return length_; }
  /// Part held by the current component (meaningful once a part was read).
  PartIndex last_part() const { return last_part_; }

  friend bool operator==(const GrammarCursor& a, const GrammarCursor& b) {
    return a.state_ == b.state_ && a.components_ == b.components_ &&
           a.last_part_ == b.last_part_ && a.max_components_ == b.max_components_;
  }

 private:
  bool fits(int extra_components) const;

  const Catalogue* cat_;
  int max_components_;
  State state_ = State::Begin;
  int components_ = 0;
  std::size_t length_ = 1;
  PartIndex last_part_ = 0;
};

/// nullopt means the sequence derives from the grammar (g_grammar = 0).
std::optional<GrammarViolation> validate_grammar(std::span<const Token> tokens, const Catalogue& cat,
                                                 int max_components = kMaxComponents);
inline std::optional<GrammarViolation> validate_grammar(const GearSequence& seq, const Catalogue& cat) {
  return validate_grammar(seq.tokens, cat);
}

/// Tokens that keep `prefix` extendable to a valid sentence. Throws
/// DeadEndError when the prefix is invalid or already closed.
std::vector<Token> next_tokens(std::span<const Token> prefix, const Catalogue& cat,
                               int max_components = kMaxComponents);

/// Cursor positioned after `prefix`, or nullopt if the prefix is rejected.
std::optional<GrammarCursor> cursor_after(std::span<const Token> prefix, const Catalogue& cat,
                                          int max_components = kMaxComponents);

}  // namespace gearsyn
