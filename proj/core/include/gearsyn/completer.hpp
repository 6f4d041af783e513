#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/dataset.hpp"
#include "gearsyn/error.hpp"
#include "gearsyn/grammar.hpp"
#include "gearsyn/token.hpp"

namespace gearsyn {

class CompleterError : public Error {
 public:
  enum class Kind { Unreachable, Protocol, VocabularyMismatch, InvalidArgument };
  CompleterError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Finishes a token prefix into a full sentence conditioned on the
/// requirements. Implementations should return a valid sentence that
/// begins with the prefix; callers score anything else as invalid.
/// `stream` seeds any randomness so results are reproducible.
class Completer {
 public:
  virtual ~Completer() = default;

  virtual GearSequence complete(const Requirements& req, std::span<const Token> prefix,
                                std::uint64_t stream) = 0;
  /// One completion per prefix, in order. The default calls complete().
  virtual std::vector<GearSequence> complete_batch(const Requirements& req,
                                                   std::span<const std::vector<Token>> prefixes,
                                                   std::span<const std::uint64_t> streams);
  virtual std::string name() const = 0;
};

/// Uniform grammar-constrained completion.
class RandomCompleter final : public Completer {
 public:
  explicit RandomCompleter(const Catalogue& cat, int max_components = kMaxComponents)
      : cat_(&cat), max_components_(max_components) {}

  GearSequence complete(const Requirements& req, std::span<const Token> prefix, std::uint64_t stream) override;
  std::string name() const override { return "random"; }

 private:
  const Catalogue* cat_;
  int max_components_;
};

/// "random", "exec:<shell command>" or "tcp:<host>:<port>".
std::unique_ptr<Completer> make_completer(std::string_view address, const Catalogue& cat,
                                          int max_components = kMaxComponents);

/// True when `seq` is a valid sentence that starts with `prefix`.
bool is_valid_completion(std::span<const Token> prefix, const GearSequence& seq, const Catalogue& cat,
                         int max_components = kMaxComponents);

}  // namespace gearsyn
