#include "gearsyn/completer.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "gearsyn/generate.hpp"
#include "gearsyn/wire.hpp"

namespace gearsyn {

std::vector<GearSequence> Completer::complete_batch(const Requirements& req,
                                                    std::span<const std::vector<Token>> prefixes,
                                                    std::span<const std::uint64_t> streams) {
  if (prefixes.size() != streams.size()) {
    throw CompleterError(CompleterError::Kind::InvalidArgument, "one stream per prefix is required");
  }
  std::vector<GearSequence> out;
  out.reserve(prefixes.size());
  for (std::size_t i = 0; i < prefixes.size(); ++i) out.push_back(complete(req, prefixes[i], streams[i]));
  return out;
}

GearSequence RandomCompleter::complete(const Requirements&, std::span<const Token> prefix, std::uint64_t stream) {
  if (prefix.empty()) {
    const Token start[] = {Token::start()};
    return complete_random(start, stream, *cat_, max_components_);
  }
  return complete_random(prefix, stream, *cat_, max_components_);
}

std::unique_ptr<Completer> make_completer(std::string_view address, const Catalogue& cat, int max_components) {
  if (address == "random") return std::make_unique<RandomCompleter>(cat, max_components);
  if (address.starts_with("exec:")) {
    return ExternalCompleter::spawn(std::string(address.substr(5)), cat);
  }
  if (address.starts_with("tcp:")) {
    const auto rest = address.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == rest.size()) {
      throw CompleterError(CompleterError::Kind::InvalidArgument,
                           fmt::format("expected tcp:<host>:<port>, got '{}'", address));
    }
    int port = 0;
    for (char c : rest.substr(colon + 1)) {
      if (c < '0' || c > '9' || port > 65535) {
        throw CompleterError(CompleterError::Kind::InvalidArgument, fmt::format("bad port in '{}'", address));
      }
      port = port * 10 + (c - '0');
    }
    return ExternalCompleter::connect(std::string(rest.substr(0, colon)), port, cat);
  }
  throw CompleterError(CompleterError::Kind::InvalidArgument,
                       fmt::format("unknown completer '{}' (random, exec:<cmd>, tcp:<host>:<port>)", address));
}

bool is_valid_completion(std::span<const Token> prefix, const GearSequence& seq, const Catalogue& cat,
                         int max_components) {
  if (seq.tokens.size() < prefix.size()) return false;
  if (!std::equal(prefix.begin(), prefix.end(), seq.tokens.begin())) return false;
  return !validate_grammar(seq.tokens, cat, max_components);
}

}  // namespace gearsyn
