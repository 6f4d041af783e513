#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/completer.hpp"

namespace gearsyn {

// Completer wire protocol: newline-delimited JSON over a byte stream.
//
//   client -> {"type":"hello","protocol":1,"vocab_hash":"<16 hex>"}
//   server -> the same record, or {"type":"error","message":...} and close
//   client -> {"id":7,"type":"complete","requirements":[8 numbers],
//              "prefix":["<start>","tra+"],"seed":123}
//   server -> {"id":7,"type":"result","tokens":["<start>",...,"<end>"]}
//   client -> {"id":8,"type":"complete","requirements":[...],
//              "prefixes":[[...],[...]],"seeds":[1,2]}
//   server -> {"id":8,"type":"result","sequences":[[...],[...]]}
//
// Any protocol violation is answered with an error record (carrying the id
// when known) and the connection is closed. "seed"/"seeds" are optional.

inline constexpr int kProtocolVersion = 1;

nlohmann::json hello_record(const Catalogue& cat);

/// Line-oriented reader/writer over a pair of file descriptors (one socket
/// may serve as both). Owned descriptors are closed on destruction.
class LineChannel {
 public:
  LineChannel(int read_fd, int write_fd, bool owns);
  ~LineChannel();
  LineChannel(const LineChannel&) = delete;
  LineChannel& operator=(const LineChannel&) = delete;

  /// nullopt on end of stream.
  std::optional<std::string> read_line();
  /// Throws CompleterError(Unreachable) when the peer is gone.
  void write_line(const std::string& line);
  void close_write();

 private:
  int read_fd_;
  int write_fd_;
  bool owns_;
  bool is_socket_;
  std::string buffer_;
};

class ExternalCompleter final : public Completer {
 public:
  /// Runs `command` through /bin/sh and talks over its stdin/stdout.
  static std::unique_ptr<ExternalCompleter> spawn(const std::string& command, const Catalogue& cat);
  static std::unique_ptr<ExternalCompleter> connect(const std::string& host, int port, const Catalogue& cat);
  /// Uses an already connected channel (for example one end of a socketpair).
  ExternalCompleter(std::unique_ptr<LineChannel> channel, const Catalogue& cat, std::string name, int child = -1);
  ~ExternalCompleter() override;

  GearSequence complete(const Requirements& req, std::span<const Token> prefix, std::uint64_t stream) override;
  std::vector<GearSequence> complete_batch(const Requirements& req, std::span<const std::vector<Token>> prefixes,
                                           std::span<const std::uint64_t> streams) override;
  std::string name() const override { return name_; }

 private:
  void handshake();
  nlohmann::json round_trip(nlohmann::json request);
  GearSequence parse_sequence_json(const nlohmann::json& tokens) const;

  std::unique_ptr<LineChannel> channel_;
  const Catalogue* cat_;
  std::string name_;
  int child_;
  std::uint64_t next_id_ = 1;
};

/// Serves one connection until end of stream or a protocol violation.
/// Returns the number of completions produced.
std::size_t serve_completer(LineChannel& channel, Completer& backend, const Catalogue& cat);

class TcpListener {
 public:
  /// Port 0 picks a free port.
  explicit TcpListener(int port, const std::string& host = "127.0.0.1");
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  int port() const { return port_; }
  std::unique_ptr<LineChannel> accept();

 private:
  int fd_;
  int port_;
};

}  // namespace gearsyn
