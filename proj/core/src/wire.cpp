#include "gearsyn/wire.hpp"

#include <fmt/format.h>

#include <arpa/inet.h>
#include <csignal>
#include <fcntl.h>
#include <cerrno>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <map>

namespace gearsyn {
namespace {

using json = nlohmann::json;

CompleterError protocol_error(const std::string& what) {
  return CompleterError(CompleterError::Kind::Protocol, what);
}

json token_list(std::span<const Token> tokens, const Catalogue& cat) {
  json out = json::array();
  for (const auto& t : tokens) out.push_back(token_text(t, cat));
  return out;
}

std::vector<Token> parse_token_list(const json& j, const Catalogue& cat) {
  if (!j.is_array()) throw protocol_error("token list must be an array");
  std::vector<Token> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    if (!item.is_string()) throw protocol_error("tokens must be strings");
    try {
      out.push_back(parse_token(item.get<std::string>(), cat));
    } catch (const ParseError& e) {
      throw protocol_error(e.what());
    }
  }
  return out;
}

json requirements_json(const Requirements& req) {
  json out = json::array();
  for (double v : req.flatten()) out.push_back(v);
  return out;
}

Requirements parse_requirements_json(const json& j) {
  if (!j.is_array()) throw protocol_error("requirements must be an array");
  std::vector<double> values;
  for (const auto& v : j) {
    if (!v.is_number()) throw protocol_error("requirements must be numbers");
    values.push_back(v.get<double>());
  }
  try {
    return Requirements::from_flat(values);
  } catch (const std::invalid_argument& e) {
    throw protocol_error(e.what());
  }
}

bool fd_is_socket(int fd) {
  struct stat st {};
  return fstat(fd, &st) == 0 && S_ISSOCK(st.st_mode);
}

}  // namespace

json hello_record(const Catalogue& cat) {
  return json{{"type", "hello"}, {"protocol", kProtocolVersion}, {"vocab_hash", vocabulary_hash(cat)}};
}

LineChannel::LineChannel(int read_fd, int write_fd, bool owns)
    : read_fd_(read_fd), write_fd_(write_fd), owns_(owns), is_socket_(fd_is_socket(write_fd)) {}

LineChannel::~LineChannel() {
  if (!owns_) return;
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
}

std::optional<std::string> LineChannel::read_line() {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    char chunk[4096];
    const auto n = ::read(read_fd_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      if (buffer_.empty()) return std::nullopt;
      std::string rest;
      rest.swap(buffer_);
      return rest;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void LineChannel::write_line(const std::string& line) {
  std::string data = line;
  data.push_back('\n');
  std::size_t done = 0;
  while (done < data.size()) {
    const auto n = is_socket_ ? ::send(write_fd_, data.data() + done, data.size() - done, MSG_NOSIGNAL)
                              : ::write(write_fd_, data.data() + done, data.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      throw CompleterError(CompleterError::Kind::Unreachable,
                           fmt::format("completer connection lost: {}", std::strerror(errno)));
    }
    done += static_cast<std::size_t>(n);
  }
}

void LineChannel::close_write() {
  if (write_fd_ < 0) return;
  if (write_fd_ == read_fd_) {
    ::shutdown(write_fd_, SHUT_WR);
  } else {
    ::close(write_fd_);
    write_fd_ = -1;
  }
}

std::unique_ptr<ExternalCompleter> ExternalCompleter::spawn(const std::string& command, const Catalogue& cat) {
  int to_child[2];
  int from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) {
    throw CompleterError(CompleterError::Kind::Unreachable, "pipe failed");
  }
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw CompleterError(CompleterError::Kind::Unreachable, "pipe failed");
  }
  std::signal(SIGPIPE, SIG_IGN);
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw CompleterError(CompleterError::Kind::Unreachable, "fork failed");
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  auto channel = std::make_unique<LineChannel>(from_child[0], to_child[1], true);
  return std::make_unique<ExternalCompleter>(std::move(channel), cat, "exec:" + command, pid);
}

std::unique_ptr<ExternalCompleter> ExternalCompleter::connect(const std::string& host, int port, const Catalogue& cat) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  const auto service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &found) != 0 || found == nullptr) {
    throw CompleterError(CompleterError::Kind::Unreachable, fmt::format("cannot resolve {}:{}", host, port));
  }
  int fd = -1;
  for (auto* ai = found; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  if (fd < 0) {
    throw CompleterError(CompleterError::Kind::Unreachable, fmt::format("cannot connect to {}:{}", host, port));
  }
  auto channel = std::make_unique<LineChannel>(fd, fd, true);
  return std::make_unique<ExternalCompleter>(std::move(channel), cat, fmt::format("tcp:{}:{}", host, port));
}

ExternalCompleter::ExternalCompleter(std::unique_ptr<LineChannel> channel, const Catalogue& cat, std::string name,
                                     int child)
    : channel_(std::move(channel)), cat_(&cat), name_(std::move(name)), child_(child) {
  try {
    handshake();
  } catch (...) {
    channel_.reset();
    if (child_ > 0) ::waitpid(child_, nullptr, 0);
    throw;
  }
}

ExternalCompleter::~ExternalCompleter() {
  if (channel_) channel_->close_write();
  channel_.reset();
  if (child_ > 0) ::waitpid(child_, nullptr, 0);
}

void ExternalCompleter::handshake() {
  const auto hello = hello_record(*cat_);
  channel_->write_line(hello.dump());
  const auto line = channel_->read_line();
  if (!line) throw CompleterError(CompleterError::Kind::Unreachable, name_ + ": no handshake reply");
  json reply;
  try {
    reply = json::parse(*line);
  } catch (const json::exception&) {
    throw protocol_error(name_ + ": handshake reply is not JSON");
  }
  if (reply.value("type", "") == "error") {
    throw CompleterError(CompleterError::Kind::VocabularyMismatch,
                         fmt::format("{}: handshake rejected: {}", name_, reply.value("message", "")));
  }
  if (reply.value("type", "") != "hello" || reply.value("protocol", -1) != kProtocolVersion) {
    throw protocol_error(name_ + ": unexpected handshake reply");
  }
  if (reply.value("vocab_hash", "") != hello["vocab_hash"]) {
    throw CompleterError(CompleterError::Kind::VocabularyMismatch,
                         fmt::format("{}: vocabulary hash {} does not match {}", name_,
                                     reply.value("vocab_hash", ""), hello["vocab_hash"].get<std::string>()));
  }
}

json ExternalCompleter::round_trip(json request) {
  const auto id = next_id_++;
  request["id"] = id;
  channel_->write_line(request.dump());
  for (;;) {
    const auto line = channel_->read_line();
    if (!line) throw CompleterError(CompleterError::Kind::Unreachable, name_ + ": connection closed");
    json reply;
    try {
      reply = json::parse(*line);
    } catch (const json::exception&) {
      throw protocol_error(name_ + ": reply is not JSON");
    }
    if (reply.value("type", "") == "error") {
      throw protocol_error(fmt::format("{}: {}", name_, reply.value("message", "error")));
    }
    if (!reply.contains("id") || reply["id"] != id) continue;
    if (reply.value("type", "") != "result") throw protocol_error(name_ + ": unexpected reply type");
    return reply;
  }
}

GearSequence ExternalCompleter::parse_sequence_json(const json& tokens) const {
  return GearSequence{parse_token_list(tokens, *cat_)};
}

GearSequence ExternalCompleter::complete(const Requirements& req, std::span<const Token> prefix, std::uint64_t stream) {
  json request{{"type", "complete"},
               {"requirements", requirements_json(req)},
               {"prefix", token_list(prefix, *cat_)},
               {"seed", stream}};
  const auto reply = round_trip(std::move(request));
  if (!reply.contains("tokens")) throw protocol_error(name_ + ": result without tokens");
  return parse_sequence_json(reply["tokens"]);
}

std::vector<GearSequence> ExternalCompleter::complete_batch(const Requirements& req,
                                                            std::span<const std::vector<Token>> prefixes,
                                                            std::span<const std::uint64_t> streams) {
  if (prefixes.size() != streams.size()) {
    throw CompleterError(CompleterError::Kind::InvalidArgument, "one stream per prefix is required");
  }
  if (prefixes.empty()) return {};
  json list = json::array();
  for (const auto& p : prefixes) list.push_back(token_list(p, *cat_));
  json request{{"type", "complete"},
               {"requirements", requirements_json(req)},
               {"prefixes", std::move(list)},
               {"seeds", std::vector<std::uint64_t>(streams.begin(), streams.end())}};
  const auto reply = round_trip(std::move(request));
  if (!reply.contains("sequences") || !reply["sequences"].is_array() ||
      reply["sequences"].size() != prefixes.size()) {
    throw protocol_error(name_ + ": batch result has the wrong number of sequences");
  }
  std::vector<GearSequence> out;
  out.reserve(prefixes.size());
  for (const auto& s : reply["sequences"]) out.push_back(parse_sequence_json(s));
  return out;
}

std::size_t serve_completer(LineChannel& channel, Completer& backend, const Catalogue& cat) {
  const auto send_error = [&](const json& id, const std::string& message) {
    json err{{"type", "error"}, {"message", message}};
    if (!id.is_null()) err["id"] = id;
    channel.write_line(err.dump());
  };

  const auto first = channel.read_line();
  if (!first) return 0;
  json hello;
  try {
    hello = json::parse(*first);
  } catch (const json::exception&) {
    send_error(nullptr, "expected a hello record");
    return 0;
  }
  const auto ours = hello_record(cat);
  if (hello.value("type", "") != "hello") {
    send_error(nullptr, "expected a hello record");
    return 0;
  }
  if (hello.value("protocol", -1) != kProtocolVersion) {
    send_error(nullptr, fmt::format("unsupported protocol version (server speaks {})", kProtocolVersion));
    return 0;
  }
  if (hello.value("vocab_hash", "") != ours["vocab_hash"]) {
    send_error(nullptr, fmt::format("vocabulary hash mismatch: server has {}", ours["vocab_hash"].get<std::string>()));
    return 0;
  }
  channel.write_line(ours.dump());

  std::size_t served = 0;
  while (const auto line = channel.read_line()) {
    if (line->empty()) continue;
    json request;
    try {
      request = json::parse(*line);
    } catch (const json::exception&) {
      send_error(nullptr, "request is not JSON");
      return served;
    }
    const json id = request.contains("id") ? request["id"] : json(nullptr);
    try {
      if (request.value("type", "") != "complete") throw protocol_error("unknown request type");
      const auto req = parse_requirements_json(request.value("requirements", json()));
      json reply{{"id", id}, {"type", "result"}};
      if (request.contains("prefixes")) {
        const auto& list = request["prefixes"];
        if (!list.is_array()) throw protocol_error("prefixes must be an array");
        std::vector<std::vector<Token>> prefixes;
        for (const auto& p : list) prefixes.push_back(parse_token_list(p, cat));
        std::vector<std::uint64_t> seeds(prefixes.size(), 0);
        if (request.contains("seeds")) {
          const auto& s = request["seeds"];
          if (!s.is_array() || s.size() != prefixes.size()) throw protocol_error("seeds must match prefixes");
          for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = s[i].get<std::uint64_t>();
        }
        json sequences = json::array();
        try {
          for (const auto& seq : backend.complete_batch(req, prefixes, seeds)) {
            sequences.push_back(token_list(seq.tokens, cat));
          }
        } catch (const Error& e) {
          send_error(id, e.what());
          continue;
        }
        served += prefixes.size();
        reply["sequences"] = std::move(sequences);
      } else {
        const auto prefix = parse_token_list(request.value("prefix", json::array()), cat);
        const std::uint64_t seed = request.contains("seed") ? request["seed"].get<std::uint64_t>() : 0;
        GearSequence seq;
        try {
          seq = backend.complete(req, prefix, seed);
        } catch (const Error& e) {
          send_error(id, e.what());
          continue;
        }
        ++served;
        reply["tokens"] = token_list(seq.tokens, cat);
      }
      channel.write_line(reply.dump());
    } catch (const CompleterError& e) {
      if (e.kind() == CompleterError::Kind::Unreachable) return served;
      send_error(id, e.what());
      return served;
    } catch (const json::exception& e) {
      send_error(id, e.what());
      return served;
    }
  }
  return served;
}

TcpListener::TcpListener(int port, const std::string& host) : fd_(-1), port_(port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) throw CompleterError(CompleterError::Kind::Unreachable, "socket failed");
  int yes = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    throw CompleterError(CompleterError::Kind::InvalidArgument, fmt::format("bad IPv4 address '{}'", host));
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd_, 8) != 0) {
    const std::string why = std::strerror(errno);
    ::close(fd_);
    throw CompleterError(CompleterError::Kind::Unreachable, fmt::format("cannot listen on {}:{}: {}", host, port, why));
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<LineChannel> TcpListener::accept() {
  for (;;) {
    const int client = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (client >= 0) return std::make_unique<LineChannel>(client, client, true);
    if (errno != EINTR) throw CompleterError(CompleterError::Kind::Unreachable, "accept failed");
  }
}

}  // namespace gearsyn
