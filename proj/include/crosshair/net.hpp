#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "crosshair/error.hpp"
#include "crosshair/router.hpp"
#include "crosshair/wire.hpp"
#include "crosshair/zoo.hpp"

namespace crosshair::net {

inline void send_all(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    const auto n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("send failed: ") + std::strerror(errno));
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

// Owning file descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { reset(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

// Splits a byte stream into newline-terminated lines.
class LineReader {
 public:
  explicit LineReader(int fd) : fd_(fd) {}

  // Next line including its '\n'. nullopt on clean EOF at a line boundary;
  // a partial trailing line is returned without '\n' so the decoder can
  // reject it.
  std::optional<std::string> next() {
    for (;;) {
      const auto pos = buf_.find('\n');
      if (pos != std::string::npos) {
        std::string line = buf_.substr(0, pos + 1);
        buf_.erase(0, pos + 1);
        return line;
      }
      char chunk[4096];
      const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        // A reset peer has closed, same as EOF.
        if (errno == ECONNRESET && buf_.empty()) return std::nullopt;
        throw TransportError(std::string("recv failed: ") + std::strerror(errno));
      }
      if (n == 0) {
        if (buf_.empty()) return std::nullopt;
        return std::exchange(buf_, {});
      }
      buf_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_;
  std::string buf_;
};

inline Socket connect_to(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw TransportError("cannot resolve '" + host + "': " + ::gai_strerror(rc));
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, &::freeaddrinfo);
  for (auto* ai = res; ai; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (!s.valid()) continue;
    if (::connect(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0) {
      int one = 1;
      ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return s;
    }
  }
  throw TransportError("cannot connect to " + host + ":" + service);
}

// "host:port" -> (host, port)
inline std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size()) {
    throw ValidationError("endpoint must look like host:port");
  }
  try {
    const auto port = std::stoul(endpoint.substr(colon + 1));
    if (port == 0 || port > 65535) throw ValidationError("endpoint port out of range");
    return {endpoint.substr(0, colon), static_cast<std::uint16_t>(port)};
  } catch (const std::logic_error&) {
    throw ValidationError("endpoint port is not a number");
  }
}

enum class ServeMode { Service, Experiment };

struct ServerOptions {
  ServeMode mode = ServeMode::Experiment;
  GranularityConfig granularity;
  std::optional<double> epsilon;  // defense off when absent
  std::uint64_t seed = 0;
  std::uint64_t dataset_seed = 0;
};

// A reply line plus how long service mode holds it back.
struct Reply {
  std::string bytes;
  std::chrono::microseconds delay{0};
  bool close_after = false;
};

// Registration, then serving. Models arrive through register_model() (or
// RegisterModel messages); start() freezes the zoo into a frontier and
// opens inference.
class Server {
 public:
  explicit Server(ServerOptions opts) : opts_(std::move(opts)) { opts_.granularity.validate(); }

  ~Server() { stop(); }

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  void register_model(ModelProfile m) {
    std::lock_guard lock(mu_);
    if (router_) throw RegistrationAfterStart("registration is closed once serving starts");
    m.validate();
    pending_.push_back(std::move(m));
  }

  // Builds the frontier and router. Throws GranularityViolation for a zoo
  // that breaks the granularity assumption.
  void start() {
    std::lock_guard lock(mu_);
    if (router_) throw RegistrationAfterStart("server already started");
    auto frontier = build_frontier(pending_, opts_.granularity);
    RouterOptions ro;
    ro.seed = opts_.seed;
    ro.dataset_seed = opts_.dataset_seed;
    if (opts_.epsilon) ro.defense = make_defense(frontier, *opts_.epsilon);
    router_ = std::make_unique<Router>(std::move(frontier), ro);
  }

  bool started() const {
    std::lock_guard lock(mu_);
    return router_ != nullptr;
  }

  Router& router() {
    std::lock_guard lock(mu_);
    if (!router_) throw Error("server not started");
    return *router_;
  }

  const ServerOptions& options() const { return opts_; }

  // Protocol handling for one request line, independent of sockets.
  Reply handle(const std::string& line) {
    wire::Message msg;
    try {
      msg = wire::decode(line);
    } catch (const OutOfRange& e) {
      return {wire::encode(wire::ErrorReply{"out_of_range", e.what()}), {}, false};
    } catch (const MalformedMessage& e) {
      return {wire::encode(wire::ErrorReply{"malformed", e.what()}), {}, true};
    }
    return std::visit([&](auto& m) { return dispatch(m); }, msg);
  }

  // Binds 127.0.0.1 (or all interfaces) on `port`; 0 picks a free port.
  // Returns the bound port.
  std::uint16_t listen(std::uint16_t port, bool loopback_only = true) {
    Socket s(::socket(AF_INET, SOCK_STREAM, 0));
    if (!s.valid()) throw TransportError("socket() failed");
    int one = 1;
    ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(loopback_only ? INADDR_LOOPBACK : INADDR_ANY);
    if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      throw TransportError("bind failed on port " + std::to_string(port) + ": " + std::strerror(errno));
    }
    if (::listen(s.fd(), 64) != 0) throw TransportError("listen failed");
    socklen_t len = sizeof addr;
    ::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
    listener_ = std::move(s);
    return ntohs(addr.sin_port);
  }

  // Accepts connections until stop(). One handler thread per connection.
  void run() {
    while (!stopping_) {
      const int fd = ::accept(listener_.fd(), nullptr, nullptr);
      if (fd < 0) {
        if (errno == EINTR) continue;
        break;
      }
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      std::lock_guard lock(conn_mu_);
      if (stopping_) {
        ::close(fd);
        break;
      }
      connections_.push_back(fd);
      workers_.emplace_back([this, fd] { serve_connection(fd); });
    }
  }

  void start_background() {
    acceptor_ = std::thread([this] { run(); });
  }

  void stop() {
    if (stopping_.exchange(true)) return;
    if (listener_.valid()) ::shutdown(listener_.fd(), SHUT_RDWR);
    {
      std::lock_guard lock(conn_mu_);
      for (const int fd : connections_) ::shutdown(fd, SHUT_RDWR);
    }
    if (acceptor_.joinable()) acceptor_.join();
    std::vector<std::thread> workers;
    {
      std::lock_guard lock(conn_mu_);
      workers.swap(workers_);
    }
    for (auto& w : workers) w.join();
    listener_.reset();
  }

 private:
  Reply dispatch(const wire::RegisterModel& m) {
    try {
      register_model(m.model);
    } catch (const RegistrationAfterStart& e) {
      return {wire::encode(wire::ErrorReply{"registration_closed", e.what()})};
    } catch (const ValidationError& e) {
      return {wire::encode(wire::ErrorReply{"invalid_model", e.what()})};
    }
    return {wire::encode(wire::Ack{"register_model"})};
  }

  Reply dispatch(const wire::StartServing&) {
    try {
      start();
    } catch (const RegistrationAfterStart& e) {
      return {wire::encode(wire::ErrorReply{"registration_closed", e.what()})};
    } catch (const ValidationError& e) {
      return {wire::encode(wire::ErrorReply{"invalid_model", e.what()})};
    }
    return {wire::encode(wire::Ack{"start_serving"})};
  }

  Reply dispatch(const wire::InferRequest& m) {
    Router* router = nullptr;
    {
      std::lock_guard lock(mu_);
      router = router_.get();
    }
    if (!router) return {wire::encode(wire::ErrorReply{"not_serving", "registration phase still open"})};
    const auto out = router->serve(QuerySpec{m.acc_min, m.lat_max_ms, m.input_id});
    if (!out.served()) return {wire::encode(wire::InferError{m.request_id})};
    Reply r{wire::encode(wire::InferResponse{m.request_id, *out.label})};
    if (opts_.mode == ServeMode::Service) {
      const double ms = router->frontier()[*out.served_index].latency_ms;
      r.delay = std::chrono::microseconds(static_cast<std::int64_t>(ms * 1000.0));
    }
    return r;
  }

  Reply dispatch(const wire::TelemetryRequest&) {
    if (opts_.mode != ServeMode::Experiment) {
      return {wire::encode(wire::ErrorReply{"telemetry_disabled", "telemetry is only served in experiment mode"})};
    }
    Router* router = nullptr;
    {
      std::lock_guard lock(mu_);
      router = router_.get();
    }
    if (!router) return {wire::encode(wire::ErrorReply{"not_serving", "registration phase still open"})};
    return {wire::encode(wire::TelemetryResponse{router->telemetry()})};
  }

  template <class T>
  Reply dispatch(const T&) {
    return {wire::encode(wire::ErrorReply{"malformed", "not a request message"}), {}, true};
  }

  void serve_connection(int fd) {
    LineReader reader(fd);
    try {
      while (auto line = reader.next()) {
        const auto reply = handle(*line);
        if (reply.delay.count() > 0) std::this_thread::sleep_for(reply.delay);
        send_all(fd, reply.bytes);
        if (reply.close_after) break;
      }
    } catch (const TransportError&) {
    }
    std::lock_guard lock(conn_mu_);
    std::erase(connections_, fd);
    ::close(fd);
  }

  ServerOptions opts_;
  mutable std::mutex mu_;
  std::vector<ModelProfile> pending_;
  std::unique_ptr<Router> router_;

  Socket listener_;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex conn_mu_;
  std::vector<int> connections_;
  std::vector<std::thread> workers_;

};

// Client side of the protocol. Satisfies QueryEndpoint and TelemetrySource.
class WireClient {
 public:
  WireClient(const std::string& host, std::uint16_t port, std::optional<GranularityConfig> g = std::nullopt)
      : socket_(connect_to(host, port)), reader_(socket_.fd()), granularity_(g) {}

  std::optional<int> infer(std::optional<double> acc, double lat, std::uint64_t input) {
    const std::uint64_t id = next_request_id_++;
    const auto reply = round_trip(wire::InferRequest{id, acc, lat, input});
    if (const auto* ok = std::get_if<wire::InferResponse>(&reply)) {
      if (ok->request_id != id) throw TransportError("reply request_id does not match");
      return ok->label;
    }
    if (const auto* err = std::get_if<wire::InferError>(&reply)) {
      if (err->request_id != id) throw TransportError("reply request_id does not match");
      return std::nullopt;
    }
    throw_unexpected(reply);
  }

  std::optional<TelemetrySummary> telemetry() {
    const auto reply = round_trip(wire::TelemetryRequest{});
    if (const auto* t = std::get_if<wire::TelemetryResponse>(&reply)) return t->summary;
    if (const auto* e = std::get_if<wire::ErrorReply>(&reply); e && e->code == "telemetry_disabled") {
      return std::nullopt;
    }
    throw_unexpected(reply);
  }

  void register_model(const ModelProfile& m) { expect_ack(round_trip(wire::RegisterModel{m})); }
  void start_serving() { expect_ack(round_trip(wire::StartServing{})); }

  // Raw reply bytes are appended here when set.
  void capture_replies(std::string* sink) { transcript_ = sink; }

  // Sends raw bytes and returns the next reply line (for protocol tests).
  std::optional<std::string> exchange_raw(std::string_view bytes) {
    send_all(socket_.fd(), bytes);
    return reader_.next();
  }

 private:
  wire::Message round_trip(const wire::Message& msg) {
    send_all(socket_.fd(), wire::encode(msg, granularity_));
    auto line = reader_.next();
    if (!line) throw TransportError("server closed the connection");
    if (transcript_) transcript_->append(*line);
    return wire::decode(*line);
  }

  static void expect_ack(const wire::Message& reply) {
    if (std::holds_alternative<wire::Ack>(reply)) return;
    throw_unexpected(reply);
  }

  [[noreturn]] static void throw_unexpected(const wire::Message& reply) {
    if (const auto* e = std::get_if<wire::ErrorReply>(&reply)) {
      if (e->code == "registration_closed") throw RegistrationAfterStart(e->message);
      if (e->code == "out_of_range") throw OutOfRange(e->message);
      throw TransportError("server error " + e->code + ": " + e->message);
    }
    throw TransportError("unexpected reply from server");
  }

  Socket socket_;
  LineReader reader_;
  std::optional<GranularityConfig> granularity_;
  std::uint64_t next_request_id_ = 1;
  std::string* transcript_ = nullptr;
};

}  // namespace crosshair::net
