#include "skimmer/server.hpp"

#include <atomic>
#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "skimmer/simulation.hpp"
#include "skimmer/telemetry.hpp"

namespace skimmer {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

constexpr std::size_t kMaxLineBytes = 64 * 1024;

struct Inbound {
  std::uint64_t client = 0;
  std::string line;
  bool closed = false;
};

class InboundQueue {
 public:
  void push(Inbound item) {
    std::lock_guard lock(mutex_);
    items_.push_back(std::move(item));
  }
  std::vector<Inbound> drain() {
    std::lock_guard lock(mutex_);
    return std::exchange(items_, {});
  }

 private:
  std::mutex mutex_;
  std::vector<Inbound> items_;
};

using SharedLine = std::shared_ptr<const std::string>;

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(std::uint64_t id, InboundQueue& inbound) : id_(id), inbound_(inbound) {}
  virtual ~Session() = default;

  std::uint64_t id() const { return id_; }
  virtual void start() = 0;
  /// Network thread only.
  virtual void deliver(SharedLine line) = 0;
  virtual void close() = 0;

 protected:
  void received(std::string_view data) {
    // One protocol line per '\n'; a websocket frame may omit the final newline.
    pending_.append(data);
    std::size_t pos = 0;
    while ((pos = pending_.find('\n')) != std::string::npos) {
      inbound_.push({id_, pending_.substr(0, pos), false});
      pending_.erase(0, pos + 1);
    }
  }
  void flush_partial() {
    if (!pending_.empty()) inbound_.push({id_, std::exchange(pending_, {}), false});
  }
  void closed() {
    if (!closed_) {
      closed_ = true;
      inbound_.push({id_, {}, true});
    }
  }

  std::uint64_t id_;
  InboundQueue& inbound_;
  std::string pending_;
  bool closed_ = false;
};

class TcpSession : public Session {
 public:
  TcpSession(std::uint64_t id, InboundQueue& inbound, tcp::socket socket)
      : Session(id, inbound), socket_(std::move(socket)) {}

  void start() override { read(); }

  void deliver(SharedLine line) override {
    queue_.push_back(std::move(line));
    if (queue_.size() == 1) write();
  }

  void close() override {
    beast::error_code ec;
    socket_.shutdown(tcp::socket::shutdown_both, ec);
    socket_.close(ec);
  }

 private:
  void read() {
    socket_.async_read_some(asio::buffer(buf_),
                            [self = shared_from_this(), this](beast::error_code ec, std::size_t n) {
                              if (ec) {
                                closed();
                                return;
                              }
                              received(std::string_view(buf_.data(), n));
                              if (pending_.size() > kMaxLineBytes) {
                                pending_.clear();
                              }
                              read();
                            });
  }

  void write() {
    asio::async_write(socket_, asio::buffer(*queue_.front()),
                      [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
                        if (ec) {
                          queue_.clear();
                          closed();
                          return;
                        }
                        queue_.pop_front();
                        if (!queue_.empty()) write();
                      });
  }

  tcp::socket socket_;
  std::array<char, 4096> buf_{};
  std::deque<SharedLine> queue_;
};

class WsSession : public Session {
 public:
  WsSession(std::uint64_t id, InboundQueue& inbound, tcp::socket socket)
      : Session(id, inbound), ws_(std::move(socket)) {}

  void start() override {
    http::async_read(ws_.next_layer(), http_buf_, request_,
                     [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
                       if (ec) return closed();
                       if (!websocket::is_upgrade(request_) || request_.target() != "/link") {
                         reject();
                         return;
                       }
                       ws_.text(true);
                       ws_.read_message_max(kMaxLineBytes);
                       ws_.async_accept(request_, [self, this](beast::error_code ec2) {
                         if (ec2) return closed();
                         open_ = true;
                         read();
                         if (!queue_.empty()) write();
                       });
                     });
  }

  void deliver(SharedLine line) override {
    queue_.push_back(std::move(line));
    if (open_ && queue_.size() == 1) write();
  }

  void close() override {
    beast::error_code ec;
    ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
    ws_.next_layer().close(ec);
  }

 private:
  void reject() {
    auto res = std::make_shared<http::response<http::string_body>>(http::status::not_found,
                                                                  request_.version());
    res->set(http::field::content_type, "text/plain");
    res->body() = "websocket endpoint is /link\n";
    res->prepare_payload();
    http::async_write(ws_.next_layer(), *res,
                      [self = shared_from_this(), this, res](beast::error_code, std::size_t) {
                        close();
                        closed();
                      });
  }

  void read() {
    ws_.async_read(frame_, [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
      if (ec) {
        closed();
        return;
      }
      received(beast::buffers_to_string(frame_.data()));
      frame_.consume(frame_.size());
      flush_partial();
      read();
    });
  }

  void write() {
    ws_.async_write(asio::buffer(*queue_.front()),
                    [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
                      if (ec) {
                        queue_.clear();
                        closed();
                        return;
                      }
                      queue_.pop_front();
                      if (!queue_.empty()) write();
                    });
  }

  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer http_buf_;
  http::request<http::string_body> request_;
  beast::flat_buffer frame_;
  std::deque<SharedLine> queue_;
  bool open_ = false;
};

bool is_command(const TelemetryMessage& msg) {
  return std::holds_alternative<CommandManual>(msg) || std::holds_alternative<SetMode>(msg) ||
         std::holds_alternative<MissionUpload>(msg) || std::holds_alternative<TargetReport>(msg);
}

}  // namespace

struct LiveServer::Impl {
  Impl(Scenario sc, ServeOptions opts)
      : options(std::move(opts)),
        sim(std::move(sc)),
        metrics(metrics_spec_for(sim.scenario())),
        tcp_acceptor(io),
        ws_acceptor(io) {
    if (!(options.speed > 0.0)) throw std::invalid_argument("speed must be > 0");
  }

  void listen(tcp::acceptor& acc, std::uint16_t port) {
    beast::error_code ec;
    const auto address = asio::ip::make_address(options.bind_address, ec);
    if (ec) throw std::runtime_error("invalid bind address " + options.bind_address);
    const tcp::endpoint ep(address, port);
    acc.open(ep.protocol(), ec);
    if (!ec) acc.set_option(asio::socket_base::reuse_address(true), ec);
    if (!ec) acc.bind(ep, ec);
    if (!ec) acc.listen(asio::socket_base::max_listen_connections, ec);
    if (ec) {
      throw std::runtime_error("cannot listen on " + options.bind_address + ":" +
                               std::to_string(port) + ": " + ec.message());
    }
  }

  template <class SessionT>
  void accept(tcp::acceptor& acc) {
    acc.async_accept([this, &acc](beast::error_code ec, tcp::socket socket) {
      if (ec) return;  // acceptor closed
      auto session = std::make_shared<SessionT>(++next_client, inbound, std::move(socket));
      sessions[session->id()] = session;
      ++clients_seen;
      session->start();
      accept<SessionT>(acc);
    });
  }

  // Network thread.
  void broadcast(SharedLine line) {
    for (auto it = sessions.begin(); it != sessions.end();) {
      if (auto s = it->second.lock()) {
        s->deliver(line);
        ++it;
      } else {
        it = sessions.erase(it);
      }
    }
  }

  void send_to(std::uint64_t client, SharedLine line) {
    const auto it = sessions.find(client);
    if (it == sessions.end()) return;
    if (auto s = it->second.lock()) s->deliver(std::move(line));
  }

  // Simulation thread.
  void post_send(std::uint64_t client, const TelemetryMessage& msg) {
    auto line = std::make_shared<const std::string>(encode(msg));
    asio::post(io, [this, client, line] { send_to(client, line); });
  }

  void handle_inbound(const Inbound& in) {
    if (in.closed) {
      if (authority && *authority == in.client) authority.reset();
      return;
    }
    ++lines_in;
    std::string_view line = in.line;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) return;
    const DecodeResult decoded = decode(line);
    if (!decoded) {
      ++decode_errors;
      return;
    }
    const TelemetryMessage& msg = decoded.message();
    const bool hb = std::holds_alternative<Heartbeat>(msg);
    if (!hb && !is_command(msg)) return;  // vessel-to-ground types are not accepted inbound
    if (!authority) {
      authority = in.client;
      sim.disable_scripted_heartbeat();
      post_send(in.client, Authority{authority_seq.next(), true});
    }
    if (*authority != in.client) {
      if (!hb) {
        ++refused_commands;
        post_send(in.client, Authority{authority_seq.next(), false});
      }
      return;
    }
    sim.gcs_send(msg);
  }

  void run_simulation() {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(
        std::chrono::duration<double>(sim.scenario().dt_s / options.speed));
    auto deadline = clock::now();
    while (!stopping.load()) {
      for (const auto& in : inbound.drain()) handle_inbound(in);
      TraceRecord row = sim.tick();
      {
        std::lock_guard lock(result_mutex);
        metrics.add(quantize(row));
        rows.push_back(std::move(row));
        ++ticks;
      }
      for (const auto& msg : sim.gcs_receive()) {
        auto line = std::make_shared<const std::string>(encode(msg));
        asio::post(io, [this, line] { broadcast(line); });
      }
      deadline += period;
      const auto now = clock::now();
      if (deadline < now - std::chrono::milliseconds(500)) deadline = now;  // do not race to catch up
      std::this_thread::sleep_until(deadline);
    }
  }

  ServeOptions options;
  Simulation sim;
  MetricsAccumulator metrics;
  std::vector<TraceRecord> rows;
  mutable std::mutex result_mutex;

  asio::io_context io;
  std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
  tcp::acceptor tcp_acceptor;
  tcp::acceptor ws_acceptor;
  std::map<std::uint64_t, std::weak_ptr<Session>> sessions;
  std::uint64_t next_client = 0;
  InboundQueue inbound;

  std::optional<std::uint64_t> authority;
  SequenceCounter authority_seq;

  std::thread net_thread;
  std::thread sim_thread;
  std::atomic<bool> stopping{false};
  bool started = false;
  bool stopped = false;

  std::atomic<std::uint64_t> clients_seen{0};
  std::uint64_t ticks = 0;  // guarded by result_mutex
  std::atomic<std::uint64_t> lines_in{0};
  std::atomic<std::uint64_t> decode_errors{0};
  std::atomic<std::uint64_t> refused_commands{0};
};

LiveServer::LiveServer(Scenario scenario, ServeOptions options)
    : impl_(std::make_unique<Impl>(std::move(scenario), std::move(options))) {}

LiveServer::~LiveServer() { stop(); }

void LiveServer::start() {
  Impl& s = *impl_;
  if (s.started) return;
  s.listen(s.tcp_acceptor, s.options.tcp_port);
  s.listen(s.ws_acceptor, s.options.ws_port);
  s.accept<TcpSession>(s.tcp_acceptor);
  s.accept<WsSession>(s.ws_acceptor);
  s.work.emplace(s.io.get_executor());
  s.started = true;
  s.net_thread = std::thread([&s] { s.io.run(); });
  s.sim_thread = std::thread([&s] { s.run_simulation(); });
}

void LiveServer::stop() {
  Impl& s = *impl_;
  if (!s.started || s.stopped) return;
  s.stopped = true;
  s.stopping = true;
  if (s.sim_thread.joinable()) s.sim_thread.join();
  asio::post(s.io, [&s] {
    beast::error_code ec;
    s.tcp_acceptor.close(ec);
    s.ws_acceptor.close(ec);
    for (auto& [id, weak] : s.sessions) {
      if (auto session = weak.lock()) session->close();
    }
    s.sessions.clear();
    s.work.reset();
  });
  if (s.net_thread.joinable()) s.net_thread.join();
}

std::uint16_t LiveServer::tcp_port() const {
  beast::error_code ec;
  return impl_->tcp_acceptor.local_endpoint(ec).port();
}

std::uint16_t LiveServer::ws_port() const {
  beast::error_code ec;
  return impl_->ws_acceptor.local_endpoint(ec).port();
}

MetricsReport LiveServer::final_metrics() const {
  std::lock_guard lock(impl_->result_mutex);
  return impl_->metrics.report();
}

std::vector<TraceRecord> LiveServer::trace() const {
  std::lock_guard lock(impl_->result_mutex);
  return impl_->rows;
}

ServeStats LiveServer::stats() const {
  std::lock_guard lock(impl_->result_mutex);
  return {impl_->ticks, impl_->clients_seen.load(), impl_->lines_in.load(),
          impl_->decode_errors.load(), impl_->refused_commands.load()};
}

}  // namespace skimmer
