#pragma once

// Live telemetry service: runs a scenario in (scaled) real time and speaks the
// line protocol on a TCP listener and on a websocket endpoint at /link.
//
// Threads: one network thread (all sockets), one simulation thread (owns the
// Simulation). Connections push decoded lines into a single ordered queue;
// the simulation thread is its only consumer.
//
// Command authority goes to the first client that sends a heartbeat or a
// command, and is released when that client disconnects. Other clients get
// every report but their commands are refused with Authority{granted:false}.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "skimmer/metrics.hpp"
#include "skimmer/scenario.hpp"
#include "skimmer/trace.hpp"

namespace skimmer {

struct ServeOptions {
  std::string bind_address = "0.0.0.0";
  std::uint16_t tcp_port = 14550;  // 0 picks a free port
  std::uint16_t ws_port = 8080;
  double speed = 1.0;              // simulated seconds per wall-clock second
};

struct ServeStats {
  std::uint64_t ticks = 0;
  std::uint64_t clients_seen = 0;
  std::uint64_t lines_in = 0;
  std::uint64_t decode_errors = 0;
  std::uint64_t refused_commands = 0;
};

class LiveServer {
 public:
  LiveServer(Scenario scenario, ServeOptions options);
  ~LiveServer();
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  /// Binds both listeners and starts the threads. Throws std::runtime_error
  /// when a port cannot be bound.
  void start();
  /// Stops the simulation and closes every connection. Idempotent.
  void stop();

  std::uint16_t tcp_port() const;
  std::uint16_t ws_port() const;

  /// Valid after stop().
  MetricsReport final_metrics() const;
  std::vector<TraceRecord> trace() const;
  ServeStats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace skimmer
