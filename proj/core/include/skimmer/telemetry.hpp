#pragma once

// Vessel <-> ground station wire protocol: one JSON object per line, UTF-8,
// newline terminated. docs/protocol.md lists every message with golden lines.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skimmer/guidance.hpp"

namespace skimmer {

inline constexpr int kProtocolVersion = 1;

struct Heartbeat {
  std::uint64_t seq = 0;
  double t_s = 0.0;
  int proto_version = kProtocolVersion;
  friend bool operator==(const Heartbeat&, const Heartbeat&) = default;
};

struct StateReport {
  std::uint64_t seq = 0;
  double t_s = 0.0;
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_rad = 0.0;
  double surge_mps = 0.0;
  double yaw_rate_radps = 0.0;
  Mode mode = Mode::Hold;
  double battery_pct = 100.0;  // static placeholder, no battery model
  double xte_m = 0.0;
  bool in_frame = false;
  friend bool operator==(const StateReport&, const StateReport&) = default;
};

struct CommandManual {
  std::uint64_t seq = 0;
  double throttle = 0.0;
  double steering = 0.0;
  friend bool operator==(const CommandManual&, const CommandManual&) = default;
};

struct SetMode {
  std::uint64_t seq = 0;
  Mode mode = Mode::Hold;
  friend bool operator==(const SetMode&, const SetMode&) = default;
};

struct MissionUpload {
  std::uint64_t seq = 0;
  std::vector<Waypoint> waypoints;
  friend bool operator==(const MissionUpload&, const MissionUpload&) = default;
};

struct MissionAck {
  std::uint64_t seq = 0;
  std::uint64_t count = 0;
  bool ok = false;
  std::string reason;
  friend bool operator==(const MissionAck&, const MissionAck&) = default;
};

struct TargetReport {
  std::uint64_t seq = 0;
  double x_m = 0.0;
  double y_m = 0.0;
  double vx_mps = 0.0;
  double vy_mps = 0.0;
  double t_s = 0.0;
  friend bool operator==(const TargetReport&, const TargetReport&) = default;
};

/// Server -> client: whether this connection holds command authority.
struct Authority {
  std::uint64_t seq = 0;
  bool granted = false;
  friend bool operator==(const Authority&, const Authority&) = default;
};

using TelemetryMessage = std::variant<Heartbeat, StateReport, CommandManual, SetMode,
                                      MissionUpload, MissionAck, TargetReport, Authority>;

std::string_view type_tag(const TelemetryMessage& msg);
std::uint64_t sequence_of(const TelemetryMessage& msg);
void set_sequence(TelemetryMessage& msg, std::uint64_t seq);

class EncodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Serializes `msg` as one newline-terminated line. Reals are rounded to six
/// decimals. Throws EncodeError for non-finite reals or a CommandManual
/// component outside [-1, 1].
std::string encode(const TelemetryMessage& msg);

enum class DecodeErrorKind {
  Syntax,        // not a single well-formed JSON object
  UnknownType,   // "type" names no known message
  MissingField,  // required field absent (including "type")
  WrongType,     // field present with the wrong JSON type
  OutOfRange,    // value outside its valid domain
};

std::string_view to_string(DecodeErrorKind kind);

struct DecodeError {
  DecodeErrorKind kind = DecodeErrorKind::Syntax;
  std::string detail;
};

class DecodeResult {
 public:
  DecodeResult(TelemetryMessage msg) : value_(std::move(msg)) {}  // NOLINT(implicit)
  DecodeResult(DecodeError err) : value_(std::move(err)) {}       // NOLINT(implicit)

  bool ok() const { return std::holds_alternative<TelemetryMessage>(value_); }
  explicit operator bool() const { return ok(); }
  const TelemetryMessage& message() const { return std::get<TelemetryMessage>(value_); }
  const DecodeError& error() const { return std::get<DecodeError>(value_); }

 private:
  std::variant<TelemetryMessage, DecodeError> value_;
};

/// Parses one line (a trailing "\n" or "\r\n" is accepted). Never throws;
/// unknown extra fields are ignored.
DecodeResult decode(std::string_view line);

/// Per-sender monotone sequence numbering.
class SequenceCounter {
 public:
  std::uint64_t next() { return ++last_; }

 private:
  std::uint64_t last_ = 0;
};

}  // namespace skimmer
