#include "skimmer/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <json.hpp>
#include <limits>
#include <optional>

#include "skimmer/line_format.hpp"

namespace skimmer {

namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::string_view kHeartbeat = "heartbeat";
constexpr std::string_view kStateReport = "state_report";
constexpr std::string_view kCommandManual = "command_manual";
constexpr std::string_view kSetMode = "set_mode";
constexpr std::string_view kMissionUpload = "mission_upload";
constexpr std::string_view kMissionAck = "mission_ack";
constexpr std::string_view kTargetReport = "target_report";
constexpr std::string_view kAuthority = "authority";

void check_unit_range(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw EncodeError(std::string(name) + " is not finite");
  }
  if (value < -1.0 || value > 1.0) {
    throw EncodeError(std::string(name) + " outside [-1, 1]");
  }
}

// Decoding helpers signal failure through this exception; decode() converts
// it to a DecodeError and never lets it escape.
struct FieldError {
  DecodeErrorKind kind;
  std::string detail;
};

const json& require(const json& obj, const char* name) {
  const auto it = obj.find(name);
  if (it == obj.end()) {
    throw FieldError{DecodeErrorKind::MissingField, std::string("missing field '") + name + "'"};
  }
  return *it;
}

double get_real(const json& obj, const char* name) {
  const json& v = require(obj, name);
  if (!v.is_number()) {
    throw FieldError{DecodeErrorKind::WrongType, std::string("field '") + name + "' must be a number"};
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw FieldError{DecodeErrorKind::OutOfRange, std::string("field '") + name + "' is not finite"};
  }
  return d;
}

std::uint64_t get_unsigned(const json& obj, const char* name) {
  const json& v = require(obj, name);
  if (v.is_number_unsigned()) {
    return v.get<std::uint64_t>();
  }
  if (v.is_number_integer()) {
    throw FieldError{DecodeErrorKind::OutOfRange, std::string("field '") + name + "' must be >= 0"};
  }
  throw FieldError{DecodeErrorKind::WrongType,
                   std::string("field '") + name + "' must be a non-negative integer"};
}

std::int64_t get_integer(const json& obj, const char* name) {
  const json& v = require(obj, name);
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw FieldError{DecodeErrorKind::OutOfRange, std::string("field '") + name + "' too large"};
    }
    return static_cast<std::int64_t>(u);
  }
  if (v.is_number_integer()) {
    return v.get<std::int64_t>();
  }
  throw FieldError{DecodeErrorKind::WrongType, std::string("field '") + name + "' must be an integer"};
}

bool get_bool(const json& obj, const char* name) {
  const json& v = require(obj, name);
  if (!v.is_boolean()) {
    throw FieldError{DecodeErrorKind::WrongType, std::string("field '") + name + "' must be a boolean"};
  }
  return v.get<bool>();
}

std::string get_text(const json& obj, const char* name) {
  const json& v = require(obj, name);
  if (!v.is_string()) {
    throw FieldError{DecodeErrorKind::WrongType, std::string("field '") + name + "' must be a string"};
  }
  return v.get<std::string>();
}

Mode get_mode(const json& obj, const char* name) {
  const std::string text = get_text(obj, name);
  const auto mode = mode_from_string(text);
  if (!mode) {
    throw FieldError{DecodeErrorKind::OutOfRange, "unknown mode '" + text + "'"};
  }
  return *mode;
}

double get_unit(const json& obj, const char* name) {
  const double d = get_real(obj, name);
  if (d < -1.0 || d > 1.0) {
    throw FieldError{DecodeErrorKind::OutOfRange, std::string("field '") + name + "' outside [-1, 1]"};
  }
  return d;
}

TelemetryMessage decode_object(const json& obj) {
  const std::string type = get_text(obj, "type");
  constexpr std::string_view kKnown[] = {kHeartbeat,   kStateReport,   kCommandManual,
                                         kSetMode,     kMissionUpload, kMissionAck,
                                         kTargetReport, kAuthority};
  if (std::find(std::begin(kKnown), std::end(kKnown), type) == std::end(kKnown)) {
    throw FieldError{DecodeErrorKind::UnknownType, "unknown message type '" + type + "'"};
  }
  const std::uint64_t seq = get_unsigned(obj, "seq");
  if (type == kHeartbeat) {
    Heartbeat m;
    m.seq = seq;
    m.t_s = get_real(obj, "t_s");
    const auto version = get_integer(obj, "proto_version");
    if (version < 0 || version > std::numeric_limits<int>::max()) {
      throw FieldError{DecodeErrorKind::OutOfRange, "proto_version out of range"};
    }
    m.proto_version = static_cast<int>(version);
    return m;
  }
  if (type == kStateReport) {
    StateReport m;
    m.seq = seq;
    m.t_s = get_real(obj, "t_s");
    m.x_m = get_real(obj, "x_m");
    m.y_m = get_real(obj, "y_m");
    m.heading_rad = get_real(obj, "heading_rad");
    m.surge_mps = get_real(obj, "surge_mps");
    m.yaw_rate_radps = get_real(obj, "yaw_rate_radps");
    m.mode = get_mode(obj, "mode");
    m.battery_pct = get_real(obj, "battery_pct");
    if (m.battery_pct < 0.0 || m.battery_pct > 100.0) {
      throw FieldError{DecodeErrorKind::OutOfRange, "battery_pct outside [0, 100]"};
    }
    const json& diag = require(obj, "diagnostics");
    if (!diag.is_object()) {
      throw FieldError{DecodeErrorKind::WrongType, "field 'diagnostics' must be an object"};
    }
    m.xte_m = get_real(diag, "xte_m");
    m.in_frame = get_bool(diag, "in_frame");
    return m;
  }
  if (type == kCommandManual) {
    CommandManual m;
    m.seq = seq;
    m.throttle = get_unit(obj, "throttle");
    m.steering = get_unit(obj, "steering");
    return m;
  }
  if (type == kSetMode) {
    SetMode m;
    m.seq = seq;
    m.mode = get_mode(obj, "mode");
    return m;
  }
  if (type == kMissionUpload) {
    MissionUpload m;
    m.seq = seq;
    const json& wps = require(obj, "waypoints");
    if (!wps.is_array()) {
      throw FieldError{DecodeErrorKind::WrongType, "field 'waypoints' must be an array"};
    }
    for (const json& w : wps) {
      if (!w.is_object()) {
        throw FieldError{DecodeErrorKind::WrongType, "waypoint entries must be objects"};
      }
      Waypoint wp;
      wp.x_m = get_real(w, "x_m");
      wp.y_m = get_real(w, "y_m");
      wp.speed_mps = get_real(w, "speed_mps");
      wp.accept_radius_m = get_real(w, "accept_radius_m");
      m.waypoints.push_back(wp);
    }
    return m;
  }
  if (type == kMissionAck) {
    MissionAck m;
    m.seq = seq;
    m.count = get_unsigned(obj, "count");
    m.ok = get_bool(obj, "ok");
    m.reason = get_text(obj, "reason");
    return m;
  }
  if (type == kTargetReport) {
    TargetReport m;
    m.seq = seq;
    m.x_m = get_real(obj, "x_m");
    m.y_m = get_real(obj, "y_m");
    m.vx_mps = get_real(obj, "vx_mps");
    m.vy_mps = get_real(obj, "vy_mps");
    m.t_s = get_real(obj, "t_s");
    return m;
  }
  if (type == kAuthority) {
    Authority m;
    m.seq = seq;
    m.granted = get_bool(obj, "granted");
    return m;
  }
  throw FieldError{DecodeErrorKind::UnknownType, "unknown message type '" + type + "'"};
}

}  // namespace

std::string_view type_tag(const TelemetryMessage& msg) {
  return std::visit(Overloaded{
                        [](const Heartbeat&) { return kHeartbeat; },
                        [](const StateReport&) { return kStateReport; },
                        [](const CommandManual&) { return kCommandManual; },
                        [](const SetMode&) { return kSetMode; },
                        [](const MissionUpload&) { return kMissionUpload; },
                        [](const MissionAck&) { return kMissionAck; },
                        [](const TargetReport&) { return kTargetReport; },
                        [](const Authority&) { return kAuthority; },
                    },
                    msg);
}

std::uint64_t sequence_of(const TelemetryMessage& msg) {
  return std::visit([](const auto& m) { return m.seq; }, msg);
}

void set_sequence(TelemetryMessage& msg, std::uint64_t seq) {
  std::visit([seq](auto& m) { m.seq = seq; }, msg);
}

std::string encode(const TelemetryMessage& msg) {
  LineWriter w;
  w.text("type", type_tag(msg)).unsigned_integer("seq", sequence_of(msg));
  try {
    std::visit(
        Overloaded{
            [&](const Heartbeat& m) {
              w.real("t_s", m.t_s).integer("proto_version", m.proto_version);
            },
            [&](const StateReport& m) {
              w.real("t_s", m.t_s)
                  .real("x_m", m.x_m)
                  .real("y_m", m.y_m)
                  .real("heading_rad", m.heading_rad)
                  .real("surge_mps", m.surge_mps)
                  .real("yaw_rate_radps", m.yaw_rate_radps)
                  .text("mode", to_string(m.mode))
                  .real("battery_pct", m.battery_pct)
                  .begin_object("diagnostics")
                  .real("xte_m", m.xte_m)
                  .boolean("in_frame", m.in_frame)
                  .end_object();
            },
            [&](const CommandManual& m) {
              check_unit_range(m.throttle, "throttle");
              check_unit_range(m.steering, "steering");
              w.real("throttle", m.throttle).real("steering", m.steering);
            },
            [&](const SetMode& m) { w.text("mode", to_string(m.mode)); },
            [&](const MissionUpload& m) {
              w.begin_array("waypoints");
              for (const auto& wp : m.waypoints) {
                w.begin_element()
                    .real("x_m", wp.x_m)
                    .real("y_m", wp.y_m)
                    .real("speed_mps", wp.speed_mps)
                    .real("accept_radius_m", wp.accept_radius_m)
                    .end_object();
              }
              w.end_array();
            },
            [&](const MissionAck& m) {
              w.unsigned_integer("count", m.count).boolean("ok", m.ok).text("reason", m.reason);
            },
            [&](const TargetReport& m) {
              w.real("x_m", m.x_m)
                  .real("y_m", m.y_m)
                  .real("vx_mps", m.vx_mps)
                  .real("vy_mps", m.vy_mps)
                  .real("t_s", m.t_s);
            },
            [&](const Authority& m) { w.boolean("granted", m.granted); },
        },
        msg);
  } catch (const NonFiniteField&) {
    throw EncodeError(std::string(type_tag(msg)) + ": non-finite numeric field");
  }
  return w.finish();
}

std::string_view to_string(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::Syntax:
      return "syntax";
    case DecodeErrorKind::UnknownType:
      return "unknown_type";
    case DecodeErrorKind::MissingField:
      return "missing_field";
    case DecodeErrorKind::WrongType:
      return "wrong_type";
    case DecodeErrorKind::OutOfRange:
      return "out_of_range";
  }
  return "unknown";
}

DecodeResult decode(std::string_view line) {
  if (!line.empty() && line.back() == '\n') {
    line.remove_suffix(1);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
  }
  if (line.find('\n') != std::string_view::npos) {
    return DecodeError{DecodeErrorKind::Syntax, "embedded newline: more than one line"};
  }
  try {
    const json obj = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) {
      return DecodeError{DecodeErrorKind::Syntax, "malformed JSON"};
    }
    if (!obj.is_object()) {
      return DecodeError{DecodeErrorKind::Syntax, "line is not a JSON object"};
    }
    return decode_object(obj);
  } catch (const FieldError& e) {
    return DecodeError{e.kind, e.detail};
  } catch (const json::exception& e) {
    return DecodeError{DecodeErrorKind::Syntax, e.what()};
  }
}

}  // namespace skimmer
