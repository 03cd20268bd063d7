#include "skimmer/trace.hpp"

#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "skimmer/line_format.hpp"

namespace skimmer {

namespace {

using nlohmann::json;

void write_stats(LineWriter& w, std::string_view key, const LinkStats& s) {
  w.begin_object(key)
      .unsigned_integer("sent", s.sent)
      .unsigned_integer("delivered", s.delivered)
      .unsigned_integer("dropped", s.dropped)
      .end_object();
}

const json& field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw TraceError(std::string("trace row missing field '") + key + "'");
  return *it;
}

double real_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) throw TraceError(std::string("trace field '") + key + "' is not a number");
  return v.get<double>();
}

bool bool_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_boolean()) throw TraceError(std::string("trace field '") + key + "' is not a boolean");
  return v.get<bool>();
}

std::uint64_t uint_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_unsigned()) {
    throw TraceError(std::string("trace field '") + key + "' is not a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

LinkStats stats_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_object()) throw TraceError(std::string("trace field '") + key + "' is not an object");
  return {uint_field(v, "sent"), uint_field(v, "delivered"), uint_field(v, "dropped")};
}

std::string csv_stats(const LinkStats& s) {
  return std::to_string(s.sent) + "," + std::to_string(s.delivered) + "," +
         std::to_string(s.dropped);
}

}  // namespace

std::string trace_line(const TraceRecord& r) {
  LineWriter w;
  w.real("t_s", r.t_s)
      .real("x_m", r.x_m)
      .real("y_m", r.y_m)
      .real("heading_rad", r.heading_rad)
      .real("surge_mps", r.surge_mps)
      .real("yaw_rate_radps", r.yaw_rate_radps)
      .real("left", r.left)
      .real("right", r.right)
      .real("throttle", r.throttle)
      .real("steering", r.steering)
      .text("mode", to_string(r.mode))
      .real("desired_heading_rad", r.desired_heading_rad)
      .real("desired_speed_mps", r.desired_speed_mps)
      .real("rate_target_radps", r.rate_target_radps)
      .real("heading_err_rad", r.heading_err_rad)
      .real("xte_m", r.xte_m)
      .boolean("xte_valid", r.xte_valid)
      .unsigned_integer("wp_index", r.wp_index)
      .boolean("target_valid", r.target_valid)
      .real("target_x_m", r.target_x_m)
      .real("target_y_m", r.target_y_m)
      .boolean("in_frame", r.in_frame)
      .boolean("failsafe", r.failsafe);
  write_stats(w, "uplink", r.uplink);
  write_stats(w, "downlink", r.downlink);
  return w.finish();
}

TraceRecord decode_trace_line(std::string_view line) {
  const json obj = json::parse(line.begin(), line.end(), nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) throw TraceError("trace row is not a JSON object");
  TraceRecord r;
  r.t_s = real_field(obj, "t_s");
  r.x_m = real_field(obj, "x_m");
  r.y_m = real_field(obj, "y_m");
  r.heading_rad = real_field(obj, "heading_rad");
  r.surge_mps = real_field(obj, "surge_mps");
  r.yaw_rate_radps = real_field(obj, "yaw_rate_radps");
  r.left = real_field(obj, "left");
  r.right = real_field(obj, "right");
  r.throttle = real_field(obj, "throttle");
  r.steering = real_field(obj, "steering");
  const json& mode = field(obj, "mode");
  const auto parsed = mode.is_string() ? mode_from_string(mode.get<std::string>()) : std::nullopt;
  if (!parsed) throw TraceError("trace field 'mode' is not a known mode");
  r.mode = *parsed;
  r.desired_heading_rad = real_field(obj, "desired_heading_rad");
  r.desired_speed_mps = real_field(obj, "desired_speed_mps");
  r.rate_target_radps = real_field(obj, "rate_target_radps");
  r.heading_err_rad = real_field(obj, "heading_err_rad");
  r.xte_m = real_field(obj, "xte_m");
  r.xte_valid = bool_field(obj, "xte_valid");
  r.wp_index = uint_field(obj, "wp_index");
  r.target_valid = bool_field(obj, "target_valid");
  r.target_x_m = real_field(obj, "target_x_m");
  r.target_y_m = real_field(obj, "target_y_m");
  r.in_frame = bool_field(obj, "in_frame");
  r.failsafe = bool_field(obj, "failsafe");
  r.uplink = stats_field(obj, "uplink");
  r.downlink = stats_field(obj, "downlink");
  return r;
}

TraceRecord quantize(const TraceRecord& row) {
  TraceRecord q = row;
  for (double* v : {&q.t_s, &q.x_m, &q.y_m, &q.heading_rad, &q.surge_mps, &q.yaw_rate_radps,
                    &q.left, &q.right, &q.throttle, &q.steering, &q.desired_heading_rad,
                    &q.desired_speed_mps, &q.rate_target_radps, &q.heading_err_rad, &q.xte_m,
                    &q.target_x_m, &q.target_y_m}) {
    *v = quantize_real(*v);
  }
  return q;
}

std::string csv_header() {
  return "t_s,x_m,y_m,heading_rad,surge_mps,yaw_rate_radps,left,right,throttle,steering,mode,"
         "desired_heading_rad,desired_speed_mps,rate_target_radps,heading_err_rad,xte_m,"
         "xte_valid,wp_index,target_valid,target_x_m,target_y_m,in_frame,failsafe,"
         "up_sent,up_delivered,up_dropped,down_sent,down_delivered,down_dropped\n";
}

std::string csv_row(const TraceRecord& r) {
  std::string out;
  auto real = [&](double v) { out += format_real(v) + ","; };
  auto flag = [&](bool b) { out += b ? "1," : "0,"; };
  for (double v : {r.t_s, r.x_m, r.y_m, r.heading_rad, r.surge_mps, r.yaw_rate_radps, r.left,
                   r.right, r.throttle, r.steering}) {
    real(v);
  }
  out += std::string(to_string(r.mode)) + ",";
  for (double v : {r.desired_heading_rad, r.desired_speed_mps, r.rate_target_radps,
                   r.heading_err_rad, r.xte_m}) {
    real(v);
  }
  flag(r.xte_valid);
  out += std::to_string(r.wp_index) + ",";
  flag(r.target_valid);
  real(r.target_x_m);
  real(r.target_y_m);
  flag(r.in_frame);
  flag(r.failsafe);
  out += csv_stats(r.uplink) + "," + csv_stats(r.downlink) + "\n";
  return out;
}

void write_trace_jsonl(std::ostream& out, const std::vector<TraceRecord>& rows) {
  for (const auto& r : rows) out << trace_line(r);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& rows) {
  out << csv_header();
  for (const auto& r : rows) out << csv_row(r);
}

void write_trace_jsonl(const std::filesystem::path& path, const std::vector<TraceRecord>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError("cannot open " + path.string() + " for writing");
  write_trace_jsonl(out, rows);
  if (!out) throw TraceError("failed writing " + path.string());
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError("cannot open " + path.string() + " for writing");
  write_trace_csv(out, rows);
  if (!out) throw TraceError("failed writing " + path.string());
}

std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<TraceRecord> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      rows.push_back(decode_trace_line(line));
    } catch (const TraceError& e) {
      throw TraceError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<TraceRecord> read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open " + path.string());
  return read_trace(in);
}

}  // namespace skimmer
