#pragma once

// Per-tick trace rows. The JSONL form uses the same writer as the telemetry
// protocol, so a row read back from a file equals quantize(row) exactly.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skimmer/guidance.hpp"
#include "skimmer/link.hpp"

namespace skimmer {

struct TraceRecord {
  double t_s = 0.0;
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_rad = 0.0;
  double surge_mps = 0.0;
  double yaw_rate_radps = 0.0;
  double left = 0.0;
  double right = 0.0;
  double throttle = 0.0;
  double steering = 0.0;
  Mode mode = Mode::Hold;
  double desired_heading_rad = 0.0;
  double desired_speed_mps = 0.0;
  double rate_target_radps = 0.0;
  double heading_err_rad = 0.0;
  double xte_m = 0.0;
  bool xte_valid = false;
  std::uint64_t wp_index = 0;
  bool target_valid = false;  // ground-truth target exists this tick
  double target_x_m = 0.0;
  double target_y_m = 0.0;
  bool in_frame = false;  // from ground truth, not from the noisy track
  bool failsafe = false;
  LinkStats uplink;
  LinkStats downlink;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trace_line(const TraceRecord& row);
/// Throws TraceError on malformed input.
TraceRecord decode_trace_line(std::string_view line);

/// The row a reader obtains from trace_line(row).
TraceRecord quantize(const TraceRecord& row);

std::string csv_header();
std::string csv_row(const TraceRecord& row);

void write_trace_jsonl(std::ostream& out, const std::vector<TraceRecord>& rows);
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& rows);
void write_trace_jsonl(const std::filesystem::path& path, const std::vector<TraceRecord>& rows);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& rows);

std::vector<TraceRecord> read_trace(std::istream& in);
std::vector<TraceRecord> read_trace_file(const std::filesystem::path& path);

}  // namespace skimmer
