#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skimmer/metrics.hpp"
#include "skimmer/trace.hpp"

namespace skimmer {
namespace {

TraceRecord sample_row() {
  TraceRecord r;
  r.t_s = 1.02;
  r.x_m = 3.14159265;
  r.y_m = -2.7182818;
  r.heading_rad = 0.1234567;
  r.surge_mps = 1.5;
  r.yaw_rate_radps = -0.0000004;
  r.left = 0.75;
  r.right = 0.25;
  r.throttle = 0.5;
  r.steering = 0.25;
  r.mode = Mode::Follow;
  r.desired_heading_rad = 0.2;
  r.desired_speed_mps = 2.0;
  r.rate_target_radps = 0.05;
  r.heading_err_rad = 0.0765433;
  r.xte_m = 0.0;
  r.wp_index = 3;
  r.target_valid = true;
  r.target_x_m = 10.0;
  r.target_y_m = 20.0;
  r.in_frame = true;
  r.uplink = {4, 3, 1};
  r.downlink = {10, 9, 0};
  return r;
}

TEST(Trace, LineRoundTripsToQuantizedRow) {
  const auto row = sample_row();
  const std::string line = trace_line(row);
  EXPECT_EQ(line.back(), '\n');
  EXPECT_EQ(decode_trace_line(line), quantize(row));
  EXPECT_EQ(trace_line(quantize(row)), line);
  EXPECT_NE(line.find(R"("mode":"follow")"), std::string::npos);
  EXPECT_NE(line.find(R"("uplink":{"sent":4,"delivered":3,"dropped":1})"), std::string::npos);
}

TEST(Trace, FieldOrderStartsWithTime) {
  EXPECT_EQ(trace_line(TraceRecord{}).rfind(R"({"t_s":0.000000,"x_m":0.000000,)", 0), 0u);
}

TEST(Trace, MalformedLinesThrow) {
  EXPECT_THROW(decode_trace_line("{"), TraceError);
  EXPECT_THROW(decode_trace_line(R"({"t_s":1})"), TraceError);
  std::string line = trace_line(sample_row());
  line.replace(line.find("follow"), 6, "drift!");
  EXPECT_THROW(decode_trace_line(line), TraceError);
}

TEST(Trace, StreamRoundTrip) {
  std::vector<TraceRecord> rows;
  for (int i = 0; i < 20; ++i) {
    auto r = sample_row();
    r.t_s = 0.02 * (i + 1);
    r.x_m = std::sin(i);
    rows.push_back(r);
  }
  std::stringstream buf;
  write_trace_jsonl(buf, rows);
  const auto back = read_trace(buf);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(back[i], quantize(rows[i]));
}

TEST(Trace, CsvHasOneColumnPerHeaderField) {
  auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  const auto header = csv_header();
  const auto row = csv_row(sample_row());
  EXPECT_EQ(count(header), count(row));
  EXPECT_EQ(header.rfind("t_s,", 0), 0u);
  EXPECT_EQ(header.back(), '\n');
  EXPECT_EQ(row.back(), '\n');
}

MetricsSpec follow_spec(double dt = 1.0) {
  MetricsSpec s;
  s.dt_s = dt;
  s.standoff_m = 10.0;
  s.standoff_tol_m = 2.0;
  return s;
}

TraceRecord follow_row(double t, double dist, bool in_frame) {
  TraceRecord r;
  r.t_s = t;
  r.target_valid = true;
  r.target_y_m = dist;
  r.in_frame = in_frame;
  r.mode = Mode::Follow;
  return r;
}

TEST(Metrics, InFrameCountsFromAcquisition) {
  std::vector<TraceRecord> rows{follow_row(1, 30, false), follow_row(2, 30, false),
                                follow_row(3, 20, true),  follow_row(4, 15, false),
                                follow_row(5, 12, true),  follow_row(6, 11, true)};
  const auto m = compute_metrics(rows, follow_spec());
  EXPECT_TRUE(m.acquired);
  EXPECT_DOUBLE_EQ(m.acquisition_t_s, 3.0);
  EXPECT_DOUBLE_EQ(m.pct_in_frame, 75.0);
  EXPECT_DOUBLE_EQ(*m.final_distance_m, 11.0);
}

TEST(Metrics, StandoffSettleAndHold) {
  std::vector<TraceRecord> rows{follow_row(1, 20, true), follow_row(2, 12, true),
                                follow_row(3, 9, true),  follow_row(4, 13, true),
                                follow_row(5, 10, true), follow_row(6, 11, true),
                                follow_row(7, 8.5, true)};
  const auto m = compute_metrics(rows, follow_spec());
  EXPECT_DOUBLE_EQ(*m.settle_time_s, 2.0);
  // Errors from settling on: 2, 1, 3, 0, 1, 1.5.
  EXPECT_DOUBLE_EQ(m.standoff_err_max_m, 3.0);
  EXPECT_DOUBLE_EQ(m.standoff_err_mean_m, 8.5 / 6.0);
  EXPECT_DOUBLE_EQ(m.standoff_hold_s, 3.0);
}

TEST(Metrics, CrossTrackOnlyInAuto) {
  MetricsSpec spec;
  spec.mission_size = 2;
  std::vector<TraceRecord> rows(4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].t_s = static_cast<double>(i + 1);
    rows[i].mode = Mode::Auto;
    rows[i].xte_valid = true;
    rows[i].xte_m = i % 2 ? 3.0 : -4.0;
    rows[i].wp_index = i;
  }
  rows[3].mode = Mode::Hold;
  rows[3].xte_m = 100.0;
  const auto m = compute_metrics(rows, spec);
  EXPECT_EQ(m.xte_samples, 3u);
  EXPECT_NEAR(m.xte_rms_m, std::sqrt((16.0 + 9.0 + 16.0) / 3.0), 1e-12);
  EXPECT_EQ(m.waypoints_reached, 3u);
  EXPECT_DOUBLE_EQ(*m.mission_time_s, 3.0);
}

TEST(Metrics, RateLimitsTracked) {
  std::vector<TraceRecord> rows(3);
  rows[0].rate_target_radps = 0.1;
  rows[1].rate_target_radps = -0.2;
  rows[2].rate_target_radps = -0.25;
  const auto m = compute_metrics(rows, MetricsSpec{});
  EXPECT_DOUBLE_EQ(m.max_abs_rate_target_radps, 0.25);
  EXPECT_NEAR(m.max_rate_step_radps, 0.3, 1e-15);
}

TEST(Metrics, ThresholdsEvaluatedOnlyWhenSet) {
  MetricsSpec spec = follow_spec();
  EXPECT_TRUE(compute_metrics({}, spec).thresholds.empty());
  EXPECT_TRUE(compute_metrics({}, spec).all_pass());
  spec.thresholds.min_pct_in_frame = 90.0;
  spec.thresholds.max_mission_time_s = 10.0;
  spec.thresholds.final_distance_m = 10.0;
  spec.thresholds.final_distance_tol_m = 2.0;
  const auto m = compute_metrics({follow_row(1, 11, true)}, spec);
  ASSERT_EQ(m.thresholds.size(), 3u);
  EXPECT_FALSE(m.thresholds[0].pass);  // mission never finished
  EXPECT_TRUE(m.thresholds[1].pass);
  EXPECT_TRUE(m.thresholds[2].pass);
  EXPECT_FALSE(m.all_pass());
  EXPECT_NE(metrics_line(m).find(R"("value":"none")"), std::string::npos);
  EXPECT_NE(metrics_summary(m).find("FAIL max_mission_time_s"), std::string::npos);
}

TEST(Metrics, EmptyTraceIsAllZero) {
  const auto m = compute_metrics({}, MetricsSpec{});
  EXPECT_EQ(m.rows, 0u);
  EXPECT_EQ(m.xte_rms_m, 0.0);
  EXPECT_FALSE(m.acquired);
  EXPECT_FALSE(m.settle_time_s.has_value());
  EXPECT_FALSE(m.final_distance_m.has_value());
}

TEST(Metrics, StreamingEqualsBatch) {
  std::vector<TraceRecord> rows;
  for (int i = 0; i < 50; ++i) rows.push_back(follow_row(i, 30.0 - 0.5 * i, i % 3 != 0));
  MetricsAccumulator acc(follow_spec(0.5));
  for (const auto& r : rows) acc.add(r);
  EXPECT_EQ(acc.report(), compute_metrics(rows, follow_spec(0.5)));
}

}  // namespace
}  // namespace skimmer
