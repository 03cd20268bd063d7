#pragma once

// Writer for the one-object-per-line text records shared by the telemetry
// protocol and the trace files. Field order is exactly insertion order and
// reals are printed in fixed notation with six fractional digits, so equal
// records always serialize to identical bytes.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace skimmer {

class NonFiniteField : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fixed six-decimal rendering (locale independent). Throws NonFiniteField on NaN/Inf.
std::string format_real(double value);

/// The value a reader obtains after format_real -> parse.
double quantize_real(double value);

class LineWriter {
 public:
  LineWriter();

  LineWriter& text(std::string_view key, std::string_view value);
  LineWriter& real(std::string_view key, double value);
  LineWriter& integer(std::string_view key, std::int64_t value);
  LineWriter& unsigned_integer(std::string_view key, std::uint64_t value);
  LineWriter& boolean(std::string_view key, bool value);

  LineWriter& begin_object(std::string_view key);
  LineWriter& end_object();
  LineWriter& begin_array(std::string_view key);
  LineWriter& end_array();
  /// Opens an anonymous object as the next array element.
  LineWriter& begin_element();

  /// Closes the root object and appends the terminating newline.
  std::string finish();

 private:
  void key(std::string_view name);
  void separator();

  std::string out_;
  std::vector<bool> first_;  // per open scope: no element written yet
};

}  // namespace skimmer
