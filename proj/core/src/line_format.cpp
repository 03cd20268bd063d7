#include "skimmer/line_format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace skimmer {

std::string format_real(double value) {
  if (!std::isfinite(value)) {
    throw NonFiniteField("non-finite numeric field");
  }
  char buf[400];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 6);
  return std::string(buf, res.ptr);
}

double quantize_real(double value) {
  const std::string text = format_real(value);
  double parsed = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), parsed);
  return parsed;
}

LineWriter::LineWriter() : out_("{"), first_{true} {}

void LineWriter::separator() {
  if (!first_.back()) {
    out_.push_back(',');
  }
  first_.back() = false;
}

void LineWriter::key(std::string_view name) {
  separator();
  out_.push_back('"');
  out_.append(name);
  out_.append("\":");
}

LineWriter& LineWriter::text(std::string_view k, std::string_view value) {
  key(k);
  out_.push_back('"');
  for (const char c : value) {
    switch (c) {
      case '"':
        out_.append("\\\"");
        break;
      case '\\':
        out_.append("\\\\");
        break;
      case '\n':
        out_.append("\\n");
        break;
      case '\r':
        out_.append("\\r");
        break;
      case '\t':
        out_.append("\\t");
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char esc[8];
          std::snprintf(esc, sizeof(esc), "\\u%04x", static_cast<unsigned>(c));
          out_.append(esc);
        } else {
          out_.push_back(c);
        }
    }
  }
  out_.push_back('"');
  return *this;
}

LineWriter& LineWriter::real(std::string_view k, double value) {
  const std::string rendered = format_real(value);
  key(k);
  out_.append(rendered);
  return *this;
}

LineWriter& LineWriter::integer(std::string_view k, std::int64_t value) {
  key(k);
  out_.append(std::to_string(value));
  return *this;
}

LineWriter& LineWriter::unsigned_integer(std::string_view k, std::uint64_t value) {
  key(k);
  out_.append(std::to_string(value));
  return *this;
}

LineWriter& LineWriter::boolean(std::string_view k, bool value) {
  key(k);
  out_.append(value ? "true" : "false");
  return *this;
}

LineWriter& LineWriter::begin_object(std::string_view k) {
  key(k);
  out_.push_back('{');
  first_.push_back(true);
  return *this;
}

LineWriter& LineWriter::end_object() {
  out_.push_back('}');
  first_.pop_back();
  return *this;
}

LineWriter& LineWriter::begin_array(std::string_view k) {
  key(k);
  out_.push_back('[');
  first_.push_back(true);
  return *this;
}

LineWriter& LineWriter::end_array() {
  out_.push_back(']');
  first_.pop_back();
  return *this;
}

LineWriter& LineWriter::begin_element() {
  separator();
  out_.push_back('{');
  first_.push_back(true);
  return *this;
}

std::string LineWriter::finish() {
  out_.append("}\n");
  first_.clear();
  return std::move(out_);
}

}  // namespace skimmer
