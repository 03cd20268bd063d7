#include "skimmer/depth_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace skimmer::depth {

namespace {

// Whitespace tokenizer for the text formats.
class Tokens {
 public:
  Tokens(const std::string& text, std::string origin) : text_(text), origin_(std::move(origin)) {}

  std::string_view next(const char* what) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) {
      throw DepthIoError(origin_ + ": unexpected end of input while reading " + what);
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string_view(text_).substr(start, pos_ - start);
  }

  std::size_t next_size(const char* what) {
    const auto tok = next(what);
    std::size_t value = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      throw DepthIoError(origin_ + ": invalid " + what + " '" + std::string(tok) + "'");
    }
    return value;
  }

  double next_real(const char* what) {
    const auto tok = next(what);
    double value = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(value)) {
      throw DepthIoError(origin_ + ": invalid " + what + " '" + std::string(tok) + "'");
    }
    return value;
  }

  void expect_end() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ != text_.size()) {
      throw DepthIoError(origin_ + ": trailing data after the last value");
    }
  }

 private:
  const std::string& text_;
  std::string origin_;
  std::size_t pos_ = 0;
};

constexpr std::size_t kMaxCells = std::size_t{1} << 28;

void check_dims(std::size_t w, std::size_t h, const std::string& origin) {
  if (w == 0 || h == 0 || w > kMaxCells / h) {
    throw DepthIoError(origin + ": unsupported dimensions " + std::to_string(w) + "x" +
                       std::to_string(h));
  }
}

}  // namespace

DepthMap parse_text_grid(const std::string& text, const std::string& origin) {
  Tokens tok(text, origin);
  const std::size_t w = tok.next_size("width");
  const std::size_t h = tok.next_size("height");
  check_dims(w, h, origin);
  std::vector<double> values(w * h);
  for (double& v : values) v = tok.next_real("depth value");
  tok.expect_end();
  try {
    return DepthMap(w, h, std::move(values));
  } catch (const DepthError& e) {
    throw DepthIoError(origin + ": " + e.what());
  }
}

DepthMap parse_pgm(const std::string& bytes, const std::string& origin) {
  std::size_t pos = 0;
  auto skip_ws_and_comments = [&] {
    while (pos < bytes.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* what) {
    skip_ws_and_comments();
    std::size_t value = 0;
    const auto res = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
    if (res.ec != std::errc{} || res.ptr == bytes.data() + pos) {
      throw DepthIoError(origin + ": invalid PGM " + what);
    }
    pos = static_cast<std::size_t>(res.ptr - bytes.data());
    return value;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw DepthIoError(origin + ": not a binary PGM (P5)");
  }
  pos = 2;
  const std::size_t w = read_uint("width");
  const std::size_t h = read_uint("height");
  const std::size_t maxval = read_uint("maxval");
  check_dims(w, h, origin);
  if (maxval == 0 || maxval > 65535) {
    throw DepthIoError(origin + ": PGM maxval must be in 1..65535");
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw DepthIoError(origin + ": malformed PGM header");
  }
  ++pos;
  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
  if (bytes.size() - pos < w * h * sample_bytes) {
    throw DepthIoError(origin + ": PGM raster truncated");
  }
  std::vector<double> values(w * h);
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::size_t sample = static_cast<unsigned char>(bytes[pos]);
    if (sample_bytes == 2) {
      sample = (sample << 8) | static_cast<unsigned char>(bytes[pos + 1]);
    }
    pos += sample_bytes;
    if (sample > maxval) {
      throw DepthIoError(origin + ": PGM sample exceeds maxval");
    }
    values[k] = static_cast<double>(sample) / static_cast<double>(maxval);
  }
  return DepthMap(w, h, std::move(values));
}

DepthMap read_depth_map(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (path.extension() == ".pgm") {
    return parse_pgm(bytes, path.string());
  }
  return parse_text_grid(bytes, path.string());
}

FeatureSet parse_feature_set(const std::string& text, const std::string& origin) {
  Tokens tok(text, origin);
  const std::size_t n = tok.next_size("feature count");
  const std::size_t k = tok.next_size("feature dimension");
  if (k == 0 || (n > 0 && k > kMaxCells / n)) {
    throw DepthIoError(origin + ": unsupported feature set shape");
  }
  std::vector<double> data(n * k);
  for (double& v : data) v = tok.next_real("feature value");
  tok.expect_end();
  return FeatureSet(n, k, std::move(data));
}

FeatureSet read_feature_set(const std::filesystem::path& path) {
  return parse_feature_set(read_file(path), path.string());
}

RegionMask read_region_mask(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Tokens tok(text, path.string());
  const std::size_t w = tok.next_size("width");
  const std::size_t h = tok.next_size("height");
  check_dims(w, h, path.string());
  RegionMask mask{w, h, std::vector<bool>(w * h)};
  for (std::size_t k = 0; k < w * h; ++k) {
    const auto bit = tok.next_size("mask value");
    if (bit > 1) throw DepthIoError(path.string() + ": mask values must be 0 or 1");
    mask.selected[k] = bit == 1;
  }
  tok.expect_end();
  return mask;
}

std::string format_text_grid(const DepthMap& map) {
  std::ostringstream out;
  out << map.width() << ' ' << map.height() << '\n';
  out.precision(17);
  for (std::size_t y = 0; y < map.height(); ++y) {
    for (std::size_t x = 0; x < map.width(); ++x) {
      out << (x ? " " : "") << map.at(x, y);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_pgm16(const DepthMap& map) {
  std::string out = "P5\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) +
                    "\n65535\n";
  for (const double v : map.values()) {
    const auto sample = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
    out.push_back(static_cast<char>((sample >> 8) & 0xFF));
    out.push_back(static_cast<char>(sample & 0xFF));
  }
  return out;
}

std::string format_ppm(const RgbImage& image) {
  std::string out =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.pixels.size() * 3);
  for (const Rgb& px : image.pixels) {
    out.push_back(static_cast<char>(px.r));
    out.push_back(static_cast<char>(px.g));
    out.push_back(static_cast<char>(px.b));
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DepthIoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DepthIoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DepthIoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace skimmer::depth
