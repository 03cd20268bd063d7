#pragma once

// Depth-map, feature-set and image file formats.
//
//   *.pgm  binary portable graymap (P5); samples divided by maxval, so a
//          16-bit map (maxval 65535) maps to [0, 1]
//   other  text grid: "W H" header, then W*H whitespace-separated reals, row-major
//
// Feature sets are text: "N K" header, then N rows of K reals.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "skimmer/depth_metrics.hpp"

namespace skimmer::depth {

class DepthIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DepthMap parse_text_grid(const std::string& text, const std::string& origin = "<text>");
DepthMap parse_pgm(const std::string& bytes, const std::string& origin = "<pgm>");

/// Dispatches on extension (.pgm vs text grid).
DepthMap read_depth_map(const std::filesystem::path& path);

FeatureSet parse_feature_set(const std::string& text, const std::string& origin = "<text>");
FeatureSet read_feature_set(const std::filesystem::path& path);

/// Text grid of 0/1 values with the same header as depth grids.
RegionMask read_region_mask(const std::filesystem::path& path);

std::string format_text_grid(const DepthMap& map);
/// 16-bit P5; values are clamped to [0, 1] then scaled to 0..65535.
std::string format_pgm16(const DepthMap& map);
/// Binary P6 pixmap.
std::string format_ppm(const RgbImage& image);

void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace skimmer::depth
