#pragma once

// Batch evaluation of precomputed depth predictions against reference maps.
//
// Frames are the depth files in `frames` (.pgm or text grid), sorted by
// filename. Each needs a file of the same name in `refs` (and in `pseudo`
// when given; pseudo labels default to the refs). Per frame:
//   prediction  crop -> bilinear resample -> min-max normalize
//   ref/pseudo  crop -> bilinear resample (values kept as is)
//   l_cutmix    frame i mixed with frame i+1 (cyclic) through the region mask
//   l_align     from <stem>.feat in `features` and `pre_features`, else 0
// then fit_affine(pred, ref), aligned MAE, and a colorized prediction.
//
// Every input is read and every loss computed before anything is written, so
// a failing batch leaves no partial output.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skimmer/depth_metrics.hpp"

namespace skimmer::depth {

class DepthEvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DepthEvalOptions {
  std::filesystem::path frames_dir;
  std::filesystem::path refs_dir;
  std::optional<std::filesystem::path> pseudo_dir;
  std::optional<std::filesystem::path> features_dir;
  std::optional<std::filesystem::path> pre_features_dir;
  std::optional<std::filesystem::path> mask_path;  // default: centered box, half width and height
  LossWeights weights;
  std::optional<std::size_t> width;  // default: first frame after cropping
  std::optional<std::size_t> height;
  std::optional<CropRect> crop;
  std::filesystem::path out_dir;
};

struct FrameMetrics {
  std::string frame;
  double l_labeled = 0.0;
  double l_pseudo = 0.0;
  double l_cutmix = 0.0;
  double l_align = 0.0;
  double l_total = 0.0;
  AffineFit fit;
  double aligned_mae = 0.0;
};

struct DepthEvalResult {
  std::vector<FrameMetrics> frames;
  std::vector<RgbImage> images;  // colorized predictions, same order
};

/// Computes everything in memory. Throws DepthEvalError listing every problem found.
DepthEvalResult evaluate_depth(const DepthEvalOptions& options);

/// evaluate_depth, then writes metrics.csv and <stem>.ppm per frame into out_dir.
DepthEvalResult run_depth_eval(const DepthEvalOptions& options);

std::string metrics_csv(const std::vector<FrameMetrics>& frames);

}  // namespace skimmer::depth
