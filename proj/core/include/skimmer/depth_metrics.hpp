#pragma once

// Depth-map arithmetic: preprocessing, training-loss terms, affine alignment
// and warm/cool colorization on plain numeric grids. No inference happens
// here; depth maps arrive precomputed (see depth_io.hpp).

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace skimmer::depth {

class DepthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major W x H grid of finite, non-negative relative depths.
class DepthMap {
 public:
  DepthMap() = default;
  /// Throws DepthError on zero dimensions, size mismatch or invalid values.
  DepthMap(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  double at(std::size_t x, std::size_t y) const { return values_[y * width_ + x]; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const DepthMap&, const DepthMap&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

/// N feature vectors of common dimension K, stored row-major.
class FeatureSet {
 public:
  FeatureSet() = default;
  FeatureSet(std::size_t count, std::size_t dim, std::vector<double> data);

  std::size_t count() const { return count_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * dim_, dim_);
  }

 private:
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct LossWeights {
  double lambda = 0.0;  // weight of the feature-alignment term
  double alpha = 0.0;   // cosine-similarity threshold in [-1, 1]

  void validate() const;
};

struct AffineFit {
  double scale = 1.0;
  double shift = 0.0;
  bool negative_scale() const { return scale < 0.0; }
};

/// W x H selection of CutMix region A (true); the complement is region B.
struct RegionMask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<bool> selected;

  bool at(std::size_t x, std::size_t y) const { return selected[y * width + x]; }
  RegionMask complement() const;
  /// Axis-aligned box mask; the box is clipped to the grid.
  static RegionMask box(std::size_t width, std::size_t height, std::size_t x0, std::size_t y0,
                        std::size_t box_w, std::size_t box_h);
};

struct CropRect {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t width = 0;
  std::size_t height = 0;
};

/// Optional crop, bilinear resample (half-pixel centres, edge clamped) to the
/// target size, then min-max normalization to [0, 1] (a constant map becomes
/// all zeros). `normalize = false` skips the last step.
DepthMap preprocess(const DepthMap& map, std::size_t target_w, std::size_t target_h,
                    std::optional<CropRect> crop = std::nullopt, bool normalize = true);

/// Mean absolute per-pixel difference.
double labeled_loss(const DepthMap& pred, const DepthMap& gt);

/// Mean absolute error against teacher pseudo-labels.
double pseudo_loss(const DepthMap& pred, const DepthMap& pseudo);

/// Region-wise MAE: |pred - a| on the mask, |pred - b| off it, averaged over W*H.
double cutmix_loss(const DepthMap& pred_mixed, const DepthMap& pseudo_a, const DepthMap& pseudo_b,
                   const RegionMask& mask);

double unlabeled_loss(double pseudo_component, double cutmix_component);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Mean of max(0, alpha - cos(f_i, f_i_pre)).
double align_loss(const FeatureSet& feats, const FeatureSet& pre_feats, double alpha);

double total_loss(double l_labeled, double l_unlabeled, double l_align, const LossWeights& weights);

/// Least-squares scale/shift minimizing sum (scale*pred + shift - ref)^2.
/// Throws DepthError if pred has zero variance.
AffineFit fit_affine(const DepthMap& pred, const DepthMap& ref);

/// scale*map + shift. Throws DepthError if any aligned value is negative.
DepthMap apply_affine(const DepthMap& map, const AffineFit& fit);

/// Mean |scale*pred + shift - ref|; equals labeled_loss(apply_affine(pred, fit), ref)
/// but is also defined when the aligned map dips below zero.
double aligned_mae(const DepthMap& pred, const DepthMap& ref, const AffineFit& fit);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;  // row-major
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// The shipped 256-entry gradient: index 0 nearest (warm red) through yellow
/// and cyan to index 255 farthest (cool blue).
const std::array<Rgb, 256>& depth_gradient();

/// Gradient index for a normalized depth in [0, 1]: round(v * 255).
std::size_t gradient_index(double normalized);

/// Min-max normalizes, then maps through depth_gradient(). A constant map is
/// rendered entirely with gradient[0].
RgbImage colorize(const DepthMap& map);

}  // namespace skimmer::depth
