#include "skimmer/depth_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "skimmer/detail/embedded_assets.hpp"

namespace skimmer::depth {

namespace {

void require_same_shape(const DepthMap& a, const DepthMap& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DepthError(std::string(what) + ": dimension mismatch (" + std::to_string(a.width()) +
                     "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                     std::to_string(b.height()) + ")");
  }
}

void require_non_negative(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DepthError(std::string(what) + " must be a finite non-negative loss component");
  }
}

std::pair<double, double> min_max(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

std::array<Rgb, 256> load_gradient() {
  const auto text = detail::find_embedded("depth_gradient.txt");
  if (!text) {
    throw std::logic_error("depth gradient asset missing from build");
  }
  std::array<Rgb, 256> table{};
  std::istringstream in{std::string(*text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream row(line);
    int r = 0;
    int g = 0;
    int b = 0;
    if (!(row >> r >> g >> b) || n >= table.size()) {
      throw std::logic_error("malformed depth gradient asset");
    }
    table[n++] = Rgb{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                     static_cast<std::uint8_t>(b)};
  }
  if (n != table.size()) {
    throw std::logic_error("depth gradient asset must have 256 entries");
  }
  return table;
}

}  // namespace

DepthMap::DepthMap(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width_ == 0 || height_ == 0) {
    throw DepthError("depth map dimensions must be >= 1");
  }
  if (values_.size() != width_ * height_) {
    throw DepthError("depth map has " + std::to_string(values_.size()) + " values, expected " +
                     std::to_string(width_ * height_));
  }
  for (const double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DepthError("depth values must be finite and non-negative");
    }
  }
}

FeatureSet::FeatureSet(std::size_t count, std::size_t dim, std::vector<double> data)
    : count_(count), dim_(dim), data_(std::move(data)) {
  if (dim_ == 0) {
    throw DepthError("feature dimension must be >= 1");
  }
  if (data_.size() != count_ * dim_) {
    throw DepthError("feature set has " + std::to_string(data_.size()) + " values, expected " +
                     std::to_string(count_ * dim_));
  }
  for (const double v : data_) {
    if (!std::isfinite(v)) throw DepthError("feature values must be finite");
  }
}

void LossWeights::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DepthError("lambda must be finite and >= 0");
  }
  if (!(alpha >= -1.0 && alpha <= 1.0)) {
    throw DepthError("alpha must lie in [-1, 1]");
  }
}

RegionMask RegionMask::complement() const {
  RegionMask out = *this;
  out.selected.flip();
  return out;
}

RegionMask RegionMask::box(std::size_t width, std::size_t height, std::size_t x0, std::size_t y0,
                           std::size_t box_w, std::size_t box_h) {
  RegionMask mask{width, height, std::vector<bool>(width * height, false)};
  const std::size_t x1 = std::min(width, x0 + box_w);
  const std::size_t y1 = std::min(height, y0 + box_h);
  for (std::size_t y = y0; y < y1; ++y) {
    for (std::size_t x = x0; x < x1; ++x) {
      mask.selected[y * width + x] = true;
    }
  }
  return mask;
}

DepthMap preprocess(const DepthMap& map, std::size_t target_w, std::size_t target_h,
                    std::optional<CropRect> crop, bool normalize) {
  if (target_w == 0 || target_h == 0) {
    throw DepthError("preprocess target dimensions must be >= 1");
  }
  const CropRect region = crop.value_or(CropRect{0, 0, map.width(), map.height()});
  if (region.width == 0 || region.height == 0 || region.x + region.width > map.width() ||
      region.y + region.height > map.height()) {
    throw DepthError("crop rectangle lies outside the depth map");
  }

  std::vector<double> out(target_w * target_h);
  const double sx = static_cast<double>(region.width) / static_cast<double>(target_w);
  const double sy = static_cast<double>(region.height) / static_cast<double>(target_h);
  const double max_x = static_cast<double>(region.width - 1);
  const double max_y = static_cast<double>(region.height - 1);
  for (std::size_t j = 0; j < target_h; ++j) {
    const double fy = std::clamp((static_cast<double>(j) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(std::floor(fy));
    const std::size_t y1 = std::min(y0 + 1, region.height - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t i = 0; i < target_w; ++i) {
      const double fx = std::clamp((static_cast<double>(i) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(std::floor(fx));
      const std::size_t x1 = std::min(x0 + 1, region.width - 1);
      const double wx = fx - static_cast<double>(x0);
      const double top = (1.0 - wx) * map.at(region.x + x0, region.y + y0) +
                         wx * map.at(region.x + x1, region.y + y0);
      const double bottom = (1.0 - wx) * map.at(region.x + x0, region.y + y1) +
                            wx * map.at(region.x + x1, region.y + y1);
      out[j * target_w + i] = (1.0 - wy) * top + wy * bottom;
    }
  }

  if (normalize) {
    const auto [lo, hi] = min_max(out);
    const double range = hi - lo;
    for (double& v : out) {
      v = range > 0.0 ? (v - lo) / range : 0.0;
    }
  }
  return DepthMap(target_w, target_h, std::move(out));
}

double labeled_loss(const DepthMap& pred, const DepthMap& gt) {
  require_same_shape(pred, gt, "labeled_loss");
  const auto p = pred.values();
  const auto g = gt.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    sum += std::abs(p[k] - g[k]);
  }
  return sum / static_cast<double>(p.size());
}

double pseudo_loss(const DepthMap& pred, const DepthMap& pseudo) {
  require_same_shape(pred, pseudo, "pseudo_loss");
  return labeled_loss(pred, pseudo);
}

double cutmix_loss(const DepthMap& pred_mixed, const DepthMap& pseudo_a, const DepthMap& pseudo_b,
                   const RegionMask& mask) {
  require_same_shape(pred_mixed, pseudo_a, "cutmix_loss");
  require_same_shape(pred_mixed, pseudo_b, "cutmix_loss");
  if (mask.width != pred_mixed.width() || mask.height != pred_mixed.height() ||
      mask.selected.size() != pred_mixed.size()) {
    throw DepthError("cutmix_loss: mask dimension mismatch");
  }
  const auto p = pred_mixed.values();
  const auto a = pseudo_a.values();
  const auto b = pseudo_b.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    sum += mask.selected[k] ? std::abs(p[k] - a[k]) : std::abs(p[k] - b[k]);
  }
  return sum / static_cast<double>(p.size());
}

double unlabeled_loss(double pseudo_component, double cutmix_component) {
  require_non_negative(pseudo_component, "pseudo component");
  require_non_negative(cutmix_component, "cutmix component");
  return pseudo_component + cutmix_component;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DepthError("cosine_similarity: dimension mismatch");
  }
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  if (aa == 0.0 || bb == 0.0) {
    throw DepthError("cosine similarity of a zero-norm vector is undefined");
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

double align_loss(const FeatureSet& feats, const FeatureSet& pre_feats, double alpha) {
  if (feats.count() != pre_feats.count() || feats.dim() != pre_feats.dim()) {
    throw DepthError("align_loss: feature set shape mismatch");
  }
  if (feats.count() == 0) {
    throw DepthError("align_loss: empty feature set");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < feats.count(); ++i) {
    sum += std::max(0.0, alpha - cosine_similarity(feats.row(i), pre_feats.row(i)));
  }
  return sum / static_cast<double>(feats.count());
}

double total_loss(double l_labeled, double l_unlabeled, double l_align,
                  const LossWeights& weights) {
  require_non_negative(l_labeled, "labeled component");
  require_non_negative(l_unlabeled, "unlabeled component");
  require_non_negative(l_align, "alignment component");
  weights.validate();
  return l_labeled + l_unlabeled + weights.lambda * l_align;
}

AffineFit fit_affine(const DepthMap& pred, const DepthMap& ref) {
  require_same_shape(pred, ref, "fit_affine");
  const auto p = pred.values();
  const auto r = ref.values();
  const auto [lo, hi] = min_max(p);
  if (lo == hi) {
    throw DepthError("fit_affine: prediction has zero variance, scale is undefined");
  }
  const auto n = static_cast<double>(p.size());
  double mean_p = 0.0;
  double mean_r = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    mean_p += p[k];
    mean_r += r[k];
  }
  mean_p /= n;
  mean_r /= n;
  double cov = 0.0;
  double var = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double dp = p[k] - mean_p;
    cov += dp * (r[k] - mean_r);
    var += dp * dp;
  }
  AffineFit fit;
  fit.scale = cov / var;
  fit.shift = mean_r - fit.scale * mean_p;
  return fit;
}

DepthMap apply_affine(const DepthMap& map, const AffineFit& fit) {
  std::vector<double> out(map.values().begin(), map.values().end());
  for (double& v : out) {
    v = fit.scale * v + fit.shift;
    if (v < 0.0) {
      throw DepthError("affine alignment produced a negative depth");
    }
  }
  return DepthMap(map.width(), map.height(), std::move(out));
}

double aligned_mae(const DepthMap& pred, const DepthMap& ref, const AffineFit& fit) {
  require_same_shape(pred, ref, "aligned_mae");
  const auto p = pred.values();
  const auto r = ref.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    sum += std::abs(fit.scale * p[k] + fit.shift - r[k]);
  }
  return sum / static_cast<double>(p.size());
}

const std::array<Rgb, 256>& depth_gradient() {
  static const std::array<Rgb, 256> table = load_gradient();
  return table;
}

std::size_t gradient_index(double normalized) {
  const long idx = std::lround(std::clamp(normalized, 0.0, 1.0) * 255.0);
  return static_cast<std::size_t>(std::clamp(idx, 0L, 255L));
}

RgbImage colorize(const DepthMap& map) {
  const auto& table = depth_gradient();
  const auto values = map.values();
  const auto [lo, hi] = min_max(values);
  const double range = hi - lo;
  RgbImage image{map.width(), map.height(), {}};
  image.pixels.reserve(values.size());
  for (const double v : values) {
    const double normalized = range > 0.0 ? (v - lo) / range : 0.0;
    image.pixels.push_back(table[gradient_index(normalized)]);
  }
  return image;
}

}  // namespace skimmer::depth
