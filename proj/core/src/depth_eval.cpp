#include "skimmer/depth_eval.hpp"

#include <algorithm>
#include <sstream>

#include "skimmer/config.hpp"
#include "skimmer/depth_io.hpp"

namespace skimmer::depth {

namespace {

namespace fs = std::filesystem;

bool is_depth_file(const fs::path& p) {
  const auto ext = p.extension();
  return ext == ".pgm" || ext == ".txt" || ext == ".depth";
}

std::vector<fs::path> list_frames(const fs::path& dir, std::vector<std::string>& problems) {
  std::vector<fs::path> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    problems.push_back("frames directory " + dir.string() + " does not exist");
    return out;
  }
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && is_depth_file(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) problems.push_back("no depth frames (.pgm, .txt, .depth) in " + dir.string());
  return out;
}

template <class Fn>
auto attempt(std::vector<std::string>& problems, Fn&& fn) -> std::optional<decltype(fn())> {
  try {
    return fn();
  } catch (const std::exception& e) {
    problems.push_back(e.what());
    return std::nullopt;
  }
}

struct FrameInputs {
  std::string name;
  DepthMap pred;
  DepthMap ref;
  DepthMap pseudo;
  std::optional<FeatureSet> feats;
  std::optional<FeatureSet> pre_feats;
};

std::string join(const std::vector<std::string>& lines) {
  std::string out = "depth evaluation input problems:";
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

}  // namespace

DepthEvalResult evaluate_depth(const DepthEvalOptions& opt) {
  std::vector<std::string> problems;
  try {
    opt.weights.validate();
  } catch (const DepthError& e) {
    throw DepthEvalError(join({e.what()}));
  }
  if (opt.features_dir.has_value() != opt.pre_features_dir.has_value()) {
    problems.push_back("features and pre-features directories must be given together");
  }
  std::error_code ec;
  if (!fs::is_directory(opt.refs_dir, ec)) {
    problems.push_back("refs directory " + opt.refs_dir.string() + " does not exist");
  }
  if (opt.pseudo_dir && !fs::is_directory(*opt.pseudo_dir, ec)) {
    problems.push_back("pseudo directory " + opt.pseudo_dir->string() + " does not exist");
  }
  const auto frames = list_frames(opt.frames_dir, problems);
  if (!problems.empty()) throw DepthEvalError(join(problems));

  // Raw reads; every missing or malformed file is collected.
  struct Raw {
    fs::path frame;
    std::optional<DepthMap> pred, ref, pseudo;
    std::optional<FeatureSet> feats, pre;
  };
  std::vector<Raw> raws;
  for (const auto& f : frames) {
    Raw raw{f, {}, {}, {}, {}, {}};
    const auto name = f.filename();
    auto need = [&](const fs::path& dir, const char* what) -> std::optional<fs::path> {
      const fs::path p = dir / name;
      if (!fs::is_regular_file(p, ec)) {
        problems.push_back(std::string("missing ") + what + " for " + name.string() + ": " +
                           p.string());
        return std::nullopt;
      }
      return p;
    };
    raw.pred = attempt(problems, [&] { return read_depth_map(f); });
    if (auto p = need(opt.refs_dir, "reference")) {
      raw.ref = attempt(problems, [&] { return read_depth_map(*p); });
    }
    if (opt.pseudo_dir) {
      if (auto p = need(*opt.pseudo_dir, "pseudo label")) {
        raw.pseudo = attempt(problems, [&] { return read_depth_map(*p); });
      }
    } else {
      raw.pseudo = raw.ref;
    }
    if (opt.features_dir && opt.pre_features_dir) {
      const fs::path feat_name = f.stem().string() + ".feat";
      for (auto [dir, slot] : {std::pair{*opt.features_dir, &raw.feats},
                               std::pair{*opt.pre_features_dir, &raw.pre}}) {
        const fs::path p = dir / feat_name;
        if (!fs::is_regular_file(p, ec)) {
          problems.push_back("missing features for " + name.string() + ": " + p.string());
        } else {
          *slot = attempt(problems, [&] { return read_feature_set(p); });
        }
      }
    }
    raws.push_back(std::move(raw));
  }
  if (!problems.empty()) throw DepthEvalError(join(problems));

  // Geometry: target size from the options or the first (cropped) frame.
  std::size_t w = 0;
  std::size_t h = 0;
  if (opt.width && opt.height) {
    w = *opt.width;
    h = *opt.height;
  } else if (opt.crop) {
    w = opt.width.value_or(opt.crop->width);
    h = opt.height.value_or(opt.crop->height);
  } else {
    w = opt.width.value_or(raws.front().pred->width());
    h = opt.height.value_or(raws.front().pred->height());
  }
  if (w == 0 || h == 0) throw DepthEvalError(join({"target dimensions must be >= 1"}));

  std::vector<FrameInputs> inputs;
  for (auto& raw : raws) {
    const std::string name = raw.frame.filename().string();
    auto prep = [&](const DepthMap& m, bool normalize, const char* what) {
      return attempt(problems, [&] {
        try {
          return preprocess(m, w, h, opt.crop, normalize);
        } catch (const std::exception& e) {
          throw DepthEvalError(std::string(what) + " " + name + ": " + e.what());
        }
      });
    };
    auto pred = prep(*raw.pred, true, "frame");
    auto ref = prep(*raw.ref, false, "reference");
    auto pseudo = prep(*raw.pseudo, false, "pseudo label");
    if (pred && ref && pseudo) {
      inputs.push_back({name, std::move(*pred), std::move(*ref), std::move(*pseudo),
                        std::move(raw.feats), std::move(raw.pre)});
    }
  }
  if (!problems.empty()) throw DepthEvalError(join(problems));

  RegionMask mask = RegionMask::box(w, h, w / 4, h / 4, std::max<std::size_t>(1, w / 2),
                                    std::max<std::size_t>(1, h / 2));
  if (opt.mask_path) {
    auto loaded = attempt(problems, [&] { return read_region_mask(*opt.mask_path); });
    if (loaded && (loaded->width != w || loaded->height != h)) {
      problems.push_back("mask " + opt.mask_path->string() + " is " +
                         std::to_string(loaded->width) + "x" + std::to_string(loaded->height) +
                         ", frames are " + std::to_string(w) + "x" + std::to_string(h));
    } else if (loaded) {
      mask = std::move(*loaded);
    }
  }
  if (!problems.empty()) throw DepthEvalError(join(problems));

  DepthEvalResult result;
  const std::size_t n = inputs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const FrameInputs& a = inputs[i];
    const FrameInputs& b = inputs[(i + 1) % n];
    auto metrics = attempt(problems, [&] {
      try {
        FrameMetrics m;
        m.frame = a.name;
        m.l_labeled = labeled_loss(a.pred, a.ref);
        m.l_pseudo = pseudo_loss(a.pred, a.pseudo);
        std::vector<double> mixed(w * h);
        for (std::size_t k = 0; k < mixed.size(); ++k) {
          mixed[k] = mask.selected[k] ? a.pred.values()[k] : b.pred.values()[k];
        }
        m.l_cutmix = cutmix_loss(DepthMap(w, h, std::move(mixed)), a.pseudo, b.pseudo, mask);
        if (a.feats && a.pre_feats) m.l_align = align_loss(*a.feats, *a.pre_feats, opt.weights.alpha);
        m.l_total = total_loss(m.l_labeled, unlabeled_loss(m.l_pseudo, m.l_cutmix), m.l_align,
                               opt.weights);
        m.fit = fit_affine(a.pred, a.ref);
        m.aligned_mae = aligned_mae(a.pred, a.ref, m.fit);
        return m;
      } catch (const std::exception& e) {
        throw DepthEvalError("frame " + a.name + ": " + e.what());
      }
    });
    if (metrics) {
      result.frames.push_back(std::move(*metrics));
      result.images.push_back(colorize(a.pred));
    }
  }
  if (!problems.empty()) throw DepthEvalError(join(problems));
  return result;
}

std::string metrics_csv(const std::vector<FrameMetrics>& frames) {
  std::ostringstream out;
  out << "frame,l_labeled,l_pseudo,l_cutmix,l_align,l_total,scale,shift,aligned_mae\n";
  for (const auto& m : frames) {
    out << m.frame;
    for (double v : {m.l_labeled, m.l_pseudo, m.l_cutmix, m.l_align, m.l_total, m.fit.scale,
                     m.fit.shift, m.aligned_mae}) {
      out << ',' << format_number(v);
    }
    out << '\n';
  }
  return out.str();
}

DepthEvalResult run_depth_eval(const DepthEvalOptions& opt) {
  DepthEvalResult result = evaluate_depth(opt);
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) throw DepthEvalError("cannot create output directory " + opt.out_dir.string());
  write_file(opt.out_dir / "metrics.csv", metrics_csv(result.frames));
  for (std::size_t i = 0; i < result.frames.size(); ++i) {
    const fs::path stem = fs::path(result.frames[i].frame).stem();
    write_file(opt.out_dir / (stem.string() + ".ppm"), format_ppm(result.images[i]));
  }
  return result;
}

}  // namespace skimmer::depth
