#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "rdsbench/assemble.hpp"
#include "rdsbench/manifest.hpp"
#include "rdsbench/png_io.hpp"
#include "rdsbench/rng.hpp"

namespace rdsbench {

// Synthetic data so the whole suite runs without external datasets: random
// rectangle/ellipse masks on a configurable canvas, plus flat gray images.
struct SyntheticOptions {
  int n_samples = 50;
  int canvas_width = 32;
  int canvas_height = 32;
  double positive_fraction = 0.6;
  double volume_fraction = 0.5; // share of CT/MRI records grouped into volumes
  std::uint64_t seed = 0;
};

namespace detail {

inline void paint_rect(BinaryMask& m, int x0, int y0, int x1, int y1) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) m.set(x, y, true);
}

inline void paint_ellipse(BinaryMask& m, double cx, double cy, double rx, double ry) {
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      const double dx = (x - cx) / rx;
      const double dy = (y - cy) / ry;
      if (dx * dx + dy * dy <= 1.0) m.set(x, y, true);
    }
}

// A random non-empty shape occupying roughly the middle of the canvas.
inline BinaryMask random_shape(Rng& rng, int w, int h, bool small) {
  BinaryMask m(w, h);
  const int max_w = small ? std::max(2, w / 4) : std::max(3, w / 2);
  const int max_h = small ? std::max(2, h / 4) : std::max(3, h / 2);
  const int sw = 2 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_w - 1)));
  const int sh = 2 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_h - 1)));
  const int x0 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(w - sw)));
  const int y0 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(h - sh)));
  if (rng.uniform_below(2) == 0) {
    paint_rect(m, x0, y0, x0 + sw - 1, y0 + sh - 1);
  } else {
    paint_ellipse(m, x0 + sw / 2.0, y0 + sh / 2.0, sw / 2.0 + 0.5, sh / 2.0 + 0.5);
  }
  return m;
}

struct LabelPool {
  std::string organ;
  std::vector<std::string> organ_synonyms;
  std::string abnormality;
  std::vector<std::string> abnormality_synonyms;
};

inline const std::vector<LabelPool>& pools_for(Modality m) {
  static const std::vector<LabelPool> xray = {
      {"lung", {"lung", "lungs"}, "COVID-19", {"COVID-19", "covid 19 infection"}},
      {"lung", {"lung", "lungs"}, "non-COVID infection", {"non-COVID infection", "viral pneumonia"}},
  };
  static const std::vector<LabelPool> ct = {
      {"liver", {"liver", "hepatic organ"}, "liver tumour", {"liver tumour", "liver tumor"}},
      {"pancreas", {"pancreas"}, "pancreas tumour", {"pancreas tumour", "pancreas tumor"}},
  };
  static const std::vector<LabelPool> mri = {
      {"spleen", {"spleen"}, "spleen lesion", {"spleen lesion"}},
  };
  switch (m) {
    case Modality::xray: return xray;
    case Modality::ct: return ct;
    case Modality::mri: return mri;
  }
  return xray;
}

} // namespace detail

// Writes images/, masks/, and manifest.json under dir and returns the loaded
// manifest. Deterministic for a fixed option set.
inline DatasetManifest generate_synthetic_manifest(const std::filesystem::path& dir,
                                                   const SyntheticOptions& opts) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "masks");

  DatasetManifest manifest;
  manifest.task_kind = TaskKind::vqa_seg;
  manifest.base_dir = dir;

  Rng rng(opts.seed, "synthetic_manifest");
  const int w = opts.canvas_width;
  const int h = opts.canvas_height;

  int volume_counter = 0;
  int remaining_in_volume = 0;
  std::string current_volume;

  for (int i = 0; i < opts.n_samples; ++i) {
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "s%05d", i);
    SourceRecord rec;
    rec.id = idbuf;
    rec.image_path = "images/" + rec.id + ".png";

    const auto mod_draw = rng.uniform_below(3);
    rec.modality = mod_draw == 0 ? Modality::xray : (mod_draw == 1 ? Modality::ct : Modality::mri);

    // Group consecutive CT/MRI records into 2-4 slice volumes.
    if (rec.modality != Modality::xray && rng.unit_real() < opts.volume_fraction) {
      if (remaining_in_volume == 0) {
        current_volume = "vol" + std::to_string(volume_counter++);
        remaining_in_volume = 2 + static_cast<int>(rng.uniform_below(3));
      }
      rec.volume_id = current_volume;
      --remaining_in_volume;
    } else {
      remaining_in_volume = 0;
    }

    std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * h, 96);

    if (rng.unit_real() < opts.positive_fraction) {
      const auto& pools = detail::pools_for(rec.modality);
      const auto& pool = pools[rng.uniform_below(pools.size())];
      rec.finding.positive = true;
      rec.finding.label = pool.abnormality;

      BinaryMask organ = detail::random_shape(rng, w, h, /*small=*/false);
      BinaryMask abn = detail::random_shape(rng, w, h, /*small=*/true);

      SegTarget organ_t;
      organ_t.name = pool.organ;
      organ_t.synonyms = pool.organ_synonyms;
      organ_t.kind = TargetKind::organ;
      organ_t.mask_path = "masks/" + rec.id + "_organ.png";
      organ_t.normalize();

      SegTarget abn_t;
      abn_t.name = pool.abnormality;
      abn_t.synonyms = pool.abnormality_synonyms;
      abn_t.kind = TargetKind::abnormality;
      abn_t.mask_path = "masks/" + rec.id + "_abn.png";
      abn_t.normalize();

      save_mask(organ, dir / organ_t.mask_path);
      save_mask(abn, dir / abn_t.mask_path);
      rec.targets = {organ_t, abn_t};

      for (std::size_t p = 0; p < gray.size(); ++p)
        if (organ.bits[p]) gray[p] = 160;
    }

    save_gray_png(gray, w, h, dir / rec.image_path);
    manifest.samples.push_back(std::move(rec));
  }

  save_manifest(manifest, dir / "manifest.json");
  return manifest;
}

} // namespace rdsbench
