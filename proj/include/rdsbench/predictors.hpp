#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "rdsbench/assemble.hpp"
#include "rdsbench/eval.hpp"
#include "rdsbench/rng.hpp"

namespace rdsbench {

// Reference predictors: they replay or distort ground truth through the
// prediction-file contract to give the evaluator known fixed points and
// bounds. The oracle is the perfect-score fixed point.
struct PredictorPolicy {
  enum class Kind { oracle, always_negative, always_positive, constant_mask, noisy_oracle };
  enum class LabelMode { gt, fixed };
  enum class Fill { empty, full };

  Kind kind = Kind::oracle;
  LabelMode label_mode = LabelMode::gt;
  std::string fixed_label = "abnormality";
  Fill fill = Fill::empty;
  double flip_prob = 0.0;
  std::uint64_t seed = 0;

  static PredictorPolicy parse(std::string_view name) {
    PredictorPolicy p;
    if (name == "oracle")
      p.kind = Kind::oracle;
    else if (name == "always-negative" || name == "always_negative")
      p.kind = Kind::always_negative;
    else if (name == "always-positive" || name == "always_positive")
      p.kind = Kind::always_positive;
    else if (name == "constant-mask" || name == "constant_mask")
      p.kind = Kind::constant_mask;
    else if (name == "noisy-oracle" || name == "noisy_oracle")
      p.kind = Kind::noisy_oracle;
    else
      throw FormatError("unknown predictor policy: " + std::string(name));
    return p;
  }
};

namespace detail {

inline PredictionRecord oracle_record(const VqaSegSample& sample, const DatasetManifest& manifest,
                                      const TemplateSet& templates) {
  PredictionRecord rec;
  rec.sample_id = sample.id;
  rec.answer = render_gt_answer(sample, templates);
  for (std::size_t i = 0; i < sample.gt_targets.size(); ++i) {
    const BinaryMask gt = load_mask(manifest.resolve(sample.gt_targets[i].mask_path));
    rec.masks.push_back(rle_encode(gt, seg_token_name(static_cast<int>(i))));
  }
  return rec;
}

inline std::string fixed_positive_answer(const PredictorPolicy& policy,
                                         const VqaSegSample& sample) {
  const std::string label = policy.label_mode == PredictorPolicy::LabelMode::gt &&
                                    sample.gt_diagnosis
                                ? sample.gt_diagnosis->label
                                : policy.fixed_label;
  return "1. Yes. 2. There is " + label + ".";
}

} // namespace detail

// Generates one prediction per sample under the given policy. Output lines
// are ordered by sample id; generation is deterministic for a fixed policy.
inline void write_predictions(const DatasetManifest& manifest, const PredictorPolicy& policy,
                              std::ostream& out,
                              const TemplateSet& templates = TemplateSet::defaults()) {
  if (manifest.task_kind != TaskKind::vqa_seg)
    throw Error("reference predictors require a vqa_seg manifest");

  std::vector<VqaSegSample> samples = render_all_samples(manifest, templates);
  std::sort(samples.begin(), samples.end(),
            [](const VqaSegSample& a, const VqaSegSample& b) { return a.id < b.id; });

  for (const auto& sample : samples) {
    PredictionRecord rec;
    switch (policy.kind) {
      case PredictorPolicy::Kind::oracle:
        rec = detail::oracle_record(sample, manifest, templates);
        break;
      case PredictorPolicy::Kind::always_negative:
        rec.sample_id = sample.id;
        rec.answer = templates.negative_answer;
        break;
      case PredictorPolicy::Kind::always_positive:
        rec.sample_id = sample.id;
        rec.answer = detail::fixed_positive_answer(policy, sample);
        break;
      case PredictorPolicy::Kind::constant_mask: {
        rec = detail::oracle_record(sample, manifest, templates);
        for (auto& m : rec.masks) {
          BinaryMask constant(m.width, m.height,
                              policy.fill == PredictorPolicy::Fill::full ? 1 : 0);
          const std::string token = m.token_name;
          m = rle_encode(constant, token);
        }
        break;
      }
      case PredictorPolicy::Kind::noisy_oracle: {
        Rng rng(policy.seed, sample.id);
        const bool flip = rng.bernoulli(policy.flip_prob);
        if (!flip) {
          rec = detail::oracle_record(sample, manifest, templates);
        } else if (sample.gt_detection) {
          rec.sample_id = sample.id;
          rec.answer = templates.negative_answer;
        } else {
          rec.sample_id = sample.id;
          rec.answer = "1. Yes. 2. There is " + policy.fixed_label + ".";
        }
        break;
      }
    }
    out << prediction_to_json(rec).dump() << "\n";
  }
}

inline void write_predictions_file(const DatasetManifest& manifest, const PredictorPolicy& policy,
                                   const std::filesystem::path& path,
                                   const TemplateSet& templates = TemplateSet::defaults()) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write prediction file: " + path.string());
  write_predictions(manifest, policy, out, templates);
}

} // namespace rdsbench
