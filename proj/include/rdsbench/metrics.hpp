#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdsbench/answer.hpp"
#include "rdsbench/error.hpp"
#include "rdsbench/mask.hpp"
#include "rdsbench/text.hpp"

namespace rdsbench {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
};

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Any 0/0 quotient is defined as 0 so degenerate predictors score 0 instead
// of crashing.
inline PrecisionRecallF1 precision_recall_f1(const ConfusionCounts& c) {
  if (c.tp < 0 || c.fp < 0 || c.fn < 0 || c.tn < 0)
    throw Error("confusion counts must be non-negative");
  PrecisionRecallF1 r;
  r.precision = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  r.recall = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

// Dice = 2|P n G| / (|P| + |G|); both masks empty scores 1.0 (a correct
// "nothing to segment" is not penalized).
inline double dice_score(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_dims(pred.width, pred.height, gt.width, gt.height, "dice_score");
  std::uint64_t inter = 0, p = 0, g = 0;
  for (std::size_t i = 0; i < pred.bits.size(); ++i) {
    const bool bp = pred.bits[i] != 0;
    const bool bg = gt.bits[i] != 0;
    inter += bp && bg;
    p += bp;
    g += bg;
  }
  if (p + g == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(p + g);
}

// Per-sample correctness of the joint detection + diagnosis answer:
// 1 iff (GT negative and the parsed detection is "no") or (GT positive, the
// parsed detection is "yes", and the diagnostic label occurs in the
// diagnosis segment). Invalid detection always scores 0.
inline int diagnosis_indicator(bool gt_detection, const std::optional<std::string>& gt_label,
                               const ParsedAnswer& parsed,
                               const std::vector<std::string>& synonyms) {
  if (!gt_detection) return parsed.detection == Detection::no ? 1 : 0;
  if (!gt_label || gt_label->empty()) throw Error("positive sample requires a diagnosis label");
  if (parsed.detection != Detection::yes) return 0;
  const std::string& segment =
      parsed.diagnosis_segment ? *parsed.diagnosis_segment : parsed.raw;
  return match_diagnosis(segment, *gt_label, synonyms) ? 1 : 0;
}

// F1 of a 0/1 correctness vector against the all-ones truth vector. With
// a = mean(v) this equals 2a/(1+a); computed here through the confusion
// counts so the identity stays a checkable property rather than the
// implementation.
inline double diagnosis_f1(const std::vector<int>& indicators) {
  if (indicators.empty()) throw Error("diagnosis_f1 requires a non-empty vector");
  ConfusionCounts c;
  for (int v : indicators) {
    if (v != 0 && v != 1) throw Error("indicators must be 0 or 1");
    if (v == 1)
      ++c.tp; // predicted correct, truth is 1
    else
      ++c.fn; // predicted wrong, truth is 1
  }
  return precision_recall_f1(c).f1;
}

inline constexpr double kBceEpsilon = 1e-7;
inline constexpr double kDiceSmoothing = 1e-6;

// Mean pixel-level binary cross-entropy with probabilities clamped to
// [eps, 1-eps]. Summation is an index-keyed pairwise tree, so results do not
// depend on evaluation chunking.
inline double bce_pixel_loss(const ProbMask& pred, const BinaryMask& gt) {
  require_same_dims(pred.width, pred.height, gt.width, gt.height, "bce_pixel_loss");
  if (pred.size() == 0) return 0.0;
  const double total = pairwise_sum(std::size_t{0}, pred.size(), [&](std::size_t i) {
    double p = pred.probs[i];
    if (p < kBceEpsilon) p = kBceEpsilon;
    if (p > 1.0 - kBceEpsilon) p = 1.0 - kBceEpsilon;
    const double m = gt.bits[i] ? 1.0 : 0.0;
    return -(m * std::log(p) + (1.0 - m) * std::log(1.0 - p));
  });
  return total / static_cast<double>(pred.size());
}

// Soft Dice loss: 1 - (2 sum(p*m) + s) / (sum(p) + sum(m) + s).
inline double dice_loss(const ProbMask& pred, const BinaryMask& gt) {
  require_same_dims(pred.width, pred.height, gt.width, gt.height, "dice_loss");
  const double inter = pairwise_sum(std::size_t{0}, pred.size(), [&](std::size_t i) {
    return gt.bits[i] ? pred.probs[i] : 0.0;
  });
  const double psum =
      pairwise_sum(std::size_t{0}, pred.size(), [&](std::size_t i) { return pred.probs[i]; });
  const double gsum = pairwise_sum(std::size_t{0}, gt.size(), [&](std::size_t i) {
    return gt.bits[i] ? 1.0 : 0.0;
  });
  return 1.0 - (2.0 * inter + kDiceSmoothing) / (psum + gsum + kDiceSmoothing);
}

struct LossWeights {
  double lambda_text = 1.0;
  double lambda_seg = 1.0;
  double lambda_bce = 2.0;
  double lambda_dice = 0.5;

  void validate() const {
    if (lambda_text < 0 || lambda_seg < 0 || lambda_bce < 0 || lambda_dice < 0)
      throw Error("loss weights must be non-negative");
  }
};

inline double seg_loss(const ProbMask& pred, const BinaryMask& gt, const LossWeights& w) {
  w.validate();
  return w.lambda_bce * bce_pixel_loss(pred, gt) + w.lambda_dice * dice_loss(pred, gt);
}

// Composite objective over a supplied text-loss scalar and a segmentation
// loss value.
inline double total_loss(double l_text, double l_seg, const LossWeights& w) {
  w.validate();
  if (l_text < 0 || l_seg < 0) throw Error("loss terms must be non-negative");
  return w.lambda_text * l_text + w.lambda_seg * l_seg;
}

struct OpenQScores {
  int exact_acc = 0;    // 1 iff normalized strings are equal
  double token_recall = 0.0; // multiset word recall against the GT answer
};

inline OpenQScores open_q_scores(std::string_view gt_answer, std::string_view pred_answer) {
  const std::string gt_norm = normalize_open_answer(gt_answer);
  if (gt_norm.empty()) throw Error("open_q_scores requires a non-empty ground-truth answer");
  const std::string pred_norm = normalize_open_answer(pred_answer);

  OpenQScores s;
  s.exact_acc = gt_norm == pred_norm ? 1 : 0;

  std::map<std::string, std::int64_t> pred_counts;
  for (auto& w : split_words(pred_norm)) ++pred_counts[w];
  const auto gt_words = split_words(gt_norm);
  std::int64_t hit = 0;
  for (const auto& w : gt_words) {
    auto it = pred_counts.find(w);
    if (it != pred_counts.end() && it->second > 0) {
      ++hit;
      --it->second;
    }
  }
  s.token_recall = static_cast<double>(hit) / static_cast<double>(gt_words.size());
  return s;
}

} // namespace rdsbench
