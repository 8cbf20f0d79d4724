#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "rdsbench/answer.hpp"
#include "rdsbench/assemble.hpp"
#include "rdsbench/hash.hpp"
#include "rdsbench/manifest.hpp"
#include "rdsbench/metrics.hpp"
#include "rdsbench/png_io.hpp"
#include "rdsbench/rle.hpp"
#include "rdsbench/version.hpp"

namespace rdsbench {

// --- prediction files --------------------------------------------------------

// One model answer plus transported masks, joined to samples by id.
struct PredictionRecord {
  std::string sample_id;
  std::string answer;
  std::vector<TransportedMask> masks;
};

inline Json prediction_to_json(const PredictionRecord& p) {
  Json j = Json::object();
  j["sample_id"] = p.sample_id;
  j["answer"] = p.answer;
  Json masks = Json::array();
  for (const auto& m : p.masks) {
    Json mj = Json::object();
    mj["token"] = m.token_name;
    mj["width"] = m.width;
    mj["height"] = m.height;
    mj["rle"] = m.rle;
    masks.push_back(std::move(mj));
  }
  j["masks"] = std::move(masks);
  return j;
}

inline PredictionRecord prediction_from_json(const Json& j) {
  PredictionRecord p;
  p.sample_id = j.at("sample_id").get<std::string>();
  if (p.sample_id.empty()) throw FormatError("prediction with empty sample_id");
  p.answer = j.at("answer").get<std::string>();
  if (j.contains("masks")) {
    for (const auto& mj : j["masks"]) {
      TransportedMask m;
      m.token_name = mj.at("token").get<std::string>();
      m.width = mj.at("width").get<int>();
      m.height = mj.at("height").get<int>();
      m.rle = mj.at("rle").get<std::vector<std::uint64_t>>();
      for (const auto& existing : p.masks)
        if (existing.token_name == m.token_name)
          throw FormatError("duplicate mask token " + m.token_name);
      p.masks.push_back(std::move(m));
    }
  }
  return p;
}

struct PredictionSet {
  std::map<std::string, PredictionRecord> by_id; // duplicate ids: last wins
  std::int64_t malformed_lines = 0;
  std::int64_t duplicate_ids = 0;
  std::vector<std::string> warnings;

  const PredictionRecord* find(const std::string& id) const {
    auto it = by_id.find(id);
    return it == by_id.end() ? nullptr : &it->second;
  }
};

inline PredictionSet parse_predictions(std::istream& in) {
  PredictionSet set;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      PredictionRecord rec = prediction_from_json(Json::parse(line));
      auto [it, inserted] = set.by_id.insert_or_assign(rec.sample_id, std::move(rec));
      if (!inserted) {
        ++set.duplicate_ids;
        if (set.warnings.size() < 20)
          set.warnings.push_back("line " + std::to_string(line_no) +
                                 ": duplicate sample_id, keeping the later record");
      }
    } catch (const std::exception& e) {
      ++set.malformed_lines;
      if (set.warnings.size() < 20)
        set.warnings.push_back("line " + std::to_string(line_no) +
                               ": malformed prediction (" + e.what() + ")");
    }
  }
  return set;
}

inline PredictionSet load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open prediction file: " + path.string());
  return parse_predictions(in);
}

// --- per-sample verdicts -----------------------------------------------------

// Amputated-evaluation modes: the full gated task, or one of its decomposed
// steps for models that cannot perform the whole task.
enum class EvalMode { full, detect_only, diagnose_only, diagnose_seg };

inline std::string eval_mode_key(EvalMode m) {
  switch (m) {
    case EvalMode::full: return "full";
    case EvalMode::detect_only: return "detect-only";
    case EvalMode::diagnose_only: return "diagnose-only";
    case EvalMode::diagnose_seg: return "diagnose-seg";
  }
  throw Error("unknown eval mode");
}

inline EvalMode parse_eval_mode(std::string_view s) {
  if (s == "full") return EvalMode::full;
  if (s == "detect-only" || s == "detect_only") return EvalMode::detect_only;
  if (s == "diagnose-only" || s == "diagnose_only") return EvalMode::diagnose_only;
  if (s == "diagnose-seg" || s == "diagnose_seg") return EvalMode::diagnose_seg;
  throw FormatError("unknown eval mode: " + std::string(s));
}

inline bool mode_scores_detection(EvalMode m) {
  return m == EvalMode::full || m == EvalMode::detect_only;
}
inline bool mode_scores_diagnosis(EvalMode m) { return m != EvalMode::detect_only; }
inline bool mode_scores_segmentation(EvalMode m) {
  return m == EvalMode::full || m == EvalMode::diagnose_seg;
}

enum class Gate { passed, failed_detection, failed_diagnosis, failed_binding, missing_prediction };

inline std::string gate_key(Gate g) {
  switch (g) {
    case Gate::passed: return "passed";
    case Gate::failed_detection: return "failed_detection";
    case Gate::failed_diagnosis: return "failed_diagnosis";
    case Gate::failed_binding: return "failed_binding";
    case Gate::missing_prediction: return "missing_prediction";
  }
  throw Error("unknown gate");
}

// Scoring outcome of one sample. Failure at an earlier step zeroes every
// later step: dice present => diagnosis correct => detection correct.
struct SampleVerdict {
  std::string sample_id;
  Detection detection_pred = Detection::invalid;
  bool detection_correct = false;
  int diagnosis_correct = 0;
  Gate gate = Gate::missing_prediction;
  std::map<TargetKind, double> dice_by_kind; // only gate == passed, GT-positive
  int invalid_mask_count = 0;                // dimension-mismatched predicted masks
  std::optional<std::string> note;           // binding-error detail
};

// Loads the ground-truth mask of a target; injectable for in-memory tests.
using GtMaskLoader = std::function<BinaryMask(const SegTarget&)>;

inline GtMaskLoader file_mask_loader(const DatasetManifest& manifest) {
  return [base = manifest.base_dir](const SegTarget& t) {
    std::filesystem::path p(t.mask_path);
    return load_mask(p.is_absolute() ? p : base / p);
  };
}

namespace detail {

inline void score_segmentation(const VqaSegSample& sample, const PredictionRecord& pred,
                               const ParsedAnswer& parsed, const GtMaskLoader& load_gt,
                               SampleVerdict& v) {
  const BindResult bound = bind_masks(parsed.seg_refs, pred.masks, sample.gt_targets);
  if (const auto* err = std::get_if<BindingError>(&bound)) {
    v.gate = Gate::failed_binding;
    v.note = err->describe();
    return;
  }
  v.gate = Gate::passed;

  // Mean per kind; the three-step task carries exactly one organ and one
  // abnormality target, but the binding contract allows any count.
  std::map<TargetKind, std::vector<double>> per_kind;
  for (const auto& b : std::get<std::vector<Binding>>(bound)) {
    const SegTarget& target = sample.gt_targets[b.target_index];
    const BinaryMask gt = load_gt(target);
    BinaryMask predicted;
    try {
      predicted = rle_decode(pred.masks[b.mask_index]);
    } catch (const FormatError&) {
      ++v.invalid_mask_count;
      continue;
    }
    if (!predicted.same_dims(gt)) {
      ++v.invalid_mask_count;
      continue;
    }
    per_kind[target.kind].push_back(dice_score(predicted, gt));
  }
  for (const auto& [kind, values] : per_kind) {
    double sum = 0.0;
    for (double d : values) sum += d;
    v.dice_by_kind[kind] = sum / static_cast<double>(values.size());
  }
}

} // namespace detail

// Applies the gated three-step scoring to one sample. All failure modes are
// verdict states; the only exceptions thrown are for unreadable GT inputs.
inline SampleVerdict evaluate_sample(const VqaSegSample& sample, const PredictionRecord* pred,
                                     EvalMode mode, const GtMaskLoader& load_gt) {
  SampleVerdict v;
  v.sample_id = sample.id;
  if (!pred) {
    v.gate = Gate::missing_prediction;
    return v;
  }

  const ParsedAnswer parsed = parse_answer(pred->answer);
  v.detection_pred = parsed.detection;
  v.detection_correct = (sample.gt_detection && parsed.detection == Detection::yes) ||
                        (!sample.gt_detection && parsed.detection == Detection::no);

  if (mode == EvalMode::detect_only) {
    v.gate = v.detection_correct ? Gate::passed : Gate::failed_detection;
    return v;
  }

  const std::optional<std::string> label =
      sample.gt_diagnosis ? std::optional<std::string>(sample.gt_diagnosis->label) : std::nullopt;
  const std::vector<std::string> synonyms =
      sample.gt_diagnosis ? sample.gt_diagnosis->synonyms : std::vector<std::string>{};

  if (mode == EvalMode::full) {
    // Step 1: detection gate.
    if (!v.detection_correct) {
      v.gate = Gate::failed_detection;
      return v;
    }
    // Step 2: diagnosis gate.
    v.diagnosis_correct = diagnosis_indicator(sample.gt_detection, label, parsed, synonyms);
    if (v.diagnosis_correct == 0) {
      v.gate = Gate::failed_diagnosis;
      return v;
    }
  } else {
    // Amputated diagnosis: no binary step-1 token required; the whole answer
    // is searched for the diagnosis label (negative GT still needs a
    // standalone "no").
    if (sample.gt_detection) {
      v.diagnosis_correct =
          label && match_diagnosis(pred->answer, *label, synonyms) ? 1 : 0;
    } else {
      v.diagnosis_correct = parsed.detection == Detection::no ? 1 : 0;
    }
    if (v.diagnosis_correct == 0) {
      v.gate = Gate::failed_diagnosis;
      return v;
    }
  }

  // Step 3: multi-target segmentation, GT-positive samples only.
  if (!sample.gt_detection || !mode_scores_segmentation(mode)) {
    v.gate = Gate::passed;
    return v;
  }
  detail::score_segmentation(sample, *pred, parsed, load_gt, v);
  return v;
}

// --- aggregation -------------------------------------------------------------

struct GateCounts {
  std::int64_t passed = 0;
  std::int64_t failed_detection = 0;
  std::int64_t failed_diagnosis = 0;
  std::int64_t failed_binding = 0;
  std::int64_t missing_prediction = 0;

  std::int64_t total() const {
    return passed + failed_detection + failed_diagnosis + failed_binding + missing_prediction;
  }
  void bump(Gate g) {
    switch (g) {
      case Gate::passed: ++passed; break;
      case Gate::failed_detection: ++failed_detection; break;
      case Gate::failed_diagnosis: ++failed_diagnosis; break;
      case Gate::failed_binding: ++failed_binding; break;
      case Gate::missing_prediction: ++missing_prediction; break;
    }
  }
};

struct DiceAggregate {
  // Primary aggregation counts a binding failure as Dice 0 for each GT
  // target; the alternate aggregation excludes those samples. Samples with
  // dimension-mismatched masks are invalid predictions and appear in neither.
  std::vector<double> with_failures_as_zero;
  std::vector<double> excluding_failures;

  std::optional<double> mean_primary() const {
    if (with_failures_as_zero.empty()) return std::nullopt;
    return pairwise_sum(with_failures_as_zero) /
           static_cast<double>(with_failures_as_zero.size());
  }
  std::optional<double> mean_alternate() const {
    if (excluding_failures.empty()) return std::nullopt;
    return pairwise_sum(excluding_failures) / static_cast<double>(excluding_failures.size());
  }
};

struct ModalityReport {
  std::int64_t n_samples = 0;
  GateCounts gates;
  ConfusionCounts detection;
  std::int64_t n_invalid_detection = 0; // answers with no parsable yes/no
  std::vector<int> diagnosis_indicators;
  DiceAggregate dice_org;
  DiceAggregate dice_abn;
  std::int64_t n_invalid_masks = 0;
};

struct EvalReport {
  EvalMode mode = EvalMode::full;
  std::string manifest_hash;
  std::string predictions_hash;
  std::int64_t n_samples = 0;
  std::int64_t n_malformed_lines = 0;
  std::int64_t n_duplicate_ids = 0;
  std::vector<std::string> warnings;
  std::map<std::string, ModalityReport> per_modality; // keyed by modality_key + "ALL"
};

// Order-free aggregation: verdicts are consumed in manifest sample order, so
// any evaluation schedule yields an identical report.
inline EvalReport aggregate(const std::vector<VqaSegSample>& samples,
                            const std::vector<SampleVerdict>& verdicts, EvalMode mode) {
  if (samples.size() != verdicts.size())
    throw Error("verdict count does not match sample count");

  EvalReport report;
  report.mode = mode;
  report.n_samples = static_cast<std::int64_t>(samples.size());

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const VqaSegSample& s = samples[i];
    const SampleVerdict& v = verdicts[i];
    if (s.id != v.sample_id)
      throw Error("verdict/manifest id mismatch at index " + std::to_string(i) + ": " + s.id +
                  " vs " + v.sample_id);

    for (const std::string key : {modality_key(s.modality), std::string("ALL")}) {
      ModalityReport& m = report.per_modality[key];
      ++m.n_samples;
      m.gates.bump(v.gate);

      // Detection confusion: positive class is "abnormality present".
      if (s.gt_detection) {
        if (v.detection_pred == Detection::yes)
          ++m.detection.tp;
        else
          ++m.detection.fn;
      } else {
        if (v.detection_pred == Detection::yes)
          ++m.detection.fp;
        else if (v.detection_pred == Detection::no)
          ++m.detection.tn;
      }
      if (v.detection_pred == Detection::invalid) ++m.n_invalid_detection;

      if (mode_scores_diagnosis(mode)) m.diagnosis_indicators.push_back(v.diagnosis_correct);

      if (mode_scores_segmentation(mode) && s.gt_detection) {
        m.n_invalid_masks += v.invalid_mask_count;
        auto collect = [&](TargetKind kind, DiceAggregate& agg) {
          bool has_kind = false;
          for (const auto& t : s.gt_targets) has_kind = has_kind || t.kind == kind;
          if (!has_kind) return;
          if (v.gate == Gate::passed) {
            auto it = v.dice_by_kind.find(kind);
            if (it != v.dice_by_kind.end()) {
              agg.with_failures_as_zero.push_back(it->second);
              agg.excluding_failures.push_back(it->second);
            }
            // Passed but dimension-mismatched: invalid prediction, excluded.
          } else if (v.gate == Gate::failed_binding) {
            agg.with_failures_as_zero.push_back(0.0);
          }
        };
        collect(TargetKind::organ, m.dice_org);
        collect(TargetKind::abnormality, m.dice_abn);
      }
    }
  }
  return report;
}

// --- report serialization ----------------------------------------------------

namespace detail {

inline Json json_or_null(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json modality_report_to_json(const ModalityReport& m, EvalMode mode) {
  Json j = Json::object();
  j["n_samples"] = m.n_samples;
  j["gates"] = Json{{"passed", m.gates.passed},
                    {"failed_detection", m.gates.failed_detection},
                    {"failed_diagnosis", m.gates.failed_diagnosis},
                    {"failed_binding", m.gates.failed_binding},
                    {"missing_prediction", m.gates.missing_prediction}};
  if (mode_scores_detection(mode)) {
    const PrecisionRecallF1 d = precision_recall_f1(m.detection);
    j["detection"] = Json{{"tp", m.detection.tp},
                          {"fp", m.detection.fp},
                          {"fn", m.detection.fn},
                          {"tn", m.detection.tn},
                          {"n_invalid_answers", m.n_invalid_detection},
                          {"precision", d.precision},
                          {"recall", d.recall},
                          {"f1", d.f1}};
  }
  if (mode_scores_diagnosis(mode)) {
    double acc = 0.0;
    if (!m.diagnosis_indicators.empty()) {
      std::int64_t ones = 0;
      for (int v : m.diagnosis_indicators) ones += v;
      acc = static_cast<double>(ones) / static_cast<double>(m.diagnosis_indicators.size());
    }
    j["diagnosis"] =
        Json{{"f1", m.diagnosis_indicators.empty() ? 0.0 : diagnosis_f1(m.diagnosis_indicators)},
             {"accuracy", acc}};
  }
  if (mode_scores_segmentation(mode)) {
    auto agg_json = [](const DiceAggregate& a) {
      return Json{{"mean", json_or_null(a.mean_primary())},
                  {"n", static_cast<std::int64_t>(a.with_failures_as_zero.size())},
                  {"mean_excluding_binding_failures", json_or_null(a.mean_alternate())},
                  {"n_excluding_binding_failures",
                   static_cast<std::int64_t>(a.excluding_failures.size())}};
    };
    j["segmentation"] = Json{{"dice_org", agg_json(m.dice_org)},
                             {"dice_abn", agg_json(m.dice_abn)},
                             {"n_invalid_masks", m.n_invalid_masks}};
  }
  return j;
}

} // namespace detail

inline Json report_to_json(const EvalReport& r) {
  Json j = Json::object();
  j["tool"] = kToolName;
  j["tool_version"] = kToolVersion;
  j["report_kind"] = "vqa_seg";
  j["mode"] = eval_mode_key(r.mode);
  j["manifest_hash"] = r.manifest_hash;
  j["predictions_hash"] = r.predictions_hash;
  j["n_samples"] = r.n_samples;
  j["n_malformed_lines"] = r.n_malformed_lines;
  j["n_duplicate_prediction_ids"] = r.n_duplicate_ids;
  j["dice_aggregation"] = Json{{"primary", "binding_failures_as_zero"},
                               {"alternate", "binding_failures_excluded"}};
  j["warnings"] = r.warnings;
  Json mods = Json::object();
  // Fixed emission order: ALL first, then the imaging modalities.
  for (const std::string key : {"ALL", "XRAY", "CT", "MRI"}) {
    auto it = r.per_modality.find(key);
    if (it != r.per_modality.end())
      mods[key] = detail::modality_report_to_json(it->second, r.mode);
  }
  j["modalities"] = std::move(mods);
  return j;
}

// --- full run ----------------------------------------------------------------

struct EvalRunResult {
  EvalReport report;
  Json report_json;
  bool completed_with_warnings = false;
};

inline std::vector<VqaSegSample> render_all_samples(const DatasetManifest& manifest,
                                                    const TemplateSet& templates) {
  if (manifest.task_kind != TaskKind::vqa_seg)
    throw Error("evaluation requires a vqa_seg manifest");
  std::vector<VqaSegSample> samples;
  samples.reserve(manifest.samples.size());
  for (const auto& rec : manifest.samples) samples.push_back(render_vqaseg_sample(rec, templates));
  return samples;
}

// Stateless per-sample workers plus an index-ordered reduction: the report is
// bit-identical for any parallelism level.
inline std::vector<SampleVerdict> evaluate_all(const std::vector<VqaSegSample>& samples,
                                               const PredictionSet& predictions, EvalMode mode,
                                               const GtMaskLoader& load_gt, int parallelism) {
  if (parallelism < 1) throw Error("parallelism must be >= 1");
  std::vector<SampleVerdict> verdicts(samples.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= samples.size()) return;
      try {
        verdicts[i] =
            evaluate_sample(samples[i], predictions.find(samples[i].id), mode, load_gt);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(parallelism));
    for (int t = 0; t < parallelism; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return verdicts;
}

inline EvalRunResult evaluate_run(const std::filesystem::path& manifest_path,
                                  const std::filesystem::path& predictions_path, EvalMode mode,
                                  int parallelism,
                                  const TemplateSet& templates = TemplateSet::defaults()) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const std::vector<VqaSegSample> samples = render_all_samples(manifest, templates);
  const PredictionSet predictions = load_predictions(predictions_path);

  const std::vector<SampleVerdict> verdicts =
      evaluate_all(samples, predictions, mode, file_mask_loader(manifest), parallelism);

  EvalRunResult result;
  result.report = aggregate(samples, verdicts, mode);
  result.report.manifest_hash = file_hash(manifest_path);
  result.report.predictions_hash = file_hash(predictions_path);
  result.report.n_malformed_lines = predictions.malformed_lines;
  result.report.n_duplicate_ids = predictions.duplicate_ids;
  result.report.warnings = predictions.warnings;
  result.report_json = report_to_json(result.report);
  result.completed_with_warnings =
      predictions.malformed_lines > 0 || predictions.duplicate_ids > 0;
  return result;
}

// --- plain VQA scoring -------------------------------------------------------

struct VqaEvalReport {
  ConfusionCounts closed_confusion;
  std::int64_t n_closed = 0;
  std::int64_t n_closed_invalid_gt = 0;
  std::int64_t n_open = 0;
  std::vector<int> open_exact;
  std::vector<double> open_recall;
  std::string manifest_hash;
  std::string predictions_hash;
  std::int64_t n_malformed_lines = 0;
  std::int64_t n_duplicate_ids = 0;
  std::vector<std::string> warnings;
};

// Closed questions map both sides through the yes/no parser (positive class
// "yes"); open questions score exact accuracy and multiset token recall.
inline VqaEvalReport evaluate_vqa(const DatasetManifest& manifest,
                                  const PredictionSet& predictions) {
  if (manifest.task_kind != TaskKind::vqa) throw Error("evaluate_vqa requires a vqa manifest");
  VqaEvalReport r;
  for (const auto& gt : manifest.vqa_samples) {
    const PredictionRecord* pred = predictions.find(gt.id);
    const std::string pred_answer = pred ? pred->answer : std::string();
    if (gt.closed) {
      const Detection truth = parse_detection(gt.answer);
      if (truth == Detection::invalid) {
        ++r.n_closed_invalid_gt;
        if (r.warnings.size() < 20)
          r.warnings.push_back("sample " + gt.id + ": closed GT answer is not yes/no; skipped");
        continue;
      }
      ++r.n_closed;
      const Detection guess = parse_detection(pred_answer);
      if (truth == Detection::yes) {
        if (guess == Detection::yes)
          ++r.closed_confusion.tp;
        else
          ++r.closed_confusion.fn;
      } else {
        if (guess == Detection::yes)
          ++r.closed_confusion.fp;
        else if (guess == Detection::no)
          ++r.closed_confusion.tn;
      }
    } else {
      if (normalize_open_answer(gt.answer).empty()) {
        if (r.warnings.size() < 20)
          r.warnings.push_back("sample " + gt.id + ": empty open GT answer; skipped");
        continue;
      }
      ++r.n_open;
      const OpenQScores s = open_q_scores(gt.answer, pred_answer);
      r.open_exact.push_back(s.exact_acc);
      r.open_recall.push_back(s.token_recall);
    }
  }
  return r;
}

inline Json vqa_report_to_json(const VqaEvalReport& r) {
  const PrecisionRecallF1 closed = precision_recall_f1(r.closed_confusion);
  double acc = 0.0, rec = 0.0;
  if (!r.open_exact.empty()) {
    std::int64_t hits = 0;
    for (int v : r.open_exact) hits += v;
    acc = static_cast<double>(hits) / static_cast<double>(r.open_exact.size());
    rec = pairwise_sum(r.open_recall) / static_cast<double>(r.open_recall.size());
  }
  Json j = Json::object();
  j["tool"] = kToolName;
  j["tool_version"] = kToolVersion;
  j["report_kind"] = "vqa";
  j["manifest_hash"] = r.manifest_hash;
  j["predictions_hash"] = r.predictions_hash;
  j["n_malformed_lines"] = r.n_malformed_lines;
  j["n_duplicate_prediction_ids"] = r.n_duplicate_ids;
  j["warnings"] = r.warnings;
  j["closed"] = Json{{"n", r.n_closed},
                     {"n_invalid_gt", r.n_closed_invalid_gt},
                     {"tp", r.closed_confusion.tp},
                     {"fp", r.closed_confusion.fp},
                     {"fn", r.closed_confusion.fn},
                     {"tn", r.closed_confusion.tn},
                     {"f1", closed.f1},
                     {"recall", closed.recall},
                     {"precision", closed.precision}};
  j["open"] = Json{{"n", r.n_open}, {"exact_accuracy", acc}, {"token_recall", rec}};
  return j;
}

} // namespace rdsbench
