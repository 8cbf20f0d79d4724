#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rdsbench/manifest.hpp"
#include "rdsbench/png_io.hpp"
#include "rdsbench/rng.hpp"
#include "rdsbench/templates.hpp"
#include "rdsbench/types.hpp"

namespace rdsbench {

inline std::string refseg_sample_id(const SourceRecord& record, int target_index) {
  return record.id + "#t" + std::to_string(target_index);
}

// Renders one referring-segmentation sample. The label is drawn uniformly from
// the target's synonyms by a generator keyed on (seed, sample id), so the draw
// is stable under record reordering.
inline RefSegSample render_refseg_sample(const SourceRecord& record, int target_index,
                                         std::uint64_t seed,
                                         const TemplateSet& templates = TemplateSet::defaults()) {
  if (target_index < 0 || static_cast<std::size_t>(target_index) >= record.targets.size())
    throw std::out_of_range("target index " + std::to_string(target_index) +
                            " out of range for record " + record.id);
  RefSegSample s;
  s.id = refseg_sample_id(record, target_index);
  s.image_path = record.image_path;
  s.modality = record.modality;
  s.target = record.targets[static_cast<std::size_t>(target_index)];
  s.target.normalize();

  Rng rng(seed, s.id);
  const auto& syns = s.target.synonyms;
  const std::string& label = syns[rng.uniform_below(syns.size())];

  const std::string modality = modality_display(record.modality);
  s.prompt = substitute(templates.refseg_prompt, {{"label", label}, {"modality", modality}});
  s.expected_answer =
      substitute(templates.refseg_answer, {{"label", label}, {"modality", modality}});
  return s;
}

namespace detail {

inline Diagnosis derive_diagnosis(const SourceRecord& record) {
  Diagnosis d;
  d.label = record.finding.label;
  std::vector<std::string> syns;
  syns.push_back(d.label);
  auto add = [&](const std::string& s) {
    if (s.empty()) return;
    for (const auto& existing : syns)
      if (existing == s) return;
    syns.push_back(s);
  };
  for (const auto& s : record.finding.label_synonyms) add(s);
  for (const auto& t : record.targets)
    if (t.kind == TargetKind::abnormality)
      for (const auto& s : t.synonyms) add(s);
  d.synonyms = std::move(syns);
  return d;
}

} // namespace detail

// Renders the three-step task sample. Positive records must carry targets
// ordered [organ, abnormality]; negative records render with no diagnosis and
// no targets. Rendering is deterministic.
inline VqaSegSample render_vqaseg_sample(const SourceRecord& record,
                                         const TemplateSet& templates = TemplateSet::defaults()) {
  VqaSegSample s;
  s.id = record.id;
  s.modality = record.modality;
  s.image_path = record.image_path;
  s.split = record.split;
  s.question_text =
      substitute(templates.vqaseg_question, {{"modality", modality_display(record.modality)}});
  s.gt_detection = record.finding.positive;

  if (!record.finding.positive) {
    if (!record.targets.empty())
      throw Error("negative record " + record.id + " must not carry targets");
    return s;
  }

  if (record.targets.size() != 2 || record.targets[0].kind != TargetKind::organ ||
      record.targets[1].kind != TargetKind::abnormality)
    throw Error("positive record " + record.id +
                " must carry targets ordered [organ, abnormality]");
  s.gt_targets = record.targets;
  for (auto& t : s.gt_targets) t.normalize();
  s.gt_diagnosis = detail::derive_diagnosis(record);
  return s;
}

// Ground-truth answer text for a rendered sample, from the same templates the
// assembler uses. Token i of the emission vocabulary is bound to GT target i.
inline std::string render_gt_answer(const VqaSegSample& sample, const TemplateSet& templates) {
  if (!sample.gt_detection) return templates.negative_answer;
  if (sample.gt_targets.size() > static_cast<std::size_t>(templates.seg_vocab_size))
    throw Error("sample " + sample.id + " needs more seg tokens than the emission vocabulary (" +
                std::to_string(templates.seg_vocab_size) + ")");
  const SegTarget* organ = nullptr;
  const SegTarget* abnormality = nullptr;
  for (std::size_t i = 0; i < sample.gt_targets.size(); ++i) {
    const auto& t = sample.gt_targets[i];
    if (t.kind == TargetKind::organ && !organ) organ = &t;
    if (t.kind == TargetKind::abnormality && !abnormality) abnormality = &t;
  }
  if (!organ || !abnormality || !sample.gt_diagnosis)
    throw Error("positive sample " + sample.id + " lacks organ/abnormality targets");
  // Positional token assignment: target 0 gets seg000, target 1 gets seg001.
  std::string organ_token, abnormality_token;
  for (std::size_t i = 0; i < sample.gt_targets.size(); ++i) {
    if (&sample.gt_targets[i] == organ) organ_token = seg_token_text(static_cast<int>(i));
    if (&sample.gt_targets[i] == abnormality)
      abnormality_token = seg_token_text(static_cast<int>(i));
  }
  return substitute(templates.positive_answer,
                    {{"diagnosis", sample.gt_diagnosis->label},
                     {"modality", modality_display(sample.modality)},
                     {"organ", organ->name},
                     {"organ_token", organ_token},
                     {"abnormality", abnormality->name},
                     {"abnormality_token", abnormality_token}});
}

// --- volume-aware splitting --------------------------------------------------

struct SplitResult {
  std::vector<SourceRecord> train;
  std::vector<SourceRecord> test;
  double achieved_fraction = 0.0;
  std::vector<std::string> warnings;
};

// Groups records by volume_id (records without one are singleton groups),
// shuffles group order by seed, then greedily fills the test partition. All
// slices of a volume land in the same partition.
inline SplitResult split_by_volume(const std::vector<SourceRecord>& records, double test_fraction,
                                   std::uint64_t seed) {
  if (records.empty()) throw Error("cannot split an empty record list");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error("test_fraction must be strictly between 0 and 1");

  // Groups in first-appearance order so the shuffle does not depend on any
  // hash-map iteration order.
  std::vector<std::vector<std::size_t>> groups;
  std::map<std::string, std::size_t> group_of_volume;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].volume_id) {
      auto [it, inserted] = group_of_volume.try_emplace(*records[i].volume_id, groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(i);
    } else {
      groups.push_back({i});
    }
  }

  std::vector<std::size_t> order(groups.size());
  for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
  Rng rng(seed, "split_by_volume");
  rng.shuffle(order);

  const auto n = records.size();
  const auto target = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  std::vector<char> in_test(n, 0);
  std::size_t test_count = 0;
  std::size_t largest_group = 0;
  for (std::size_t g : order) {
    largest_group = std::max(largest_group, groups[g].size());
    if (test_count < target) {
      for (std::size_t i : groups[g]) in_test[i] = 1;
      test_count += groups[g].size();
    }
  }

  SplitResult out;
  for (std::size_t i = 0; i < n; ++i)
    (in_test[i] ? out.test : out.train).push_back(records[i]);
  out.achieved_fraction = static_cast<double>(out.test.size()) / static_cast<double>(n);

  const double tolerance =
      std::max(static_cast<double>(largest_group) / static_cast<double>(n), 0.02);
  if (std::abs(out.achieved_fraction - test_fraction) > tolerance)
    out.warnings.push_back("requested test fraction " + std::to_string(test_fraction) +
                           " unattainable under volume grouping; achieved " +
                           std::to_string(out.achieved_fraction));
  return out;
}

// --- statistics ---------------------------------------------------------------

inline LabelDistribution compute_label_distribution(const DatasetManifest& manifest) {
  LabelDistribution dist;
  if (manifest.task_kind == TaskKind::vqa) {
    for (const auto& s : manifest.vqa_samples) {
      const std::string label = s.closed ? normalize_for_match(s.answer) : "open";
      dist.add(modality_key(s.modality), label);
    }
    return dist;
  }
  for (const auto& s : manifest.samples) {
    const std::string label = s.finding.positive ? s.finding.label : "negative";
    dist.add(modality_key(s.modality), label);
  }
  return dist;
}

// --- validation ---------------------------------------------------------------

struct ValidationFinding {
  std::string sample_id;
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;
  bool strict = false;

  bool clean() const { return findings.empty(); }
  bool fatal() const { return strict && !findings.empty(); }
};

// Checks file presence, mask readability, mask/image dimension agreement,
// duplicate ids, and the structural invariants of each record. Findings are
// sorted by sample id, then code.
inline ValidationReport validate_manifest(const DatasetManifest& manifest, bool strict = false) {
  ValidationReport report;
  report.strict = strict;
  auto add = [&](const std::string& id, const std::string& code, const std::string& msg) {
    report.findings.push_back({id, code, msg});
  };

  std::set<std::string> seen;
  auto check_duplicate = [&](const std::string& id) {
    if (!seen.insert(id).second) add(id, "duplicate_id", "duplicate sample id");
  };

  if (manifest.task_kind == TaskKind::vqa) {
    for (const auto& s : manifest.vqa_samples) {
      check_duplicate(s.id);
      if (s.answer.empty()) add(s.id, "empty_answer", "sample has no answer");
    }
  } else {
    for (const auto& s : manifest.samples) {
      check_duplicate(s.id);

      std::optional<ImageDims> image_dims;
      const auto image = manifest.resolve(s.image_path);
      if (!std::filesystem::exists(image)) {
        add(s.id, "missing_image", "image not found: " + s.image_path);
      } else {
        try {
          image_dims = read_png_dims(image);
        } catch (const Error& e) {
          add(s.id, "unreadable_image", e.what());
        }
      }

      if (s.finding.positive && s.targets.empty())
        add(s.id, "positive_without_targets", "positive finding but no targets");
      if (manifest.task_kind == TaskKind::vqa_seg) {
        if (!s.finding.positive && !s.targets.empty())
          add(s.id, "negative_with_targets", "negative finding must not carry targets");
        if (s.finding.positive &&
            (s.targets.size() != 2 || s.targets[0].kind != TargetKind::organ ||
             s.targets[1].kind != TargetKind::abnormality))
          add(s.id, "bad_target_order", "positive sample needs targets [organ, abnormality]");
      }

      for (const auto& t : s.targets) {
        const auto mask = manifest.resolve(t.mask_path);
        if (!std::filesystem::exists(mask)) {
          add(s.id, "missing_mask", "mask not found: " + t.mask_path);
          continue;
        }
        try {
          const BinaryMask m = load_mask(mask);
          if (image_dims && (m.width != image_dims->width || m.height != image_dims->height))
            add(s.id, "dimension_mismatch",
                "mask " + t.mask_path + " is " + std::to_string(m.width) + "x" +
                    std::to_string(m.height) + " but image is " +
                    std::to_string(image_dims->width) + "x" + std::to_string(image_dims->height));
        } catch (const Error& e) {
          add(s.id, "unreadable_mask", e.what());
        }
      }
    }
  }

  std::sort(report.findings.begin(), report.findings.end(),
            [](const ValidationFinding& a, const ValidationFinding& b) {
              if (a.sample_id != b.sample_id) return a.sample_id < b.sample_id;
              if (a.code != b.code) return a.code < b.code;
              return a.message < b.message;
            });
  return report;
}

// --- persistence --------------------------------------------------------------

inline void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  Json j = manifest_to_json(manifest);
  j["stats"] = compute_label_distribution(manifest).to_json();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << j.dump(2) << "\n";
}

} // namespace rdsbench
