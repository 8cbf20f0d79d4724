#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdsbench/error.hpp"
#include "rdsbench/text.hpp"

namespace rdsbench {

enum class Modality { xray, ct, mri };
enum class TargetKind { organ, abnormality };
enum class Split { train, test };
enum class TaskKind { ref_seg, vqa, vqa_seg };

// Manifest storage form, uppercase without punctuation.
inline std::string modality_key(Modality m) {
  switch (m) {
    case Modality::xray: return "XRAY";
    case Modality::ct: return "CT";
    case Modality::mri: return "MRI";
  }
  throw Error("unknown modality");
}

// Human-readable form used in rendered prompts and questions.
inline std::string modality_display(Modality m) {
  switch (m) {
    case Modality::xray: return "X-ray";
    case Modality::ct: return "CT";
    case Modality::mri: return "MRI";
  }
  throw Error("unknown modality");
}

inline Modality parse_modality(std::string_view s) {
  std::string norm;
  for (char c : s)
    if (is_ascii_alnum(c)) norm.push_back(to_lower_ascii(c));
  if (norm == "xray") return Modality::xray;
  if (norm == "ct") return Modality::ct;
  if (norm == "mri") return Modality::mri;
  throw FormatError("unknown modality: " + std::string(s));
}

inline std::string target_kind_key(TargetKind k) {
  return k == TargetKind::organ ? "organ" : "abnormality";
}

inline TargetKind parse_target_kind(std::string_view s) {
  if (s == "organ") return TargetKind::organ;
  if (s == "abnormality") return TargetKind::abnormality;
  throw FormatError("unknown target kind: " + std::string(s));
}

inline std::string split_key(Split s) { return s == Split::train ? "train" : "test"; }

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  throw FormatError("unknown split: " + std::string(s));
}

inline std::string task_kind_key(TaskKind k) {
  switch (k) {
    case TaskKind::ref_seg: return "ref_seg";
    case TaskKind::vqa: return "vqa";
    case TaskKind::vqa_seg: return "vqa_seg";
  }
  throw Error("unknown task kind");
}

inline TaskKind parse_task_kind(std::string_view s) {
  if (s == "ref_seg") return TaskKind::ref_seg;
  if (s == "vqa") return TaskKind::vqa;
  if (s == "vqa_seg") return TaskKind::vqa_seg;
  throw FormatError("unknown task_kind: " + std::string(s));
}

// A segmentation target: canonical label, alternative labels (always
// containing the canonical one), and the path of its ground-truth mask.
struct SegTarget {
  std::string name;
  std::vector<std::string> synonyms;
  std::string mask_path;
  TargetKind kind = TargetKind::organ;

  // Re-establishes the "synonyms contains name" invariant after manual edits.
  void normalize() {
    for (const auto& s : synonyms)
      if (s == name) return;
    synonyms.insert(synonyms.begin(), name);
  }
};

struct Finding {
  bool positive = false;
  std::string label;                       // set iff positive
  std::vector<std::string> label_synonyms; // optional alternates for the label
};

// One raw annotation row as stored in a manifest.
struct SourceRecord {
  std::string id;
  std::string image_path;
  Modality modality = Modality::xray;
  Finding finding;
  std::vector<SegTarget> targets; // empty iff negative; [organ, abnormality] for VQA-Seg
  std::optional<std::string> volume_id;
  std::optional<Split> split;
};

// One question/answer row of a plain VQA manifest.
struct VqaRecord {
  std::string id;
  std::string image_path;
  Modality modality = Modality::xray;
  std::string question;
  std::string answer;
  bool closed = false; // yes/no question
};

struct Diagnosis {
  std::string label;
  std::vector<std::string> synonyms;
};

// Rendered referring-segmentation sample.
struct RefSegSample {
  std::string id;
  std::string image_path;
  Modality modality = Modality::xray;
  SegTarget target;
  std::string prompt;
  std::string expected_answer;
};

// Rendered three-step sample: detection, diagnosis, multi-target segmentation.
struct VqaSegSample {
  std::string id;
  Modality modality = Modality::xray;
  std::string image_path;
  std::string question_text;
  bool gt_detection = false;
  std::optional<Diagnosis> gt_diagnosis;
  std::vector<SegTarget> gt_targets;
  std::optional<Split> split;
};

} // namespace rdsbench
