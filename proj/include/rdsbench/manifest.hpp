#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "rdsbench/error.hpp"
#include "rdsbench/types.hpp"

namespace rdsbench {

using Json = nlohmann::ordered_json;

// Per-(modality, label) sample counts; negative samples count under the
// "negative" pseudo-label.
struct LabelDistribution {
  std::map<std::string, std::map<std::string, std::int64_t>> counts;

  std::int64_t total() const {
    std::int64_t n = 0;
    for (const auto& [mod, labels] : counts)
      for (const auto& [label, c] : labels) n += c;
    return n;
  }

  void add(const std::string& modality, const std::string& label, std::int64_t n = 1) {
    counts[modality][label] += n;
  }

  Json to_json() const {
    Json j = Json::object();
    for (const auto& [mod, labels] : counts) {
      Json m = Json::object();
      for (const auto& [label, c] : labels) m[label] = c;
      j[mod] = std::move(m);
    }
    return j;
  }
};

// A dataset manifest: version 1 JSON, snake_case fields, unknown fields
// ignored on read. Paths inside are relative to the manifest's directory.
struct DatasetManifest {
  int version = 1;
  TaskKind task_kind = TaskKind::vqa_seg;
  std::vector<SourceRecord> samples;  // ref_seg / vqa_seg manifests
  std::vector<VqaRecord> vqa_samples; // vqa manifests
  std::filesystem::path base_dir;     // directory of the manifest file

  std::size_t sample_count() const {
    return task_kind == TaskKind::vqa ? vqa_samples.size() : samples.size();
  }

  std::filesystem::path resolve(const std::string& rel) const {
    std::filesystem::path p(rel);
    if (p.is_absolute()) return p;
    return base_dir / p;
  }
};

namespace detail {

inline Json finding_to_json(const Finding& f) {
  Json j = Json::object();
  if (f.positive) {
    j["type"] = "positive";
    j["label"] = f.label;
    if (!f.label_synonyms.empty()) j["synonyms"] = f.label_synonyms;
  } else {
    j["type"] = "negative";
  }
  return j;
}

inline Finding finding_from_json(const Json& j) {
  Finding f;
  const std::string type = j.at("type").get<std::string>();
  if (type == "positive") {
    f.positive = true;
    f.label = j.at("label").get<std::string>();
    if (f.label.empty()) throw FormatError("positive finding with empty label");
    if (j.contains("synonyms")) f.label_synonyms = j["synonyms"].get<std::vector<std::string>>();
  } else if (type == "negative") {
    f.positive = false;
  } else {
    throw FormatError("unknown finding type: " + type);
  }
  return f;
}

inline Json target_to_json(const SegTarget& t) {
  Json j = Json::object();
  j["name"] = t.name;
  j["synonyms"] = t.synonyms;
  j["mask_path"] = t.mask_path;
  j["kind"] = target_kind_key(t.kind);
  return j;
}

inline SegTarget target_from_json(const Json& j) {
  SegTarget t;
  t.name = j.at("name").get<std::string>();
  if (t.name.empty()) throw FormatError("target with empty name");
  if (j.contains("synonyms")) t.synonyms = j["synonyms"].get<std::vector<std::string>>();
  t.mask_path = j.at("mask_path").get<std::string>();
  t.kind = parse_target_kind(j.at("kind").get<std::string>());
  t.normalize();
  return t;
}

inline Json record_to_json(const SourceRecord& r) {
  Json j = Json::object();
  j["id"] = r.id;
  j["image_path"] = r.image_path;
  j["modality"] = modality_key(r.modality);
  j["finding"] = finding_to_json(r.finding);
  Json targets = Json::array();
  for (const auto& t : r.targets) targets.push_back(target_to_json(t));
  j["targets"] = std::move(targets);
  if (r.volume_id) j["volume_id"] = *r.volume_id;
  if (r.split) j["split"] = split_key(*r.split);
  return j;
}

inline SourceRecord record_from_json(const Json& j) {
  SourceRecord r;
  r.id = j.at("id").get<std::string>();
  if (r.id.empty()) throw FormatError("sample with empty id");
  r.image_path = j.at("image_path").get<std::string>();
  r.modality = parse_modality(j.at("modality").get<std::string>());
  if (j.contains("finding")) r.finding = finding_from_json(j["finding"]);
  if (j.contains("targets"))
    for (const auto& t : j["targets"]) r.targets.push_back(target_from_json(t));
  if (j.contains("volume_id") && !j["volume_id"].is_null())
    r.volume_id = j["volume_id"].get<std::string>();
  if (j.contains("split") && !j["split"].is_null())
    r.split = parse_split(j["split"].get<std::string>());
  return r;
}

inline Json vqa_record_to_json(const VqaRecord& r) {
  Json j = Json::object();
  j["id"] = r.id;
  j["image_path"] = r.image_path;
  j["modality"] = modality_key(r.modality);
  j["question"] = r.question;
  j["answer"] = r.answer;
  j["question_type"] = r.closed ? "closed" : "open";
  return j;
}

inline VqaRecord vqa_record_from_json(const Json& j) {
  VqaRecord r;
  r.id = j.at("id").get<std::string>();
  if (r.id.empty()) throw FormatError("sample with empty id");
  r.image_path = j.value("image_path", std::string());
  r.modality = parse_modality(j.value("modality", std::string("XRAY")));
  r.question = j.value("question", std::string());
  r.answer = j.at("answer").get<std::string>();
  if (j.contains("question_type")) {
    r.closed = j["question_type"].get<std::string>() == "closed";
  } else {
    const std::string a = normalize_for_match(r.answer);
    r.closed = a == "yes" || a == "no";
  }
  return r;
}

} // namespace detail

inline DatasetManifest manifest_from_json(const Json& j, std::filesystem::path base_dir) {
  DatasetManifest m;
  m.version = j.at("version").get<int>();
  if (m.version != 1)
    throw FormatError("unsupported manifest version " + std::to_string(m.version));
  m.task_kind = parse_task_kind(j.at("task_kind").get<std::string>());
  m.base_dir = std::move(base_dir);
  if (!j.contains("samples")) throw FormatError("manifest has no samples array");
  for (const auto& s : j["samples"]) {
    if (m.task_kind == TaskKind::vqa)
      m.vqa_samples.push_back(detail::vqa_record_from_json(s));
    else
      m.samples.push_back(detail::record_from_json(s));
  }
  return m;
}

inline Json manifest_to_json(const DatasetManifest& m) {
  Json j = Json::object();
  j["version"] = m.version;
  j["task_kind"] = task_kind_key(m.task_kind);
  Json samples = Json::array();
  if (m.task_kind == TaskKind::vqa)
    for (const auto& s : m.vqa_samples) samples.push_back(detail::vqa_record_to_json(s));
  else
    for (const auto& s : m.samples) samples.push_back(detail::record_to_json(s));
  j["samples"] = std::move(samples);
  return j;
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw FormatError("manifest is not valid JSON: " + path.string() + ": " + e.what());
  }
  try {
    return manifest_from_json(j, path.has_parent_path() ? path.parent_path()
                                                        : std::filesystem::path("."));
  } catch (const Json::exception& e) {
    throw FormatError("malformed manifest " + path.string() + ": " + e.what());
  }
}

} // namespace rdsbench
