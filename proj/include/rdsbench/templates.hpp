#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "rdsbench/error.hpp"
#include "rdsbench/manifest.hpp"
#include "rdsbench/text.hpp"

namespace rdsbench {

// Seg-token text for emission ordinal i: "<seg000>", "<seg001>", ...
inline std::string seg_token_name(int ordinal) {
  if (ordinal < 0 || ordinal > 999) throw Error("seg token ordinal out of range");
  char buf[8];
  std::snprintf(buf, sizeof buf, "seg%03d", ordinal);
  return buf;
}

inline std::string seg_token_text(int ordinal) { return "<" + seg_token_name(ordinal) + ">"; }

// Question and answer wordings. The defaults are also shipped at
// templates/default.json; alternative phrasings can be benchmarked by
// pointing --templates or RDS_BENCH_TEMPLATES at another file or directory.
struct TemplateSet {
  std::string refseg_prompt = "<img> Please segment {label} in the {modality}.";
  std::string refseg_answer = "Here is the mask for {label} <seg000>.";
  std::string vqaseg_question =
      "<img> 1. Are there any abnormal findings in the {modality}? Please answer yes or no. "
      "2. If yes, what is the most likely diagnosis? "
      "3. Please segment the affected organ and the abnormality.";
  std::string negative_answer = "1. No.";
  std::string positive_answer =
      "1. Yes. 2. There is {diagnosis} in the {modality}. "
      "3. Here is the mask for {organ} {organ_token} and the mask for {abnormality} "
      "{abnormality_token}.";
  int seg_vocab_size = 8; // emission vocabulary; parsing always accepts seg000-seg999

  static TemplateSet defaults() { return TemplateSet{}; }

  static TemplateSet load(const std::filesystem::path& path) {
    std::filesystem::path file = path;
    if (std::filesystem::is_directory(file)) file /= "default.json";
    std::ifstream in(file);
    if (!in) throw IoError("cannot open template file: " + file.string());
    Json j;
    try {
      j = Json::parse(in);
    } catch (const std::exception& e) {
      throw FormatError("template file is not valid JSON: " + file.string() + ": " + e.what());
    }
    TemplateSet t;
    if (j.contains("refseg")) {
      t.refseg_prompt = j["refseg"].value("prompt", t.refseg_prompt);
      t.refseg_answer = j["refseg"].value("answer", t.refseg_answer);
    }
    if (j.contains("vqa_seg")) {
      t.vqaseg_question = j["vqa_seg"].value("question", t.vqaseg_question);
      t.negative_answer = j["vqa_seg"].value("negative_answer", t.negative_answer);
      t.positive_answer = j["vqa_seg"].value("positive_answer", t.positive_answer);
    }
    t.seg_vocab_size = j.value("seg_vocab_size", t.seg_vocab_size);
    if (t.seg_vocab_size < 1 || t.seg_vocab_size > 1000)
      throw FormatError("seg_vocab_size must be in [1,1000]");
    return t;
  }

  Json to_json() const {
    Json j = Json::object();
    j["version"] = 1;
    j["refseg"] = Json{{"prompt", refseg_prompt}, {"answer", refseg_answer}};
    j["vqa_seg"] = Json{{"question", vqaseg_question},
                        {"negative_answer", negative_answer},
                        {"positive_answer", positive_answer}};
    j["seg_vocab_size"] = seg_vocab_size;
    return j;
  }

  // Resolution order: explicit path flag, then RDS_BENCH_TEMPLATES, then the
  // built-in defaults.
  static TemplateSet resolve(const std::optional<std::filesystem::path>& flag) {
    if (flag) return load(*flag);
    if (const char* env = std::getenv("RDS_BENCH_TEMPLATES")) return load(env);
    return defaults();
  }
};

} // namespace rdsbench
