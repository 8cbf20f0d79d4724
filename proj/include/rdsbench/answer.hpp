#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rdsbench/rle.hpp"
#include "rdsbench/text.hpp"
#include "rdsbench/types.hpp"

namespace rdsbench {

// One seg-token occurrence in an answer. Token grammar: "<seg" + exactly
// three decimal digits + ">", plus the bare legacy form "<seg>". Near-misses
// such as <seg00> or <SEG000> do not match.
struct SegTokenRef {
  std::string token_name;               // "seg000", or "seg" for the bare form
  int token_ordinal = 0;                // 0-based order of appearance
  std::size_t span_begin = 0;           // byte offsets, [begin, end)
  std::size_t span_end = 0;
  std::optional<std::string> preceding_label; // best-effort, diagnostic only
};

enum class Detection { yes, no, invalid };

inline std::string detection_key(Detection d) {
  switch (d) {
    case Detection::yes: return "yes";
    case Detection::no: return "no";
    case Detection::invalid: return "invalid";
  }
  return "invalid";
}

struct StepSplit {
  std::string step1;
  std::optional<std::string> step2;
  std::optional<std::string> step3;
  bool enumerated = false;
};

struct ParsedAnswer {
  Detection detection = Detection::invalid;
  std::optional<std::string> diagnosis_segment; // step-2 text
  std::vector<SegTokenRef> seg_refs;            // ordered by position
  std::string raw;
};

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Words dropped from the front of a candidate preceding label. Covers the
// boilerplate of the answer templates ("Here is the mask for X <seg000>").
inline bool is_label_stopword(const std::string& w) {
  static const char* kStop[] = {"here",  "is",  "are",  "the", "a",    "an",  "and",
                                "for",   "of",  "mask", "masks", "with", "in",  "this",
                                "these", "its", "it"};
  for (const char* s : kStop)
    if (w == s) return true;
  return false;
}

inline std::optional<std::string> extract_preceding_label(std::string_view text,
                                                          std::size_t token_begin,
                                                          std::size_t prev_token_end) {
  // Walk back over the phrase directly before the token, stopping at clause
  // punctuation or the previous token.
  std::size_t end = token_begin;
  while (end > prev_token_end && is_ascii_space(text[end - 1])) --end;
  std::size_t begin = end;
  while (begin > prev_token_end) {
    char c = text[begin - 1];
    if (is_ascii_alnum(c) || c == '-' || c == '_' || c == ' ')
      --begin;
    else
      break;
  }
  std::vector<std::string> words = split_words(to_lower(text.substr(begin, end - begin)));
  std::size_t first = 0;
  while (first < words.size() && is_label_stopword(words[first])) ++first;
  if (first >= words.size()) return std::nullopt;
  std::string label;
  for (std::size_t i = first; i < words.size(); ++i) {
    if (!label.empty()) label.push_back(' ');
    label += words[i];
  }
  return label;
}

} // namespace detail

// Extracts every seg-token occurrence in textual order. Spans are
// non-overlapping; re-slicing the input by a span reproduces the token text.
inline std::vector<SegTokenRef> tokenize_seg_tokens(std::string_view text) {
  std::vector<SegTokenRef> refs;
  std::size_t prev_end = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::string name;
    if (text.compare(i, 5, "<seg>") == 0) {
      len = 5;
      name = "seg";
    } else if (text.compare(i, 4, "<seg") == 0 && i + 7 < text.size() &&
               detail::is_digit(text[i + 4]) && detail::is_digit(text[i + 5]) &&
               detail::is_digit(text[i + 6]) && text[i + 7] == '>') {
      len = 8;
      name = std::string(text.substr(i + 1, 6));
    }
    if (len == 0) {
      ++i;
      continue;
    }
    SegTokenRef ref;
    ref.token_name = std::move(name);
    ref.token_ordinal = static_cast<int>(refs.size());
    ref.span_begin = i;
    ref.span_end = i + len;
    ref.preceding_label = detail::extract_preceding_label(text, i, prev_end);
    refs.push_back(std::move(ref));
    prev_end = i + len;
    i += len;
  }
  return refs;
}

// Splits an answer on leading enumerators "1." / "2." / "3." (or "1)" etc.).
// Without enumerators the whole text doubles as step 1 and step 2, so the
// evaluator searches all of it for both the detection keyword and the
// diagnosis label.
inline StepSplit split_steps(std::string_view text) {
  auto find_enum = [&](char digit, std::size_t from) -> std::size_t {
    for (std::size_t p = from; p + 1 < text.size(); ++p) {
      if (text[p] != digit) continue;
      if (p > 0 && !is_ascii_space(text[p - 1])) continue;
      if (text[p + 1] != '.' && text[p + 1] != ')') continue;
      return p;
    }
    return std::string_view::npos;
  };

  const std::size_t npos = std::string_view::npos;
  const std::size_t p1 = find_enum('1', 0);
  if (p1 == npos) {
    StepSplit s;
    s.step1 = std::string(text);
    if (!trim(text).empty()) s.step2 = std::string(text);
    s.enumerated = false;
    return s;
  }
  const std::size_t p2 = find_enum('2', p1 + 2);
  const std::size_t p3 = find_enum('3', p2 == npos ? p1 + 2 : p2 + 2);

  StepSplit s;
  s.enumerated = true;
  const std::size_t end1 = p2 != npos ? p2 : (p3 != npos ? p3 : text.size());
  s.step1 = std::string(text.substr(p1 + 2, end1 - (p1 + 2)));
  if (p2 != npos) {
    const std::size_t end2 = p3 != npos ? p3 : text.size();
    s.step2 = std::string(text.substr(p2 + 2, end2 - (p2 + 2)));
  }
  if (p3 != npos) s.step3 = std::string(text.substr(p3 + 2));
  return s;
}

// Maps answer text to a binary detection verdict: the first standalone
// yes/no token of the step-1 segment wins; word boundaries exclude e.g.
// "yesterday". Total: every string yields exactly one of {yes, no, invalid}.
inline Detection parse_detection(std::string_view text) {
  const StepSplit steps = split_steps(text);
  const std::string& seg = steps.step1;
  std::size_t i = 0;
  while (i < seg.size()) {
    while (i < seg.size() && !is_ascii_alnum(seg[i])) ++i;
    std::size_t b = i;
    while (i < seg.size() && is_ascii_alnum(seg[i])) ++i;
    if (i == b) continue;
    const std::size_t len = i - b;
    if (len == 3 || len == 2) {
      std::string word;
      for (std::size_t k = b; k < i; ++k) word.push_back(to_lower_ascii(seg[k]));
      if (word == "yes") return Detection::yes;
      if (word == "no") return Detection::no;
    }
  }
  return Detection::invalid;
}

// True iff any synonym (the label counts as one) occurs in the segment after
// case folding, hyphen folding, and whitespace normalization.
inline bool match_diagnosis(std::string_view segment, std::string_view label,
                            const std::vector<std::string>& synonyms) {
  if (label.empty()) throw Error("diagnosis label must be non-empty");
  const std::string hay = normalize_for_match(segment);
  if (contains_substring(hay, normalize_for_match(label))) return true;
  for (const auto& syn : synonyms)
    if (contains_substring(hay, normalize_for_match(syn))) return true;
  return false;
}

inline ParsedAnswer parse_answer(std::string_view text) {
  ParsedAnswer a;
  a.raw = std::string(text);
  a.detection = parse_detection(text);
  a.diagnosis_segment = split_steps(text).step2;
  a.seg_refs = tokenize_seg_tokens(text);
  return a;
}

// --- mask binding -----------------------------------------------------------

struct Binding {
  std::string token_name;
  std::size_t mask_index = 0;   // into the transported-mask list
  std::size_t target_index = 0; // into the GT target list (positional)
};

struct BindingError {
  enum class Kind { count_mismatch, missing_mask, duplicate_token };
  Kind kind = Kind::count_mismatch;
  std::string token; // offending token for missing_mask / duplicate_token

  std::string describe() const {
    switch (kind) {
      case Kind::count_mismatch: return "seg-token count does not match target count";
      case Kind::missing_mask: return "no transported mask for token " + token;
      case Kind::duplicate_token: return "duplicate seg token " + token;
    }
    return "binding error";
  }
};

using BindResult = std::variant<std::vector<Binding>, BindingError>;

// Matches each answer token to the transported mask declaring the same token
// name, then binds tokens positionally to GT targets (ordinal i <-> target i).
inline BindResult bind_masks(const std::vector<SegTokenRef>& refs,
                             const std::vector<TransportedMask>& transported,
                             const std::vector<SegTarget>& gt_targets) {
  for (std::size_t i = 0; i < refs.size(); ++i)
    for (std::size_t j = i + 1; j < refs.size(); ++j)
      if (refs[i].token_name == refs[j].token_name)
        return BindingError{BindingError::Kind::duplicate_token, refs[i].token_name};

  if (refs.size() != gt_targets.size())
    return BindingError{BindingError::Kind::count_mismatch, {}};

  std::vector<Binding> bindings;
  bindings.reserve(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    std::size_t mask_index = transported.size();
    for (std::size_t m = 0; m < transported.size(); ++m) {
      if (transported[m].token_name == refs[i].token_name) {
        mask_index = m;
        break;
      }
    }
    if (mask_index == transported.size())
      return BindingError{BindingError::Kind::missing_mask, refs[i].token_name};
    bindings.push_back(Binding{refs[i].token_name, mask_index, i});
  }
  return bindings;
}

} // namespace rdsbench
