#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "rdsbench/error.hpp"
#include "rdsbench/manifest.hpp"

namespace rdsbench {

namespace detail {

inline std::string fmt4(const Json& v) {
  if (v.is_null()) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v.get<double>());
  return buf;
}

inline std::string pad(std::string s, std::size_t width) {
  while (s.size() < width) s.push_back(' ');
  return s;
}

inline const Json* maybe(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

} // namespace detail

// Renders a stored evaluation report (vqa_seg or vqa) as an aligned text
// table. Operates on the report JSON only; nothing is recomputed.
inline std::string render_report_text(const Json& report) {
  using detail::fmt4;
  using detail::maybe;
  using detail::pad;

  std::string out;
  const std::string kind = report.value("report_kind", std::string("vqa_seg"));
  out += "rdsbench " + kind + " report";
  if (report.contains("mode")) out += " (mode: " + report["mode"].get<std::string>() + ")";
  out += "\n";
  out += "tool version: " + report.value("tool_version", std::string("?")) + "\n";
  out += "manifest:     " + report.value("manifest_hash", std::string("?")) + "\n";
  out += "predictions:  " + report.value("predictions_hash", std::string("?")) + "\n";
  if (const Json* w = maybe(report, "n_malformed_lines"); w && w->get<std::int64_t>() > 0)
    out += "malformed prediction lines: " + std::to_string(w->get<std::int64_t>()) + "\n";
  if (const Json* w = maybe(report, "n_duplicate_prediction_ids");
      w && w->get<std::int64_t>() > 0)
    out += "duplicate prediction ids:   " + std::to_string(w->get<std::int64_t>()) + "\n";

  if (kind == "vqa") {
    const Json& c = report.at("closed");
    const Json& o = report.at("open");
    out += "\n";
    out += "closed  n=" + std::to_string(c.at("n").get<std::int64_t>()) +
           "  f1=" + fmt4(c.at("f1")) + "  recall=" + fmt4(c.at("recall")) +
           "  precision=" + fmt4(c.at("precision")) + "\n";
    out += "open    n=" + std::to_string(o.at("n").get<std::int64_t>()) +
           "  exact_acc=" + fmt4(o.at("exact_accuracy")) +
           "  token_recall=" + fmt4(o.at("token_recall")) + "\n";
    return out;
  }

  const Json& mods = report.at("modalities");
  out += "\n";
  out += pad("Modality", 10) + pad("N", 8) + pad("Det-F1", 10) + pad("Diag-F1", 10) +
         pad("Dice-Org", 10) + pad("Dice-Abn", 10) + "\n";
  for (auto it = mods.begin(); it != mods.end(); ++it) {
    const Json& m = it.value();
    std::string det = "-", diag = "-", org = "-", abn = "-";
    if (const Json* d = maybe(m, "detection")) det = fmt4(d->at("f1"));
    if (const Json* d = maybe(m, "diagnosis")) diag = fmt4(d->at("f1"));
    if (const Json* s = maybe(m, "segmentation")) {
      org = fmt4(s->at("dice_org").at("mean"));
      abn = fmt4(s->at("dice_abn").at("mean"));
    }
    out += pad(it.key(), 10) + pad(std::to_string(m.at("n_samples").get<std::int64_t>()), 8) +
           pad(det, 10) + pad(diag, 10) + pad(org, 10) + pad(abn, 10) + "\n";
  }

  out += "\n";
  out += pad("Gates", 10) + pad("passed", 10) + pad("det-fail", 10) + pad("diag-fail", 10) +
         pad("bind-fail", 10) + pad("missing", 10) + "\n";
  for (auto it = mods.begin(); it != mods.end(); ++it) {
    const Json& g = it.value().at("gates");
    out += pad(it.key(), 10);
    for (const char* key :
         {"passed", "failed_detection", "failed_diagnosis", "failed_binding",
          "missing_prediction"})
      out += pad(std::to_string(g.at(key).get<std::int64_t>()), 10);
    out += "\n";
  }
  return out;
}

inline std::string render_report_csv(const Json& report) {
  using detail::fmt4;
  using detail::maybe;

  std::string out;
  const std::string kind = report.value("report_kind", std::string("vqa_seg"));
  if (kind == "vqa") {
    const Json& c = report.at("closed");
    const Json& o = report.at("open");
    out += "section,n,f1,recall,precision,exact_accuracy,token_recall\n";
    out += "closed," + std::to_string(c.at("n").get<std::int64_t>()) + "," + fmt4(c.at("f1")) +
           "," + fmt4(c.at("recall")) + "," + fmt4(c.at("precision")) + ",,\n";
    out += "open," + std::to_string(o.at("n").get<std::int64_t>()) + ",,,," +
           fmt4(o.at("exact_accuracy")) + "," + fmt4(o.at("token_recall")) + "\n";
    return out;
  }

  out +=
      "modality,n_samples,detection_f1,diagnosis_f1,dice_org,dice_abn,"
      "passed,failed_detection,failed_diagnosis,failed_binding,missing_prediction\n";
  const Json& mods = report.at("modalities");
  for (auto it = mods.begin(); it != mods.end(); ++it) {
    const Json& m = it.value();
    std::string det, diag, org, abn;
    if (const Json* d = maybe(m, "detection")) det = fmt4(d->at("f1"));
    if (const Json* d = maybe(m, "diagnosis")) diag = fmt4(d->at("f1"));
    if (const Json* s = maybe(m, "segmentation")) {
      org = fmt4(s->at("dice_org").at("mean"));
      abn = fmt4(s->at("dice_abn").at("mean"));
    }
    const Json& g = m.at("gates");
    out += it.key() + "," + std::to_string(m.at("n_samples").get<std::int64_t>()) + "," + det +
           "," + diag + "," + org + "," + abn;
    for (const char* key :
         {"passed", "failed_detection", "failed_diagnosis", "failed_binding",
          "missing_prediction"})
      out += "," + std::to_string(g.at(key).get<std::int64_t>());
    out += "\n";
  }
  return out;
}

} // namespace rdsbench
