#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <map>

#include "rdsbench/assemble.hpp"
#include "rdsbench/manifest.hpp"
#include "rdsbench/rng.hpp"
#include "rdsbench/synthetic.hpp"
#include "test_support.hpp"

using namespace rdsbench;
using test_support::make_negative_record;
using test_support::make_positive_record;
using test_support::TempDir;

TEST_CASE("manifest JSON round-trip") {
  DatasetManifest m;
  m.task_kind = TaskKind::vqa_seg;
  auto rec = make_positive_record("a1", Modality::ct, "liver tumour", "liver");
  rec.volume_id = "vol3";
  rec.split = Split::train;
  m.samples.push_back(rec);
  m.samples.push_back(make_negative_record("a2", Modality::xray));

  const Json j = manifest_to_json(m);
  const DatasetManifest back = manifest_from_json(j, ".");
  REQUIRE(back.samples.size() == 2);
  CHECK(back.task_kind == TaskKind::vqa_seg);
  CHECK(back.samples[0].id == "a1");
  CHECK(back.samples[0].modality == Modality::ct);
  CHECK(back.samples[0].finding.positive);
  CHECK(back.samples[0].finding.label == "liver tumour");
  CHECK(back.samples[0].volume_id == "vol3");
  CHECK(back.samples[0].split == Split::train);
  REQUIRE(back.samples[0].targets.size() == 2);
  CHECK(back.samples[0].targets[0].kind == TargetKind::organ);
  CHECK(back.samples[0].targets[1].kind == TargetKind::abnormality);
  CHECK_FALSE(back.samples[1].finding.positive);
  CHECK(back.samples[1].targets.empty());
}

TEST_CASE("manifest reader ignores unknown fields and enforces version") {
  Json j = Json::parse(R"({
    "version": 1,
    "task_kind": "vqa_seg",
    "future_field": {"nested": true},
    "samples": [
      {"id": "x", "image_path": "img.png", "modality": "x-ray",
       "finding": {"type": "negative"}, "extra": 42}
    ]
  })");
  const DatasetManifest m = manifest_from_json(j, ".");
  REQUIRE(m.samples.size() == 1);
  CHECK(m.samples[0].modality == Modality::xray); // "x-ray" accepted, stored as XRAY

  j["version"] = 2;
  CHECK_THROWS_AS(manifest_from_json(j, "."), FormatError);
}

TEST_CASE("target synonyms always contain the name") {
  const Json j = Json::parse(
      R"({"name": "liver", "synonyms": ["hepatic organ"], "mask_path": "m.png", "kind": "organ"})");
  const SegTarget t = detail::target_from_json(j);
  REQUIRE(t.synonyms.size() == 2);
  CHECK(t.synonyms[0] == "liver");
}

TEST_CASE("modality keys") {
  CHECK(modality_key(Modality::xray) == "XRAY");
  CHECK(modality_display(Modality::xray) == "X-ray");
  CHECK(parse_modality("XRAY") == Modality::xray);
  CHECK(parse_modality("X-RAY") == Modality::xray);
  CHECK(parse_modality("ct") == Modality::ct);
  CHECK(parse_modality("MRI") == Modality::mri);
  CHECK_THROWS_AS(parse_modality("ultrasound"), FormatError);
}

TEST_CASE("label distribution counting") {
  DatasetManifest empty;
  CHECK(compute_label_distribution(empty).total() == 0);

  DatasetManifest m;
  m.task_kind = TaskKind::vqa_seg;
  for (int i = 0; i < 3; ++i)
    m.samples.push_back(
        make_positive_record("p" + std::to_string(i), Modality::xray, "COVID-19"));
  for (int i = 0; i < 2; ++i)
    m.samples.push_back(make_negative_record("n" + std::to_string(i), Modality::xray));

  const LabelDistribution dist = compute_label_distribution(m);
  CHECK(dist.counts.at("XRAY").at("COVID-19") == 3);
  CHECK(dist.counts.at("XRAY").at("negative") == 2);
  CHECK(dist.total() == 5);
}

TEST_CASE("label distribution equals brute-force recount") {
  Rng rng(47, "dist");
  DatasetManifest m;
  m.task_kind = TaskKind::vqa_seg;
  const std::vector<std::string> labels = {"COVID-19", "liver tumour", "pancreas tumour"};
  std::map<std::pair<std::string, std::string>, std::int64_t> expected;
  for (int i = 0; i < 1000; ++i) {
    const auto mod = static_cast<Modality>(rng.uniform_below(3));
    SourceRecord rec;
    if (rng.uniform_below(2)) {
      rec = make_positive_record("s" + std::to_string(i), mod,
                                 labels[rng.uniform_below(labels.size())]);
      ++expected[{modality_key(mod), rec.finding.label}];
    } else {
      rec = make_negative_record("s" + std::to_string(i), mod);
      ++expected[{modality_key(mod), "negative"}];
    }
    m.samples.push_back(rec);
  }
  const LabelDistribution dist = compute_label_distribution(m);
  CHECK(dist.total() == 1000);
  std::int64_t checked = 0;
  for (const auto& [key, count] : expected) {
    CHECK(dist.counts.at(key.first).at(key.second) == count);
    checked += count;
  }
  CHECK(checked == 1000);
}

TEST_CASE("validation findings") {
  TempDir dir("validate");
  SyntheticOptions opts;
  opts.n_samples = 12;
  opts.seed = 5;
  DatasetManifest manifest = generate_synthetic_manifest(dir.path(), opts);

  SECTION("clean synthetic manifest") {
    const ValidationReport report = validate_manifest(manifest, true);
    CHECK(report.clean());
    CHECK_FALSE(report.fatal());
  }

  SECTION("missing files and duplicate ids are reported") {
    manifest.samples.push_back(manifest.samples.front()); // duplicate id
    SourceRecord ghost = make_negative_record("zz_ghost", Modality::ct);
    manifest.samples.push_back(ghost); // image does not exist
    const ValidationReport report = validate_manifest(manifest, false);
    REQUIRE_FALSE(report.clean());
    CHECK_FALSE(report.fatal()); // non-strict

    bool saw_duplicate = false, saw_missing = false;
    for (const auto& f : report.findings) {
      saw_duplicate = saw_duplicate || f.code == "duplicate_id";
      saw_missing = saw_missing || f.code == "missing_image";
    }
    CHECK(saw_duplicate);
    CHECK(saw_missing);

    // Findings sorted by sample id.
    for (std::size_t i = 1; i < report.findings.size(); ++i)
      CHECK(report.findings[i - 1].sample_id <= report.findings[i].sample_id);

    CHECK(validate_manifest(manifest, true).fatal());
  }

  SECTION("dimension mismatch is reported") {
    // Point one positive sample's organ mask at a wrong-size PNG.
    for (auto& rec : manifest.samples) {
      if (!rec.finding.positive) continue;
      BinaryMask wrong(opts.canvas_width + 3, opts.canvas_height, 1);
      save_mask(wrong, dir.path() / "wrong.png");
      rec.targets[0].mask_path = "wrong.png";
      break;
    }
    const ValidationReport report = validate_manifest(manifest, false);
    bool saw = false;
    for (const auto& f : report.findings) saw = saw || f.code == "dimension_mismatch";
    CHECK(saw);
  }
}

TEST_CASE("manifest save/load through disk") {
  TempDir dir("roundtrip");
  DatasetManifest m;
  m.task_kind = TaskKind::vqa_seg;
  m.base_dir = dir.path();
  m.samples.push_back(make_positive_record("r1", Modality::ct, "liver tumour", "liver"));
  save_manifest(m, dir.path() / "manifest.json");

  const DatasetManifest back = load_manifest(dir.path() / "manifest.json");
  REQUIRE(back.samples.size() == 1);
  CHECK(back.samples[0].id == "r1");
  CHECK(back.base_dir == dir.path());

  // stats written alongside samples
  std::ifstream in(dir.path() / "manifest.json");
  const Json j = Json::parse(in);
  CHECK(j.contains("stats"));
  CHECK(j["stats"]["CT"]["liver tumour"] == 1);
}

TEST_CASE("vqa manifest records") {
  Json j = Json::parse(R"({
    "version": 1,
    "task_kind": "vqa",
    "samples": [
      {"id": "q1", "image_path": "i.png", "modality": "CT",
       "question": "Is the liver enlarged?", "answer": "Yes", "question_type": "closed"},
      {"id": "q2", "image_path": "i.png", "modality": "CT",
       "question": "Which organ?", "answer": "liver"}
    ]
  })");
  const DatasetManifest m = manifest_from_json(j, ".");
  REQUIRE(m.vqa_samples.size() == 2);
  CHECK(m.vqa_samples[0].closed);
  CHECK_FALSE(m.vqa_samples[1].closed); // inferred from non-yes/no answer
}
