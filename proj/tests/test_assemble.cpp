#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>

#include "rdsbench/answer.hpp"
#include "rdsbench/assemble.hpp"
#include "rdsbench/metrics.hpp"
#include "rdsbench/rng.hpp"
#include "test_support.hpp"

using namespace rdsbench;
using test_support::make_negative_record;
using test_support::make_positive_record;
using test_support::make_target;

namespace {

SourceRecord liver_record() {
  SourceRecord r;
  r.id = "ct01";
  r.image_path = "img.png";
  r.modality = Modality::ct;
  r.finding.positive = true;
  r.finding.label = "liver tumour";
  SegTarget t = make_target("liver", TargetKind::organ);
  t.synonyms = {"liver", "hepatic organ"};
  r.targets = {t, make_target("liver tumour", TargetKind::abnormality)};
  return r;
}

} // namespace

TEST_CASE("ref-seg prompt renders the exact template") {
  const SourceRecord rec = liver_record();

  // Find a seed that samples synonym 0 ("liver"); the draw is then frozen.
  std::uint64_t seed = 0;
  while (render_refseg_sample(rec, 0, seed).prompt.find("segment liver") == std::string::npos)
    ++seed;

  const RefSegSample s = render_refseg_sample(rec, 0, seed);
  CHECK(s.prompt == "<img> Please segment liver in the CT.");
  CHECK(s.expected_answer == "Here is the mask for liver <seg000>.");
  CHECK(s.id == "ct01#t0");

  // Equal seeds render bit-identically.
  const RefSegSample again = render_refseg_sample(rec, 0, seed);
  CHECK(again.prompt == s.prompt);
  CHECK(again.expected_answer == s.expected_answer);

  // Exactly one seg token in the expected answer.
  CHECK(tokenize_seg_tokens(s.expected_answer).size() == 1);

  CHECK_THROWS_AS(render_refseg_sample(rec, 9, 0), std::out_of_range);
}

TEST_CASE("single-synonym target always renders its name") {
  SourceRecord rec = liver_record();
  rec.targets[0].synonyms = {"liver"};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RefSegSample s = render_refseg_sample(rec, 0, seed);
    CHECK(s.prompt == "<img> Please segment liver in the CT.");
  }
}

TEST_CASE("synonym sampling is uniform across seeds and across samples") {
  SourceRecord rec = liver_record();

  // Sweep seeds with a fixed sample.
  int first = 0;
  const int n = 10000;
  for (int seed = 0; seed < n; ++seed) {
    const RefSegSample s = render_refseg_sample(rec, 0, static_cast<std::uint64_t>(seed));
    if (s.prompt.find("segment liver in") != std::string::npos) ++first;
  }
  const double freq_seeds = static_cast<double>(first) / n;
  CHECK(freq_seeds >= 0.45);
  CHECK(freq_seeds <= 0.55);

  // Sweep sample ids with a fixed seed.
  first = 0;
  for (int i = 0; i < n; ++i) {
    rec.id = "ct" + std::to_string(i);
    const RefSegSample s = render_refseg_sample(rec, 0, 12345);
    if (s.prompt.find("segment liver in") != std::string::npos) ++first;
  }
  const double freq_ids = static_cast<double>(first) / n;
  CHECK(freq_ids >= 0.45);
  CHECK(freq_ids <= 0.55);
}

TEST_CASE("per-sample draws survive record reordering") {
  SourceRecord a = liver_record();
  SourceRecord b = liver_record();
  b.id = "ct02";
  const std::string a_first = render_refseg_sample(a, 0, 9).prompt;
  const std::string b_first = render_refseg_sample(b, 0, 9).prompt;
  // Rendering order is irrelevant: the draw is keyed by (seed, sample id).
  CHECK(render_refseg_sample(b, 0, 9).prompt == b_first);
  CHECK(render_refseg_sample(a, 0, 9).prompt == a_first);
}

TEST_CASE("vqa-seg rendering") {
  SECTION("negative record") {
    const VqaSegSample s = render_vqaseg_sample(make_negative_record("n1", Modality::xray));
    CHECK_FALSE(s.gt_detection);
    CHECK(s.gt_targets.empty());
    CHECK_FALSE(s.gt_diagnosis.has_value());
    CHECK(s.question_text.find("X-ray") != std::string::npos);
  }

  SECTION("positive record carries ordered targets and diagnosis synonyms") {
    const VqaSegSample s = render_vqaseg_sample(liver_record());
    CHECK(s.gt_detection);
    REQUIRE(s.gt_targets.size() == 2);
    CHECK(s.gt_targets[0].kind == TargetKind::organ);
    CHECK(s.gt_targets[1].kind == TargetKind::abnormality);
    REQUIRE(s.gt_diagnosis.has_value());
    CHECK(s.gt_diagnosis->label == "liver tumour");
    CHECK_FALSE(s.gt_diagnosis->synonyms.empty());
    CHECK(s.gt_diagnosis->synonyms[0] == "liver tumour");
  }

  SECTION("three numbered sub-questions") {
    const VqaSegSample s = render_vqaseg_sample(make_negative_record("n2", Modality::ct));
    const StepSplit steps = split_steps(s.question_text);
    CHECK(steps.enumerated);
    CHECK(steps.step2.has_value());
    CHECK(steps.step3.has_value());
  }

  SECTION("rendering is deterministic") {
    const VqaSegSample s1 = render_vqaseg_sample(liver_record());
    const VqaSegSample s2 = render_vqaseg_sample(liver_record());
    CHECK(s1.question_text == s2.question_text);
    CHECK(s1.id == s2.id);
  }

  SECTION("positive record with bad targets is rejected") {
    SourceRecord rec = liver_record();
    rec.targets.pop_back(); // drop abnormality
    CHECK_THROWS_AS(render_vqaseg_sample(rec), Error);

    rec = liver_record();
    std::swap(rec.targets[0], rec.targets[1]); // wrong order
    CHECK_THROWS_AS(render_vqaseg_sample(rec), Error);

    rec = make_negative_record("n3", Modality::ct);
    rec.targets.push_back(make_target("liver", TargetKind::organ));
    CHECK_THROWS_AS(render_vqaseg_sample(rec), Error);
  }
}

TEST_CASE("volume split fixed cases") {
  SECTION("two volumes of five split 50/50") {
    std::vector<SourceRecord> records;
    for (int i = 0; i < 10; ++i) {
      auto r = make_negative_record("r" + std::to_string(i), Modality::ct);
      r.volume_id = i < 5 ? "volA" : "volB";
      records.push_back(r);
    }
    const SplitResult s = split_by_volume(records, 0.5, 1);
    CHECK(s.train.size() == 5);
    CHECK(s.test.size() == 5);
    // Whole volumes on each side.
    for (const auto& r : s.test) CHECK(r.volume_id == s.test.front().volume_id);
    for (const auto& r : s.train) CHECK(r.volume_id == s.train.front().volume_id);
    CHECK(s.warnings.empty());
  }

  SECTION("one volume owning everything warns about the fraction") {
    std::vector<SourceRecord> records;
    for (int i = 0; i < 8; ++i) {
      auto r = make_negative_record("r" + std::to_string(i), Modality::ct);
      r.volume_id = "only";
      records.push_back(r);
    }
    const SplitResult s = split_by_volume(records, 0.25, 1);
    CHECK((s.train.empty() || s.test.empty()));
    CHECK(s.train.size() + s.test.size() == 8);
    CHECK_FALSE(s.warnings.empty());
  }

  SECTION("100 singletons at 0.3 give exactly 30, stable across reruns") {
    std::vector<SourceRecord> records;
    for (int i = 0; i < 100; ++i)
      records.push_back(make_negative_record("r" + std::to_string(i), Modality::xray));
    const SplitResult first = split_by_volume(records, 0.3, 77);
    CHECK(first.test.size() == 30);
    const SplitResult second = split_by_volume(records, 0.3, 77);
    std::set<std::string> ids1, ids2;
    for (const auto& r : first.test) ids1.insert(r.id);
    for (const auto& r : second.test) ids2.insert(r.id);
    CHECK(ids1 == ids2);

    const SplitResult other_seed = split_by_volume(records, 0.3, 78);
    std::set<std::string> ids3;
    for (const auto& r : other_seed.test) ids3.insert(r.id);
    CHECK(ids3 != ids1); // overwhelmingly likely with 100 choose 30
  }

  SECTION("input validation") {
    CHECK_THROWS_AS(split_by_volume({}, 0.5, 0), Error);
    std::vector<SourceRecord> one = {make_negative_record("a", Modality::ct)};
    CHECK_THROWS_AS(split_by_volume(one, 0.0, 0), Error);
    CHECK_THROWS_AS(split_by_volume(one, 1.0, 0), Error);
  }
}

TEST_CASE("volume split is a volume-respecting partition") {
  Rng rng(53, "split_prop");
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SourceRecord> records;
    const int n_volumes = 1 + static_cast<int>(rng.uniform_below(8));
    int id = 0;
    for (int v = 0; v < n_volumes; ++v) {
      const int size = 1 + static_cast<int>(rng.uniform_below(6));
      for (int k = 0; k < size; ++k) {
        auto r = make_negative_record("r" + std::to_string(id++), Modality::ct);
        r.volume_id = "vol" + std::to_string(v);
        records.push_back(r);
      }
    }
    const int singletons = static_cast<int>(rng.uniform_below(20));
    for (int k = 0; k < singletons; ++k)
      records.push_back(make_negative_record("r" + std::to_string(id++), Modality::xray));

    const double fraction = 0.1 + 0.8 * rng.unit_real();
    const SplitResult s = split_by_volume(records, fraction, rng.next());

    // Partition: union is the input, intersection empty.
    std::set<std::string> train_ids, test_ids;
    for (const auto& r : s.train) train_ids.insert(r.id);
    for (const auto& r : s.test) test_ids.insert(r.id);
    CHECK(train_ids.size() + test_ids.size() == records.size());
    for (const auto& idv : test_ids) CHECK(train_ids.count(idv) == 0);

    // No volume spans partitions.
    std::map<std::string, int> volume_side;
    for (const auto& r : s.train)
      if (r.volume_id) {
        auto [it, ins] = volume_side.try_emplace(*r.volume_id, 0);
        CHECK(it->second != 1);
      }
    for (const auto& r : s.test)
      if (r.volume_id) {
        auto [it, ins] = volume_side.try_emplace(*r.volume_id, 1);
        CHECK(it->second != 0);
      }

    // Achieved fraction within tolerance unless warned.
    std::size_t largest = 1;
    std::map<std::string, std::size_t> vol_sizes;
    for (const auto& r : records)
      if (r.volume_id) largest = std::max(largest, ++vol_sizes[*r.volume_id]);
    const double tolerance =
        std::max(static_cast<double>(largest) / static_cast<double>(records.size()), 0.02);
    if (s.warnings.empty())
      CHECK(std::abs(s.achieved_fraction - fraction) <= tolerance + 1e-12);
  }
}

TEST_CASE("gt answer rendering matches the evaluator's grammar") {
  const VqaSegSample pos = render_vqaseg_sample(liver_record());
  const TemplateSet templates;
  const std::string answer = render_gt_answer(pos, templates);
  CHECK(parse_detection(answer) == Detection::yes);
  const auto refs = tokenize_seg_tokens(answer);
  REQUIRE(refs.size() == 2);
  CHECK(refs[0].token_name == "seg000");
  CHECK(refs[1].token_name == "seg001");
  REQUIRE(pos.gt_diagnosis.has_value());
  CHECK(diagnosis_indicator(true, pos.gt_diagnosis->label, parse_answer(answer),
                            pos.gt_diagnosis->synonyms) == 1);

  const VqaSegSample neg = render_vqaseg_sample(make_negative_record("n", Modality::xray));
  CHECK(render_gt_answer(neg, templates) == "1. No.");
  CHECK(parse_detection(render_gt_answer(neg, templates)) == Detection::no);
}

TEST_CASE("templates load from file and match built-ins") {
  // The shipped default template file must stay in sync with the embedded
  // defaults; both are contract surfaces.
  const auto repo_templates = std::filesystem::path(__FILE__).parent_path().parent_path() /
                              "templates" / "default.json";
  REQUIRE(std::filesystem::exists(repo_templates));
  const TemplateSet from_file = TemplateSet::load(repo_templates);
  const TemplateSet builtin;
  CHECK(from_file.refseg_prompt == builtin.refseg_prompt);
  CHECK(from_file.refseg_answer == builtin.refseg_answer);
  CHECK(from_file.vqaseg_question == builtin.vqaseg_question);
  CHECK(from_file.negative_answer == builtin.negative_answer);
  CHECK(from_file.positive_answer == builtin.positive_answer);
  CHECK(from_file.seg_vocab_size == builtin.seg_vocab_size);
}
