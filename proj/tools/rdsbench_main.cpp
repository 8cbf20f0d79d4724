// Command-line front end: dataset assembly, validation, reference
// prediction generation, gated evaluation, and report rendering.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rdsbench/rdsbench.hpp"

namespace fs = std::filesystem;
using namespace rdsbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitWarnings = 1;
constexpr int kExitInvalidInput = 2;

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

// --- assemble ----------------------------------------------------------------

struct AssembleArgs {
  std::string sources;
  std::string out_dir;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  std::string templates;
  std::string export_prompts;
};

int run_assemble(const AssembleArgs& args) {
  const TemplateSet templates = TemplateSet::resolve(opt_path(args.templates));
  DatasetManifest manifest = load_manifest(args.sources);
  if (manifest.task_kind == TaskKind::vqa)
    throw Error("assemble expects a ref_seg or vqa_seg manifest");

  const SplitResult split = split_by_volume(manifest.samples, args.test_fraction, args.seed);
  for (const auto& w : split.warnings) std::cerr << "warning: " << w << "\n";

  fs::create_directories(args.out_dir);
  auto write_part = [&](const std::vector<SourceRecord>& records, Split part,
                        const std::string& name) {
    DatasetManifest out;
    out.task_kind = manifest.task_kind;
    out.base_dir = manifest.base_dir;
    out.samples = records;
    for (auto& r : out.samples) r.split = part;
    // Keep mask/image paths resolvable from the new manifest location.
    for (auto& r : out.samples) {
      r.image_path = fs::relative(manifest.resolve(r.image_path), args.out_dir).string();
      for (auto& t : r.targets)
        t.mask_path = fs::relative(manifest.resolve(t.mask_path), args.out_dir).string();
    }
    save_manifest(out, fs::path(args.out_dir) / name);
  };
  write_part(split.train, Split::train, "train.manifest.json");
  write_part(split.test, Split::test, "test.manifest.json");

  Json summary = Json::object();
  summary["n_records"] = manifest.samples.size();
  summary["n_train"] = split.train.size();
  summary["n_test"] = split.test.size();
  summary["achieved_test_fraction"] = split.achieved_fraction;
  summary["label_distribution"] = compute_label_distribution(manifest).to_json();
  write_text_file(fs::path(args.out_dir) / "label_distribution.json", summary.dump(2) + "\n");

  if (!args.export_prompts.empty()) {
    std::ofstream out(args.export_prompts);
    if (!out) throw IoError("cannot write " + args.export_prompts);
    if (manifest.task_kind == TaskKind::ref_seg) {
      for (const auto& rec : manifest.samples)
        for (std::size_t t = 0; t < rec.targets.size(); ++t) {
          const RefSegSample s =
              render_refseg_sample(rec, static_cast<int>(t), args.seed, templates);
          Json j = Json::object();
          j["id"] = s.id;
          j["image_path"] = s.image_path;
          j["modality"] = modality_key(s.modality);
          j["prompt"] = s.prompt;
          j["expected_answer"] = s.expected_answer;
          j["mask_path"] = s.target.mask_path;
          out << j.dump() << "\n";
        }
    } else {
      for (const auto& rec : manifest.samples) {
        const VqaSegSample s = render_vqaseg_sample(rec, templates);
        Json j = Json::object();
        j["id"] = s.id;
        j["image_path"] = s.image_path;
        j["modality"] = modality_key(s.modality);
        j["question_text"] = s.question_text;
        out << j.dump() << "\n";
      }
    }
  }

  std::cout << "wrote " << split.train.size() << " train / " << split.test.size()
            << " test records to " << args.out_dir << "\n";
  return split.warnings.empty() ? kExitOk : kExitWarnings;
}

// --- validate ----------------------------------------------------------------

int run_validate(const std::string& manifest_path, bool strict) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const ValidationReport report = validate_manifest(manifest, strict);
  for (const auto& f : report.findings)
    std::cout << f.sample_id << "  [" << f.code << "]  " << f.message << "\n";
  std::cout << (report.clean() ? "manifest clean" : std::to_string(report.findings.size()) +
                                                        " finding(s)")
            << " (" << manifest.sample_count() << " samples)\n";
  if (report.clean()) return kExitOk;
  return report.fatal() ? kExitInvalidInput : kExitWarnings;
}

// --- mock-predict ------------------------------------------------------------

struct MockPredictArgs {
  std::string manifest;
  std::string policy = "oracle";
  std::string out;
  std::string label;
  std::string fill = "empty";
  double flip_prob = 0.0;
  std::uint64_t seed = 0;
  std::string templates;
};

int run_mock_predict(const MockPredictArgs& args) {
  const TemplateSet templates = TemplateSet::resolve(opt_path(args.templates));
  const DatasetManifest manifest = load_manifest(args.manifest);

  PredictorPolicy policy = PredictorPolicy::parse(args.policy);
  policy.seed = args.seed;
  policy.flip_prob = args.flip_prob;
  if (!args.label.empty()) {
    policy.label_mode = PredictorPolicy::LabelMode::fixed;
    policy.fixed_label = args.label;
  }
  if (args.fill == "full")
    policy.fill = PredictorPolicy::Fill::full;
  else if (args.fill != "empty")
    throw Error("--fill must be empty or full");
  if (policy.flip_prob < 0.0 || policy.flip_prob > 1.0)
    throw Error("--flip-prob must be in [0,1]");

  write_predictions_file(manifest, policy, args.out, templates);
  std::cout << "wrote predictions to " << args.out << "\n";
  return kExitOk;
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateArgs {
  std::string manifest;
  std::string predictions;
  std::string mode = "full";
  int jobs = 1;
  std::string out;
  std::string emit = "text";
  std::string templates;
  std::string config;
  std::uint64_t seed = 0;
};

// Flags override config-file values; only unset flags fall back.
void merge_config(EvaluateArgs& args, const CLI::App* cmd) {
  if (args.config.empty()) return;
  std::ifstream in(args.config);
  if (!in) throw IoError("cannot open config: " + args.config);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what());
  }
  auto unset = [&](const std::string& flag) { return cmd->get_option(flag)->count() == 0; };
  if (j.contains("manifest_path") && unset("--manifest"))
    args.manifest = j["manifest_path"].get<std::string>();
  if (j.contains("predictions_path") && unset("--pred"))
    args.predictions = j["predictions_path"].get<std::string>();
  if (j.contains("mode") && unset("--mode")) args.mode = j["mode"].get<std::string>();
  if (j.contains("parallelism") && unset("--jobs")) args.jobs = j["parallelism"].get<int>();
  if (j.contains("output") && unset("--emit")) args.emit = j["output"].get<std::string>();
  if (j.contains("template_path") && unset("--templates"))
    args.templates = j["template_path"].get<std::string>();
  if (j.contains("seed") && unset("--seed")) args.seed = j["seed"].get<std::uint64_t>();
}

int emit_report(const Json& report_json, const std::string& emit, const std::string& out_path) {
  std::string rendered;
  if (emit == "json")
    rendered = report_json.dump(2) + "\n";
  else if (emit == "text")
    rendered = render_report_text(report_json);
  else if (emit == "csv")
    rendered = render_report_csv(report_json);
  else
    throw Error("--emit must be json, text, or csv");
  std::cout << rendered;
  if (!out_path.empty()) {
    // The stored report is always JSON; --emit controls stdout.
    write_text_file(out_path, report_json.dump(2) + "\n");
  }
  return kExitOk;
}

int run_evaluate(const EvaluateArgs& args) {
  const TemplateSet templates = TemplateSet::resolve(opt_path(args.templates));
  if (args.jobs < 1) throw Error("--jobs must be >= 1");
  const EvalMode mode = parse_eval_mode(args.mode);

  const EvalRunResult result =
      evaluate_run(args.manifest, args.predictions, mode, args.jobs, templates);
  emit_report(result.report_json, args.emit, args.out);
  return result.completed_with_warnings ? kExitWarnings : kExitOk;
}

struct EvaluateVqaArgs {
  std::string manifest;
  std::string predictions;
  std::string out;
  std::string emit = "text";
};

int run_evaluate_vqa(const EvaluateVqaArgs& args) {
  const DatasetManifest manifest = load_manifest(args.manifest);
  const PredictionSet predictions = load_predictions(args.predictions);
  VqaEvalReport report = evaluate_vqa(manifest, predictions);
  report.manifest_hash = file_hash(args.manifest);
  report.predictions_hash = file_hash(args.predictions);
  report.n_malformed_lines = predictions.malformed_lines;
  report.n_duplicate_ids = predictions.duplicate_ids;
  for (const auto& w : predictions.warnings) report.warnings.push_back(w);

  emit_report(vqa_report_to_json(report), args.emit, args.out);
  return predictions.malformed_lines > 0 || predictions.duplicate_ids > 0 ? kExitWarnings
                                                                          : kExitOk;
}

// --- report ------------------------------------------------------------------

int run_report(const std::string& report_path, const std::string& emit) {
  std::ifstream in(report_path);
  if (!in) throw IoError("cannot open report: " + report_path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  return emit_report(j, emit, "");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for hierarchical detection / diagnosis / "
               "multi-target segmentation tasks"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  AssembleArgs assemble_args;
  auto* cmd_assemble = app.add_subcommand("assemble", "Split sources and write task manifests");
  cmd_assemble->add_option("--sources", assemble_args.sources, "Source manifest JSON")
      ->required();
  cmd_assemble->add_option("--out-dir", assemble_args.out_dir, "Output directory")->required();
  cmd_assemble->add_option("--seed", assemble_args.seed, "RNG seed (default 0)");
  cmd_assemble->add_option("--test-fraction", assemble_args.test_fraction,
                           "Test fraction in (0,1), default 0.2");
  cmd_assemble->add_option("--templates", assemble_args.templates, "Template file or directory");
  cmd_assemble->add_option("--export-prompts", assemble_args.export_prompts,
                           "Also write rendered prompts as JSONL");

  std::string validate_manifest_path;
  bool validate_strict = false;
  auto* cmd_validate = app.add_subcommand("validate", "Check a manifest and its files");
  cmd_validate->add_option("--manifest", validate_manifest_path, "Manifest JSON")->required();
  cmd_validate->add_flag("--strict", validate_strict, "Any finding is fatal (exit 2)");

  MockPredictArgs mock_args;
  auto* cmd_mock = app.add_subcommand("mock-predict", "Generate reference predictions");
  cmd_mock->add_option("--manifest", mock_args.manifest, "Manifest JSON")->required();
  cmd_mock
      ->add_option("--policy", mock_args.policy,
                   "oracle | always-negative | always-positive | constant-mask | noisy-oracle")
      ->required();
  cmd_mock->add_option("--out", mock_args.out, "Output prediction JSONL")->required();
  cmd_mock->add_option("--label", mock_args.label, "Fixed diagnosis label (always-positive)");
  cmd_mock->add_option("--fill", mock_args.fill, "constant-mask fill: empty | full");
  cmd_mock->add_option("--flip-prob", mock_args.flip_prob, "noisy-oracle flip probability");
  cmd_mock->add_option("--seed", mock_args.seed, "RNG seed (default 0)");
  cmd_mock->add_option("--templates", mock_args.templates, "Template file or directory");

  EvaluateArgs eval_args;
  auto* cmd_eval = app.add_subcommand("evaluate", "Score predictions with gated evaluation");
  cmd_eval->add_option("--manifest", eval_args.manifest, "Manifest JSON");
  cmd_eval->add_option("--pred", eval_args.predictions, "Prediction JSONL");
  cmd_eval->add_option("--mode", eval_args.mode,
                       "full | detect-only | diagnose-only | diagnose-seg");
  cmd_eval->add_option("--jobs", eval_args.jobs, "Evaluation parallelism (default 1)");
  cmd_eval->add_option("--out", eval_args.out, "Write report JSON here");
  cmd_eval->add_option("--emit", eval_args.emit, "stdout format: json | text | csv");
  cmd_eval->add_option("--templates", eval_args.templates, "Template file or directory");
  cmd_eval->add_option("--config", eval_args.config, "Optional JSON config; flags override");
  cmd_eval->add_option("--seed", eval_args.seed, "RNG seed (default 0)");

  EvaluateVqaArgs vqa_args;
  auto* cmd_vqa = app.add_subcommand("evaluate-vqa", "Score a plain VQA manifest");
  cmd_vqa->add_option("--manifest", vqa_args.manifest, "VQA manifest JSON")->required();
  cmd_vqa->add_option("--pred", vqa_args.predictions, "Prediction JSONL")->required();
  cmd_vqa->add_option("--out", vqa_args.out, "Write report JSON here");
  cmd_vqa->add_option("--emit", vqa_args.emit, "stdout format: json | text | csv");

  std::string report_path, report_emit = "text";
  auto* cmd_report = app.add_subcommand("report", "Render a stored report JSON");
  cmd_report->add_option("--report", report_path, "Report JSON file")->required();
  cmd_report->add_option("--emit", report_emit, "text | csv | json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_assemble->parsed()) return run_assemble(assemble_args);
    if (cmd_validate->parsed()) return run_validate(validate_manifest_path, validate_strict);
    if (cmd_mock->parsed()) return run_mock_predict(mock_args);
    if (cmd_eval->parsed()) {
      merge_config(eval_args, cmd_eval);
      if (eval_args.manifest.empty() || eval_args.predictions.empty())
        throw Error("evaluate requires --manifest and --pred (flags or config)");
      return run_evaluate(eval_args);
    }
    if (cmd_vqa->parsed()) return run_evaluate_vqa(vqa_args);
    if (cmd_report->parsed()) return run_report(report_path, report_emit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitOk;
}
