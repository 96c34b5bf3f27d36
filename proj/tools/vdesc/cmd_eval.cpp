#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include "tool_common.hpp"
#include "vdesc/dataset.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/judge.hpp"
#include "vdesc/mllm.hpp"
#include "vdesc/reports.hpp"
#include "vdesc/text_metrics.hpp"

namespace vdtool {

namespace {

struct StandardArgs {
    std::string store_path;
    std::string candidate;
    std::string reference;
    std::string spice_file;
    std::string csv_path;
    std::string json_path;
};

void run_standard(const StandardArgs& args, GlobalState& state) {
    RunContext run(state, "eval standard");
    vdesc::Store store = vdesc::load_store(args.store_path);
    std::vector<vdesc::EvalPair> pairs =
        vdesc::collect_eval_pairs(store, args.candidate, args.reference);
    vdesc::MetricReport report = vdesc::evaluate_corpus(pairs);
    if (!args.spice_file.empty()) vdesc::merge_spice_file(report, args.spice_file);

    std::string csv_path = run.out_path(args.csv_path, "metrics.csv");
    std::string json_path = run.out_path(args.json_path, "metrics.json");
    vdesc::write_metric_report_csv(report, csv_path);
    vdesc::write_metric_report_json(report, json_path);

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "eval standard";
    resolved["store"] = args.store_path;
    resolved["candidate"] = args.candidate;
    resolved["reference"] = args.reference;
    resolved["spice_file"] = args.spice_file;
    resolved["csv"] = csv_path;
    resolved["json"] = json_path;
    run.set_resolved(resolved);
    run.finalize();

    std::cout << "corpus bleu_1=" << vdesc::format_double(report.corpus.bleu_1)
              << " bleu_4=" << vdesc::format_double(report.corpus.bleu_4)
              << " meteor=" << vdesc::format_double(report.corpus.meteor)
              << " rouge_l=" << vdesc::format_double(report.corpus.rouge_l)
              << " cider=" << vdesc::format_double(report.corpus.cider) << "\n";
}

struct JudgeArgs {
    std::string store_path;
    std::string candidate;
    std::string reference;
    std::string csv_path;
    std::string json_path;
    int repeats = 1;
    int jobs = 1;
    ModelFlags model;
};

void run_judge(const JudgeArgs& args, GlobalState& state) {
    RunContext run(state, "eval judge");
    auto file = state.file_config();
    vdesc::ModelConfig model = args.model.resolve(file);
    // Rubric scoring wants reproducible ratings, so judging defaults to
    // greedy decoding unless the user explicitly set a temperature.
    if (args.model.temperature_opt->count() == 0 && !file.get("temperature")) {
        model.temperature = 0.0;
    }
    if (args.repeats < 1) throw vdesc::ConfigError("--repeats must be >= 1");
    if (args.jobs < 1) throw vdesc::ConfigError("--jobs must be >= 1");

    vdesc::Store store = vdesc::load_store(args.store_path);
    vdesc::MllmClient client(model);
    if (!args.model.record_http.empty()) client.set_record_dir(args.model.record_http);

    vdesc::JudgeReport report = vdesc::judge_corpus(store, args.candidate, args.reference,
                                                    client, args.repeats, args.jobs);

    std::string csv_path = run.out_path(args.csv_path, "judge.csv");
    std::string json_path = run.out_path(args.json_path, "judge.json");
    vdesc::write_judge_report_csv(report, args.candidate, csv_path);
    vdesc::write_judge_report_json(report, args.candidate, json_path);

    for (const auto& [id, error] : report.failures) {
        std::cerr << "[judge] " << id << ": FAILED: " << error << "\n";
    }

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "eval judge";
    resolved["store"] = args.store_path;
    resolved["candidate"] = args.candidate;
    resolved["reference"] = args.reference;
    resolved["repeats"] = args.repeats;
    resolved["jobs"] = args.jobs;
    resolved["csv"] = csv_path;
    resolved["json"] = json_path;
    resolved["model"] = args.model.resolved_json(model);
    run.set_resolved(resolved);
    run.finalize();

    std::cout << "judge descriptive=" << vdesc::format_double(report.mean_descriptive)
              << " objective=" << vdesc::format_double(report.mean_objective)
              << " accurate=" << vdesc::format_double(report.mean_accurate)
              << " clear=" << vdesc::format_double(report.mean_clear) << "\n";
}

}  // namespace

void register_cmd_eval(CLI::App& app, GlobalState& state) {
    CLI::App* cmd = app.add_subcommand("eval", "evaluate candidate descriptions");
    cmd->require_subcommand(1);
    cmd->fallthrough();

    auto std_args = std::make_shared<StandardArgs>();
    CLI::App* standard = cmd->add_subcommand("standard", "n-gram and consensus metrics");
    standard->add_option("--store", std_args->store_path, "JSONL store path")->required();
    standard->add_option("--candidate", std_args->candidate, "candidate method label")
        ->required();
    standard->add_option("--reference", std_args->reference,
                         "reference method label (or human_annotation)")
        ->required();
    standard->add_option("--spice-file", std_args->spice_file,
                         "merge externally computed SPICE scores (JSON id->value)");
    standard->add_option("--csv", std_args->csv_path, "metrics CSV output path");
    standard->add_option("--json", std_args->json_path, "metrics JSON output path");
    standard->callback([std_args, &state]() { run_standard(*std_args, state); });

    auto judge_args = std::make_shared<JudgeArgs>();
    CLI::App* judge = cmd->add_subcommand("judge", "rubric ratings through a judge model");
    judge->add_option("--store", judge_args->store_path, "JSONL store path")->required();
    judge->add_option("--candidate", judge_args->candidate, "candidate method label")
        ->required();
    judge->add_option("--reference", judge_args->reference,
                      "ground-truth method label (or human_annotation)")
        ->required();
    judge->add_option("--repeats", judge_args->repeats, "rating repeats per record");
    judge->add_option("--jobs", judge_args->jobs, "parallel worker count");
    judge->add_option("--csv", judge_args->csv_path, "judge CSV output path");
    judge->add_option("--json", judge_args->json_path, "judge JSON output path");
    judge_args->model.add(judge);
    judge->callback([judge_args, &state]() { run_judge(*judge_args, state); });
}

}  // namespace vdtool
