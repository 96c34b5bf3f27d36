#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <unordered_set>

#include "tool_common.hpp"
#include "vdesc/dataset.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/mllm.hpp"
#include "vdesc/reports.hpp"

namespace vdtool {

namespace fs = std::filesystem;

namespace {

struct ImportArgs {
    std::string store_path;
    std::string csv_path;
    std::string media_root;
    std::string source;
};

void run_import(const ImportArgs& args, GlobalState& state) {
    RunContext run(state, "dataset import");
    vdesc::Store imported = vdesc::import_annotations_csv(args.csv_path);
    vdesc::Store store;
    if (fs::exists(args.store_path)) store = vdesc::load_store(args.store_path);

    std::unordered_set<std::string> existing;
    for (const auto& r : store) existing.insert(r.video_id);
    for (auto& r : imported) {
        if (!existing.insert(r.video_id).second) {
            throw vdesc::InvalidArgument("video_id already present in store: " + r.video_id);
        }
        if (!args.source.empty()) r.source = args.source;
        store.push_back(std::move(r));
    }
    if (!args.media_root.empty()) {
        for (auto& r : store) {
            if (r.media_ref.empty()) {
                r.media_ref = (fs::path(args.media_root) / r.video_id).string();
            }
        }
    }
    vdesc::save_store(store, args.store_path);
    run.note_output(args.store_path);

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "dataset import";
    resolved["store"] = args.store_path;
    resolved["csv"] = args.csv_path;
    resolved["media_root"] = args.media_root;
    resolved["source"] = args.source;
    run.set_resolved(resolved);
    run.finalize();

    std::cout << "import: " << imported.size() << " record(s), store now " << store.size()
              << "\n";
}

struct StatsArgs {
    std::string store_path;
    std::string label;
    std::string json_path;
};

void run_stats(const StatsArgs& args, GlobalState& state) {
    RunContext run(state, "dataset stats");
    vdesc::Store store = vdesc::load_store(args.store_path);
    vdesc::DatasetStats stats = vdesc::compute_stats(store, args.label);

    const auto& labels = vdesc::length_bin_labels();
    std::cout << "records: " << stats.record_count << "\n";
    std::cout << "mean_words: " << vdesc::format_double(stats.mean_description_words) << "\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::cout << "bin " << labels[i] << ": "
                  << vdesc::format_double(stats.length_bin_proportions[i]) << "\n";
    }
    for (const auto& [category, share] : stats.category_distribution) {
        std::cout << "category " << category << ": " << vdesc::format_double(share) << "\n";
    }

    std::string json_path;
    if (!args.json_path.empty() || run.enabled()) {
        json_path = run.out_path(args.json_path, "dataset_stats.json");
        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        j["method_label"] = args.label;
        j["record_count"] = stats.record_count;
        j["mean_description_words"] = stats.mean_description_words;
        j["length_bins"] = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            j["length_bins"][labels[i]] = stats.length_bin_proportions[i];
        }
        j["category_distribution"] = nlohmann::ordered_json::object();
        for (const auto& [category, share] : stats.category_distribution) {
            j["category_distribution"][category] = share;
        }
        write_json_file(json_path, j);
    }

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "dataset stats";
    resolved["store"] = args.store_path;
    resolved["label"] = args.label;
    resolved["json"] = json_path;
    run.set_resolved(resolved);
    run.finalize();
}

struct SplitArgs {
    std::string store_path;
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
    std::uint64_t seed = 0;
    bool force = false;
};

void run_split(const SplitArgs& args, GlobalState& state) {
    RunContext run(state, "dataset split");
    vdesc::Store store = vdesc::load_store(args.store_path);
    vdesc::assign_splits(store, args.train, args.val, args.test, args.seed, args.force);
    vdesc::save_store(store, args.store_path);
    run.note_output(args.store_path);

    std::size_t train = 0, val = 0, test = 0;
    for (const auto& r : store) {
        if (r.split == "train") ++train;
        else if (r.split == "val") ++val;
        else if (r.split == "test") ++test;
    }

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "dataset split";
    resolved["store"] = args.store_path;
    resolved["train_ratio"] = args.train;
    resolved["val_ratio"] = args.val;
    resolved["test_ratio"] = args.test;
    resolved["seed"] = args.seed;
    resolved["force"] = args.force;
    run.set_resolved(resolved);
    run.finalize();

    std::cout << "split: train=" << train << " val=" << val << " test=" << test << "\n";
}

struct CategorizeArgs {
    std::string store_path;
    std::string label;
    bool force = false;
    ModelFlags model;
};

void run_categorize(const CategorizeArgs& args, GlobalState& state) {
    RunContext run(state, "dataset categorize");
    auto file = state.file_config();
    vdesc::ModelConfig model = args.model.resolve(file);
    vdesc::Store store = vdesc::load_store(args.store_path);

    vdesc::MllmClient client(model);
    if (!args.model.record_http.empty()) client.set_record_dir(args.model.record_http);

    vdesc::CategorizeOutcome outcome =
        vdesc::categorize_records(store, args.label, client, args.force);
    vdesc::save_store(store, args.store_path);
    run.note_output(args.store_path);

    for (const auto& [id, raw] : outcome.unresolved) {
        std::cerr << "[categorize] " << id << ": unresolved reply '" << raw << "'\n";
    }
    for (const auto& [id, error] : outcome.failures) {
        std::cerr << "[categorize] " << id << ": FAILED: " << error << "\n";
    }

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "dataset categorize";
    resolved["store"] = args.store_path;
    resolved["label"] = args.label;
    resolved["force"] = args.force;
    resolved["model"] = args.model.resolved_json(model);
    run.set_resolved(resolved);
    run.finalize();

    std::cout << "categorize: " << outcome.updated << " updated, " << outcome.unresolved.size()
              << " unresolved, " << outcome.failures.size() << " failed\n";
    if (outcome.failures.size() * 5 > store.size()) {
        throw vdesc::BatchFailure("more than 20% of records failed categorization",
                                  outcome.failures.size(), store.size());
    }
}

}  // namespace

void register_cmd_dataset(CLI::App& app, GlobalState& state) {
    CLI::App* cmd = app.add_subcommand("dataset", "JSONL store management");
    cmd->require_subcommand(1);
    cmd->fallthrough();

    auto import_args = std::make_shared<ImportArgs>();
    CLI::App* import = cmd->add_subcommand("import", "import video_id,annotation CSV rows");
    import->add_option("--store", import_args->store_path, "JSONL store path")->required();
    import->add_option("--csv", import_args->csv_path, "annotations CSV path")->required();
    import->add_option("--media-root", import_args->media_root,
                       "assign media_ref = <media-root>/<video_id> to records lacking one");
    import->add_option("--source", import_args->source, "source label for imported records");
    import->callback([import_args, &state]() { run_import(*import_args, state); });

    auto stats_args = std::make_shared<StatsArgs>();
    CLI::App* stats = cmd->add_subcommand("stats", "length and category statistics");
    stats->add_option("--store", stats_args->store_path, "JSONL store path")->required();
    stats->add_option("--label", stats_args->label,
                      "method label (or human_annotation) to measure")
        ->required();
    stats->add_option("--json", stats_args->json_path, "also write the statistics as JSON");
    stats->callback([stats_args, &state]() { run_stats(*stats_args, state); });

    auto split_args = std::make_shared<SplitArgs>();
    CLI::App* split = cmd->add_subcommand("split", "assign train/val/test splits");
    split->add_option("--store", split_args->store_path, "JSONL store path")->required();
    split->add_option("--train", split_args->train, "train ratio");
    split->add_option("--val", split_args->val, "validation ratio");
    split->add_option("--test", split_args->test, "test ratio");
    split->add_option("--seed", split_args->seed, "shuffle seed")->required();
    split->add_flag("--force", split_args->force, "overwrite existing split assignments");
    split->callback([split_args, &state]() { run_split(*split_args, state); });

    auto cat_args = std::make_shared<CategorizeArgs>();
    CLI::App* categorize =
        cmd->add_subcommand("categorize", "fill record categories through a model");
    categorize->add_option("--store", cat_args->store_path, "JSONL store path")->required();
    categorize->add_option("--label", cat_args->label,
                           "method label (or human_annotation) whose text is classified")
        ->required();
    categorize->add_flag("--force", cat_args->force, "reclassify records that have a category");
    cat_args->model.add(categorize);
    categorize->callback([cat_args, &state]() { run_categorize(*cat_args, state); });
}

}  // namespace vdtool
