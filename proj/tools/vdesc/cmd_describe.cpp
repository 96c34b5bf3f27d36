#include <atomic>
#include <filesystem>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tool_common.hpp"
#include "vdesc/dataset.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/frame_source.hpp"
#include "vdesc/guidelines.hpp"
#include "vdesc/image_io.hpp"
#include "vdesc/keyframes.hpp"
#include "vdesc/mllm.hpp"
#include "vdesc/prompts.hpp"
#include "vdesc/taxonomy.hpp"

namespace vdtool {

namespace fs = std::filesystem;

namespace {

struct DescribeArgs {
    std::string store_path;
    std::string label;
    std::string variant_name;
    std::string guidelines_file;
    std::string dump_prompt;
    std::string created_at;
    double fps = 1.0;
    int jobs = 1;
    bool force = false;
    ModelFlags model;
    ExtractionFlags extraction;
    CLI::Option* jobs_opt = nullptr;
};

bool variant_needs_annotation(vdesc::PromptVariant variant) {
    return variant == vdesc::PromptVariant::kCompliant ||
           variant == vdesc::PromptVariant::kNonCompliantWithHA;
}

// media_ref may point at a directory of frames or at a keyframes command
// output directory (detected by its keyframes.json sidecar), in which case
// the precomputed keyframes are used as-is.
std::vector<vdesc::ImagePayload> images_for_record(const vdesc::VideoRecord& record,
                                                   const vdesc::ExtractionConfig& config,
                                                   int jpeg_quality, int max_side, double fps) {
    if (record.media_ref.empty()) {
        throw vdesc::InvalidArgument("record has no media_ref");
    }
    if (!fs::is_directory(record.media_ref)) {
        throw vdesc::InvalidArgument("media_ref is not a directory: " + record.media_ref);
    }
    const fs::path sidecar_path = fs::path(record.media_ref) / "keyframes.json";
    if (fs::exists(sidecar_path)) {
        nlohmann::json sidecar;
        try {
            auto bytes = vdesc::read_binary_file(sidecar_path.string());
            sidecar = nlohmann::json::parse(bytes.begin(), bytes.end());
        } catch (const nlohmann::json::exception& e) {
            throw vdesc::InvalidArgument("unreadable keyframe sidecar " + sidecar_path.string() +
                                         ": " + e.what());
        }
        std::vector<vdesc::Frame> frames;
        vdesc::KeyframeSet set;
        set.video_id = record.video_id;
        set.config = config;
        set.used_fallback = sidecar.value("used_fallback", false);
        for (const auto& entry : sidecar.at("keyframes")) {
            vdesc::Keyframe kf;
            kf.frame_index = entry.at("frame_index").get<int>();
            kf.timestamp_seconds = entry.value("timestamp_seconds", 0.0);
            kf.peak_value = entry.value("peak_value", 0.0);
            set.keyframes.push_back(kf);

            vdesc::Frame frame = vdesc::load_image_file(
                (fs::path(record.media_ref) / entry.at("file").get<std::string>()).string());
            frame.index = kf.frame_index;
            frame.timestamp_seconds = kf.timestamp_seconds;
            frames.push_back(std::move(frame));
        }
        return vdesc::encode_keyframes(set, frames, jpeg_quality, max_side);
    }
    std::vector<vdesc::Frame> frames = vdesc::read_frames_dir(record.media_ref, fps);
    vdesc::KeyframeSet set = vdesc::extract_keyframes(frames, config, record.video_id);
    return vdesc::encode_keyframes(set, frames, jpeg_quality, max_side);
}

struct Outcome {
    bool ok = false;
    vdesc::DescriptionEntry entry;
    std::string category;
    std::string error;
};

void run(const DescribeArgs& args, GlobalState& state) {
    RunContext run(state, "describe");
    auto file = state.file_config();
    vdesc::PromptVariant variant = vdesc::prompt_variant_from_string(args.variant_name);
    if (variant == vdesc::PromptVariant::kJudgeEvaluator) {
        throw vdesc::InvalidArgument("the judge variant is driven by eval judge");
    }
    vdesc::ModelConfig model = args.model.resolve(file);
    int jpeg_quality = 0;
    int max_side = 0;
    vdesc::ExtractionConfig extraction = args.extraction.resolve(file, jpeg_quality, max_side);
    int jobs = args.jobs;
    if (args.jobs_opt->count() == 0) {
        if (auto v = file.get("jobs")) jobs = parse_int_strict(*v, "jobs");
    }
    if (jobs < 1) throw vdesc::ConfigError("--jobs must be >= 1");

    vdesc::GuidelineRegistry guidelines = args.guidelines_file.empty()
                                              ? vdesc::GuidelineRegistry::load_default()
                                              : vdesc::GuidelineRegistry::from_file(
                                                    args.guidelines_file);
    const std::string created_at = resolve_created_at(args.created_at);

    vdesc::Store store = vdesc::load_store(args.store_path);
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < store.size(); ++i) {
        bool has_label = false;
        for (const auto& d : store[i].descriptions) {
            if (d.method_label == args.label) {
                has_label = true;
                break;
            }
        }
        if (!has_label || args.force) todo.push_back(i);
    }

    vdesc::MllmClient client(model);
    if (!args.model.record_http.empty()) client.set_record_dir(args.model.record_http);

    std::vector<Outcome> outcomes(todo.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mu;

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            const vdesc::VideoRecord& rec = store[todo[i]];
            try {
                auto images =
                    images_for_record(rec, extraction, jpeg_quality, max_side, args.fps);
                std::optional<std::string> annotation;
                if (variant_needs_annotation(variant)) {
                    if (rec.human_annotation.empty()) {
                        throw vdesc::InvalidArgument(
                            "variant requires a human annotation and the record has none");
                    }
                    annotation = rec.human_annotation;
                }
                vdesc::PromptSpec prompt = vdesc::build_prompt(variant, annotation, guidelines);
                if (i == 0 && !args.dump_prompt.empty()) {
                    nlohmann::ordered_json dump;
                    dump["variant"] = vdesc::to_string(variant);
                    dump["system"] = prompt.system_text;
                    dump["user"] = prompt.user_text;
                    write_json_file(args.dump_prompt, dump);
                    run.note_output(args.dump_prompt);
                }
                vdesc::CompletionResult res = client.request_completion(prompt, images);
                vdesc::ParsedDescription parsed = vdesc::parse_model_output(res.text);
                Outcome o;
                o.ok = true;
                o.entry = vdesc::DescriptionEntry{args.label, parsed.revised_desc,
                                                  model.model_name, created_at};
                o.category = parsed.video_category;
                outcomes[i] = std::move(o);
                std::lock_guard<std::mutex> lock(log_mu);
                std::cerr << "[describe] " << rec.video_id << ": ok (attempts=" << res.attempt_count
                          << ")\n";
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
                std::lock_guard<std::mutex> lock(log_mu);
                std::cerr << "[describe] " << rec.video_id << ": FAILED: " << e.what() << "\n";
            }
        }
    };

    std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(jobs), todo.size());
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::size_t failed = 0;
    for (std::size_t i = 0; i < todo.size(); ++i) {
        if (!outcomes[i].ok) {
            ++failed;
            continue;
        }
        vdesc::VideoRecord& rec = store[todo[i]];
        if (args.force) {
            auto& ds = rec.descriptions;
            for (auto it = ds.begin(); it != ds.end();) {
                it = it->method_label == args.label ? ds.erase(it) : it + 1;
            }
        }
        rec.descriptions.push_back(outcomes[i].entry);
        if (rec.category.empty() && !outcomes[i].category.empty()) {
            if (auto canonical = vdesc::match_category(outcomes[i].category)) {
                rec.category = *canonical;
            }
        }
    }
    vdesc::save_store(store, args.store_path);
    run.note_output(args.store_path);

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "describe";
    resolved["store"] = args.store_path;
    resolved["label"] = args.label;
    resolved["variant"] = vdesc::to_string(variant);
    resolved["created_at"] = created_at;
    resolved["jobs"] = jobs;
    resolved["force"] = args.force;
    resolved["fps"] = args.fps;
    resolved["guidelines_file"] = args.guidelines_file;
    resolved["guidelines_hash"] = guidelines.content_hash();
    resolved["model"] = args.model.resolved_json(model);
    resolved["extraction"] = args.extraction.resolved_json(extraction, jpeg_quality, max_side);
    run.set_resolved(resolved);
    run.finalize();

    std::cout << "describe: " << (todo.size() - failed) << " described, " << failed
              << " failed, " << (store.size() - todo.size()) << " skipped\n";
    if (failed * 5 > todo.size()) {
        throw vdesc::BatchFailure("more than 20% of processed records failed", failed,
                                  todo.size());
    }
}

}  // namespace

void register_cmd_describe(CLI::App& app, GlobalState& state) {
    auto args = std::make_shared<DescribeArgs>();
    CLI::App* cmd = app.add_subcommand(
        "describe", "generate descriptions for store records through a chat-completions model");
    cmd->add_option("--store", args->store_path, "JSONL store path")->required();
    cmd->add_option("--label", args->label, "method label for the new descriptions")->required();
    cmd->add_option("--variant", args->variant_name,
                    "prompt variant: compliant, compliant_noha, noncompliant, noncompliant_ha")
        ->required();
    cmd->add_option("--guidelines-file", args->guidelines_file,
                    "override the embedded guideline set");
    cmd->add_option("--dump-prompt", args->dump_prompt,
                    "write the first record's rendered prompt to this file");
    cmd->add_option("--created-at", args->created_at,
                    "timestamp recorded on new descriptions (VDESC_CREATED_AT also works)");
    cmd->add_option("--fps", args->fps, "frame rate assumed for frame directories");
    args->jobs_opt = cmd->add_option("--jobs", args->jobs, "parallel worker count");
    cmd->add_flag("--force", args->force, "reprocess records that already carry the label");
    args->model.add(cmd);
    args->extraction.add(cmd);
    cmd->callback([args, &state]() { run(*args, state); });
}

}  // namespace vdtool
