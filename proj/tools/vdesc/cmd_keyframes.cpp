#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include "tool_common.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/frame_source.hpp"
#include "vdesc/image_io.hpp"
#include "vdesc/keyframes.hpp"

namespace vdtool {

namespace fs = std::filesystem;

namespace {

struct KeyframesArgs {
    std::string input;
    std::string out_dir;
    std::string video_id;
    double fps = 1.0;
    int width = 0;
    int height = 0;
    ExtractionFlags extraction;
};

std::vector<vdesc::Frame> load_input(const KeyframesArgs& args) {
    if (args.input != "-" && !fs::exists(args.input)) {
        throw vdesc::InvalidArgument("input path does not exist: " + args.input);
    }
    if (args.input != "-" && fs::is_directory(args.input)) {
        return vdesc::read_frames_dir(args.input, args.fps);
    }
    if (args.width <= 0 || args.height <= 0) {
        throw vdesc::ConfigError(
            "raw RGB24 input requires --width and --height to be positive");
    }
    return vdesc::read_raw_rgb24_file(args.input, args.width, args.height, args.fps);
}

void run(const KeyframesArgs& args, GlobalState& state) {
    RunContext run(state, "keyframes");
    auto file = state.file_config();
    int jpeg_quality = 0;
    int max_side = 0;
    vdesc::ExtractionConfig config = args.extraction.resolve(file, jpeg_quality, max_side);

    std::string video_id = args.video_id;
    if (video_id.empty()) {
        video_id = args.input == "-" ? "stdin" : fs::path(args.input).stem().string();
    }

    std::vector<vdesc::Frame> frames = load_input(args);
    vdesc::KeyframeSet set = vdesc::extract_keyframes(frames, config, video_id);

    std::string out_dir = run.out_path(args.out_dir, "keyframes");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw vdesc::IoError("cannot create " + out_dir + ": " + ec.message());

    nlohmann::ordered_json sidecar;
    sidecar["schema_version"] = 1;
    sidecar["video_id"] = set.video_id;
    sidecar["used_fallback"] = set.used_fallback;
    sidecar["window"] = set.config.window;
    sidecar["max_keyframes"] = set.config.max_keyframes;
    sidecar["keyframes"] = nlohmann::ordered_json::array();

    for (const vdesc::Keyframe& kf : set.keyframes) {
        const vdesc::Frame* frame = nullptr;
        for (const vdesc::Frame& f : frames) {
            if (f.index == kf.frame_index) {
                frame = &f;
                break;
            }
        }
        if (!frame) {
            throw vdesc::InvalidArgument("keyframe index " + std::to_string(kf.frame_index) +
                                         " missing from the decoded stream");
        }
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06d.jpg", kf.frame_index);
        vdesc::Frame scaled = vdesc::resize_max_side(*frame, max_side);
        vdesc::write_binary_file((fs::path(out_dir) / name).string(),
                                 vdesc::encode_jpeg(scaled, jpeg_quality));

        nlohmann::ordered_json entry;
        entry["frame_index"] = kf.frame_index;
        entry["timestamp_seconds"] = kf.timestamp_seconds;
        entry["peak_value"] = kf.peak_value;
        entry["file"] = name;
        sidecar["keyframes"].push_back(entry);
    }
    write_json_file((fs::path(out_dir) / "keyframes.json").string(), sidecar);

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "keyframes";
    resolved["input"] = args.input;
    resolved["out_dir"] = args.out_dir;
    resolved["video_id"] = video_id;
    resolved["fps"] = args.fps;
    resolved["extraction"] = args.extraction.resolved_json(config, jpeg_quality, max_side);
    run.set_resolved(resolved);
    run.finalize();

    std::cout << "keyframes: " << set.keyframes.size() << " frame(s) from " << frames.size()
              << " input frame(s)" << (set.used_fallback ? " (fallback)" : "") << "\n";
}

}  // namespace

void register_cmd_keyframes(CLI::App& app, GlobalState& state) {
    auto args = std::make_shared<KeyframesArgs>();
    CLI::App* cmd = app.add_subcommand(
        "keyframes", "extract keyframes from a frame directory or raw RGB24 stream");
    cmd->add_option("input", args->input,
                    "frame directory, raw RGB24 file, or - for stdin")
        ->required();
    cmd->add_option("--out-dir", args->out_dir, "output directory for JPEGs and sidecar");
    cmd->add_option("--video-id", args->video_id, "identifier recorded in the sidecar");
    cmd->add_option("--fps", args->fps, "frame rate used for timestamps");
    cmd->add_option("--width", args->width, "frame width for raw input");
    cmd->add_option("--height", args->height, "frame height for raw input");
    args->extraction.add(cmd);
    cmd->callback([args, &state]() { run(*args, state); });
}

}  // namespace vdtool
