#pragma once

#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vdesc/config.hpp"
#include "vdesc/keyframes.hpp"
#include "vdesc/mllm.hpp"

namespace vdtool {

// Parse-time state shared by every subcommand. The config file and run
// directory are global flags; subcommands see them through this object.
struct GlobalState {
    std::string config_path;
    std::string run_dir;
    int exit_code = 0;

    vdesc::KeyValueConfig file_config() const;
};

// Collects a command's outputs so the run directory can carry a resolved
// config and a machine-readable manifest next to them. Paths are kept as
// given (no absolutization) so runs in different directories stay
// byte-comparable.
class RunContext {
public:
    RunContext(const GlobalState& state, std::string command);

    bool enabled() const { return !dir_.empty(); }
    const std::string& dir() const { return dir_; }

    // explicit_path wins when non-empty; otherwise default_name lands in
    // the run directory (when set) or the working directory. The result is
    // recorded as an output.
    std::string out_path(const std::string& explicit_path, const std::string& default_name);
    void note_output(const std::string& path);

    void set_resolved(nlohmann::ordered_json config);
    // Writes resolved_config.json and manifest.json into the run directory.
    void finalize();

private:
    std::string dir_;
    std::string command_;
    nlohmann::ordered_json resolved_;
    std::vector<std::string> outputs_;
};

// Model-client flags shared by describe, categorize and judge eval.
// Precedence: ModelConfig defaults, then config-file keys, then flags the
// user actually passed.
struct ModelFlags {
    std::string endpoint;
    std::string model;
    std::string api_key_env;
    double temperature = 0.0;
    int max_output_tokens = 0;
    double timeout_seconds = 0.0;
    int max_retries = 0;
    int requests_per_minute = 0;
    double backoff_base = 0.0;
    std::string record_http;

    CLI::Option* endpoint_opt = nullptr;
    CLI::Option* model_opt = nullptr;
    CLI::Option* api_key_env_opt = nullptr;
    CLI::Option* temperature_opt = nullptr;
    CLI::Option* max_output_tokens_opt = nullptr;
    CLI::Option* timeout_opt = nullptr;
    CLI::Option* max_retries_opt = nullptr;
    CLI::Option* rpm_opt = nullptr;
    CLI::Option* backoff_opt = nullptr;

    void add(CLI::App* cmd);
    vdesc::ModelConfig resolve(const vdesc::KeyValueConfig& file) const;
    nlohmann::ordered_json resolved_json(const vdesc::ModelConfig& config) const;
};

// Keyframe-extraction flags shared by the keyframes and describe commands.
struct ExtractionFlags {
    int window = 0;
    int max_keyframes = 0;
    int jpeg_quality = 0;
    int max_side = 0;

    CLI::Option* window_opt = nullptr;
    CLI::Option* max_keyframes_opt = nullptr;
    CLI::Option* jpeg_quality_opt = nullptr;
    CLI::Option* max_side_opt = nullptr;

    void add(CLI::App* cmd);
    // Returns (config, jpeg_quality, max_side).
    vdesc::ExtractionConfig resolve(const vdesc::KeyValueConfig& file, int& jpeg_quality_out,
                                    int& max_side_out) const;
    nlohmann::ordered_json resolved_json(const vdesc::ExtractionConfig& config, int jpeg_quality,
                                         int max_side) const;
};

// --created-at flag, then VDESC_CREATED_AT, then the current UTC time.
std::string resolve_created_at(const std::string& flag_value);

double parse_double_strict(const std::string& text, const std::string& what);
int parse_int_strict(const std::string& text, const std::string& what);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::ordered_json& value);

void register_cmd_keyframes(CLI::App& app, GlobalState& state);
void register_cmd_describe(CLI::App& app, GlobalState& state);
void register_cmd_dataset(CLI::App& app, GlobalState& state);
void register_cmd_eval(CLI::App& app, GlobalState& state);
void register_cmd_stats(CLI::App& app, GlobalState& state);

}  // namespace vdtool
