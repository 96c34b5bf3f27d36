#include "tool_common.hpp"

#include <cerrno>
#include <climits>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "vdesc/errors.hpp"

namespace vdtool {

namespace fs = std::filesystem;

vdesc::KeyValueConfig GlobalState::file_config() const {
    if (config_path.empty()) return vdesc::KeyValueConfig{};
    return vdesc::KeyValueConfig::load(config_path);
}

RunContext::RunContext(const GlobalState& state, std::string command)
    : dir_(state.run_dir), command_(std::move(command)) {
    if (!dir_.empty()) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) {
            throw vdesc::IoError("cannot create run directory " + dir_ + ": " + ec.message());
        }
    }
}

std::string RunContext::out_path(const std::string& explicit_path,
                                 const std::string& default_name) {
    std::string path = explicit_path;
    if (path.empty()) {
        path = dir_.empty() ? default_name : (fs::path(dir_) / default_name).string();
    }
    note_output(path);
    return path;
}

void RunContext::note_output(const std::string& path) {
    std::string noted = path;
    if (!dir_.empty()) {
        const std::string prefix = (fs::path(dir_) / "").string();
        if (noted.rfind(prefix, 0) == 0) noted = noted.substr(prefix.size());
    }
    outputs_.push_back(noted);
}

void RunContext::set_resolved(nlohmann::ordered_json config) { resolved_ = std::move(config); }

void RunContext::finalize() {
    if (!enabled()) return;
    write_json_file((fs::path(dir_) / "resolved_config.json").string(), resolved_);
    nlohmann::ordered_json manifest;
    manifest["schema_version"] = 1;
    manifest["command"] = command_;
    manifest["outputs"] = outputs_;
    write_json_file((fs::path(dir_) / "manifest.json").string(), manifest);
}

void ModelFlags::add(CLI::App* cmd) {
    endpoint_opt = cmd->add_option("--endpoint", endpoint, "chat-completions endpoint URL");
    model_opt = cmd->add_option("--model", model, "model name sent in requests");
    api_key_env_opt = cmd->add_option("--api-key-env", api_key_env,
                                      "environment variable holding the API key");
    temperature_opt = cmd->add_option("--temperature", temperature, "sampling temperature");
    max_output_tokens_opt =
        cmd->add_option("--max-output-tokens", max_output_tokens, "completion token cap");
    timeout_opt = cmd->add_option("--timeout", timeout_seconds, "request timeout in seconds");
    max_retries_opt = cmd->add_option("--max-retries", max_retries,
                                      "extra attempts after a retryable failure");
    rpm_opt = cmd->add_option("--rpm", requests_per_minute,
                              "request rate cap per minute (0 disables)");
    backoff_opt = cmd->add_option("--backoff-base", backoff_base,
                                  "base seconds for exponential backoff");
    cmd->add_option("--record-http", record_http,
                    "directory capturing request/response pairs");
}

vdesc::ModelConfig ModelFlags::resolve(const vdesc::KeyValueConfig& file) const {
    vdesc::ModelConfig config;
    if (auto v = file.get("endpoint")) config.endpoint_url = *v;
    if (auto v = file.get("model")) config.model_name = *v;
    if (auto v = file.get("api_key_env")) config.api_key_env = *v;
    if (auto v = file.get("temperature"))
        config.temperature = parse_double_strict(*v, "temperature");
    if (auto v = file.get("max_output_tokens"))
        config.max_output_tokens = parse_int_strict(*v, "max_output_tokens");
    if (auto v = file.get("request_timeout_seconds"))
        config.request_timeout_seconds = parse_double_strict(*v, "request_timeout_seconds");
    if (auto v = file.get("max_retries"))
        config.max_retries = parse_int_strict(*v, "max_retries");
    if (auto v = file.get("requests_per_minute"))
        config.requests_per_minute = parse_int_strict(*v, "requests_per_minute");
    if (auto v = file.get("backoff_base_seconds"))
        config.backoff_base_seconds = parse_double_strict(*v, "backoff_base_seconds");

    if (endpoint_opt->count() > 0) config.endpoint_url = endpoint;
    if (model_opt->count() > 0) config.model_name = model;
    if (api_key_env_opt->count() > 0) config.api_key_env = api_key_env;
    if (temperature_opt->count() > 0) config.temperature = temperature;
    if (max_output_tokens_opt->count() > 0) config.max_output_tokens = max_output_tokens;
    if (timeout_opt->count() > 0) config.request_timeout_seconds = timeout_seconds;
    if (max_retries_opt->count() > 0) config.max_retries = max_retries;
    if (rpm_opt->count() > 0) config.requests_per_minute = requests_per_minute;
    if (backoff_opt->count() > 0) config.backoff_base_seconds = backoff_base;
    return config;
}

nlohmann::ordered_json ModelFlags::resolved_json(const vdesc::ModelConfig& config) const {
    nlohmann::ordered_json j;
    j["endpoint_url"] = config.endpoint_url;
    j["model_name"] = config.model_name;
    j["api_key_env"] = config.api_key_env;
    j["temperature"] = config.temperature;
    j["max_output_tokens"] = config.max_output_tokens;
    j["request_timeout_seconds"] = config.request_timeout_seconds;
    j["max_retries"] = config.max_retries;
    j["requests_per_minute"] = config.requests_per_minute;
    j["backoff_base_seconds"] = config.backoff_base_seconds;
    if (!record_http.empty()) j["record_http"] = record_http;
    return j;
}

void ExtractionFlags::add(CLI::App* cmd) {
    window_opt = cmd->add_option("--window", window, "smoothing window (odd)");
    max_keyframes_opt =
        cmd->add_option("--max-keyframes", max_keyframes, "keyframe count cap");
    jpeg_quality_opt =
        cmd->add_option("--jpeg-quality", jpeg_quality, "JPEG quality for keyframe output");
    max_side_opt = cmd->add_option("--max-side", max_side,
                                   "downscale bound on the longest image side");
}

vdesc::ExtractionConfig ExtractionFlags::resolve(const vdesc::KeyValueConfig& file,
                                                 int& jpeg_quality_out,
                                                 int& max_side_out) const {
    vdesc::ExtractionConfig config;
    jpeg_quality_out = 90;
    max_side_out = 768;
    if (auto v = file.get("window")) config.window = parse_int_strict(*v, "window");
    if (auto v = file.get("max_keyframes"))
        config.max_keyframes = parse_int_strict(*v, "max_keyframes");
    if (auto v = file.get("jpeg_quality"))
        jpeg_quality_out = parse_int_strict(*v, "jpeg_quality");
    if (auto v = file.get("max_side")) max_side_out = parse_int_strict(*v, "max_side");

    if (window_opt->count() > 0) config.window = window;
    if (max_keyframes_opt->count() > 0) config.max_keyframes = max_keyframes;
    if (jpeg_quality_opt->count() > 0) jpeg_quality_out = jpeg_quality;
    if (max_side_opt->count() > 0) max_side_out = max_side;
    return config;
}

nlohmann::ordered_json ExtractionFlags::resolved_json(const vdesc::ExtractionConfig& config,
                                                      int jpeg_quality_val,
                                                      int max_side_val) const {
    nlohmann::ordered_json j;
    j["window"] = config.window;
    j["max_keyframes"] = config.max_keyframes;
    j["jpeg_quality"] = jpeg_quality_val;
    j["max_side"] = max_side_val;
    return j;
}

std::string resolve_created_at(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("VDESC_CREATED_AT"); env && *env) return env;
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

double parse_double_strict(const std::string& text, const std::string& what) {
    errno = 0;
    const char* begin = text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) {
        throw vdesc::ConfigError("invalid number for " + what + ": '" + text + "'");
    }
    return value;
}

int parse_int_strict(const std::string& text, const std::string& what) {
    errno = 0;
    const char* begin = text.c_str();
    char* end = nullptr;
    long value = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE || value < INT_MIN || value > INT_MAX) {
        throw vdesc::ConfigError("invalid integer for " + what + ": '" + text + "'");
    }
    return static_cast<int>(value);
}

void write_text_file(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vdesc::IoError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw vdesc::IoError("short write to " + path);
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& value) {
    write_text_file(path, value.dump(2) + "\n");
}

}  // namespace vdtool
