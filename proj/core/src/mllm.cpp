#include "vdesc/mllm.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "vdesc/base64.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/image_io.hpp"

using ordered_json = nlohmann::ordered_json;

namespace vdesc {

std::vector<ImagePayload> encode_keyframes(const KeyframeSet& keyframes,
                                           const std::vector<Frame>& frames,
                                           int jpeg_quality, int max_side) {
    if (keyframes.keyframes.empty()) {
        throw InvalidArgument("encode_keyframes: empty keyframe set");
    }
    std::unordered_map<int, const Frame*> by_index;
    for (const Frame& f : frames) by_index[f.index] = &f;

    std::vector<ImagePayload> payloads;
    payloads.reserve(keyframes.keyframes.size());
    for (const Keyframe& kf : keyframes.keyframes) {
        auto it = by_index.find(kf.frame_index);
        if (it == by_index.end()) {
            throw InvalidArgument("encode_keyframes: frame index " +
                                  std::to_string(kf.frame_index) +
                                  " not resolvable");
        }
        Frame scaled = resize_max_side(*it->second, max_side);
        std::vector<std::uint8_t> jpeg = encode_jpeg(scaled, jpeg_quality);
        ImagePayload payload;
        payload.base64_data = base64_encode(jpeg);
        payload.source_frame_index = kf.frame_index;
        payloads.push_back(std::move(payload));
    }
    return payloads;
}

std::string build_request_body(const PromptSpec& prompt,
                               const std::vector<ImagePayload>& images,
                               const ModelConfig& config) {
    ordered_json body;
    body["model"] = config.model_name;
    body["temperature"] = config.temperature;
    body["max_tokens"] = config.max_output_tokens;
    body["messages"] = ordered_json::array();
    if (!prompt.system_text.empty()) {
        ordered_json system;
        system["role"] = "system";
        system["content"] = prompt.system_text;
        body["messages"].push_back(std::move(system));
    }
    ordered_json user;
    user["role"] = "user";
    user["content"] = ordered_json::array();
    for (const ImagePayload& image : images) {
        ordered_json part;
        part["type"] = "image_url";
        part["image_url"]["url"] =
            "data:" + image.media_type + ";base64," + image.base64_data;
        user["content"].push_back(std::move(part));
    }
    ordered_json text_part;
    text_part["type"] = "text";
    text_part["text"] = prompt.user_text;
    user["content"].push_back(std::move(text_part));
    body["messages"].push_back(std::move(user));
    return body.dump();
}

RateLimiter::RateLimiter(int max_requests, std::chrono::milliseconds window)
    : max_requests_(max_requests), window_(window) {}

void RateLimiter::acquire() {
    if (max_requests_ <= 0) return;
    std::unique_lock<std::mutex> lock(mu_);
    for (;;) {
        auto now = std::chrono::steady_clock::now();
        while (!stamps_.empty() && stamps_.front() + window_ <= now) {
            stamps_.pop_front();
        }
        if (static_cast<int>(stamps_.size()) < max_requests_) {
            stamps_.push_back(now);
            return;
        }
        auto wake = stamps_.front() + window_;
        lock.unlock();
        std::this_thread::sleep_until(wake);
        lock.lock();
    }
}

namespace {

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl parse_endpoint(const std::string& url) {
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint URL must start with http:// or https://: " + url);
    }
    std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw ConfigError("unsupported endpoint scheme: " + scheme);
    }
    std::size_t path_start = url.find('/', scheme_end + 3);
    ParsedUrl parsed;
    if (path_start == std::string::npos) {
        parsed.origin = url;
        parsed.path = "/v1/chat/completions";
    } else {
        parsed.origin = url.substr(0, path_start);
        parsed.path = url.substr(path_start);
        if (parsed.path == "/") parsed.path = "/v1/chat/completions";
    }
    if (parsed.origin.size() <= scheme_end + 3) {
        throw ConfigError("endpoint URL has no host: " + url);
    }
    return parsed;
}

bool is_timeout(httplib::Error err) {
    return err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
}

}  // namespace

MllmClient::MllmClient(ModelConfig config)
    : MllmClient(std::move(config), std::chrono::milliseconds(60000)) {}

MllmClient::MllmClient(ModelConfig config, std::chrono::milliseconds rate_window)
    : config_(std::move(config)),
      limiter_(config_.requests_per_minute, rate_window),
      jitter_rng_(0x6a1d2b3c4d5e6f70ULL) {
    if (config_.endpoint_url.empty()) throw ConfigError("endpoint_url is empty");
    if (config_.model_name.empty()) throw ConfigError("model_name is empty");
    if (!std::isfinite(config_.temperature) || config_.temperature < 0.0) {
        throw ConfigError("temperature must be finite and >= 0");
    }
    if (config_.max_output_tokens <= 0) {
        throw ConfigError("max_output_tokens must be positive");
    }
    if (config_.max_retries < 0) throw ConfigError("max_retries must be >= 0");
    parse_endpoint(config_.endpoint_url);
}

void MllmClient::set_record_dir(const std::string& dir) {
    record_dir_ = dir;
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

double MllmClient::backoff_seconds(int attempt) {
    double u;
    {
        std::lock_guard<std::mutex> lock(rng_mu_);
        u = static_cast<double>(jitter_rng_() >> 11) * 0x1.0p-53;
    }
    double base = config_.backoff_base_seconds * std::pow(2.0, attempt - 1);
    return base * (1.0 + 0.25 * u);
}

void MllmClient::record_exchange(const std::string& request_body, int status,
                                 const std::string& response_body,
                                 const std::string& transport_error) {
    if (record_dir_.empty()) return;
    int seq = record_seq_.fetch_add(1);
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%04d", seq);
    std::string stem = record_dir_ + "/" + prefix;
    {
        std::ofstream out(stem + "_request.json", std::ios::binary);
        out << request_body;
    }
    ordered_json response;
    response["status"] = status;
    response["body"] = response_body;
    if (!transport_error.empty()) response["transport_error"] = transport_error;
    std::ofstream out(stem + "_response.json", std::ios::binary);
    out << response.dump(2) << '\n';
}

CompletionResult MllmClient::request_completion(
    const PromptSpec& prompt, const std::vector<ImagePayload>& images) {
    std::string api_key;
    if (!config_.api_key_env.empty()) {
        const char* value = std::getenv(config_.api_key_env.c_str());
        if (value == nullptr || *value == '\0') {
            throw ConfigError("environment variable " + config_.api_key_env +
                              " is not set");
        }
        api_key = value;
    }
    const ParsedUrl endpoint = parse_endpoint(config_.endpoint_url);
    const std::string body = build_request_body(prompt, images, config_);

    const auto timeout = std::chrono::microseconds(
        static_cast<long long>(config_.request_timeout_seconds * 1e6));
    int last_status = 0;
    const int max_attempts = config_.max_retries + 1;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        limiter_.acquire();

        httplib::Client client(endpoint.origin);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        httplib::Headers headers;
        if (!api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + api_key);
        }
        auto res = client.Post(endpoint.path, headers, body, "application/json");

        if (!res) {
            record_exchange(body, 0, "", httplib::to_string(res.error()));
            if (is_timeout(res.error())) {
                throw TimeoutError("request timed out after " +
                                   std::to_string(config_.request_timeout_seconds) +
                                   "s (attempt " + std::to_string(attempt) + ")");
            }
            last_status = 0;
            if (attempt < max_attempts) {
                std::this_thread::sleep_for(
                    std::chrono::duration<double>(backoff_seconds(attempt)));
                continue;
            }
            break;
        }

        record_exchange(body, res->status, res->body, "");
        if (res->status >= 200 && res->status < 300) {
            ordered_json doc = ordered_json::parse(res->body, nullptr, false);
            if (doc.is_discarded() || !doc.contains("choices") ||
                !doc["choices"].is_array() || doc["choices"].empty()) {
                throw ParseFailure("completion response has no choices", res->body);
            }
            const auto& message = doc["choices"][0]["message"];
            if (!message.is_object() || !message.contains("content") ||
                !message["content"].is_string()) {
                throw ParseFailure("completion response has no text content",
                                   res->body);
            }
            CompletionResult result;
            result.text = message["content"].get<std::string>();
            result.attempt_count = attempt;
            result.http_status = res->status;
            if (doc.contains("usage") && doc["usage"].is_object()) {
                const auto& usage = doc["usage"];
                if (usage.contains("prompt_tokens") &&
                    usage["prompt_tokens"].is_number_integer()) {
                    result.prompt_tokens = usage["prompt_tokens"].get<long long>();
                }
                if (usage.contains("completion_tokens") &&
                    usage["completion_tokens"].is_number_integer()) {
                    result.completion_tokens =
                        usage["completion_tokens"].get<long long>();
                }
            }
            return result;
        }
        if (res->status == 429 || res->status >= 500) {
            last_status = res->status;
            if (attempt < max_attempts) {
                std::this_thread::sleep_for(
                    std::chrono::duration<double>(backoff_seconds(attempt)));
                continue;
            }
            break;
        }
        throw RequestRejected("endpoint rejected request with HTTP " +
                                  std::to_string(res->status),
                              res->status, res->body);
    }
    throw RetryExhausted("no successful response after " +
                             std::to_string(max_attempts) + " attempts (last status " +
                             std::to_string(last_status) + ")",
                         max_attempts, last_status);
}

}  // namespace vdesc
