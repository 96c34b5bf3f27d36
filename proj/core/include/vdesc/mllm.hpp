#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "vdesc/frames.hpp"
#include "vdesc/keyframes.hpp"
#include "vdesc/prompts.hpp"

namespace vdesc {

struct ModelConfig {
    // Full URL of the chat-completions route; a URL without a path gets
    // "/v1/chat/completions" appended.
    std::string endpoint_url;
    std::string model_name;
    // The key is read from this environment variable per request and is
    // never accepted as a flag or stored. Empty name disables auth.
    std::string api_key_env = "VDESC_API_KEY";
    double temperature = 0.2;
    int max_output_tokens = 1024;
    double request_timeout_seconds = 120.0;
    int max_retries = 5;
    // <= 0 disables the rate limit.
    int requests_per_minute = 60;
    double backoff_base_seconds = 1.0;
};

struct ImagePayload {
    std::string media_type = "image/jpeg";
    std::string base64_data;
    int source_frame_index = 0;
};

struct CompletionResult {
    std::string text;
    int attempt_count = 0;
    int http_status = 0;
    long long prompt_tokens = -1;
    long long completion_tokens = -1;
};

// JPEG (quality 90) payloads downscaled so the longest side is <= max_side,
// in keyframe order.
std::vector<ImagePayload> encode_keyframes(const KeyframeSet& keyframes,
                                           const std::vector<Frame>& frames,
                                           int jpeg_quality = 90,
                                           int max_side = 768);

// Chat-completions JSON: optional system message, then one user message
// whose content parts are all images (as data URLs) followed by the prompt
// text. Deterministic given its inputs.
std::string build_request_body(const PromptSpec& prompt,
                               const std::vector<ImagePayload>& images,
                               const ModelConfig& config);

// Sliding-window limiter: at most max_requests acquisitions inside any
// window. acquire() blocks until admission is safe.
class RateLimiter {
public:
    explicit RateLimiter(int max_requests,
                         std::chrono::milliseconds window = std::chrono::milliseconds(60000));
    void acquire();

private:
    int max_requests_;
    std::chrono::milliseconds window_;
    std::mutex mu_;
    std::deque<std::chrono::steady_clock::time_point> stamps_;
};

// Shareable across worker threads; the rate limiter is the only
// synchronization point. 429 and 5xx responses retry with exponential
// backoff (factor 2, jittered) up to max_retries extra attempts; other 4xx
// reject immediately; timeouts raise TimeoutError.
class MllmClient {
public:
    explicit MllmClient(ModelConfig config);
    MllmClient(ModelConfig config, std::chrono::milliseconds rate_window);

    CompletionResult request_completion(const PromptSpec& prompt,
                                        const std::vector<ImagePayload>& images);

    // Directory for request/response capture files; empty disables capture.
    void set_record_dir(const std::string& dir);

    const ModelConfig& config() const { return config_; }

private:
    double backoff_seconds(int attempt);
    void record_exchange(const std::string& request_body, int status,
                         const std::string& response_body,
                         const std::string& transport_error);

    ModelConfig config_;
    RateLimiter limiter_;
    std::string record_dir_;
    std::atomic<int> record_seq_{0};
    std::mutex rng_mu_;
    std::mt19937_64 jitter_rng_;
};

}  // namespace vdesc
