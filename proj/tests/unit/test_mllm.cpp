#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "vdesc/base64.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/image_io.hpp"
#include "vdesc/mllm.hpp"

namespace {

constexpr const char* kTestKeyEnv = "VDESC_UNIT_TEST_KEY";

struct TestServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit TestServer(httplib::Server::Handler handler) {
        server.Post("/v1/chat/completions", std::move(handler));
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
        REQUIRE(server.wait_until_ready());
    }

    ~TestServer() {
        server.stop();
        if (thread.joinable()) thread.join();
    }

    std::string endpoint() const {
        return "http://127.0.0.1:" + std::to_string(port);
    }
};

std::string success_body(const std::string& content) {
    nlohmann::ordered_json doc;
    doc["choices"] = nlohmann::ordered_json::array();
    doc["choices"].push_back({{"message", {{"content", content}}}});
    doc["usage"] = {{"prompt_tokens", 321}, {"completion_tokens", 54}};
    return doc.dump();
}

vdesc::ModelConfig fast_config(const std::string& endpoint) {
    vdesc::ModelConfig config;
    config.endpoint_url = endpoint;
    config.model_name = "mock-model";
    config.api_key_env = kTestKeyEnv;
    config.backoff_base_seconds = 0.01;
    config.requests_per_minute = 0;
    return config;
}

vdesc::PromptSpec plain_prompt(const std::string& text) {
    vdesc::PromptSpec spec;
    spec.user_text = text;
    return spec;
}

vdesc::Frame solid_frame(int width, int height, std::uint8_t value, int index) {
    vdesc::Frame f;
    f.width = width;
    f.height = height;
    f.index = index;
    f.timestamp_seconds = index * 0.25;
    f.rgb.assign(static_cast<std::size_t>(width) * height * 3, value);
    return f;
}

struct EnvGuard {
    EnvGuard(const char* name, const char* value) : name_(name) {
        if (value) {
            ::setenv(name, value, 1);
        } else {
            ::unsetenv(name);
        }
    }
    ~EnvGuard() { ::unsetenv(name_); }
    const char* name_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_SUITE("mllm") {

TEST_CASE("request body layout and determinism") {
    vdesc::ModelConfig config = fast_config("http://example.invalid");
    config.temperature = 0.4;
    config.max_output_tokens = 256;

    vdesc::PromptSpec prompt;
    prompt.system_text = "You are a careful evaluator.";
    prompt.user_text = "Rate this description.";

    std::vector<vdesc::ImagePayload> images(2);
    images[0].base64_data = "QUFB";
    images[0].source_frame_index = 4;
    images[1].base64_data = "QkJC";
    images[1].media_type = "image/png";

    std::string body = vdesc::build_request_body(prompt, images, config);
    CHECK(body == vdesc::build_request_body(prompt, images, config));

    auto doc = nlohmann::json::parse(body);
    CHECK(doc.at("model") == "mock-model");
    CHECK(doc.at("temperature").get<double>() == doctest::Approx(0.4));
    CHECK(doc.at("max_tokens") == 256);
    REQUIRE(doc.at("messages").size() == 2);
    CHECK(doc["messages"][0]["role"] == "system");
    CHECK(doc["messages"][0]["content"] == prompt.system_text);

    const auto& content = doc["messages"][1]["content"];
    REQUIRE(content.size() == 3);
    CHECK(content[0]["type"] == "image_url");
    CHECK(content[0]["image_url"]["url"] == "data:image/jpeg;base64,QUFB");
    CHECK(content[1]["image_url"]["url"] == "data:image/png;base64,QkJC");
    CHECK(content[2]["type"] == "text");
    CHECK(content[2]["text"] == prompt.user_text);

    vdesc::PromptSpec no_system;
    no_system.user_text = "Describe.";
    auto lean = nlohmann::json::parse(
        vdesc::build_request_body(no_system, {}, config));
    REQUIRE(lean.at("messages").size() == 1);
    CHECK(lean["messages"][0]["role"] == "user");
}

TEST_CASE("keyframe encoding downsizes and preserves order") {
    std::vector<vdesc::Frame> frames;
    frames.push_back(solid_frame(100, 40, 200, 0));
    frames.push_back(solid_frame(30, 20, 60, 5));
    frames.push_back(solid_frame(64, 64, 10, 9));

    vdesc::KeyframeSet set;
    set.video_id = "vid";
    set.keyframes.push_back({9, 2.25, 1.0});
    set.keyframes.push_back({0, 0.0, 2.0});

    auto payloads = vdesc::encode_keyframes(set, frames, 90, 50);
    REQUIRE(payloads.size() == 2);
    CHECK(payloads[0].source_frame_index == 9);
    CHECK(payloads[1].source_frame_index == 0);
    CHECK(payloads[0].media_type == "image/jpeg");

    for (const auto& payload : payloads) {
        std::vector<std::uint8_t> bytes = vdesc::base64_decode(payload.base64_data);
        REQUIRE(bytes.size() > 4);
        CHECK(bytes[0] == 0xFF);
        CHECK(bytes[1] == 0xD8);
        vdesc::Frame decoded = vdesc::decode_jpeg(bytes);
        CHECK(decoded.width <= 50);
        CHECK(decoded.height <= 50);
    }
    vdesc::Frame first = vdesc::decode_jpeg(
        vdesc::base64_decode(payloads[1].base64_data));
    CHECK(first.width == 50);
    CHECK(first.height == 20);

    vdesc::KeyframeSet missing;
    missing.keyframes.push_back({77, 0.0, 0.0});
    CHECK_THROWS_AS(vdesc::encode_keyframes(missing, frames), vdesc::InvalidArgument);
    vdesc::KeyframeSet empty;
    CHECK_THROWS_AS(vdesc::encode_keyframes(empty, frames), vdesc::InvalidArgument);
}

TEST_CASE("rate limiter enforces the sliding window") {
    using clock = std::chrono::steady_clock;
    vdesc::RateLimiter limiter(5, std::chrono::milliseconds(300));
    std::vector<clock::time_point> stamps;
    for (int i = 0; i < 12; ++i) {
        limiter.acquire();
        stamps.push_back(clock::now());
    }
    auto burst = std::chrono::duration_cast<std::chrono::milliseconds>(
        stamps[4] - stamps[0]);
    CHECK(burst.count() < 150);
    for (std::size_t i = 0; i + 5 < stamps.size(); ++i) {
        auto gap = std::chrono::duration_cast<std::chrono::milliseconds>(
            stamps[i + 5] - stamps[i]);
        CHECK_MESSAGE(gap.count() >= 295, "window violated at acquisition ", i + 5);
    }

    vdesc::RateLimiter unlimited(0, std::chrono::milliseconds(300));
    auto start = clock::now();
    for (int i = 0; i < 100; ++i) unlimited.acquire();
    auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start);
    CHECK(elapsed.count() < 100);
}

TEST_CASE("successful completion is returned on the first attempt") {
    EnvGuard key(kTestKeyEnv, "sekrit");
    std::atomic<int> hits{0};
    std::string seen_auth;
    TestServer server([&](const httplib::Request& req, httplib::Response& res) {
        ++hits;
        seen_auth = req.get_header_value("Authorization");
        res.set_content(success_body("A dog runs."), "application/json");
    });
    vdesc::MllmClient client(fast_config(server.endpoint()),
                             std::chrono::milliseconds(1000));
    vdesc::CompletionResult result =
        client.request_completion(plain_prompt("Describe."), {});
    CHECK(result.text == "A dog runs.");
    CHECK(result.attempt_count == 1);
    CHECK(result.http_status == 200);
    CHECK(result.prompt_tokens == 321);
    CHECK(result.completion_tokens == 54);
    CHECK(hits == 1);
    CHECK(seen_auth == "Bearer sekrit");
}

TEST_CASE("auth header is omitted when the key env name is empty") {
    bool had_auth = true;
    TestServer server([&](const httplib::Request& req, httplib::Response& res) {
        had_auth = req.has_header("Authorization");
        res.set_content(success_body("ok"), "application/json");
    });
    vdesc::ModelConfig config = fast_config(server.endpoint());
    config.api_key_env = "";
    vdesc::MllmClient client(config, std::chrono::milliseconds(1000));
    client.request_completion(plain_prompt("x"), {});
    CHECK_FALSE(had_auth);
}

TEST_CASE("missing key environment variable fails before any request") {
    EnvGuard key(kTestKeyEnv, nullptr);
    std::atomic<int> hits{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.set_content(success_body("ok"), "application/json");
    });
    vdesc::MllmClient client(fast_config(server.endpoint()),
                             std::chrono::milliseconds(1000));
    CHECK_THROWS_AS(client.request_completion(plain_prompt("x"), {}),
                    vdesc::ConfigError);
    CHECK(hits == 0);
}

TEST_CASE("retryable statuses back off and then succeed") {
    EnvGuard key(kTestKeyEnv, "k");
    std::atomic<int> hits{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        int n = ++hits;
        if (n == 1) {
            res.status = 429;
            res.set_content("slow down", "text/plain");
        } else if (n == 2) {
            res.status = 500;
            res.set_content("oops", "text/plain");
        } else {
            res.set_content(success_body("third time"), "application/json");
        }
    });
    vdesc::MllmClient client(fast_config(server.endpoint()),
                             std::chrono::milliseconds(1000));
    vdesc::CompletionResult result =
        client.request_completion(plain_prompt("x"), {});
    CHECK(result.text == "third time");
    CHECK(result.attempt_count == 3);
    CHECK(hits == 3);
}

TEST_CASE("a non-retryable rejection is raised immediately") {
    EnvGuard key(kTestKeyEnv, "k");
    std::atomic<int> hits{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 401;
        res.set_content("denied", "text/plain");
    });
    vdesc::MllmClient client(fast_config(server.endpoint()),
                             std::chrono::milliseconds(1000));
    try {
        client.request_completion(plain_prompt("x"), {});
        FAIL("expected RequestRejected");
    } catch (const vdesc::RequestRejected& e) {
        CHECK(e.status() == 401);
        CHECK(e.body() == "denied");
    }
    CHECK(hits == 1);
}

TEST_CASE("persistent server errors exhaust the retry budget") {
    EnvGuard key(kTestKeyEnv, "k");
    std::atomic<int> hits{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 503;
        res.set_content("down", "text/plain");
    });
    vdesc::ModelConfig config = fast_config(server.endpoint());
    config.max_retries = 2;
    vdesc::MllmClient client(config, std::chrono::milliseconds(1000));
    try {
        client.request_completion(plain_prompt("x"), {});
        FAIL("expected RetryExhausted");
    } catch (const vdesc::RetryExhausted& e) {
        CHECK(e.attempts() == 3);
        CHECK(e.last_status() == 503);
    }
    CHECK(hits == 3);
}

TEST_CASE("a stalled response raises a timeout") {
    EnvGuard key(kTestKeyEnv, "k");
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1500));
        res.set_content(success_body("late"), "application/json");
    });
    vdesc::ModelConfig config = fast_config(server.endpoint());
    config.request_timeout_seconds = 0.3;
    vdesc::MllmClient client(config, std::chrono::milliseconds(1000));
    CHECK_THROWS_AS(client.request_completion(plain_prompt("x"), {}),
                    vdesc::TimeoutError);
}

TEST_CASE("a success without choices is a parse failure") {
    EnvGuard key(kTestKeyEnv, "k");
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"choices\": []}", "application/json");
    });
    vdesc::MllmClient client(fast_config(server.endpoint()),
                             std::chrono::milliseconds(1000));
    try {
        client.request_completion(plain_prompt("x"), {});
        FAIL("expected ParseFailure");
    } catch (const vdesc::ParseFailure& e) {
        CHECK(e.raw_text() == "{\"choices\": []}");
    }
}

TEST_CASE("exchange capture writes numbered request and response files") {
    EnvGuard key(kTestKeyEnv, "k");
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        res.set_content(success_body("captured"), "application/json");
    });
    vdesc::ModelConfig config = fast_config(server.endpoint());
    vdesc::MllmClient client(config, std::chrono::milliseconds(1000));

    auto dir = std::filesystem::temp_directory_path() /
               ("vdesc_record_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    client.set_record_dir(dir.string());
    vdesc::PromptSpec prompt = plain_prompt("Capture me.");
    client.request_completion(prompt, {});
    client.request_completion(prompt, {});

    CHECK(slurp((dir / "0000_request.json").string()) ==
          vdesc::build_request_body(prompt, {}, config));
    auto response = nlohmann::json::parse(slurp((dir / "0000_response.json").string()));
    CHECK(response.at("status") == 200);
    CHECK(response.at("body").get<std::string>().find("captured") !=
          std::string::npos);
    CHECK(std::filesystem::exists(dir / "0001_request.json"));
    CHECK(std::filesystem::exists(dir / "0001_response.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("shared client serves concurrent workers") {
    EnvGuard key(kTestKeyEnv, "k");
    std::atomic<int> hits{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.set_content(success_body("ok"), "application/json");
    });
    vdesc::MllmClient client(fast_config(server.endpoint()),
                             std::chrono::milliseconds(1000));
    std::atomic<int> successes{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w) {
        workers.emplace_back([&] {
            for (int i = 0; i < 3; ++i) {
                auto result = client.request_completion(plain_prompt("x"), {});
                if (result.text == "ok") ++successes;
            }
        });
    }
    for (auto& t : workers) t.join();
    CHECK(successes == 12);
    CHECK(hits == 12);
}

TEST_CASE("configuration is validated eagerly") {
    namespace v = vdesc;
    auto with = [](auto mutate) {
        v::ModelConfig config;
        config.endpoint_url = "http://127.0.0.1:1";
        config.model_name = "m";
        mutate(config);
        return config;
    };
    CHECK_THROWS_AS(
        v::MllmClient(with([](v::ModelConfig& c) { c.endpoint_url = ""; })),
        v::ConfigError);
    CHECK_THROWS_AS(
        v::MllmClient(with([](v::ModelConfig& c) { c.model_name = ""; })),
        v::ConfigError);
    CHECK_THROWS_AS(
        v::MllmClient(with([](v::ModelConfig& c) { c.endpoint_url = "ftp://x"; })),
        v::ConfigError);
    CHECK_THROWS_AS(
        v::MllmClient(with([](v::ModelConfig& c) { c.endpoint_url = "nohost"; })),
        v::ConfigError);
    CHECK_THROWS_AS(
        v::MllmClient(with([](v::ModelConfig& c) { c.endpoint_url = "http://"; })),
        v::ConfigError);
    CHECK_THROWS_AS(
        v::MllmClient(with([](v::ModelConfig& c) { c.temperature = -0.1; })),
        v::ConfigError);
    CHECK_THROWS_AS(
        v::MllmClient(with([](v::ModelConfig& c) { c.max_output_tokens = 0; })),
        v::ConfigError);
    CHECK_THROWS_AS(
        v::MllmClient(with([](v::ModelConfig& c) { c.max_retries = -1; })),
        v::ConfigError);
}

}
