#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "vdesc/taxonomy.hpp"

namespace {

using nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

// Deterministic multi-sentence description with a hash-dependent length so
// downstream word-count statistics spread over several bins.
std::string mock_description(std::uint64_t h) {
    static const char* subjects[] = {"A person",  "Two children",      "An athlete",
                                     "A chef",    "A teacher",         "A musician",
                                     "A gardener", "A group of friends"};
    static const char* actions[] = {"walks through", "examines",  "assembles", "demonstrates",
                                    "carries",       "arranges",  "prepares",  "repairs"};
    static const char* objects[] = {"a wooden table",       "several bright tools",
                                    "a small machine",      "fresh vegetables",
                                    "a stack of books",     "a musical instrument",
                                    "a folded map",         "a set of containers"};
    static const char* scenes[] = {"in a sunlit kitchen",   "inside a quiet workshop",
                                   "on a crowded street",   "near a calm lake",
                                   "in a busy classroom",   "on an outdoor stage",
                                   "beside a parked car",   "in a tidy office"};
    static const char* follow[] = {
        "The camera stays steady while the action continues.",
        "Nearby objects and the overall setting stay clearly visible.",
        "The scene keeps a consistent pace from start to finish.",
        "Each movement is shown from a close and stable angle.",
        "Light from one side outlines the main figure against the background.",
        "Small text on a sign in the corner remains out of focus."};

    std::string text;
    text += subjects[(h >> 0) % 8];
    text += " ";
    text += actions[(h >> 3) % 8];
    text += " ";
    text += objects[(h >> 6) % 8];
    text += " ";
    text += scenes[(h >> 9) % 8];
    text += ".";
    std::uint64_t extra = 1 + ((h >> 12) % 3);
    for (std::uint64_t i = 0; i < extra; ++i) {
        text += " ";
        text += follow[(h >> (15 + 3 * i)) % 6];
    }
    return text;
}

std::string completion_envelope(const std::string& model, const std::string& content,
                                std::uint64_t hash) {
    ordered_json body;
    body["id"] = "mock-" + hash_hex(hash);
    body["object"] = "chat.completion";
    body["created"] = 0;
    body["model"] = model;
    body["choices"] = ordered_json::array();
    ordered_json choice;
    choice["index"] = 0;
    choice["message"] = ordered_json{{"role", "assistant"}, {"content", content}};
    choice["finish_reason"] = "stop";
    body["choices"].push_back(choice);
    body["usage"] = ordered_json{{"prompt_tokens", 64},
                                 {"completion_tokens",
                                  static_cast<long long>(content.size() / 4 + 1)},
                                 {"total_tokens",
                                  static_cast<long long>(64 + content.size() / 4 + 1)}};
    return body.dump();
}

std::string user_text(const nlohmann::json& request) {
    std::string text;
    if (!request.contains("messages")) return text;
    for (const auto& message : request.at("messages")) {
        if (message.value("role", "") == "system" && message.contains("content") &&
            message.at("content").is_string()) {
            text += message.at("content").get<std::string>();
            text += "\n";
        }
        if (message.value("role", "") != "user") continue;
        const auto& content = message.at("content");
        if (content.is_string()) {
            text += content.get<std::string>();
            continue;
        }
        for (const auto& part : content) {
            if (part.value("type", "") == "text") {
                text += part.value("text", "");
            }
        }
    }
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic mock chat-completions server"};
    int port = 0;
    std::string host = "127.0.0.1";
    std::string fail_sequence;
    int latency_ms = 0;
    app.add_option("--port", port, "listen port (0 picks an ephemeral port)");
    app.add_option("--host", host, "listen address");
    app.add_option("--fail-sequence", fail_sequence,
                   "comma-separated HTTP statuses consumed one per request, e.g. 429,429,200");
    app.add_option("--latency-ms", latency_ms, "artificial delay per completion request");
    CLI11_PARSE(app, argc, argv);

    std::mutex mu;
    std::deque<int> injected;
    {
        std::string token;
        for (char c : fail_sequence + ",") {
            if (c == ',') {
                if (!token.empty()) injected.push_back(std::stoi(token));
                token.clear();
            } else {
                token += c;
            }
        }
    }

    const auto start = std::chrono::steady_clock::now();
    std::vector<std::pair<long long, std::string>> request_log;

    httplib::Server srv;

    srv.set_pre_routing_handler([&](const httplib::Request& req, httplib::Response&) {
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        std::lock_guard<std::mutex> lock(mu);
        request_log.emplace_back(elapsed, req.path);
        return httplib::Server::HandlerResponse::Unhandled;
    });

    srv.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        if (latency_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(latency_ms));
        }
        {
            std::lock_guard<std::mutex> lock(mu);
            if (!injected.empty()) {
                int status = injected.front();
                injected.pop_front();
                if (status != 200) {
                    res.status = status;
                    res.set_content(
                        ordered_json{{"error",
                                      ordered_json{{"message", "injected failure"},
                                                   {"type", "mock_injected"}}}}
                            .dump(),
                        "application/json");
                    return;
                }
            }
        }

        nlohmann::json request;
        try {
            request = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception& e) {
            res.status = 400;
            res.set_content(ordered_json{{"error", ordered_json{{"message", e.what()}}}}.dump(),
                            "application/json");
            return;
        }

        const std::uint64_t hash = fnv1a(req.body);
        const std::string model = request.value("model", "mock-model");
        const std::string text = user_text(request);

        std::string content;
        if (text.find("Ground truth video description:") != std::string::npos) {
            ordered_json ratings;
            ratings["descriptive"] = static_cast<int>(1 + (hash >> 0) % 5);
            ratings["objective"] = static_cast<int>(1 + (hash >> 8) % 5);
            ratings["accurate"] = static_cast<int>(1 + (hash >> 16) % 5);
            ratings["clear"] = static_cast<int>(1 + (hash >> 24) % 5);
            ratings["reason"] = "deterministic mock rating " + hash_hex(hash);
            content = ratings.dump();
        } else if (text.find("Answer with the category name only") != std::string::npos) {
            const auto& names = vdesc::category_names();
            content = names[hash % names.size()];
        } else {
            ordered_json parsed;
            const auto& names = vdesc::category_names();
            parsed["Video_Category"] = names[(hash >> 4) % names.size()];
            parsed["Revised_Desc"] = mock_description(hash);
            content = parsed.dump();
        }
        res.set_content(completion_envelope(model, content, hash), "application/json");
    });

    srv.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });

    srv.Get("/requests", [&](const httplib::Request&, httplib::Response& res) {
        ordered_json log = ordered_json::array();
        std::lock_guard<std::mutex> lock(mu);
        for (const auto& [ms, path] : request_log) {
            log.push_back(ordered_json{{"t_ms", ms}, {"path", path}});
        }
        res.set_content(log.dump(), "application/json");
    });

    srv.Post("/shutdown", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content("bye", "text/plain");
        std::thread([&srv]() {
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
            srv.stop();
        }).detach();
    });

    int bound_port = port;
    if (port == 0) {
        bound_port = srv.bind_to_any_port(host);
        if (bound_port <= 0) {
            std::fprintf(stderr, "mockllm: cannot bind an ephemeral port on %s\n", host.c_str());
            return 2;
        }
    } else if (!srv.bind_to_port(host, port)) {
        std::fprintf(stderr, "mockllm: cannot bind %s:%d\n", host.c_str(), port);
        return 2;
    }
    std::printf("LISTENING %d\n", bound_port);
    std::fflush(stdout);
    return srv.listen_after_bind() ? 0 : 2;
}
