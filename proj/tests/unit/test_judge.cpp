#include <atomic>
#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "vdesc/dataset.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/judge.hpp"
#include "vdesc/mllm.hpp"

namespace {

struct JudgeServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit JudgeServer(httplib::Server::Handler handler) {
        server.Post("/v1/chat/completions", std::move(handler));
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
        REQUIRE(server.wait_until_ready());
    }

    ~JudgeServer() {
        server.stop();
        if (thread.joinable()) thread.join();
    }

    std::string endpoint() const {
        return "http://127.0.0.1:" + std::to_string(port);
    }
};

std::string ratings_payload(int d, int o, int a, int c) {
    nlohmann::ordered_json ratings;
    ratings["Descriptive"] = d;
    ratings["Objective"] = o;
    ratings["Accurate"] = a;
    ratings["Clear"] = c;
    ratings["Reason"] = "because";
    nlohmann::ordered_json doc;
    doc["choices"] = nlohmann::ordered_json::array();
    doc["choices"].push_back({{"message", {{"content", ratings.dump()}}}});
    return doc.dump();
}

vdesc::MllmClient make_client(const std::string& endpoint) {
    vdesc::ModelConfig config;
    config.endpoint_url = endpoint;
    config.model_name = "mock-judge";
    config.api_key_env = "";
    config.requests_per_minute = 0;
    config.backoff_base_seconds = 0.01;
    config.max_retries = 0;
    return vdesc::MllmClient(config, std::chrono::milliseconds(1000));
}

vdesc::VideoRecord judged_record(const std::string& id, const std::string& marker) {
    vdesc::VideoRecord r;
    r.video_id = id;
    r.human_annotation = "ground truth for " + id;
    vdesc::DescriptionEntry d;
    d.method_label = "candidate";
    d.text = "candidate " + marker + " text";
    r.descriptions.push_back(std::move(d));
    return r;
}

}  // namespace

TEST_SUITE("judge") {

TEST_CASE("strict ratings parse without recovery") {
    vdesc::JudgeRatings r = vdesc::parse_judge_output(
        R"({"Descriptive": 4, "Objective": 5, "Accurate": 3, "Clear": 2, "Reason": "Concise."})");
    CHECK(r.descriptive == 4);
    CHECK(r.objective == 5);
    CHECK(r.accurate == 3);
    CHECK(r.clear == 2);
    CHECK(r.reason == "Concise.");
    CHECK_FALSE(r.recovery_applied);

    vdesc::JudgeRatings bare = vdesc::parse_judge_output(
        R"({"Descriptive": 1, "Objective": 1, "Accurate": 1, "Clear": 1})");
    CHECK(bare.reason.empty());
}

TEST_CASE("number-like strings coerce to ratings") {
    vdesc::JudgeRatings r = vdesc::parse_judge_output(
        R"({"Descriptive": "5", "Objective": "4.0", "Accurate": " 3", "Clear": 2})");
    CHECK(r.descriptive == 5);
    CHECK(r.objective == 4);
    CHECK(r.accurate == 3);
    CHECK(r.clear == 2);
}

TEST_CASE("fenced and single-quoted replies recover") {
    vdesc::JudgeRatings fenced = vdesc::parse_judge_output(
        "```json\n"
        R"({"Descriptive": 4, "Objective": 4, "Accurate": 4, "Clear": 4})"
        "\n```");
    CHECK(fenced.descriptive == 4);
    CHECK(fenced.recovery_applied);

    vdesc::JudgeRatings quoted = vdesc::parse_judge_output(
        "{'Descriptive': 3, 'Objective': 3, 'Accurate': 3, 'Clear': 3}");
    CHECK(quoted.accurate == 3);
    CHECK(quoted.recovery_applied);

    vdesc::JudgeRatings prose = vdesc::parse_judge_output(
        "Here are my ratings.\nDescriptive: 5\nObjective: 4\nAccurate: 4\n"
        "Clear: 5\nReason: \"Covers the action.\"\n");
    CHECK(prose.descriptive == 5);
    CHECK(prose.objective == 4);
    CHECK(prose.clear == 5);
    CHECK(prose.reason == "Covers the action.");
    CHECK(prose.recovery_applied);
}

TEST_CASE("out-of-range and fractional ratings are range violations") {
    CHECK_THROWS_AS(
        vdesc::parse_judge_output(
            R"({"Descriptive": 6, "Objective": 4, "Accurate": 4, "Clear": 4})"),
        vdesc::RangeViolation);
    CHECK_THROWS_AS(
        vdesc::parse_judge_output(
            R"({"Descriptive": 4, "Objective": 0, "Accurate": 4, "Clear": 4})"),
        vdesc::RangeViolation);
    CHECK_THROWS_AS(
        vdesc::parse_judge_output(
            R"({"Descriptive": 4, "Objective": 4, "Accurate": 3.5, "Clear": 4})"),
        vdesc::RangeViolation);
    CHECK_THROWS_AS(
        vdesc::parse_judge_output(
            R"({"Descriptive": 4, "Objective": 4, "Accurate": "4.7", "Clear": 4})"),
        vdesc::RangeViolation);
}

TEST_CASE("unrecoverable judge output is a parse failure") {
    CHECK_THROWS_AS(vdesc::parse_judge_output(""), vdesc::ParseFailure);
    CHECK_THROWS_AS(vdesc::parse_judge_output("The description is quite good."),
                    vdesc::ParseFailure);
    CHECK_THROWS_AS(
        vdesc::parse_judge_output(
            R"({"Descriptive": 4, "Objective": 4, "Accurate": 4})"),
        vdesc::ParseFailure);
    CHECK_THROWS_AS(
        vdesc::parse_judge_output(
            R"({"Descriptive": "five", "Objective": 4, "Accurate": 4, "Clear": 4})"),
        vdesc::ParseFailure);
    try {
        vdesc::parse_judge_output("nope");
        FAIL("expected ParseFailure");
    } catch (const vdesc::ParseFailure& e) {
        CHECK(e.raw_text() == "nope");
    }
}

TEST_CASE("judge prompt rejects empty inputs") {
    CHECK_THROWS_AS(vdesc::build_judge_prompt("", "candidate"),
                    vdesc::InvalidArgument);
    CHECK_THROWS_AS(vdesc::build_judge_prompt("truth", ""),
                    vdesc::InvalidArgument);
}

TEST_CASE("corpus judging averages per record and overall") {
    JudgeServer server([](const httplib::Request& req, httplib::Response& res) {
        if (req.body.find("alpha") != std::string::npos) {
            res.set_content(ratings_payload(2, 2, 2, 2), "application/json");
        } else {
            res.set_content(ratings_payload(4, 4, 4, 4), "application/json");
        }
    });
    vdesc::MllmClient client = make_client(server.endpoint());
    vdesc::Store store;
    store.push_back(judged_record("vid_a", "alpha"));
    store.push_back(judged_record("vid_b", "bravo"));

    vdesc::JudgeReport report =
        vdesc::judge_corpus(store, "candidate", "human_annotation", client);
    REQUIRE(report.per_record.size() == 2);
    CHECK(report.per_record[0].record_id == "vid_a");
    CHECK(report.per_record[0].descriptive == 2.0);
    CHECK(report.per_record[1].record_id == "vid_b");
    CHECK(report.per_record[1].clear == 4.0);
    CHECK(report.mean_descriptive == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(report.mean_objective == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(report.mean_accurate == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(report.mean_clear == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(report.judge_model_name == "mock-judge");
    CHECK(report.failures.empty());
}

TEST_CASE("repeat ratings are averaged and rounded to two decimals") {
    std::atomic<int> hits{0};
    JudgeServer server([&](const httplib::Request&, httplib::Response& res) {
        int n = ++hits;
        int rating = (n == 2) ? 5 : 4;
        res.set_content(ratings_payload(rating, rating, rating, rating),
                        "application/json");
    });
    vdesc::MllmClient client = make_client(server.endpoint());
    vdesc::Store store;
    store.push_back(judged_record("vid_a", "alpha"));

    vdesc::JudgeReport report =
        vdesc::judge_corpus(store, "candidate", "human_annotation", client, 3);
    CHECK(hits == 3);
    REQUIRE(report.per_record.size() == 1);
    CHECK(report.per_record[0].repeats == 3);
    CHECK(report.per_record[0].descriptive == doctest::Approx(4.33).epsilon(1e-12));
    CHECK(report.mean_descriptive == doctest::Approx(4.33).epsilon(1e-12));
}

TEST_CASE("a failing half of a two-record corpus aborts the batch") {
    JudgeServer server([](const httplib::Request& req, httplib::Response& res) {
        if (req.body.find("alpha") != std::string::npos) {
            res.set_content(ratings_payload(4, 4, 4, 4), "application/json");
        } else {
            res.set_content(
                "{\"choices\":[{\"message\":{\"content\":\"no ratings here\"}}]}",
                "application/json");
        }
    });
    vdesc::MllmClient client = make_client(server.endpoint());
    vdesc::Store store;
    store.push_back(judged_record("vid_a", "alpha"));
    store.push_back(judged_record("vid_b", "bravo"));
    try {
        vdesc::judge_corpus(store, "candidate", "human_annotation", client);
        FAIL("expected BatchFailure");
    } catch (const vdesc::BatchFailure& e) {
        CHECK(e.failed() == 1);
        CHECK(e.total() == 2);
    }
}

TEST_CASE("a single failure in six records is tolerated and reported") {
    JudgeServer server([](const httplib::Request& req, httplib::Response& res) {
        if (req.body.find("marker3") != std::string::npos) {
            res.set_content(
                "{\"choices\":[{\"message\":{\"content\":\"garbled\"}}]}",
                "application/json");
        } else {
            res.set_content(ratings_payload(4, 3, 5, 4), "application/json");
        }
    });
    vdesc::MllmClient client = make_client(server.endpoint());
    vdesc::Store store;
    for (int i = 0; i < 6; ++i) {
        store.push_back(judged_record("vid_" + std::to_string(i),
                                      "marker" + std::to_string(i)));
    }

    vdesc::JudgeReport report =
        vdesc::judge_corpus(store, "candidate", "human_annotation", client, 1, 3);
    REQUIRE(report.failures.size() == 1);
    CHECK(report.failures[0].first == "vid_3");
    REQUIRE(report.per_record.size() == 5);
    CHECK(report.per_record[0].record_id == "vid_0");
    CHECK(report.per_record[4].record_id == "vid_5");
    CHECK(report.mean_descriptive == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(report.mean_objective == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(report.mean_accurate == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("corpus judging validates inputs up front") {
    JudgeServer server([](const httplib::Request&, httplib::Response& res) {
        res.set_content(ratings_payload(4, 4, 4, 4), "application/json");
    });
    vdesc::MllmClient client = make_client(server.endpoint());
    vdesc::Store store;
    store.push_back(judged_record("vid_a", "alpha"));

    CHECK_THROWS_AS(
        vdesc::judge_corpus(store, "candidate", "human_annotation", client, 0),
        vdesc::InvalidArgument);

    vdesc::VideoRecord bare;
    bare.video_id = "vid_missing";
    bare.human_annotation = "has truth, lacks candidate";
    store.push_back(bare);
    try {
        vdesc::judge_corpus(store, "candidate", "human_annotation", client);
        FAIL("expected InvalidArgument");
    } catch (const vdesc::InvalidArgument& e) {
        CHECK(std::string(e.what()).find("vid_missing") != std::string::npos);
    }
}

}
