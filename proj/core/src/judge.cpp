#include "vdesc/judge.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <thread>

#include <json.hpp>

#include "parse_ladder.hpp"
#include "prompt_texts.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/mllm.hpp"

using json = nlohmann::json;

namespace vdesc {

PromptSpec build_judge_prompt(const std::string& ground_truth,
                              const std::string& candidate) {
    if (ground_truth.empty()) {
        throw InvalidArgument("build_judge_prompt: empty ground truth");
    }
    if (candidate.empty()) {
        throw InvalidArgument("build_judge_prompt: empty candidate");
    }
    PromptSpec spec;
    spec.variant = PromptVariant::kJudgeEvaluator;
    spec.system_text = detail::kJudgeSystemText;
    std::string text = detail::kJudgeUserTemplate;
    auto substitute = [&text](const std::string& placeholder, const std::string& value) {
        std::string token = "{" + placeholder + "}";
        std::size_t pos = 0;
        while ((pos = text.find(token, pos)) != std::string::npos) {
            text.replace(pos, token.size(), value);
            pos += value.size();
        }
    };
    substitute("desc_gt", ground_truth);
    substitute("desc_can", candidate);
    spec.substitutions["desc_gt"] = ground_truth;
    spec.substitutions["desc_can"] = candidate;
    spec.user_text = std::move(text);
    return spec;
}

namespace {

// A rating value as found in a parsed dictionary: either numeric already or
// a number-like string.
std::optional<int> coerce_rating(const json& value, const std::string& raw) {
    double number = 0.0;
    if (value.is_number()) {
        number = value.get<double>();
    } else if (value.is_string()) {
        const std::string s = value.get<std::string>();
        char* end = nullptr;
        number = std::strtod(s.c_str(), &end);
        if (end == s.c_str()) return std::nullopt;
        while (*end == ' ' || *end == '\t') ++end;
        if (*end != '\0') return std::nullopt;
    } else {
        return std::nullopt;
    }
    double rounded = std::round(number);
    if (std::fabs(number - rounded) > 1e-9) {
        throw RangeViolation("judge rating is not an integer: " + value.dump() +
                             " in: " + raw);
    }
    int rating = static_cast<int>(rounded);
    if (rating < 1 || rating > 5) {
        throw RangeViolation("judge rating out of [1,5]: " +
                             std::to_string(rating) + " in: " + raw);
    }
    return rating;
}

std::optional<JudgeRatings> ratings_from_object(const json& doc,
                                                const std::string& raw) {
    if (!doc.is_object()) return std::nullopt;
    static const char* kKeys[] = {"Descriptive", "Objective", "Accurate", "Clear"};
    int values[4];
    for (int i = 0; i < 4; ++i) {
        if (!doc.contains(kKeys[i])) return std::nullopt;
        auto rating = coerce_rating(doc.at(kKeys[i]), raw);
        if (!rating) return std::nullopt;
        values[i] = *rating;
    }
    JudgeRatings ratings;
    ratings.descriptive = values[0];
    ratings.objective = values[1];
    ratings.accurate = values[2];
    ratings.clear = values[3];
    if (doc.contains("Reason") && doc.at("Reason").is_string()) {
        ratings.reason = doc.at("Reason").get<std::string>();
    }
    return ratings;
}

}  // namespace

JudgeRatings parse_judge_output(const std::string& raw) {
    {
        json doc = json::parse(raw, nullptr, false);
        if (!doc.is_discarded()) {
            if (auto r = ratings_from_object(doc, raw)) return *r;
        }
    }
    std::string stripped = detail::strip_to_object(raw);
    if (stripped != raw) {
        json doc = json::parse(stripped, nullptr, false);
        if (!doc.is_discarded()) {
            if (auto r = ratings_from_object(doc, raw)) {
                r->recovery_applied = true;
                return *r;
            }
        }
    }
    std::string repaired = detail::repair_single_quotes(stripped);
    if (repaired != stripped) {
        json doc = json::parse(repaired, nullptr, false);
        if (!doc.is_discarded()) {
            if (auto r = ratings_from_object(doc, raw)) {
                r->recovery_applied = true;
                return *r;
            }
        }
    }
    json extracted = json::object();
    static const char* kKeys[] = {"Descriptive", "Objective", "Accurate", "Clear",
                                  "Reason"};
    for (const char* key : kKeys) {
        if (auto value = detail::extract_value(raw, key)) extracted[key] = *value;
    }
    if (auto r = ratings_from_object(extracted, raw)) {
        r->recovery_applied = true;
        return *r;
    }
    throw ParseFailure("parse_judge_output: no recoverable ratings", raw);
}

namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

struct RecordOutcome {
    bool attempted = false;
    bool ok = false;
    JudgeRecordRow row;
    std::string error;
    std::string record_id;
};

}  // namespace

JudgeReport judge_corpus(const Store& store, const std::string& candidate_label,
                         const std::string& gt_label, MllmClient& client,
                         int repeats, int jobs) {
    if (repeats < 1) throw InvalidArgument("judge_corpus: repeats must be >= 1");
    if (jobs < 1) jobs = 1;

    std::vector<std::string> missing;
    for (const VideoRecord& r : store) {
        if (!text_for_label(r, candidate_label) || !text_for_label(r, gt_label)) {
            missing.push_back(r.video_id);
        }
    }
    if (!missing.empty()) {
        std::string joined;
        for (const std::string& id : missing) {
            if (!joined.empty()) joined += ", ";
            joined += id;
        }
        throw InvalidArgument("records missing label " + candidate_label + " or " +
                              gt_label + ": " + joined);
    }

    std::vector<RecordOutcome> outcomes(store.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= store.size()) return;
            const VideoRecord& record = store[i];
            RecordOutcome& out = outcomes[i];
            out.attempted = true;
            out.record_id = record.video_id;
            std::string gt = *text_for_label(record, gt_label);
            std::string cand = *text_for_label(record, candidate_label);
            try {
                PromptSpec prompt = build_judge_prompt(gt, cand);
                double sums[4] = {0.0, 0.0, 0.0, 0.0};
                for (int rep = 0; rep < repeats; ++rep) {
                    CompletionResult res = client.request_completion(prompt, {});
                    JudgeRatings ratings = parse_judge_output(res.text);
                    sums[0] += ratings.descriptive;
                    sums[1] += ratings.objective;
                    sums[2] += ratings.accurate;
                    sums[3] += ratings.clear;
                }
                out.row.record_id = record.video_id;
                out.row.descriptive = round2(sums[0] / repeats);
                out.row.objective = round2(sums[1] / repeats);
                out.row.accurate = round2(sums[2] / repeats);
                out.row.clear = round2(sums[3] / repeats);
                out.row.repeats = repeats;
                out.ok = true;
            } catch (const Error& e) {
                out.error = e.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    JudgeReport report;
    report.judge_model_name = client.config().model_name;
    double sums[4] = {0.0, 0.0, 0.0, 0.0};
    for (const RecordOutcome& out : outcomes) {
        if (out.ok) {
            report.per_record.push_back(out.row);
            sums[0] += out.row.descriptive;
            sums[1] += out.row.objective;
            sums[2] += out.row.accurate;
            sums[3] += out.row.clear;
        } else {
            report.failures.emplace_back(out.record_id, out.error);
        }
    }
    if (!report.per_record.empty()) {
        double n = static_cast<double>(report.per_record.size());
        report.mean_descriptive = sums[0] / n;
        report.mean_objective = sums[1] / n;
        report.mean_accurate = sums[2] / n;
        report.mean_clear = sums[3] / n;
    }
    if (report.failures.size() * 5 > store.size()) {
        throw BatchFailure("judge_corpus: failure rate above 20% (" +
                               std::to_string(report.failures.size()) + "/" +
                               std::to_string(store.size()) + ")",
                           report.failures.size(), store.size());
    }
    return report;
}

}  // namespace vdesc
