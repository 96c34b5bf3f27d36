#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vdesc/dataset.hpp"
#include "vdesc/prompts.hpp"

namespace vdesc {

class MllmClient;

struct JudgeRatings {
    int descriptive = 0;
    int objective = 0;
    int accurate = 0;
    int clear = 0;
    std::string reason;
    bool recovery_applied = false;
};

struct JudgeRecordRow {
    std::string record_id;
    // Means over repeats, rounded to 2 decimals.
    double descriptive = 0.0;
    double objective = 0.0;
    double accurate = 0.0;
    double clear = 0.0;
    int repeats = 0;
};

struct JudgeReport {
    std::vector<JudgeRecordRow> per_record;
    double mean_descriptive = 0.0;
    double mean_objective = 0.0;
    double mean_accurate = 0.0;
    double mean_clear = 0.0;
    std::string judge_model_name;
    std::vector<std::pair<std::string, std::string>> failures;  // id, error
};

// System text carries the evaluator role; the user text is the rating task
// with the ground-truth and candidate descriptions substituted.
PromptSpec build_judge_prompt(const std::string& ground_truth,
                              const std::string& candidate);

// Same recovery ladder as parse_model_output; ratings are coerced from
// number-like strings. Missing metrics raise ParseFailure; non-integer or
// out-of-range ratings raise RangeViolation.
JudgeRatings parse_judge_output(const std::string& raw);

// One judge call per record per repeat. Per-record failures are collected;
// the batch aborts with BatchFailure only when more than 20% of records
// fail. Request temperature 0 through the client's config when judging.
JudgeReport judge_corpus(const Store& store, const std::string& candidate_label,
                         const std::string& gt_label, MllmClient& client,
                         int repeats = 1, int jobs = 1);

}  // namespace vdesc
