#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vdesc/guidelines.hpp"

namespace vdesc {

enum class PromptVariant {
    kCompliant,
    kCompliantNoHA,
    kNonCompliant,
    kNonCompliantWithHA,
    kJudgeEvaluator,
};

std::string to_string(PromptVariant variant);
PromptVariant prompt_variant_from_string(const std::string& name);

struct PromptSpec {
    PromptVariant variant = PromptVariant::kNonCompliant;
    std::string system_text;
    std::string user_text;
    std::vector<int> guideline_ids;
    std::map<std::string, std::string> substitutions;
};

struct ParsedDescription {
    std::string video_category;
    std::string revised_desc;
    std::string raw_text;
    bool recovery_applied = false;
};

// Renders the description-generation prompt for a variant. human_annotation
// must be provided exactly when the variant revises an existing description
// (kCompliant, kNonCompliantWithHA). Compliant variants append the
// instruction block rendered from the registry in registry order.
// kJudgeEvaluator is built by build_judge_prompt instead.
PromptSpec build_prompt(PromptVariant variant,
                        const std::optional<std::string>& human_annotation,
                        const GuidelineRegistry& guidelines);

// Recovery ladder: strict JSON -> code-fence/prose stripping -> single-quote
// repair -> key extraction. Throws ParseFailure (carrying the raw text) when
// no stage yields both fields with a non-empty description.
ParsedDescription parse_model_output(const std::string& raw);

// Canonical dictionary form; parse_model_output(serialize_parsed(p)) == p
// for brace-free field values.
std::string serialize_parsed(const ParsedDescription& parsed);

// Single-choice categorization prompt embedding all 15 category names.
PromptSpec build_category_prompt(const std::string& description);

}  // namespace vdesc
