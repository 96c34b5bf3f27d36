#include "vdesc/prompts.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "parse_ladder.hpp"
#include "prompt_texts.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/taxonomy.hpp"

using json = nlohmann::json;

namespace vdesc {

std::string to_string(PromptVariant variant) {
    switch (variant) {
        case PromptVariant::kCompliant: return "compliant";
        case PromptVariant::kCompliantNoHA: return "compliant_noha";
        case PromptVariant::kNonCompliant: return "noncompliant";
        case PromptVariant::kNonCompliantWithHA: return "noncompliant_ha";
        case PromptVariant::kJudgeEvaluator: return "judge";
    }
    return "unknown";
}

PromptVariant prompt_variant_from_string(const std::string& name) {
    if (name == "compliant") return PromptVariant::kCompliant;
    if (name == "compliant_noha") return PromptVariant::kCompliantNoHA;
    if (name == "noncompliant") return PromptVariant::kNonCompliant;
    if (name == "noncompliant_ha") return PromptVariant::kNonCompliantWithHA;
    if (name == "judge") return PromptVariant::kJudgeEvaluator;
    throw InvalidArgument("unknown prompt variant: " + name);
}

namespace {

std::string substitute(std::string text, const std::string& placeholder,
                       const std::string& value) {
    std::string token = "{" + placeholder + "}";
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
    return text;
}

bool variant_requires_annotation(PromptVariant v) {
    return v == PromptVariant::kCompliant || v == PromptVariant::kNonCompliantWithHA;
}

bool variant_has_instructions(PromptVariant v) {
    return v == PromptVariant::kCompliant || v == PromptVariant::kCompliantNoHA;
}

}  // namespace

PromptSpec build_prompt(PromptVariant variant,
                        const std::optional<std::string>& human_annotation,
                        const GuidelineRegistry& guidelines) {
    if (variant == PromptVariant::kJudgeEvaluator) {
        throw InvalidArgument("judge prompts are built by build_judge_prompt");
    }
    if (variant_requires_annotation(variant) && !human_annotation) {
        throw InvalidArgument("variant " + to_string(variant) +
                              " requires a human annotation");
    }
    if (!variant_requires_annotation(variant) && human_annotation) {
        throw InvalidArgument("variant " + to_string(variant) +
                              " does not take a human annotation");
    }

    PromptSpec spec;
    spec.variant = variant;
    const char* tmpl = nullptr;
    switch (variant) {
        case PromptVariant::kCompliant: tmpl = detail::kTemplateCompliant; break;
        case PromptVariant::kCompliantNoHA: tmpl = detail::kTemplateCompliantNoHA; break;
        case PromptVariant::kNonCompliant: tmpl = detail::kTemplateNonCompliant; break;
        case PromptVariant::kNonCompliantWithHA:
            tmpl = detail::kTemplateNonCompliantWithHA;
            break;
        case PromptVariant::kJudgeEvaluator: break;
    }
    std::string text = tmpl;

    if (variant_requires_annotation(variant)) {
        spec.substitutions["desc_current"] = *human_annotation;
        text = substitute(std::move(text), "desc_current", *human_annotation);
    }
    if (variant_has_instructions(variant)) {
        spec.guideline_ids = guidelines.all_ids();
        std::string block = guidelines.render_instruction_block(spec.guideline_ids);
        spec.substitutions["instructions"] = block;
        text = substitute(std::move(text), "instructions", block);
    }
    spec.user_text = std::move(text);
    return spec;
}

namespace {

std::optional<std::pair<std::string, std::string>> try_parse_object(
    const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    if (!doc.contains("Video_Category") || !doc.contains("Revised_Desc")) {
        return std::nullopt;
    }
    const json& cat = doc.at("Video_Category");
    const json& desc = doc.at("Revised_Desc");
    if (!desc.is_string()) return std::nullopt;
    std::string cat_str = cat.is_string() ? cat.get<std::string>() : cat.dump();
    return std::make_pair(cat_str, desc.get<std::string>());
}

bool imatch_at(const std::string& text, std::size_t pos, const std::string& needle) {
    if (pos + needle.size() > text.size()) return false;
    for (std::size_t i = 0; i < needle.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[pos + i])) !=
            std::tolower(static_cast<unsigned char>(needle[i]))) {
            return false;
        }
    }
    return true;
}

bool starts_with_at(const std::string& text, std::size_t pos, const std::string& s) {
    return text.compare(pos, s.size(), s) == 0;
}

}  // namespace

namespace detail {

std::string strip_to_object(const std::string& raw) {
    std::string text = raw;
    std::size_t fence = text.find("```");
    if (fence != std::string::npos) {
        std::size_t body = text.find('\n', fence);
        std::size_t close = body == std::string::npos
                                ? std::string::npos
                                : text.find("```", body);
        if (body != std::string::npos && close != std::string::npos) {
            text = text.substr(body + 1, close - body - 1);
        }
    }
    std::size_t open = text.find('{');
    std::size_t close = text.rfind('}');
    if (open != std::string::npos && close != std::string::npos && close > open) {
        text = text.substr(open, close - open + 1);
    }
    return text;
}

std::string repair_single_quotes(const std::string& text) {
    std::string out = text;
    std::replace(out.begin(), out.end(), '\'', '"');
    return out;
}

std::size_t ifind(const std::string& text, const std::string& needle) {
    if (needle.empty()) return std::string::npos;
    for (std::size_t i = 0; i + needle.size() <= text.size(); ++i) {
        if (imatch_at(text, i, needle)) return i;
    }
    return std::string::npos;
}

std::optional<std::string> extract_value(const std::string& text, const std::string& key) {
    std::size_t at = ifind(text, key);
    if (at == std::string::npos) return std::nullopt;
    std::size_t pos = text.find(':', at + key.size());
    if (pos == std::string::npos) return std::nullopt;
    ++pos;
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
    }
    if (pos >= text.size()) return std::nullopt;

    struct Quote {
        const char* open;
        const char* close;
        bool json_escapes;
    };
    static const Quote kQuotes[] = {
        {"\"", "\"", true},
        {"'", "'", false},
        {"“", "”", false},
        {"‘", "’", false},
    };
    for (const Quote& q : kQuotes) {
        std::string open = q.open;
        if (!starts_with_at(text, pos, open)) continue;
        std::size_t start = pos + open.size();
        std::string close = q.close;
        std::string value;
        std::size_t i = start;
        while (i < text.size()) {
            if (q.json_escapes && text[i] == '\\' && i + 1 < text.size()) {
                value.push_back(text[i + 1] == 'n' ? '\n' : text[i + 1]);
                i += 2;
                continue;
            }
            if (starts_with_at(text, i, close)) {
                return value;
            }
            value.push_back(text[i]);
            ++i;
        }
        return std::nullopt;
    }
    std::size_t end = text.find_first_of(",}\n", pos);
    if (end == std::string::npos) end = text.size();
    std::string value = text.substr(pos, end - pos);
    while (!value.empty() &&
           std::isspace(static_cast<unsigned char>(value.back()))) {
        value.pop_back();
    }
    if (value.empty()) return std::nullopt;
    return value;
}

}  // namespace detail

ParsedDescription parse_model_output(const std::string& raw) {
    if (auto p = try_parse_object(raw)) {
        if (!p->second.empty()) return {p->first, p->second, raw, false};
        throw ParseFailure("parse_model_output: empty Revised_Desc", raw);
    }

    std::string stripped = detail::strip_to_object(raw);
    if (stripped != raw) {
        if (auto p = try_parse_object(stripped)) {
            if (!p->second.empty()) return {p->first, p->second, raw, true};
            throw ParseFailure("parse_model_output: empty Revised_Desc", raw);
        }
    }

    std::string repaired = detail::repair_single_quotes(stripped);
    if (repaired != stripped) {
        if (auto p = try_parse_object(repaired)) {
            if (!p->second.empty()) return {p->first, p->second, raw, true};
            throw ParseFailure("parse_model_output: empty Revised_Desc", raw);
        }
    }

    auto cat = detail::extract_value(raw, "Video_Category");
    auto desc = detail::extract_value(raw, "Revised_Desc");
    if (cat && desc && !desc->empty()) {
        return {*cat, *desc, raw, true};
    }
    throw ParseFailure("parse_model_output: no recoverable dictionary", raw);
}

std::string serialize_parsed(const ParsedDescription& parsed) {
    nlohmann::ordered_json doc;
    doc["Video_Category"] = parsed.video_category;
    doc["Revised_Desc"] = parsed.revised_desc;
    return doc.dump();
}

PromptSpec build_category_prompt(const std::string& description) {
    if (description.empty()) {
        throw InvalidArgument("build_category_prompt: empty description");
    }
    const auto& names = detail::taxonomy_names();
    std::string list;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) list.push_back('\n');
        list += std::to_string(i + 1) + ". " + names[i];
    }
    PromptSpec spec;
    spec.variant = PromptVariant::kNonCompliant;
    spec.substitutions["categories"] = list;
    spec.substitutions["description"] = description;
    std::string text = detail::kCategoryTemplate;
    text = substitute(std::move(text), "categories", list);
    text = substitute(std::move(text), "description", description);
    spec.user_text = std::move(text);
    return spec;
}

const std::vector<std::string>& category_names() {
    return detail::taxonomy_names();
}

std::optional<std::string> match_category(const std::string& raw) {
    std::string t = raw;
    auto trim = [&t] {
        std::size_t a = t.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) {
            t.clear();
            return;
        }
        std::size_t b = t.find_last_not_of(" \t\r\n");
        t = t.substr(a, b - a + 1);
    };
    trim();
    if (t.size() >= 2 && ((t.front() == '"' && t.back() == '"') ||
                          (t.front() == '\'' && t.back() == '\''))) {
        t = t.substr(1, t.size() - 2);
        trim();
    }
    if (!t.empty() && t.back() == '.') {
        t.pop_back();
        trim();
    }
    for (const auto& name : category_names()) {
        if (t.size() != name.size()) continue;
        bool equal = true;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (std::tolower(static_cast<unsigned char>(t[i])) !=
                std::tolower(static_cast<unsigned char>(name[i]))) {
                equal = false;
                break;
            }
        }
        if (equal) return name;
    }
    return std::nullopt;
}

}  // namespace vdesc
