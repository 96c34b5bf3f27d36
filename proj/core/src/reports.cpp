#include "vdesc/reports.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "vdesc/csv.hpp"
#include "vdesc/errors.hpp"

using ordered_json = nlohmann::ordered_json;

namespace vdesc {

namespace {

constexpr const char* kMeteorFootnote =
    "meteor uses exact and stem matching only; treat scores as a lower bound "
    "relative to aligners with synonym matching";

constexpr const char* kJudgeFootnote =
    "judge decoding parameters and repeat counts affect cross-run variance; "
    "ratings are stochastic unless the endpoint honors temperature 0";

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write report: " + path);
    return out;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "0";
    return std::string(buf, end);
}

void merge_spice_file(MetricReport& report, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open spice file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    ordered_json doc = ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw InvalidArgument("spice file is not a JSON object: " + path);
    }
    for (const auto& [id, value] : doc.items()) {
        if (report.per_record.find(id) == report.per_record.end()) {
            throw InvalidArgument("spice file names unknown record id: " + id);
        }
        if (!value.is_number()) {
            throw InvalidArgument("spice value for " + id + " is not a number");
        }
        double v = value.get<double>();
        if (v < 0.0 || v > 1.0) {
            throw RangeViolation("spice value for " + id + " outside [0,1]");
        }
        report.spice_external[id] = v;
    }
}

namespace {

std::string spice_field(const MetricReport& report, const std::string& id) {
    auto it = report.spice_external.find(id);
    if (it == report.spice_external.end()) return "";
    return format_double(it->second);
}

bool spice_complete(const MetricReport& report, double* mean) {
    if (report.record_ids.empty()) return false;
    double sum = 0.0;
    for (const std::string& id : report.record_ids) {
        auto it = report.spice_external.find(id);
        if (it == report.spice_external.end()) return false;
        sum += it->second;
    }
    *mean = sum / static_cast<double>(report.record_ids.size());
    return true;
}

std::vector<std::string> score_fields(const MetricScores& s) {
    return {format_double(s.bleu_1), format_double(s.bleu_4),
            format_double(s.meteor), format_double(s.rouge_l),
            format_double(s.cider)};
}

}  // namespace

void write_metric_report_csv(const MetricReport& report, const std::string& path) {
    auto out = open_out(path);
    out << csv_row({"record_id", "bleu_1", "bleu_4", "meteor", "rouge_l", "cider",
                    "spice"});
    for (const std::string& id : report.record_ids) {
        const MetricScores& s = report.per_record.at(id);
        std::vector<std::string> fields = {id};
        for (auto& f : score_fields(s)) fields.push_back(std::move(f));
        fields.push_back(spice_field(report, id));
        out << csv_row(fields);
    }
    std::vector<std::string> corpus = {"__corpus__"};
    for (auto& f : score_fields(report.corpus)) corpus.push_back(std::move(f));
    double spice_mean = 0.0;
    corpus.push_back(spice_complete(report, &spice_mean) ? format_double(spice_mean)
                                                         : "");
    out << csv_row(corpus);
}

namespace {

ordered_json scores_json(const MetricScores& s) {
    ordered_json doc;
    doc["bleu_1"] = s.bleu_1;
    doc["bleu_4"] = s.bleu_4;
    doc["meteor"] = s.meteor;
    doc["rouge_l"] = s.rouge_l;
    doc["cider"] = s.cider;
    return doc;
}

}  // namespace

void write_metric_report_json(const MetricReport& report, const std::string& path) {
    ordered_json doc;
    doc["records"] = ordered_json::array();
    for (const std::string& id : report.record_ids) {
        ordered_json row = scores_json(report.per_record.at(id));
        ordered_json entry;
        entry["record_id"] = id;
        entry["scores"] = std::move(row);
        auto it = report.spice_external.find(id);
        if (it != report.spice_external.end()) entry["spice"] = it->second;
        doc["records"].push_back(std::move(entry));
    }
    doc["corpus"] = scores_json(report.corpus);
    double spice_mean = 0.0;
    if (spice_complete(report, &spice_mean)) doc["corpus"]["spice"] = spice_mean;
    doc["footnote"] = kMeteorFootnote;
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

void write_judge_report_csv(const JudgeReport& report,
                            const std::string& candidate_label,
                            const std::string& path) {
    auto out = open_out(path);
    out << csv_row({"model", "descriptive", "objective", "accurate", "clear"});
    out << csv_row({candidate_label, format_double(report.mean_descriptive),
                    format_double(report.mean_objective),
                    format_double(report.mean_accurate),
                    format_double(report.mean_clear)});
}

void write_judge_report_json(const JudgeReport& report,
                             const std::string& candidate_label,
                             const std::string& path) {
    ordered_json doc;
    doc["candidate_label"] = candidate_label;
    doc["judge_model_name"] = report.judge_model_name;
    doc["means"]["descriptive"] = report.mean_descriptive;
    doc["means"]["objective"] = report.mean_objective;
    doc["means"]["accurate"] = report.mean_accurate;
    doc["means"]["clear"] = report.mean_clear;
    doc["per_record"] = ordered_json::array();
    for (const JudgeRecordRow& row : report.per_record) {
        ordered_json entry;
        entry["record_id"] = row.record_id;
        entry["descriptive"] = row.descriptive;
        entry["objective"] = row.objective;
        entry["accurate"] = row.accurate;
        entry["clear"] = row.clear;
        entry["repeats"] = row.repeats;
        doc["per_record"].push_back(std::move(entry));
    }
    doc["failures"] = ordered_json::array();
    for (const auto& [id, error] : report.failures) {
        ordered_json entry;
        entry["record_id"] = id;
        entry["error"] = error;
        doc["failures"].push_back(std::move(entry));
    }
    doc["footnote"] = kJudgeFootnote;
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

StatsRow stats_row(const TestResult& result, const std::string& pair) {
    StatsRow row;
    row.test = result.test_name;
    row.pair = pair;
    if (result.effect_size) {
        row.effect_size = *result.effect_size;
        row.has_effect_size = true;
    }
    row.statistic = result.statistic;
    row.p_value = result.p_value;
    auto it = result.details.find("p_bonferroni");
    if (it != result.details.end()) {
        row.p_adjusted = it->second;
        row.has_p_adjusted = true;
    }
    row.n = result.n_used;
    return row;
}

void write_stats_csv(const std::vector<StatsRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << csv_row({"pair", "test", "effect_size", "statistic", "p_value",
                    "p_adjusted", "n"});
    for (const StatsRow& row : rows) {
        out << csv_row({row.pair, row.test,
                        row.has_effect_size ? format_double(row.effect_size) : "",
                        format_double(row.statistic), format_double(row.p_value),
                        row.has_p_adjusted ? format_double(row.p_adjusted) : "",
                        std::to_string(row.n)});
    }
}

}  // namespace vdesc
