#pragma once

#include <string>
#include <vector>

#include "vdesc/judge.hpp"
#include "vdesc/stats.hpp"
#include "vdesc/text_metrics.hpp"

namespace vdesc {

// Shortest round-trip decimal form (to_chars); NaN renders as an empty
// field so writers can emit blanks.
std::string format_double(double value);

// Externally computed SPICE values keyed by record id, as a JSON object.
// Unknown ids are rejected; values must lie in [0,1].
void merge_spice_file(MetricReport& report, const std::string& path);

// One row per record plus a __corpus__ row:
// record_id,bleu_1,bleu_4,meteor,rouge_l,cider,spice. The spice column stays
// blank unless supplied; the corpus spice is the mean and appears only when
// every record has a value.
void write_metric_report_csv(const MetricReport& report, const std::string& path);
void write_metric_report_json(const MetricReport& report, const std::string& path);

// Judge means shaped as model rows x the four rubric metrics.
void write_judge_report_csv(const JudgeReport& report,
                            const std::string& candidate_label,
                            const std::string& path);
void write_judge_report_json(const JudgeReport& report,
                             const std::string& candidate_label,
                             const std::string& path);

struct StatsRow {
    std::string test;
    std::string pair;
    double effect_size = 0.0;
    bool has_effect_size = false;
    double statistic = 0.0;
    double p_value = 1.0;
    double p_adjusted = 0.0;
    bool has_p_adjusted = false;
    int n = 0;
};

StatsRow stats_row(const TestResult& result, const std::string& pair);

// pair,test,effect_size,statistic,p_value,p_adjusted,n
void write_stats_csv(const std::vector<StatsRow>& rows, const std::string& path);

}  // namespace vdesc
