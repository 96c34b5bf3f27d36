#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "vdesc/config.hpp"
#include "vdesc/csv.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/reports.hpp"

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& suffix) {
        static int counter = 0;
        auto dir = std::filesystem::temp_directory_path();
        path = (dir / ("vdesc_reports_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter++) + suffix))
                   .string();
    }
    ~TempPath() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void spit(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
}

vdesc::MetricReport two_record_report() {
    vdesc::MetricReport report;
    report.record_ids = {"vid_a", "vid_b"};
    report.per_record["vid_a"] = {0.5, 0.25, 0.3, 0.4, 1.5};
    report.per_record["vid_b"] = {1.0, 0.75, 0.9, 0.8, 9.25};
    report.corpus = {0.75, 0.5, 0.6, 0.6, 5.375};
    return report;
}

}  // namespace

TEST_SUITE("reports") {

TEST_CASE("doubles render in shortest round-trip form") {
    CHECK(vdesc::format_double(0.0) == "0");
    CHECK(vdesc::format_double(1.0) == "1");
    CHECK(vdesc::format_double(0.5) == "0.5");
    CHECK(vdesc::format_double(-2.25) == "-2.25");
    CHECK(vdesc::format_double(std::numeric_limits<double>::quiet_NaN()) == "");
    std::string third = vdesc::format_double(1.0 / 3.0);
    CHECK(std::stod(third) == 1.0 / 3.0);
    CHECK(vdesc::format_double(0.1) == "0.1");
}

TEST_CASE("csv escaping round-trips awkward fields") {
    CHECK(vdesc::csv_escape("plain") == "plain");
    CHECK(vdesc::csv_escape("a,b") == "\"a,b\"");
    CHECK(vdesc::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(vdesc::csv_escape("line\nbreak") == "\"line\nbreak\"");

    std::vector<std::vector<std::string>> rows = {
        {"id", "text"},
        {"a", "comma, quote \" and\nnewline"},
        {"b", ""},
    };
    std::string text;
    for (const auto& row : rows) text += vdesc::csv_row(row);
    auto parsed = vdesc::parse_csv(text);
    REQUIRE(parsed.size() == 3);
    CHECK(parsed == rows);
}

TEST_CASE("metric CSV has one row per record plus the corpus row") {
    vdesc::MetricReport report = two_record_report();
    TempPath path(".csv");
    vdesc::write_metric_report_csv(report, path.path);
    auto rows = vdesc::parse_csv(slurp(path.path));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"record_id", "bleu_1", "bleu_4",
                                              "meteor", "rouge_l", "cider",
                                              "spice"});
    CHECK(rows[1][0] == "vid_a");
    CHECK(rows[1][1] == "0.5");
    CHECK(rows[1][5] == "1.5");
    CHECK(rows[1][6] == "");
    CHECK(rows[2][0] == "vid_b");
    CHECK(rows[3][0] == "__corpus__");
    CHECK(rows[3][2] == "0.5");
    CHECK(rows[3][6] == "");
}

TEST_CASE("spice merge fills the blank column") {
    vdesc::MetricReport report = two_record_report();
    TempPath spice(".json");

    spit(spice.path, R"({"vid_a": 0.25})");
    vdesc::merge_spice_file(report, spice.path);
    TempPath partial(".csv");
    vdesc::write_metric_report_csv(report, partial.path);
    auto rows = vdesc::parse_csv(slurp(partial.path));
    CHECK(rows[1][6] == "0.25");
    CHECK(rows[2][6] == "");
    CHECK(rows[3][6] == "");

    spit(spice.path, R"({"vid_b": 0.75})");
    vdesc::merge_spice_file(report, spice.path);
    TempPath full(".csv");
    vdesc::write_metric_report_csv(report, full.path);
    rows = vdesc::parse_csv(slurp(full.path));
    CHECK(rows[1][6] == "0.25");
    CHECK(rows[2][6] == "0.75");
    CHECK(rows[3][6] == "0.5");
}

TEST_CASE("spice merge rejects bad inputs") {
    vdesc::MetricReport report = two_record_report();
    TempPath spice(".json");

    spit(spice.path, R"({"vid_zz": 0.5})");
    CHECK_THROWS_AS(vdesc::merge_spice_file(report, spice.path),
                    vdesc::InvalidArgument);

    spit(spice.path, R"({"vid_a": 1.5})");
    CHECK_THROWS_AS(vdesc::merge_spice_file(report, spice.path),
                    vdesc::RangeViolation);

    spit(spice.path, R"({"vid_a": -0.1})");
    CHECK_THROWS_AS(vdesc::merge_spice_file(report, spice.path),
                    vdesc::RangeViolation);

    spit(spice.path, R"({"vid_a": "high"})");
    CHECK_THROWS_AS(vdesc::merge_spice_file(report, spice.path),
                    vdesc::InvalidArgument);

    spit(spice.path, "[1, 2]");
    CHECK_THROWS_AS(vdesc::merge_spice_file(report, spice.path),
                    vdesc::InvalidArgument);

    CHECK_THROWS_AS(vdesc::merge_spice_file(report, spice.path + ".missing"),
                    vdesc::IoError);
}

TEST_CASE("metric JSON carries per-record and corpus scores") {
    vdesc::MetricReport report = two_record_report();
    report.spice_external["vid_a"] = 0.21;
    report.spice_external["vid_b"] = 0.25;
    TempPath path(".json");
    vdesc::write_metric_report_json(report, path.path);
    auto doc = nlohmann::json::parse(slurp(path.path));
    REQUIRE(doc.at("records").size() == 2);
    CHECK(doc["records"][0]["record_id"] == "vid_a");
    CHECK(doc["records"][0]["scores"]["bleu_1"].get<double>() ==
          doctest::Approx(0.5));
    CHECK(doc["records"][0]["spice"].get<double>() == doctest::Approx(0.21));
    CHECK(doc["corpus"]["cider"].get<double>() == doctest::Approx(5.375));
    CHECK(doc["corpus"]["spice"].get<double>() == doctest::Approx(0.23));
    CHECK(doc.contains("footnote"));
}

TEST_CASE("judge CSV is model by rubric") {
    vdesc::JudgeReport report;
    report.mean_descriptive = 4.46;
    report.mean_objective = 4.12;
    report.mean_accurate = 4.3;
    report.mean_clear = 4.5;
    report.judge_model_name = "mock-judge";
    TempPath path(".csv");
    vdesc::write_judge_report_csv(report, "candidate", path.path);
    auto rows = vdesc::parse_csv(slurp(path.path));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"model", "descriptive", "objective",
                                              "accurate", "clear"});
    CHECK(rows[1] == std::vector<std::string>{"candidate", "4.46", "4.12", "4.3",
                                              "4.5"});

    TempPath json_path(".json");
    vdesc::write_judge_report_json(report, "candidate", json_path.path);
    auto doc = nlohmann::json::parse(slurp(json_path.path));
    CHECK(doc.at("candidate_label") == "candidate");
    CHECK(doc.at("judge_model_name") == "mock-judge");
    CHECK(doc["means"]["descriptive"].get<double>() == doctest::Approx(4.46));
    CHECK(doc["failures"].is_array());
}

TEST_CASE("stats rows carry adjusted p only when present") {
    vdesc::TestResult wilcoxon;
    wilcoxon.test_name = "wilcoxon_signed_rank";
    wilcoxon.statistic = 2.25;
    wilcoxon.p_value = 0.024;
    wilcoxon.effect_size = 0.71;
    wilcoxon.n_used = 10;

    vdesc::TestResult posthoc;
    posthoc.test_name = "friedman_posthoc";
    posthoc.statistic = -2.06;
    posthoc.p_value = 0.04;
    posthoc.n_used = 6;
    posthoc.details["p_bonferroni"] = 0.12;

    vdesc::StatsRow row_a = vdesc::stats_row(wilcoxon, "ours_vs_base");
    CHECK(row_a.test == "wilcoxon_signed_rank");
    CHECK(row_a.has_effect_size);
    CHECK_FALSE(row_a.has_p_adjusted);

    vdesc::StatsRow row_b = vdesc::stats_row(posthoc, "a_vs_b");
    CHECK(row_b.has_p_adjusted);
    CHECK(row_b.p_adjusted == doctest::Approx(0.12));
    CHECK_FALSE(row_b.has_effect_size);

    TempPath path(".csv");
    vdesc::write_stats_csv({row_a, row_b}, path.path);
    auto rows = vdesc::parse_csv(slurp(path.path));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"pair", "test", "effect_size",
                                              "statistic", "p_value", "p_adjusted",
                                              "n"});
    CHECK(rows[1][0] == "ours_vs_base");
    CHECK(rows[1][2] == "0.71");
    CHECK(rows[1][5] == "");
    CHECK(rows[1][6] == "10");
    CHECK(rows[2][2] == "");
    CHECK(rows[2][5] == "0.12");
}

TEST_CASE("key-value config parsing") {
    vdesc::KeyValueConfig config = vdesc::KeyValueConfig::parse(
        "# comment line\n"
        "endpoint = http://127.0.0.1:8080\n"
        "\n"
        "  # indented comment\n"
        "model=mock model name\n"
        "spaced   =   keeps interior  spacing\n");
    CHECK(config.get("endpoint") == std::string("http://127.0.0.1:8080"));
    CHECK(config.get("model") == std::string("mock model name"));
    CHECK(config.get("spaced") == std::string("keeps interior  spacing"));
    CHECK_FALSE(config.get("absent").has_value());
    CHECK(config.entries().size() == 3);

    config.set("endpoint", "http://other");
    CHECK(config.get("endpoint") == std::string("http://other"));

    CHECK_THROWS_AS(vdesc::KeyValueConfig::parse("no equals sign\n"),
                    vdesc::ConfigError);
    CHECK_THROWS_AS(vdesc::KeyValueConfig::parse("= value without key\n"),
                    vdesc::ConfigError);
    CHECK_THROWS_AS(vdesc::KeyValueConfig::load("/nonexistent/vdesc.conf"),
                    vdesc::IoError);
}

}
