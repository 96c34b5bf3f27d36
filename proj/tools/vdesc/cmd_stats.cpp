#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tool_common.hpp"
#include "vdesc/csv.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/reports.hpp"
#include "vdesc/stats.hpp"

namespace vdtool {

namespace {

struct LongTable {
    std::vector<std::string> items;
    std::vector<std::string> conditions;
    std::vector<std::vector<double>> matrix;
};

// Long-format ratings: a item_id,condition,value header then one row per
// cell. Items and conditions keep first-appearance order; the pivoted
// matrix must be complete.
LongTable pivot_long_csv(const std::string& path) {
    auto rows = vdesc::read_csv_file(path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"item_id", "condition", "value"}) {
        throw vdesc::InvalidArgument(
            "samples CSV must start with an item_id,condition,value header");
    }
    LongTable table;
    std::map<std::string, std::size_t> item_index;
    std::map<std::string, std::size_t> condition_index;
    std::map<std::pair<std::size_t, std::size_t>, double> cells;

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3) {
            throw vdesc::InvalidArgument("samples CSV row " + std::to_string(r + 1) +
                                         " does not have 3 fields");
        }
        auto [item_it, item_new] = item_index.try_emplace(row[0], table.items.size());
        if (item_new) table.items.push_back(row[0]);
        auto [cond_it, cond_new] = condition_index.try_emplace(row[1], table.conditions.size());
        if (cond_new) table.conditions.push_back(row[1]);
        double value = parse_double_strict(row[2], "value in row " + std::to_string(r + 1));
        if (!cells.emplace(std::make_pair(item_it->second, cond_it->second), value).second) {
            throw vdesc::InvalidArgument("duplicate cell for item '" + row[0] +
                                         "' condition '" + row[1] + "'");
        }
    }
    if (table.items.empty()) throw vdesc::InvalidArgument("samples CSV has no data rows");

    table.matrix.assign(table.items.size(),
                        std::vector<double>(table.conditions.size(), 0.0));
    for (std::size_t i = 0; i < table.items.size(); ++i) {
        for (std::size_t j = 0; j < table.conditions.size(); ++j) {
            auto it = cells.find({i, j});
            if (it == cells.end()) {
                throw vdesc::InvalidArgument("item '" + table.items[i] +
                                             "' is missing condition '" + table.conditions[j] +
                                             "'");
            }
            table.matrix[i][j] = it->second;
        }
    }
    return table;
}

void print_row(const vdesc::StatsRow& row) {
    std::cout << row.test << " [" << row.pair << "]: statistic="
              << vdesc::format_double(row.statistic) << " p=" << vdesc::format_double(row.p_value);
    if (row.has_effect_size) std::cout << " r=" << vdesc::format_double(row.effect_size);
    if (row.has_p_adjusted)
        std::cout << " p_adj=" << vdesc::format_double(row.p_adjusted);
    std::cout << " n=" << row.n << "\n";
}

struct StatsArgs {
    std::string input;
    std::string out;
};

void run_wilcoxon(const StatsArgs& args, GlobalState& state) {
    RunContext run(state, "stats wilcoxon");
    LongTable table = pivot_long_csv(args.input);
    if (table.conditions.size() != 2) {
        throw vdesc::InvalidArgument("wilcoxon needs exactly 2 conditions, got " +
                                     std::to_string(table.conditions.size()));
    }
    std::vector<double> x(table.items.size()), y(table.items.size());
    for (std::size_t i = 0; i < table.items.size(); ++i) {
        x[i] = table.matrix[i][0];
        y[i] = table.matrix[i][1];
    }
    vdesc::TestResult result = vdesc::wilcoxon_signed_rank(x, y);
    std::vector<vdesc::StatsRow> rows{
        vdesc::stats_row(result, table.conditions[0] + " vs " + table.conditions[1])};

    std::string out = run.out_path(args.out, "stats.csv");
    vdesc::write_stats_csv(rows, out);
    for (const auto& row : rows) print_row(row);

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "stats wilcoxon";
    resolved["input"] = args.input;
    resolved["out"] = out;
    run.set_resolved(resolved);
    run.finalize();
}

void run_friedman(const StatsArgs& args, GlobalState& state) {
    RunContext run(state, "stats friedman");
    LongTable table = pivot_long_csv(args.input);
    vdesc::TestResult overall = vdesc::friedman_test(table.matrix);
    std::vector<vdesc::StatsRow> rows{vdesc::stats_row(overall, "all")};
    for (const vdesc::PairwiseComparison& cmp : vdesc::posthoc_pairwise(table.matrix)) {
        rows.push_back(vdesc::stats_row(
            cmp.result,
            table.conditions[cmp.condition_a] + " vs " + table.conditions[cmp.condition_b]));
    }

    std::string out = run.out_path(args.out, "stats.csv");
    vdesc::write_stats_csv(rows, out);
    for (const auto& row : rows) print_row(row);

    nlohmann::ordered_json resolved;
    resolved["schema_version"] = 1;
    resolved["command"] = "stats friedman";
    resolved["input"] = args.input;
    resolved["out"] = out;
    run.set_resolved(resolved);
    run.finalize();
}

}  // namespace

void register_cmd_stats(CLI::App& app, GlobalState& state) {
    CLI::App* cmd = app.add_subcommand("stats", "paired nonparametric tests over rating CSVs");
    cmd->require_subcommand(1);
    cmd->fallthrough();

    auto wil_args = std::make_shared<StatsArgs>();
    CLI::App* wilcoxon =
        cmd->add_subcommand("wilcoxon", "signed-rank test over two paired conditions");
    wilcoxon->add_option("--input", wil_args->input, "long-format samples CSV")->required();
    wilcoxon->add_option("--out", wil_args->out, "results CSV path");
    wilcoxon->callback([wil_args, &state]() { run_wilcoxon(*wil_args, state); });

    auto fri_args = std::make_shared<StatsArgs>();
    CLI::App* friedman =
        cmd->add_subcommand("friedman", "Friedman test plus pairwise post-hoc comparisons");
    friedman->add_option("--input", fri_args->input, "long-format samples CSV")->required();
    friedman->add_option("--out", fri_args->out, "results CSV path");
    friedman->callback([fri_args, &state]() { run_friedman(*fri_args, state); });
}

}  // namespace vdtool
