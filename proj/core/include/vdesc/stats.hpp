#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vdesc {

struct RatingSample {
    std::string label;
    std::vector<double> values;
};

struct TestResult {
    std::string test_name;
    double statistic = 0.0;
    double p_value = 1.0;
    std::optional<double> effect_size;
    int n_used = 0;
    std::map<std::string, double> details;
};

// Paired two-sided test on differences x - y. Zero differences are dropped,
// absolute differences are mid-ranked, and the normal approximation uses the
// tie-corrected variance with no continuity correction. The reported
// statistic is the signed Z of W+; details carry w_plus, w_minus and
// w_min = min(W+, W-). Effect size r = |Z|/sqrt(n_used).
TestResult wilcoxon_signed_rank(const std::vector<double>& x,
                                const std::vector<double>& y);

// Tie-corrected Friedman test over an items x conditions matrix, chi-square
// tail with k-1 degrees of freedom. A matrix with every row internally tied
// carries no ranking signal and yields statistic 0 with p = 1.
TestResult friedman_test(const std::vector<std::vector<double>>& matrix);

struct PairwiseComparison {
    std::size_t condition_a = 0;
    std::size_t condition_b = 0;
    TestResult result;
};

// Dunn-type z tests on Friedman rank sums with the same tie correction;
// p_value is unadjusted, details carry p_bonferroni and the rank sums.
// For k = 2 the squared z equals the Friedman statistic.
std::vector<PairwiseComparison> posthoc_pairwise(
    const std::vector<std::vector<double>>& matrix);

// Mid-ranks of the values (average rank across ties), 1-based.
std::vector<double> mid_ranks(const std::vector<double>& values);

// Standard normal CDF.
double normal_cdf(double z);

}  // namespace vdesc
