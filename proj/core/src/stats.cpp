#include "vdesc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "vdesc/errors.hpp"

namespace vdesc {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

std::vector<double> mid_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

double two_sided_normal_p(double z) {
    double p = 2.0 * normal_cdf(-std::fabs(z));
    return std::clamp(p, 0.0, 1.0);
}

// Sum of (t^3 - t) over tie groups of already-sorted absolute differences.
double tie_term(std::vector<double> sorted_abs) {
    double total = 0.0;
    std::size_t i = 0;
    while (i < sorted_abs.size()) {
        std::size_t j = i;
        while (j + 1 < sorted_abs.size() && sorted_abs[j + 1] == sorted_abs[i]) ++j;
        double t = static_cast<double>(j - i + 1);
        total += t * t * t - t;
        i = j + 1;
    }
    return total;
}

}  // namespace

TestResult wilcoxon_signed_rank(const std::vector<double>& x,
                                const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw InvalidArgument("wilcoxon_signed_rank: samples differ in length");
    }
    if (x.empty()) {
        throw InvalidArgument("wilcoxon_signed_rank: empty samples");
    }
    std::vector<double> diffs;
    diffs.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty()) {
        throw DegenerateSample("wilcoxon_signed_rank: all differences are zero");
    }
    const std::size_t n = diffs.size();
    if (n < 5) {
        throw InvalidArgument(
            "wilcoxon_signed_rank: fewer than 5 non-zero pairs (n = " +
            std::to_string(n) + ")");
    }

    std::vector<double> abs_d(n);
    for (std::size_t i = 0; i < n; ++i) abs_d[i] = std::fabs(diffs[i]);
    std::vector<double> ranks = mid_ranks(abs_d);

    double w_plus = 0.0;
    double w_minus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0.0) {
            w_plus += ranks[i];
        } else {
            w_minus += ranks[i];
        }
    }
    const double dn = static_cast<double>(n);
    const double mu = dn * (dn + 1.0) / 4.0;
    std::sort(abs_d.begin(), abs_d.end());
    double sigma2 = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term(abs_d) / 48.0;
    if (sigma2 <= 0.0) {
        throw DegenerateSample("wilcoxon_signed_rank: zero variance");
    }
    const double sigma = std::sqrt(sigma2);
    const double z = (w_plus - mu) / sigma;

    TestResult result;
    result.test_name = "wilcoxon_signed_rank";
    result.statistic = z;
    result.p_value = two_sided_normal_p(z);
    result.effect_size = std::fabs(z) / std::sqrt(dn);
    result.n_used = static_cast<int>(n);
    result.details["w_plus"] = w_plus;
    result.details["w_minus"] = w_minus;
    result.details["w_min"] = std::min(w_plus, w_minus);
    result.details["mu"] = mu;
    result.details["sigma"] = sigma;
    return result;
}

namespace {

struct FriedmanParts {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> rank_sums;
    double a = 0.0;
    double c = 0.0;
    double s = 0.0;
};

FriedmanParts friedman_parts(const std::vector<std::vector<double>>& matrix) {
    if (matrix.size() < 2) {
        throw InvalidArgument("friedman: need at least 2 items");
    }
    const std::size_t k = matrix.front().size();
    if (k < 2) {
        throw InvalidArgument("friedman: need at least 2 conditions");
    }
    FriedmanParts parts;
    parts.n = matrix.size();
    parts.k = k;
    parts.rank_sums.assign(k, 0.0);
    for (const auto& row : matrix) {
        if (row.size() != k) {
            throw InvalidArgument("friedman: ragged matrix");
        }
        std::vector<double> ranks = mid_ranks(row);
        for (std::size_t j = 0; j < k; ++j) {
            parts.rank_sums[j] += ranks[j];
            parts.a += ranks[j] * ranks[j];
        }
    }
    const double dn = static_cast<double>(parts.n);
    const double dk = static_cast<double>(k);
    parts.c = dn * dk * (dk + 1.0) * (dk + 1.0) / 4.0;
    const double mean_sum = dn * (dk + 1.0) / 2.0;
    for (double rs : parts.rank_sums) {
        parts.s += (rs - mean_sum) * (rs - mean_sum);
    }
    return parts;
}

}  // namespace

TestResult friedman_test(const std::vector<std::vector<double>>& matrix) {
    FriedmanParts parts = friedman_parts(matrix);
    const double df = static_cast<double>(parts.k - 1);

    TestResult result;
    result.test_name = "friedman";
    result.n_used = static_cast<int>(parts.n);
    result.details["df"] = df;
    result.details["a"] = parts.a;
    result.details["c"] = parts.c;
    result.details["s"] = parts.s;
    for (std::size_t j = 0; j < parts.k; ++j) {
        result.details["rank_sum_" + std::to_string(j)] = parts.rank_sums[j];
    }
    const double spread = parts.a - parts.c;
    if (spread <= 1e-12) {
        result.statistic = 0.0;
        result.p_value = 1.0;
        return result;
    }
    result.statistic = df * parts.s / spread;
    boost::math::chi_squared dist(df);
    result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
    return result;
}

std::vector<PairwiseComparison> posthoc_pairwise(
    const std::vector<std::vector<double>>& matrix) {
    FriedmanParts parts = friedman_parts(matrix);
    const double spread = parts.a - parts.c;
    const double df = static_cast<double>(parts.k - 1);
    const double m = static_cast<double>(parts.k * (parts.k - 1) / 2);
    const double se = spread > 0.0 ? std::sqrt(2.0 * spread / df) : 0.0;

    std::vector<PairwiseComparison> out;
    for (std::size_t a = 0; a < parts.k; ++a) {
        for (std::size_t b = a + 1; b < parts.k; ++b) {
            PairwiseComparison cmp;
            cmp.condition_a = a;
            cmp.condition_b = b;
            cmp.result.test_name = "friedman_posthoc";
            cmp.result.n_used = static_cast<int>(parts.n);
            double z = 0.0;
            double p = 1.0;
            if (se > 0.0) {
                z = (parts.rank_sums[a] - parts.rank_sums[b]) / se;
                p = two_sided_normal_p(z);
            }
            cmp.result.statistic = z;
            cmp.result.p_value = p;
            cmp.result.details["p_bonferroni"] = std::min(1.0, p * m);
            cmp.result.details["rank_sum_a"] = parts.rank_sums[a];
            cmp.result.details["rank_sum_b"] = parts.rank_sums[b];
            out.push_back(std::move(cmp));
        }
    }
    return out;
}

}  // namespace vdesc
