#include "vdesc/text_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <unordered_map>

#include "vdesc/errors.hpp"
#include "vdesc/stemmer.hpp"

namespace vdesc {

TokenSequence tokenize(const std::string& text) {
    TokenSequence out;
    std::string cur;
    for (char c : text) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (uc < 0x80 && ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) {
            cur.push_back(c);
        } else if (uc < 0x80 && c >= 'A' && c <= 'Z') {
            cur.push_back(static_cast<char>(c - 'A' + 'a'));
        } else {
            if (!cur.empty()) {
                out.push_back(std::move(cur));
                cur.clear();
            }
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

namespace {

// N-grams are keyed by joining tokens with 0x1f, which tokenize never emits.
std::unordered_map<std::string, int> ngram_counts(const TokenSequence& tokens, int n) {
    std::unordered_map<std::string, int> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (int j = 1; j < n; ++j) {
            key.push_back('\x1f');
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace

std::vector<double> bleu_corpus(const std::vector<TokenSequence>& candidates,
                                const std::vector<std::vector<TokenSequence>>& references,
                                int max_n) {
    if (candidates.empty()) {
        throw InvalidArgument("bleu_corpus: empty candidate set");
    }
    if (candidates.size() != references.size()) {
        throw InvalidArgument("bleu_corpus: candidate/reference count mismatch");
    }
    std::vector<long long> num(max_n + 1, 0);
    std::vector<long long> den(max_n + 1, 0);
    long long c_total = 0;
    long long r_total = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const TokenSequence& cand = candidates[k];
        const auto& refs = references[k];
        if (refs.empty()) {
            throw InvalidArgument("bleu_corpus: candidate without references");
        }
        c_total += static_cast<long long>(cand.size());
        long long best_len = -1;
        for (const TokenSequence& r : refs) {
            long long rl = static_cast<long long>(r.size());
            if (best_len < 0) {
                best_len = rl;
                continue;
            }
            long long cl = static_cast<long long>(cand.size());
            long long d_new = std::llabs(rl - cl);
            long long d_old = std::llabs(best_len - cl);
            if (d_new < d_old || (d_new == d_old && rl < best_len)) best_len = rl;
        }
        r_total += best_len;
        for (int n = 1; n <= max_n; ++n) {
            auto cg = ngram_counts(cand, n);
            std::unordered_map<std::string, int> maxref;
            for (const TokenSequence& r : refs) {
                for (const auto& [g, cnt] : ngram_counts(r, n)) {
                    int& slot = maxref[g];
                    slot = std::max(slot, cnt);
                }
            }
            for (const auto& [g, cnt] : cg) {
                den[n] += cnt;
                auto it = maxref.find(g);
                if (it != maxref.end()) num[n] += std::min(cnt, it->second);
            }
        }
    }
    double bp = 1.0;
    if (c_total == 0) {
        bp = 0.0;
    } else if (c_total <= r_total) {
        bp = std::exp(1.0 - static_cast<double>(r_total) / static_cast<double>(c_total));
    }
    std::vector<double> out;
    out.reserve(max_n);
    double log_sum = 0.0;
    bool zero = false;
    for (int k = 1; k <= max_n; ++k) {
        double p = den[k] > 0 ? static_cast<double>(num[k]) / static_cast<double>(den[k])
                              : 0.0;
        if (p <= 0.0) zero = true;
        if (!zero) log_sum += std::log(p);
        out.push_back(zero ? 0.0 : bp * std::exp(log_sum / k));
    }
    return out;
}

namespace {

struct Alignment {
    int matches = 0;
    int chunks = 0;
};

// Greedy longest-run matching for one stage over the still-unmatched
// positions. Ties prefer the earliest candidate, then reference, position.
void align_stage(const TokenSequence& key_c, const TokenSequence& key_r,
                 std::vector<int>& match_of, std::vector<bool>& ref_used) {
    const std::size_t n_c = key_c.size();
    const std::size_t n_r = key_r.size();
    for (;;) {
        std::size_t best_i = 0, best_j = 0, best_len = 0;
        for (std::size_t i = 0; i < n_c; ++i) {
            if (match_of[i] >= 0) continue;
            for (std::size_t j = 0; j < n_r; ++j) {
                if (ref_used[j]) continue;
                std::size_t len = 0;
                while (i + len < n_c && j + len < n_r && match_of[i + len] < 0 &&
                       !ref_used[j + len] && key_c[i + len] == key_r[j + len]) {
                    ++len;
                }
                if (len > best_len) {
                    best_len = len;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_len == 0) break;
        for (std::size_t k = 0; k < best_len; ++k) {
            match_of[best_i + k] = static_cast<int>(best_j + k);
            ref_used[best_j + k] = true;
        }
    }
}

Alignment align(const TokenSequence& cand, const TokenSequence& ref,
                const TokenSequence& cand_stems, const TokenSequence& ref_stems) {
    std::vector<int> match_of(cand.size(), -1);
    std::vector<bool> ref_used(ref.size(), false);
    align_stage(cand, ref, match_of, ref_used);
    align_stage(cand_stems, ref_stems, match_of, ref_used);

    Alignment a;
    int prev_i = -2, prev_j = -2;
    for (std::size_t i = 0; i < match_of.size(); ++i) {
        if (match_of[i] < 0) continue;
        ++a.matches;
        if (!(static_cast<int>(i) == prev_i + 1 && match_of[i] == prev_j + 1)) {
            ++a.chunks;
        }
        prev_i = static_cast<int>(i);
        prev_j = match_of[i];
    }
    return a;
}

double meteor_single(const TokenSequence& cand, const TokenSequence& ref) {
    if (cand.empty() || ref.empty()) return 0.0;
    TokenSequence cand_stems, ref_stems;
    cand_stems.reserve(cand.size());
    ref_stems.reserve(ref.size());
    for (const auto& t : cand) cand_stems.push_back(porter_stem(t));
    for (const auto& t : ref) ref_stems.push_back(porter_stem(t));

    Alignment a = align(cand, ref, cand_stems, ref_stems);
    if (a.matches == 0) return 0.0;
    double p = static_cast<double>(a.matches) / static_cast<double>(cand.size());
    double r = static_cast<double>(a.matches) / static_cast<double>(ref.size());
    double fmean = 10.0 * p * r / (r + 9.0 * p);
    double frag = static_cast<double>(a.chunks) / static_cast<double>(a.matches);
    double penalty = 0.5 * frag * frag * frag;
    return fmean * (1.0 - penalty);
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                          : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l_single(const TokenSequence& cand, const TokenSequence& ref,
                      double beta) {
    if (cand.empty() || ref.empty()) return 0.0;
    std::size_t l = lcs_length(cand, ref);
    if (l == 0) return 0.0;
    double p = static_cast<double>(l) / static_cast<double>(cand.size());
    double r = static_cast<double>(l) / static_cast<double>(ref.size());
    double b2 = beta * beta;
    return (1.0 + b2) * r * p / (r + b2 * p);
}

}  // namespace

double meteor_score(const TokenSequence& candidate,
                    const std::vector<TokenSequence>& references) {
    if (references.empty()) {
        throw InvalidArgument("meteor_score: no references");
    }
    double best = 0.0;
    for (const TokenSequence& ref : references) {
        best = std::max(best, meteor_single(candidate, ref));
    }
    return best;
}

double rouge_l_score(const TokenSequence& candidate,
                     const std::vector<TokenSequence>& references) {
    if (references.empty()) {
        throw InvalidArgument("rouge_l_score: no references");
    }
    double best = 0.0;
    for (const TokenSequence& ref : references) {
        best = std::max(best, rouge_l_single(candidate, ref, 1.2));
    }
    return best;
}

std::vector<double> cider_scores(const std::vector<TokenSequence>& candidates,
                                 const std::vector<std::vector<TokenSequence>>& references,
                                 double sigma, int max_n) {
    if (candidates.empty()) {
        throw InvalidArgument("cider_scores: empty corpus");
    }
    if (candidates.size() != references.size()) {
        throw InvalidArgument("cider_scores: candidate/reference count mismatch");
    }

    std::vector<std::unordered_map<std::string, int>> df(max_n + 1);
    for (const auto& refs : references) {
        if (refs.empty()) {
            throw InvalidArgument("cider_scores: candidate without references");
        }
        std::vector<std::unordered_map<std::string, int>> seen(max_n + 1);
        for (const TokenSequence& r : refs) {
            for (int n = 1; n <= max_n; ++n) {
                for (const auto& [g, cnt] : ngram_counts(r, n)) seen[n][g] = 1;
            }
        }
        for (int n = 1; n <= max_n; ++n) {
            for (const auto& [g, one] : seen[n]) ++df[n][g];
        }
    }

    const double log_corpus = std::log(static_cast<double>(candidates.size()));
    auto idf = [&](int n, const std::string& g) {
        auto it = df[n].find(g);
        double d = it == df[n].end() ? 0.0 : static_cast<double>(it->second);
        return log_corpus - std::log(std::max(1.0, d));
    };

    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const TokenSequence& cand = candidates[k];
        const auto& refs = references[k];
        double total = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            auto cg = ngram_counts(cand, n);
            std::unordered_map<std::string, double> hv;
            double hn2 = 0.0;
            for (const auto& [g, cnt] : cg) {
                double v = cnt * idf(n, g);
                hv[g] = v;
                hn2 += v * v;
            }
            double per_ref_sum = 0.0;
            for (const TokenSequence& ref : refs) {
                std::unordered_map<std::string, double> rv;
                double rn2 = 0.0;
                for (const auto& [g, cnt] : ngram_counts(ref, n)) {
                    double v = cnt * idf(n, g);
                    rv[g] = v;
                    rn2 += v * v;
                }
                double numer = 0.0;
                for (const auto& [g, v] : hv) {
                    auto it = rv.find(g);
                    if (it != rv.end()) numer += std::min(v, it->second) * it->second;
                }
                double s = 0.0;
                if (hn2 > 0.0 && rn2 > 0.0) {
                    s = numer / (std::sqrt(hn2) * std::sqrt(rn2));
                }
                double delta = static_cast<double>(cand.size()) -
                               static_cast<double>(ref.size());
                s *= std::exp(-(delta * delta) / (2.0 * sigma * sigma));
                per_ref_sum += s;
            }
            total += per_ref_sum / static_cast<double>(refs.size());
        }
        scores.push_back(10.0 * total / static_cast<double>(max_n));
    }
    return scores;
}

MetricReport evaluate_corpus(const std::vector<EvalPair>& pairs) {
    if (pairs.empty()) {
        throw InvalidArgument("evaluate_corpus: empty candidate set");
    }
    std::vector<TokenSequence> cands;
    std::vector<std::vector<TokenSequence>> refs;
    cands.reserve(pairs.size());
    refs.reserve(pairs.size());
    for (const EvalPair& p : pairs) {
        if (p.references.empty()) {
            throw InvalidArgument("evaluate_corpus: record " + p.id +
                                  " has no references");
        }
        cands.push_back(tokenize(p.candidate));
        std::vector<TokenSequence> r;
        r.reserve(p.references.size());
        for (const std::string& s : p.references) r.push_back(tokenize(s));
        refs.push_back(std::move(r));
    }

    std::vector<double> ciders = cider_scores(cands, refs);

    MetricReport report;
    double meteor_sum = 0.0, rouge_sum = 0.0, cider_sum = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        MetricScores s;
        std::vector<double> b = bleu_corpus({cands[i]}, {refs[i]});
        s.bleu_1 = b[0];
        s.bleu_4 = b[3];
        s.meteor = meteor_score(cands[i], refs[i]);
        s.rouge_l = rouge_l_score(cands[i], refs[i]);
        s.cider = ciders[i];
        meteor_sum += s.meteor;
        rouge_sum += s.rouge_l;
        cider_sum += s.cider;
        report.record_ids.push_back(pairs[i].id);
        report.per_record[pairs[i].id] = s;
    }
    std::vector<double> pooled = bleu_corpus(cands, refs);
    report.corpus.bleu_1 = pooled[0];
    report.corpus.bleu_4 = pooled[3];
    const double n = static_cast<double>(pairs.size());
    report.corpus.meteor = meteor_sum / n;
    report.corpus.rouge_l = rouge_sum / n;
    report.corpus.cider = cider_sum / n;
    return report;
}

}  // namespace vdesc
