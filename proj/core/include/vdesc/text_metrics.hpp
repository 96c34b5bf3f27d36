#pragma once

#include <map>
#include <string>
#include <vector>

namespace vdesc {

using TokenSequence = std::vector<std::string>;

// ASCII letters are lowercased, digits kept; every other byte (including
// all non-ASCII bytes) separates tokens.
TokenSequence tokenize(const std::string& text);

struct MetricScores {
    double bleu_1 = 0.0;
    double bleu_4 = 0.0;
    double meteor = 0.0;
    double rouge_l = 0.0;
    double cider = 0.0;
};

struct EvalPair {
    std::string id;
    std::string candidate;
    std::vector<std::string> references;
};

struct MetricReport {
    std::vector<std::string> record_ids;
    std::map<std::string, MetricScores> per_record;
    // Corpus row: BLEU pooled over clipped counts, the rest averaged.
    MetricScores corpus;
    std::map<std::string, double> spice_external;
};

// Corpus BLEU with reference-count clipping, closest-reference-length
// brevity penalty (ties to the shorter length) and no smoothing: a zero
// p_n zeroes BLEU_n. Returns BLEU_1..BLEU_max_n.
std::vector<double> bleu_corpus(const std::vector<TokenSequence>& candidates,
                                const std::vector<std::vector<TokenSequence>>& references,
                                int max_n = 4);

// Exact-then-stem alignment maximizing matches, chunk count minimized by a
// longest-run-first heuristic; Fmean = 10PR/(R+9P), penalty =
// 0.5*(chunks/matches)^3. Multiple references take the best score.
double meteor_score(const TokenSequence& candidate,
                    const std::vector<TokenSequence>& references);

// LCS F-measure with beta = 1.2; multiple references take the best score.
double rouge_l_score(const TokenSequence& candidate,
                     const std::vector<TokenSequence>& references);

// CIDEr-D over n = 1..4 with sigma = 6 and the x10 scale. Document
// frequencies come from the reference sets themselves.
std::vector<double> cider_scores(const std::vector<TokenSequence>& candidates,
                                 const std::vector<std::vector<TokenSequence>>& references,
                                 double sigma = 6.0, int max_n = 4);

MetricReport evaluate_corpus(const std::vector<EvalPair>& pairs);

}  // namespace vdesc
