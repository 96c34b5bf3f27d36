#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vdesc/text_metrics.hpp"

namespace vdesc {

class MllmClient;

inline constexpr int kSchemaVersion = 1;

struct DescriptionEntry {
    std::string method_label;
    std::string text;
    std::string model_name;
    std::string created_at;
};

struct VideoRecord {
    std::string video_id;
    std::string source;
    std::string media_ref;
    std::string category;
    std::string human_annotation;
    std::vector<DescriptionEntry> descriptions;
    std::string split;
};

using Store = std::vector<VideoRecord>;

// JSONL, one record per line, stable field order; load then save round-trips
// byte-identically. Malformed lines and duplicate video_ids raise StoreError
// with the offending line number.
Store load_store(const std::string& path);
void save_store(const Store& store, const std::string& path);

// Whitespace-separated token count after trimming.
int word_count(const std::string& text);

inline constexpr std::size_t kLengthBinCount = 7;

// Half-open word-count intervals [0,20) ... [100,140), then [140,inf).
const std::array<std::string, kLengthBinCount>& length_bin_labels();
std::size_t length_bin_index(int words);

struct DatasetStats {
    std::size_t record_count = 0;
    double mean_description_words = 0.0;
    std::array<double, kLengthBinCount> length_bin_proportions{};
    std::map<std::string, double> category_distribution;
};

// Statistics over the first description carrying method_label on each
// record. The category distribution covers the categorized subset of those
// records and is empty when none carry a category.
DatasetStats compute_stats(const Store& store, const std::string& method_label);

// Deterministic Fisher-Yates shuffle keyed by seed; val and test take
// floor(n * ratio) records each and the remainder goes to train. Existing
// split fields are only overwritten when force is set.
void assign_splits(Store& store, double train_ratio, double val_ratio,
                   double test_ratio, std::uint64_t seed, bool force);

// Rows of (video_id, annotation); a leading "video_id,annotation" header row
// is skipped.
Store import_annotations_csv(const std::string& path);

// Description text for a method label; the pseudo-label "human_annotation"
// selects the record's human annotation field.
std::optional<std::string> text_for_label(const VideoRecord& record,
                                          const std::string& label);

// Candidate/reference texts per record for metric evaluation. Records
// missing either label make this fail with the offending ids listed.
std::vector<EvalPair> collect_eval_pairs(const Store& store,
                                         const std::string& candidate_label,
                                         const std::string& reference_label);

struct CategorizeOutcome {
    std::size_t updated = 0;
    std::vector<std::pair<std::string, std::string>> unresolved;  // id, raw reply
    std::vector<std::pair<std::string, std::string>> failures;    // id, error
};

// Single-choice categorization of each record's method_label description
// through the client. Replies outside the taxonomy are flagged unresolved;
// per-record errors are collected without aborting the batch. Records that
// already carry a category are skipped unless force is set.
CategorizeOutcome categorize_records(Store& store, const std::string& method_label,
                                     MllmClient& client, bool force = false);

}  // namespace vdesc
