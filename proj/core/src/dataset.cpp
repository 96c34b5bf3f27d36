#include "vdesc/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include <json.hpp>

#include "vdesc/csv.hpp"
#include "vdesc/errors.hpp"
#include "vdesc/mllm.hpp"
#include "vdesc/prompts.hpp"
#include "vdesc/taxonomy.hpp"

using ordered_json = nlohmann::ordered_json;

namespace vdesc {

namespace {

ordered_json record_to_json(const VideoRecord& r) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["video_id"] = r.video_id;
    if (!r.source.empty()) doc["source"] = r.source;
    if (!r.media_ref.empty()) doc["media_ref"] = r.media_ref;
    if (!r.category.empty()) doc["category"] = r.category;
    if (!r.human_annotation.empty()) doc["human_annotation"] = r.human_annotation;
    doc["descriptions"] = ordered_json::array();
    for (const DescriptionEntry& d : r.descriptions) {
        ordered_json entry;
        entry["method_label"] = d.method_label;
        entry["text"] = d.text;
        if (!d.model_name.empty()) entry["model_name"] = d.model_name;
        if (!d.created_at.empty()) entry["created_at"] = d.created_at;
        doc["descriptions"].push_back(std::move(entry));
    }
    if (!r.split.empty()) doc["split"] = r.split;
    return doc;
}

std::string get_string(const ordered_json& doc, const char* key, std::size_t line) {
    auto it = doc.find(key);
    if (it == doc.end()) return "";
    if (!it->is_string()) {
        throw StoreError(std::string("field ") + key + " is not a string", line);
    }
    return it->get<std::string>();
}

VideoRecord record_from_json(const ordered_json& doc, std::size_t line) {
    if (!doc.is_object()) throw StoreError("record is not a JSON object", line);
    if (doc.contains("schema_version")) {
        const auto& v = doc.at("schema_version");
        if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
            throw StoreError("unsupported schema_version", line);
        }
    }
    VideoRecord r;
    r.video_id = get_string(doc, "video_id", line);
    if (r.video_id.empty()) throw StoreError("missing video_id", line);
    r.source = get_string(doc, "source", line);
    r.media_ref = get_string(doc, "media_ref", line);
    r.category = get_string(doc, "category", line);
    r.human_annotation = get_string(doc, "human_annotation", line);
    r.split = get_string(doc, "split", line);
    if (!r.split.empty() && r.split != "train" && r.split != "val" &&
        r.split != "test") {
        throw StoreError("invalid split value: " + r.split, line);
    }
    if (doc.contains("descriptions")) {
        const auto& arr = doc.at("descriptions");
        if (!arr.is_array()) throw StoreError("descriptions is not an array", line);
        for (const auto& e : arr) {
            if (!e.is_object() || !e.contains("method_label") || !e.contains("text")) {
                throw StoreError("malformed description entry", line);
            }
            DescriptionEntry d;
            d.method_label = get_string(e, "method_label", line);
            d.text = get_string(e, "text", line);
            d.model_name = get_string(e, "model_name", line);
            d.created_at = get_string(e, "created_at", line);
            if (d.method_label.empty()) {
                throw StoreError("description entry without method_label", line);
            }
            r.descriptions.push_back(std::move(d));
        }
    }
    return r;
}

}  // namespace

Store load_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open store: " + path);
    Store store;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ordered_json doc = ordered_json::parse(line, nullptr, false);
        if (doc.is_discarded()) throw StoreError("malformed JSON", lineno);
        VideoRecord r = record_from_json(doc, lineno);
        if (!seen.insert(r.video_id).second) {
            throw StoreError("duplicate video_id: " + r.video_id, lineno);
        }
        store.push_back(std::move(r));
    }
    return store;
}

void save_store(const Store& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write store: " + path);
    for (const VideoRecord& r : store) {
        out << record_to_json(r).dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

int word_count(const std::string& text) {
    int count = 0;
    bool in_word = false;
    for (char c : text) {
        bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) ++count;
        in_word = !space;
    }
    return count;
}

const std::array<std::string, kLengthBinCount>& length_bin_labels() {
    static const std::array<std::string, kLengthBinCount> kLabels = {
        "[0,20)", "[20,40)", "[40,60)", "[60,80)",
        "[80,100)", "[100,140)", "[140,inf)"};
    return kLabels;
}

std::size_t length_bin_index(int words) {
    static const int kEdges[] = {20, 40, 60, 80, 100, 140};
    for (std::size_t i = 0; i < std::size(kEdges); ++i) {
        if (words < kEdges[i]) return i;
    }
    return kLengthBinCount - 1;
}

std::optional<std::string> text_for_label(const VideoRecord& record,
                                          const std::string& label) {
    if (label == "human_annotation") {
        if (record.human_annotation.empty()) return std::nullopt;
        return record.human_annotation;
    }
    for (const DescriptionEntry& d : record.descriptions) {
        if (d.method_label == label) return d.text;
    }
    return std::nullopt;
}

DatasetStats compute_stats(const Store& store, const std::string& method_label) {
    DatasetStats stats;
    std::array<std::size_t, kLengthBinCount> bin_counts{};
    long long word_total = 0;
    std::size_t categorized = 0;
    std::map<std::string, std::size_t> category_counts;
    for (const VideoRecord& r : store) {
        auto text = text_for_label(r, method_label);
        if (!text) continue;
        ++stats.record_count;
        int words = word_count(*text);
        word_total += words;
        ++bin_counts[length_bin_index(words)];
        if (!r.category.empty()) {
            ++categorized;
            ++category_counts[r.category];
        }
    }
    if (stats.record_count == 0) {
        throw InvalidArgument("compute_stats: no descriptions with label " +
                              method_label);
    }
    stats.mean_description_words =
        static_cast<double>(word_total) / static_cast<double>(stats.record_count);
    for (std::size_t i = 0; i < kLengthBinCount; ++i) {
        stats.length_bin_proportions[i] =
            static_cast<double>(bin_counts[i]) /
            static_cast<double>(stats.record_count);
    }
    for (const auto& [name, count] : category_counts) {
        stats.category_distribution[name] =
            static_cast<double>(count) / static_cast<double>(categorized);
    }
    return stats;
}

namespace {

// Rejection-sampled bound keeps the shuffle identical across platforms.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

}  // namespace

void assign_splits(Store& store, double train_ratio, double val_ratio,
                   double test_ratio, std::uint64_t seed, bool force) {
    if (train_ratio < 0.0 || val_ratio < 0.0 || test_ratio < 0.0 ||
        std::fabs(train_ratio + val_ratio + test_ratio - 1.0) > 1e-9) {
        throw InvalidArgument("assign_splits: ratios must be non-negative and sum to 1");
    }
    if (!force) {
        for (const VideoRecord& r : store) {
            if (!r.split.empty()) {
                throw InvalidArgument(
                    "assign_splits: record " + r.video_id +
                    " already has a split; pass force to overwrite");
            }
        }
    }
    const std::size_t n = store.size();
    if (n == 0) return;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(bounded_draw(rng, i + 1));
        std::swap(order[i], order[j]);
    }
    const auto val_count =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * val_ratio));
    const auto test_count =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * test_ratio));
    const std::size_t train_count = n - val_count - test_count;
    for (std::size_t pos = 0; pos < n; ++pos) {
        VideoRecord& r = store[order[pos]];
        if (pos < train_count) {
            r.split = "train";
        } else if (pos < train_count + val_count) {
            r.split = "val";
        } else {
            r.split = "test";
        }
    }
}

Store import_annotations_csv(const std::string& path) {
    auto rows = read_csv_file(path);
    Store store;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.empty() || (row.size() == 1 && row[0].empty())) continue;
        if (i == 0 && row.size() == 2 && row[0] == "video_id" &&
            row[1] == "annotation") {
            continue;
        }
        if (row.size() != 2) {
            throw StoreError("expected 2 columns (video_id, annotation)", i + 1);
        }
        if (row[0].empty()) throw StoreError("empty video_id", i + 1);
        if (!seen.insert(row[0]).second) {
            throw StoreError("duplicate video_id: " + row[0], i + 1);
        }
        VideoRecord r;
        r.video_id = row[0];
        r.human_annotation = row[1];
        store.push_back(std::move(r));
    }
    return store;
}

std::vector<EvalPair> collect_eval_pairs(const Store& store,
                                         const std::string& candidate_label,
                                         const std::string& reference_label) {
    std::vector<EvalPair> pairs;
    std::vector<std::string> missing;
    for (const VideoRecord& r : store) {
        auto cand = text_for_label(r, candidate_label);
        auto ref = text_for_label(r, reference_label);
        if (!cand || !ref) {
            missing.push_back(r.video_id);
            continue;
        }
        EvalPair p;
        p.id = r.video_id;
        p.candidate = *cand;
        if (reference_label == "human_annotation") {
            p.references.push_back(*ref);
        } else {
            for (const DescriptionEntry& d : r.descriptions) {
                if (d.method_label == reference_label) p.references.push_back(d.text);
            }
        }
        pairs.push_back(std::move(p));
    }
    if (!missing.empty()) {
        std::string joined;
        for (const std::string& id : missing) {
            if (!joined.empty()) joined += ", ";
            joined += id;
        }
        throw InvalidArgument("records missing label " + candidate_label + " or " +
                              reference_label + ": " + joined);
    }
    return pairs;
}

CategorizeOutcome categorize_records(Store& store, const std::string& method_label,
                                     MllmClient& client, bool force) {
    CategorizeOutcome outcome;
    for (VideoRecord& r : store) {
        if (!r.category.empty() && !force) continue;
        auto text = text_for_label(r, method_label);
        if (!text) {
            outcome.failures.emplace_back(
                r.video_id, "no description with label " + method_label);
            continue;
        }
        try {
            PromptSpec prompt = build_category_prompt(*text);
            CompletionResult res = client.request_completion(prompt, {});
            auto category = match_category(res.text);
            if (category) {
                r.category = *category;
                ++outcome.updated;
            } else {
                outcome.unresolved.emplace_back(r.video_id, res.text);
            }
        } catch (const Error& e) {
            outcome.failures.emplace_back(r.video_id, e.what());
        }
    }
    return outcome;
}

}  // namespace vdesc
