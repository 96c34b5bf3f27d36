#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vdesc {

struct Guideline {
    int id = 0;
    std::string text;
    std::vector<std::string> source_tags;
};

// The 42 description guidelines used by the compliant prompt variants.
// The default set is embedded; an override file supports experimentation
// with revised sets.
class GuidelineRegistry {
public:
    // Embedded default set: exactly 42 entries with contiguous ids 1..42.
    static GuidelineRegistry load_default();

    // Plain UTF-8 text (one guideline per non-empty line, ids assigned 1..n)
    // or a JSON array of {"id": <int>, "text": <string>} objects.
    static GuidelineRegistry from_file(const std::string& path);
    static GuidelineRegistry from_text(const std::string& text);

    const std::vector<Guideline>& all() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const Guideline& by_id(int id) const;
    bool has_id(int id) const;

    // "Instructions:" header followed by one "Instruction #k. <text>" line
    // per requested id, renumbered consecutively from 1 in subset order.
    std::string render_instruction_block(const std::vector<int>& ids) const;

    std::vector<int> all_ids() const;

    // FNV-1a over ids and texts; stable across runs for an identical set.
    std::uint64_t content_hash() const;

private:
    std::vector<Guideline> entries_;
};

}  // namespace vdesc
