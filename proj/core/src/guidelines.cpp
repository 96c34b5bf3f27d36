#include "vdesc/guidelines.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "guidelines_data.hpp"
#include "vdesc/errors.hpp"

namespace vdesc {

GuidelineRegistry GuidelineRegistry::load_default() {
    GuidelineRegistry reg;
    reg.entries_.reserve(detail::kGuidelineCount);
    for (int i = 0; i < detail::kGuidelineCount; ++i) {
        reg.entries_.push_back({i + 1, detail::kGuidelineTexts[i], {}});
    }
    return reg;
}

GuidelineRegistry GuidelineRegistry::from_text(const std::string& text) {
    GuidelineRegistry reg;
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument(std::string("guidelines JSON: ") + e.what());
        }
        for (const auto& item : doc) {
            if (!item.is_object() || !item.contains("id") || !item.contains("text")) {
                throw InvalidArgument("guidelines JSON: each entry needs id and text");
            }
            Guideline g;
            g.id = item.at("id").get<int>();
            g.text = item.at("text").get<std::string>();
            if (item.contains("source_tags")) {
                g.source_tags = item.at("source_tags").get<std::vector<std::string>>();
            }
            if (g.id < 1) throw InvalidArgument("guidelines JSON: ids must be >= 1");
            if (g.text.empty()) throw InvalidArgument("guidelines JSON: empty text");
            if (reg.has_id(g.id)) {
                throw InvalidArgument("guidelines JSON: duplicate id " +
                                      std::to_string(g.id));
            }
            reg.entries_.push_back(std::move(g));
        }
    } else {
        std::istringstream in(text);
        std::string line;
        int next_id = 1;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
            reg.entries_.push_back({next_id++, line, {}});
        }
    }
    if (reg.entries_.empty()) throw InvalidArgument("guidelines file: no entries");
    return reg;
}

GuidelineRegistry GuidelineRegistry::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open guidelines file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

const Guideline& GuidelineRegistry::by_id(int id) const {
    for (const auto& g : entries_) {
        if (g.id == id) return g;
    }
    throw InvalidArgument("unknown guideline id " + std::to_string(id));
}

bool GuidelineRegistry::has_id(int id) const {
    for (const auto& g : entries_) {
        if (g.id == id) return true;
    }
    return false;
}

std::string GuidelineRegistry::render_instruction_block(const std::vector<int>& ids) const {
    if (ids.empty()) throw InvalidArgument("render_instruction_block: empty id list");
    std::string out = "Instructions:";
    int k = 1;
    for (int id : ids) {
        const Guideline& g = by_id(id);
        out += "\nInstruction #" + std::to_string(k++) + ". " + g.text;
    }
    return out;
}

std::vector<int> GuidelineRegistry::all_ids() const {
    std::vector<int> ids;
    ids.reserve(entries_.size());
    for (const auto& g : entries_) ids.push_back(g.id);
    return ids;
}

std::uint64_t GuidelineRegistry::content_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& g : entries_) {
        mix(std::to_string(g.id));
        h ^= ':';
        h *= 1099511628211ull;
        mix(g.text);
        h ^= '\n';
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace vdesc
