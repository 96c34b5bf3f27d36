#pragma once

#include <map>
#include <optional>
#include <string>

namespace vdesc {

// Flat `key = value` config file. Lines starting with '#' (after optional
// whitespace) and blank lines are ignored; values keep interior whitespace.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::string& path);

    std::optional<std::string> get(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

}  // namespace vdesc
