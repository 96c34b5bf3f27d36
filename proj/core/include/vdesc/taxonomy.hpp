#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vdesc {

// Closed 15-category video taxonomy.
const std::vector<std::string>& category_names();

// Case-insensitive match after trimming whitespace, surrounding quotes and a
// trailing period. Returns the canonical name, or nullopt (unresolved).
std::optional<std::string> match_category(const std::string& raw);

}  // namespace vdesc
