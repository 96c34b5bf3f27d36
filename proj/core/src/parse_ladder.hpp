#pragma once

#include <optional>
#include <string>

// Shared pieces of the model-output recovery ladder. Internal to the
// library; not installed.
namespace vdesc::detail {

// Cuts the payload down to the most plausible dictionary: prefer the inside
// of a ``` fence, then the first '{' through the last '}'.
std::string strip_to_object(const std::string& raw);

std::string repair_single_quotes(const std::string& text);

// Case-insensitive substring search.
std::size_t ifind(const std::string& text, const std::string& needle);

// Reads a value after "<key>:", tolerating ", ', and curly quotes, or an
// unquoted run up to the next delimiter.
std::optional<std::string> extract_value(const std::string& text,
                                         const std::string& key);

}  // namespace vdesc::detail
