#pragma once

#include <string>

namespace vdesc {

// Classic Porter (1980) stemmer. Non-alphabetic tokens pass through
// unchanged; input is lowercased.
std::string porter_stem(const std::string& word);

}  // namespace vdesc
