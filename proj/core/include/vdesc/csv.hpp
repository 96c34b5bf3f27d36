#pragma once

#include <string>
#include <vector>

namespace vdesc {

// Minimal RFC-4180-style CSV: quoted fields, doubled quotes, \r\n or \n rows.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::vector<std::vector<std::string>> read_csv_file(const std::string& path);

std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace vdesc
