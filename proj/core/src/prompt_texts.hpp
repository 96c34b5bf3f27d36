#pragma once

#include <string>
#include <vector>

// Embedded template texts defined in prompt_templates.cpp. Declared here so
// the definitions get external linkage and stay shared across the library.
namespace vdesc::detail {

extern const char* const kTemplateNonCompliant;
extern const char* const kTemplateNonCompliantWithHA;
extern const char* const kTemplateCompliantNoHA;
extern const char* const kTemplateCompliant;
extern const char* const kJudgeSystemText;
extern const char* const kJudgeUserTemplate;
extern const char* const kCategoryTemplate;

const std::vector<std::string>& taxonomy_names();

}  // namespace vdesc::detail
