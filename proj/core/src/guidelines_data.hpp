#pragma once

// Embedded default guideline texts defined in guidelines_data.cpp.
namespace vdesc::detail {

extern const char* const kGuidelineTexts[];
extern const int kGuidelineCount;

}  // namespace vdesc::detail
