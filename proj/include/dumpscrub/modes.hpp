#pragma once

// Processing modes shared by the classifier, the redactor and the engine.

#include <string>
#include <string_view>

#include "errors.hpp"

namespace dumpscrub {

// concise: scan everything, redact exactly the sensitive extents.
// boolean_mode: stop scanning a page group at the first sensitive hit and
//   redact the whole payloads of the group's pages.
// skip: no scanning at all, every payload is redacted wholesale.
enum class ProcessingMode { concise, boolean_mode, skip };

inline const char* mode_name(ProcessingMode m) {
    switch (m) {
    case ProcessingMode::concise:
        return "concise";
    case ProcessingMode::boolean_mode:
        return "boolean";
    default:
        return "skip";
    }
}

inline ProcessingMode mode_from_name(std::string_view name) {
    if (name == "concise")
        return ProcessingMode::concise;
    if (name == "boolean")
        return ProcessingMode::boolean_mode;
    if (name == "skip")
        return ProcessingMode::skip;
    throw ConfigError("unknown processing mode \"" + std::string(name) +
                      "\" (expected concise, boolean or skip)");
}

} // namespace dumpscrub
