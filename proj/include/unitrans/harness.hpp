#pragma once

#include <string>
#include <vector>

#include "unitrans/language.hpp"

namespace unitrans {

// Verbatim lines the built-in execution templates place above the inserted
// program. Code normalization derives its duplicate-import coverage from the
// same lines, so the two can never drift apart.
const std::vector<std::string>& harness_prefix_lines(Language lang);

}  // namespace unitrans
