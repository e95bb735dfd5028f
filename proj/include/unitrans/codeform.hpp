#pragma once

#include <string>

#include "unitrans/errors.hpp"
#include "unitrans/language.hpp"

namespace unitrans {

// Pulls the code out of a raw completion: drops everything from the first
// END_OF_CASE marker on, then takes the interior of the first fenced code
// block if one remains, then trims. Throws EmptyAnswerError when nothing is
// left. Idempotent.
std::string extract_answer(const std::string& raw);

// Prepares an extracted answer for insertion into the execution template for
// `target`: drops import/include lines the template already provides, drops
// Java package declarations, and unwraps a single redundant Java class
// wrapper. Never returns an empty string for non-empty input; Python code
// passes through trimmed.
std::string normalize_target(const std::string& code, Language target);

// Canonical form for exact-match comparison: comments removed (string
// literals respected), every whitespace run collapsed to one space, ends
// trimmed. `lang` picks the comment syntax; Python's `#` never eats C++
// preprocessor lines and C++'s `//` never eats Python floor division.
// Idempotent.
std::string em_normalize(const std::string& code, Language lang);

}  // namespace unitrans
