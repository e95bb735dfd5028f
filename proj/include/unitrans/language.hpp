#pragma once

#include <array>
#include <string>
#include <string_view>

#include "unitrans/errors.hpp"

namespace unitrans {

/// The three supported programming languages.
enum class Language { python, java, cpp };

inline constexpr std::array<Language, 3> kAllLanguages = {
    Language::python, Language::java, Language::cpp};

/// Display name used inside prompts ("Python", "Java", "C++").
std::string_view display_name(Language lang);

/// Lowercase tag used in CLI flags, file names, and JSON ("python", "java", "cpp").
std::string_view tag(Language lang);

/// Line-comment symbol: "#" for Python, "//" for Java and C++.
std::string_view comment_symbol(Language lang);

/// True for Java and C++, false for Python.
bool statically_typed(Language lang);

/// Source-file extension without the dot ("py", "java", "cpp").
std::string_view file_extension(Language lang);

/// Parse a lowercase tag. Throws ArgumentError for anything else.
Language language_from_tag(std::string_view text);

}  // namespace unitrans
